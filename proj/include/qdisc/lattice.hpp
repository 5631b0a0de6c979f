#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "qdisc/intmatrix.hpp"

namespace qdisc {

// Full-rank sublattice L of Z^n.  For exponent data E over Z/N this is the
// lattice of central-monomial exponents {a : E*a = 0 mod N}; the index
// [Z^n : L] is the rank of the algebra over its center.
class CentralLattice {
 public:
  CentralLattice(int ambient_rank, IntMatrix basis_rows)
      : n_(ambient_rank), basis_(std::move(basis_rows)), solver_(basis_) {
    std::int64_t d = det(basis_);
    index_ = d < 0 ? -d : d;
    if (index_ == 0) throw spec_error("lattice basis not full rank");
  }

  int ambient_rank() const { return n_; }
  const IntMatrix& basis() const { return basis_; }
  std::int64_t index() const { return index_; }

  bool contains(const std::vector<std::int64_t>& v) const {
    return solver_.contains(v);
  }
  std::vector<std::int64_t> coset_key(const std::vector<std::int64_t>& v) const {
    return solver_.coset_key(v);
  }
  bool congruent(const std::vector<std::int64_t>& a,
                 const std::vector<std::int64_t>& b) const {
    std::vector<std::int64_t> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return contains(d);
  }

 private:
  int n_;
  IntMatrix basis_;
  std::int64_t index_;
  RowSolver solver_;
};

// Lattice of exponents a with E*a = 0 mod N, where E is the antisymmetric
// integer exponent matrix of a multiplicatively antisymmetric parameter
// matrix (p_ij = zeta_N^{e_ij}).  Contains (N*Z)^n, hence full rank.
inline CentralLattice central_lattice(const IntMatrix& E, unsigned N) {
  int n = E.rows();
  if (E.cols() != n) throw spec_error("exponent matrix must be square");
  auto mod = [&](std::int64_t v) {
    std::int64_t m = static_cast<std::int64_t>(N);
    return ((v % m) + m) % m;
  };
  for (int i = 0; i < n; ++i) {
    if (mod(E.at(i, i)) != 0)
      throw spec_error("exponent matrix has nonzero diagonal mod N");
    for (int j = 0; j < n; ++j)
      if (mod(E.at(i, j) + E.at(j, i)) != 0)
        throw spec_error("exponent matrix not antisymmetric mod N");
  }
  // U*E*V = D.  E a = 0 mod N  <=>  (V^{-1}a)_i = 0 mod N/gcd(d_i, N),
  // so L = V * diag(m_i) * Z^n.
  auto f = smith_normal_form(E);
  IntMatrix basis(n, n);
  for (int i = 0; i < n; ++i) {
    std::int64_t di = f.D.at(i, i);
    std::int64_t g = std::gcd(di, static_cast<std::int64_t>(N));  // g = N when di = 0
    std::int64_t mi = static_cast<std::int64_t>(N) / g;
    for (int r = 0; r < n; ++r) basis.at(i, r) = mi * f.V.at(r, i);
  }
  return CentralLattice(n, basis);
}

// One nonnegative representative per coset of Z^n / L, enumerated inside the
// box [0, box_side)^n which covers all cosets whenever (box_side*Z)^n <= L.
// Default pick: lexicographically smallest.  With a chart index i the pick
// minimizes the i-th coordinate first (then lex); reducing mod box_side never
// raises a coordinate, so the box minimum is the minimum over the whole
// nonnegative coset.
inline std::vector<std::vector<std::int64_t>> coset_representatives(
    const CentralLattice& L, unsigned box_side,
    std::optional<int> chart = std::nullopt) {
  int n = L.ambient_rank();
  std::map<std::vector<std::int64_t>, std::vector<std::int64_t>> best;
  std::vector<std::int64_t> v(n, 0);
  auto better = [&](const std::vector<std::int64_t>& a,
                    const std::vector<std::int64_t>& b) {
    if (chart) {
      if (a[*chart] != b[*chart]) return a[*chart] < b[*chart];
    }
    return a < b;
  };
  for (;;) {
    auto key = L.coset_key(v);
    auto it = best.find(key);
    if (it == best.end())
      best.emplace(key, v);
    else if (better(v, it->second))
      it->second = v;
    int pos = n - 1;
    while (pos >= 0) {
      if (++v[pos] < static_cast<std::int64_t>(box_side)) break;
      v[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  if (static_cast<std::int64_t>(best.size()) != L.index())
    throw internal_check_error("coset enumeration does not match lattice index");
  std::vector<std::vector<std::int64_t>> reps;
  reps.reserve(best.size());
  for (auto& [key, rep] : best) reps.push_back(rep);
  std::sort(reps.begin(), reps.end());
  return reps;
}

}  // namespace qdisc
