#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qdisc/cyclotomic.hpp"
#include "qdisc/determinant.hpp"
#include "qdisc/lattice.hpp"
#include "qdisc/parallel.hpp"

namespace qdisc {

using Exponent = std::vector<std::int64_t>;

inline std::string monomial_str(const Exponent& e, const std::string& stem = "x") {
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (any) os << '*';
    any = true;
    os << stem << (i + 1);
    if (e[i] != 1) os << '^' << e[i];
  }
  if (!any) os << '1';
  return os.str();
}

// k_p[x_1, ..., x_n] with x_j x_i = p_ij x_i x_j and every p_ij = zeta_N^{e_ij}
// a root of unity.  Immutable; elements keep a shared handle.
class SkewAlgebra : public std::enable_shared_from_this<SkewAlgebra> {
 public:
  using Ptr = std::shared_ptr<const SkewAlgebra>;

  static Ptr make(int n, unsigned N, const IntMatrix& E) {
    return Ptr(new SkewAlgebra(n, N, E));
  }

  int vars() const { return n_; }
  unsigned root_order() const { return N_; }
  const CyclotomicField::Ptr& field() const { return field_; }
  const IntMatrix& exponents() const { return E_; }
  const CentralLattice& lattice() const { return *lattice_; }
  std::int64_t rank() const { return rank_; }  // r^2 = [Z^n : L]
  // smallest w_i > 0 with x_i^{w_i} central
  std::int64_t chart_period(int i) const { return periods_[i]; }

  // Commutation scalar: x^a * x^b = lambda(a,b) x^{a+b} with
  // lambda = prod_{i>j} p_ji^{a_i b_j} (normal order x_1 < ... < x_n).
  // Negative exponents are allowed (localized monomials).
  CycScalar commutation(const Exponent& a, const Exponent& b) const {
    const std::int64_t m = static_cast<std::int64_t>(N_);
    std::int64_t acc = 0;
    for (int i = 1; i < n_; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < i; ++j)
        if (b[j] != 0)
          acc += E_.at(j, i) % m * (a[i] % m) % m * (b[j] % m) % m;
    }
    return field_->zeta(acc);
  }

  bool exponent_central(const Exponent& a) const { return lattice_->contains(a); }

  bool same(const SkewAlgebra& o) const {
    return n_ == o.n_ && N_ == o.N_ && E_ == o.E_;
  }

  // All monomials in the box [0, N)^n; generates A as a Z-module.
  std::vector<Exponent> box_generating_set() const {
    std::vector<Exponent> out;
    Exponent v(n_, 0);
    for (;;) {
      out.push_back(v);
      int pos = n_ - 1;
      while (pos >= 0 && ++v[pos] >= static_cast<std::int64_t>(N_)) v[pos--] = 0;
      if (pos < 0) break;
    }
    return out;
  }

 private:
  SkewAlgebra(int n, unsigned N, const IntMatrix& E)
      : n_(n), N_(N), E_(E), field_(CyclotomicField::make(N)) {
    if (n < 1) throw spec_error("skew algebra needs at least one generator");
    lattice_ = std::make_shared<CentralLattice>(central_lattice(E, N));
    rank_ = lattice_->index();
    periods_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      Exponent e(n_, 0);
      for (std::int64_t k = 1; k <= static_cast<std::int64_t>(N_); ++k) {
        e[i] = k;
        if (lattice_->contains(e)) { periods_[i] = k; break; }
      }
    }
  }

  int n_;
  unsigned N_;
  IntMatrix E_;
  CyclotomicField::Ptr field_;
  std::shared_ptr<const CentralLattice> lattice_;
  std::int64_t rank_ = 0;
  std::vector<std::int64_t> periods_;
};

// Normal-form element: sparse map exponent -> nonzero coefficient.
class SkewElement {
 public:
  SkewElement() = default;
  explicit SkewElement(SkewAlgebra::Ptr alg) : alg_(std::move(alg)) {}

  static SkewElement monomial(SkewAlgebra::Ptr alg, const Exponent& e,
                              const CycScalar& c) {
    SkewElement f(std::move(alg));
    if (!c.is_zero()) f.terms_[e] = c;
    return f;
  }
  static SkewElement one(SkewAlgebra::Ptr alg) {
    auto c = alg->field()->one();
    return monomial(std::move(alg), Exponent(alg->vars(), 0), c);
  }

  const SkewAlgebra::Ptr& algebra() const { return alg_; }
  const std::map<Exponent, CycScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }

  friend bool operator==(const SkewElement& a, const SkewElement& b) {
    return a.terms_ == b.terms_;
  }

  friend SkewElement operator+(const SkewElement& a, const SkewElement& b) {
    a.check(b);
    SkewElement r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend SkewElement operator-(const SkewElement& a, const SkewElement& b) {
    a.check(b);
    SkewElement r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  SkewElement operator-() const {
    SkewElement r(alg_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }
  friend SkewElement operator*(const SkewElement& a, const SkewElement& b) {
    a.check(b);
    SkewElement r(a.alg_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb * a.alg_->commutation(ea, eb));
      }
    return r;
  }
  SkewElement scaled(const CycScalar& c) const {
    SkewElement r(alg_);
    if (c.is_zero()) return r;
    for (const auto& [e, coef] : terms_) r.terms_[e] = coef * c;
    return r;
  }

  // Central iff every monomial exponent lies in the centrality lattice.
  bool is_central() const {
    for (const auto& [e, c] : terms_)
      if (!alg_->exponent_central(e)) return false;
    return true;
  }
  // Direct check against all generators, for cross-validation.
  bool commutes_with_generators() const {
    for (int i = 0; i < alg_->vars(); ++i) {
      Exponent ei(alg_->vars(), 0);
      ei[i] = 1;
      auto xi = monomial(alg_, ei, alg_->field()->one());
      if (!(*this * xi == xi * *this)) return false;
    }
    return true;
  }

  // Regular trace: monomial f -> r^2 f when central, 0 otherwise, extended
  // linearly.
  SkewElement trace() const {
    SkewElement r(alg_);
    auto r2 = alg_->field()->from_rational(Rational(alg_->rank()));
    for (const auto& [e, c] : terms_)
      if (alg_->exponent_central(e)) r.add_term(e, c * r2);
    return r;
  }

  bool homogeneous_degree(Exponent& deg_out) const {
    if (terms_.empty()) return true;
    deg_out = terms_.begin()->first;
    for (const auto& [e, c] : terms_)
      if (e != deg_out) return false;
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      if (c.is_one())
        os << monomial_str(e);
      else
        os << '(' << c.str() << ")*" << monomial_str(e);
    }
    return os.str();
  }

 private:
  void check(const SkewElement& o) const {
    if (!alg_ || !o.alg_ || !alg_->same(*o.alg_))
      throw spec_error("skew elements from different algebras");
  }
  void add_term(const Exponent& e, const CycScalar& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (!c.is_zero()) terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }

  SkewAlgebra::Ptr alg_;
  std::map<Exponent, CycScalar> terms_;
};

// ---------------------------------------------------------------------------
// Chart-local discriminants and the glued (reflexive-hull) discriminant.

struct SkewChartEvidence {
  int chart = -1;                 // index i of the non-inverted variable
  std::int64_t portable_exp = 0;  // s_i: x_i-exponent of the local discriminant
  Exponent full_monomial;         // the whole determinant monomial
  CycScalar unit_scalar;          // nonzero scalar determinant factor
  std::vector<Exponent> basis;    // chart coset representatives
};

namespace detail {
struct CycRing {
  CyclotomicField::Ptr F;
  CycScalar zero() const { return F->zero(); }
  CycScalar one() const { return F->one(); }
  CycScalar add(const CycScalar& a, const CycScalar& b) const { return a + b; }
  CycScalar mul(const CycScalar& a, const CycScalar& b) const { return a * b; }
  CycScalar neg(const CycScalar& a) const { return -a; }
  bool is_zero(const CycScalar& a) const { return a.is_zero(); }
};
}  // namespace detail

// Trace pairing matrix of two monomial lists: entry (k,l) is the scalar part
// of tr(x^{u_k} x^{v_l}); the monomial part factors out uniformly as
// x^{sum u + sum v}.
inline std::vector<std::vector<CycScalar>> trace_scalar_matrix(
    const SkewAlgebra& A, const std::vector<Exponent>& U,
    const std::vector<Exponent>& V) {
  auto r2 = A.field()->from_rational(Rational(A.rank()));
  auto zero = A.field()->zero();
  std::vector<std::vector<CycScalar>> S(U.size(),
                                        std::vector<CycScalar>(V.size(), zero));
  for (std::size_t k = 0; k < U.size(); ++k)
    for (std::size_t l = 0; l < V.size(); ++l) {
      Exponent sum(U[k].size());
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = U[k][i] + V[l][i];
      if (A.exponent_central(sum)) S[k][l] = r2 * A.commutation(U[k], V[l]);
    }
  return S;
}

// Local discriminant on the chart that keeps x_i and inverts every other
// variable's central power.  The localized algebra is verified free on the
// chart coset representatives before the determinant is taken.
inline SkewChartEvidence sp_chart_local_discriminant(const SkewAlgebra::Ptr& A,
                                                     int chart) {
  const int n = A->vars();
  if (chart < 0 || chart >= n) throw spec_error("chart index out of range");
  auto reps =
      coset_representatives(A->lattice(), A->root_order(), chart);

  // Freeness evidence (a): every box generator must sit over its coset
  // representative with a nonnegative x_i budget, so that it is a central
  // multiple of a basis element after localization.
  for (const auto& g : A->box_generating_set()) {
    bool found = false;
    for (const auto& b : reps) {
      if (!A->lattice().congruent(g, b)) continue;
      found = true;
      if (g[chart] < b[chart])
        throw internal_check_error(
            "chart freeness failure: generator " + monomial_str(g) +
            " not a central multiple of its basis representative " +
            monomial_str(b));
      break;
    }
    if (!found)
      throw internal_check_error("box generator missed every coset: " +
                                 monomial_str(g));
  }

  // Freeness evidence (b): the trace pairing on the representatives is
  // nondegenerate.
  auto S = trace_scalar_matrix(*A, reps, reps);
  detail::CycRing ring{A->field()};
  CycScalar d = division_free_det(S, ring);
  if (d.is_zero())
    throw internal_check_error("chart trace pairing degenerate on chart " +
                               std::to_string(chart + 1));

  SkewChartEvidence ev;
  ev.chart = chart;
  ev.basis = reps;
  ev.unit_scalar = d;
  ev.full_monomial.assign(n, 0);
  for (const auto& b : reps)
    for (int i = 0; i < n; ++i) ev.full_monomial[i] += 2 * b[i];
  ev.portable_exp = ev.full_monomial[chart];
  return ev;
}

struct SkewDiscriminant {
  Exponent exponents;  // unit-normalized: coefficient 1
  std::vector<SkewChartEvidence> charts;
};

// Glued reflexive-hull discriminant: prod_i x_i^{s_i} with s_i read off the
// chart-i local discriminant.
inline SkewDiscriminant sp_reflexive_discriminant(const SkewAlgebra::Ptr& A) {
  SkewDiscriminant out;
  const int n = A->vars();
  out.charts.resize(n);
  for (int i = 0; i < n; ++i) out.charts[i] = sp_chart_local_discriminant(A, i);
  out.exponents.assign(n, 0);
  for (int i = 0; i < n; ++i) out.exponents[i] = out.charts[i].portable_exp;
  return out;
}

// ---------------------------------------------------------------------------
// Monomial reflexive hull (gcd) with the combinatorial staircase evidence.

struct MonomialHull {
  Exponent exponents;      // d = coordinatewise min
  int quotient_dim = 0;    // staircase dimension of dA / (gens); -1 if zero
  bool pcc_holds = false;  // quotient_dim <= n - 2
};

inline MonomialHull sp_monomial_hull(const std::vector<Exponent>& gens) {
  if (gens.empty()) throw spec_error("monomial hull of empty generator list");
  const int n = static_cast<int>(gens[0].size());
  MonomialHull out;
  out.exponents = gens[0];
  for (const auto& g : gens)
    for (int i = 0; i < n; ++i) out.exponents[i] = std::min(out.exponents[i], g[i]);

  std::vector<Exponent> reduced;
  bool zero_quotient = false;
  for (const auto& g : gens) {
    Exponent r(n);
    bool all0 = true;
    for (int i = 0; i < n; ++i) {
      r[i] = g[i] - out.exponents[i];
      if (r[i]) all0 = false;
    }
    if (all0) zero_quotient = true;  // d itself generates: quotient vanishes
    reduced.push_back(std::move(r));
  }
  if (zero_quotient) {
    out.quotient_dim = -1;
    out.pcc_holds = true;
    return out;
  }
  // dim = largest coordinate-subspace S avoided by every generator support;
  // the quotient of monomial ideals is supported on the union of such faces.
  int best = -1;
  for (std::uint32_t S = 0; S < (1u << n); ++S) {
    bool free_face = true;
    for (const auto& r : reduced) {
      bool inside = true;
      for (int i = 0; i < n && inside; ++i)
        if (r[i] > 0 && !(S & (1u << i))) inside = false;
      if (inside) { free_face = false; break; }
    }
    if (free_face) best = std::max(best, __builtin_popcount(S));
  }
  out.quotient_dim = best;
  out.pcc_holds = best <= n - 2;
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive modified-discriminant ideal (oracle mode).

struct SkewMdIdeal {
  std::vector<Exponent> gens;  // unit-normalized monomial generators, sorted
  std::uint64_t minors = 0;    // how many (U, U') pairs were evaluated
};

// All v x v minors det(tr(u_k u'_l)) over v-subsets U, U' of the generating
// set.  Refuses (never truncates) when C(|gens|, v)^2 exceeds the guard.
inline SkewMdIdeal sp_md_exhaustive(const SkewAlgebra::Ptr& A,
                                    const std::vector<Exponent>& gens, int v,
                                    std::uint64_t guard = 10'000'000) {
  SkewMdIdeal out;
  std::uint64_t count = binomial_capped(gens.size(), v, guard);
  if (count * count > guard)
    throw refusal_error("exhaustive minor enumeration refused: C(" +
                        std::to_string(gens.size()) + "," + std::to_string(v) +
                        ")^2 exceeds " + std::to_string(guard));
  auto subs = subsets_of_size(static_cast<int>(gens.size()), v);
  if (subs.empty()) return out;  // vacuous: zero ideal
  out.minors = static_cast<std::uint64_t>(subs.size()) * subs.size();

  const int n = A->vars();
  detail::CycRing ring{A->field()};
  std::vector<std::set<Exponent>> partial(subs.size());
  parallel_for(subs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ui = lo; ui < hi; ++ui) {
      std::vector<Exponent> U;
      for (int ix : subs[ui]) U.push_back(gens[ix]);
      for (const auto& sub2 : subs) {
        std::vector<Exponent> V;
        for (int ix : sub2) V.push_back(gens[ix]);
        auto S = trace_scalar_matrix(*A, U, V);
        CycScalar d = division_free_det(S, ring);
        if (d.is_zero()) continue;
        Exponent total(n, 0);
        for (const auto& e : U)
          for (int i = 0; i < n; ++i) total[i] += e[i];
        for (const auto& e : V)
          for (int i = 0; i < n; ++i) total[i] += e[i];
        partial[ui].insert(std::move(total));
      }
    }
  });
  std::set<Exponent> all;
  for (auto& p : partial) all.insert(p.begin(), p.end());
  out.gens.assign(all.begin(), all.end());
  return out;
}

// ---------------------------------------------------------------------------
// Slow trace: internal trace of the left-multiplication matrix on a chart
// basis, with honest basis decomposition.  Cross-checks the r^2 rule.

// Localized central element: sparse sum of scalars times x^e with e in the
// lattice (coordinates other than the chart one may be negative).
using LocalizedCentral = std::map<Exponent, CycScalar>;

inline LocalizedCentral sp_slow_trace_on_chart(const SkewElement& f, int chart) {
  const auto& A = f.algebra();
  const int n = A->vars();
  auto reps = coset_representatives(A->lattice(), A->root_order(), chart);
  LocalizedCentral tr;
  for (const auto& [a, ca] : f.terms()) {
    for (std::size_t k = 0; k < reps.size(); ++k) {
      // f_a * x^{b_k} = ca * lambda(a, b_k) x^{a + b_k}; decompose over the
      // basis: x^m = commutation(m - b_l, b_l) * x^{m - b_l} (central) * x^{b_l}.
      Exponent m(n);
      for (int i = 0; i < n; ++i) m[i] = a[i] + reps[k][i];
      // find the representative of m's coset
      std::size_t l = reps.size();
      for (std::size_t j = 0; j < reps.size(); ++j)
        if (A->lattice().congruent(m, reps[j])) { l = j; break; }
      if (l == reps.size())
        throw internal_check_error("product left the coset decomposition");
      if (l != k) continue;  // off-diagonal, no trace contribution
      Exponent central(n);
      for (int i = 0; i < n; ++i) central[i] = m[i] - reps[l][i];
      if (central[chart] < 0)
        throw internal_check_error("negative chart budget in decomposition");
      CycScalar coeff = ca * A->commutation(a, reps[k]) *
                        A->commutation(central, reps[l]).inverse();
      auto it = tr.find(central);
      if (it == tr.end()) {
        if (!coeff.is_zero()) tr.emplace(central, coeff);
      } else {
        it->second += coeff;
        if (it->second.is_zero()) tr.erase(it);
      }
    }
  }
  return tr;
}

}  // namespace qdisc
