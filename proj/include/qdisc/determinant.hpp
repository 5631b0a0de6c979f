#pragma once

#include <cstdint>
#include <vector>

#include "qdisc/errors.hpp"

namespace qdisc {

// Division-free determinant over a commutative ring.  Entries only need
// add/mul/neg/zero-test, so it works with cyclotomic scalars, skew/GWA
// central elements and presented-ring elements alike.
//
// Rows or columns with at most one structurally nonzero entry are expanded
// first (trace matrices here are near-permutation), the remaining dense core
// goes through a column-subset dynamic program.  Bareiss is deliberately not
// used: exact division is not available in every coefficient ring we pass.
//
// Ring requirements: T zero() const; T one() const; T add(a,b); T mul(a,b);
// T neg(a); bool is_zero(a).
template <class T, class Ring>
T division_free_det(const std::vector<std::vector<T>>& a, const Ring& R,
                    int dense_limit = 20) {
  const int n = static_cast<int>(a.size());
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != n)
      throw spec_error("determinant of non-square matrix");

  std::vector<int> rows(n), cols(n);
  for (int i = 0; i < n; ++i) rows[i] = cols[i] = i;

  // expand(rows, cols) with explicit index views, sign tracked by caller
  struct Frame {
    std::vector<int> r, c;
  };

  T sign_acc = R.one();
  bool negated = false;
  std::vector<T> factors;

  std::vector<int> r = rows, c = cols;
  for (;;) {
    const int k = static_cast<int>(r.size());
    if (k == 0) break;
    // row with the fewest nonzero entries
    int best_row = -1, best_row_cnt = k + 1, best_row_col = -1;
    for (int i = 0; i < k; ++i) {
      int cnt = 0, last = -1;
      for (int j = 0; j < k; ++j)
        if (!R.is_zero(a[r[i]][c[j]])) {
          ++cnt;
          last = j;
          if (cnt > 1 && best_row_cnt <= 1) break;
        }
      if (cnt < best_row_cnt) {
        best_row_cnt = cnt;
        best_row = i;
        best_row_col = last;
      }
      if (best_row_cnt == 0) break;
    }
    if (best_row_cnt == 0) return R.zero();
    // column with the fewest nonzero entries
    int best_col = -1, best_col_cnt = k + 1, best_col_row = -1;
    for (int j = 0; j < k; ++j) {
      int cnt = 0, last = -1;
      for (int i = 0; i < k; ++i)
        if (!R.is_zero(a[r[i]][c[j]])) {
          ++cnt;
          last = i;
          if (cnt > 1 && best_col_cnt <= 1) break;
        }
      if (cnt < best_col_cnt) {
        best_col_cnt = cnt;
        best_col = j;
        best_col_row = last;
      }
      if (best_col_cnt == 0) break;
    }
    if (best_col_cnt == 0) return R.zero();

    if (best_row_cnt == 1 || best_col_cnt == 1) {
      int i, j;
      if (best_row_cnt <= best_col_cnt) {
        i = best_row;
        j = best_row_col;
      } else {
        i = best_col_row;
        j = best_col;
      }
      factors.push_back(a[r[i]][c[j]]);
      if ((i + j) % 2 == 1) negated = !negated;
      r.erase(r.begin() + i);
      c.erase(c.begin() + j);
      continue;
    }

    // dense core
    if (k > dense_limit)
      throw refusal_error("determinant dense core exceeds size limit (" +
                          std::to_string(k) + " > " +
                          std::to_string(dense_limit) + ")");
    std::vector<T> f(static_cast<std::size_t>(1) << k, R.zero());
    f[0] = R.one();
    for (std::uint32_t S = 1; S < f.size(); ++S) {
      int row = __builtin_popcount(S) - 1;
      T acc = R.zero();
      int t = 0;
      for (int j = 0; j < k; ++j) {
        if (!(S & (1u << j))) continue;
        const T& entry = a[r[row]][c[j]];
        if (!R.is_zero(entry)) {
          T term = R.mul(entry, f[S & ~(1u << j)]);
          if ((row + t) % 2 == 1) term = R.neg(term);
          acc = R.add(acc, term);
        }
        ++t;
      }
      f[S] = std::move(acc);
    }
    factors.push_back(f.back());
    break;
  }

  T out = R.one();
  for (const auto& x : factors) out = R.mul(out, x);
  if (negated) out = R.neg(out);
  return out;
}

// Reference cofactor expansion, used as the test oracle for sizes <= 5.
template <class T, class Ring>
T cofactor_det(const std::vector<std::vector<T>>& a, const Ring& R) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return R.one();
  if (n == 1) return a[0][0];
  T out = R.zero();
  for (int j = 0; j < n; ++j) {
    if (R.is_zero(a[0][j])) continue;
    std::vector<std::vector<T>> minor;
    minor.reserve(n - 1);
    for (int i = 1; i < n; ++i) {
      std::vector<T> row;
      row.reserve(n - 1);
      for (int jj = 0; jj < n; ++jj)
        if (jj != j) row.push_back(a[i][jj]);
      minor.push_back(std::move(row));
    }
    T term = R.mul(a[0][j], cofactor_det(minor, R));
    if (j % 2 == 1) term = R.neg(term);
    out = R.add(out, term);
  }
  return out;
}

// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets_of_size(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k > n || k < 0) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Binomial coefficient with saturation, for enumeration size guards.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > cap) return cap + 1;
    r = r * (n - k + i) / i;
  }
  return r > cap ? cap + 1 : r;
}

}  // namespace qdisc
