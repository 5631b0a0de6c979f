#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

#include "qdisc/errors.hpp"

namespace qdisc {

// Dense integer matrix.  Entries are 64-bit: every matrix in scope is tiny
// (exponent data, n <= 6, entries bounded by the root order), and the
// minimal-pivot reduction keeps intermediates small.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, 0) {}
  static IntMatrix identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c)
        throw spec_error("ragged integer matrix");
      for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  std::int64_t at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw spec_error("matrix product shape mismatch");
    IntMatrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        std::int64_t v = a.at(i, k);
        if (!v) continue;
        for (int j = 0; j < b.cols_; ++j) r.at(i, j) += v * b.at(k, j);
      }
    return r;
  }

  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw spec_error("matrix-vector shape mismatch");
    std::vector<std::int64_t> r(rows_, 0);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

 private:
  int rows_, cols_;
  std::vector<std::int64_t> e_;
};

// Exact determinant by fraction-free (Bareiss) elimination.
inline std::int64_t det(IntMatrix a) {
  if (a.rows() != a.cols()) throw spec_error("determinant of non-square matrix");
  int n = a.rows();
  std::int64_t sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

struct SmithForm {
  IntMatrix U, D, V;  // U*A*V = D, U and V unimodular, diagonal divisor chain
};

// Smith normal form by elementary row/column reduction, pivot chosen with
// minimal absolute value.
inline SmithForm smith_normal_form(const IntMatrix& input) {
  IntMatrix A = input;
  int m = A.rows(), n = A.cols();
  IntMatrix U = IntMatrix::identity(m), V = IntMatrix::identity(n);

  auto swap_rows = [&](int a, int b) {
    if (a == b) return;
    for (int j = 0; j < n; ++j) std::swap(A.at(a, j), A.at(b, j));
    for (int j = 0; j < m; ++j) std::swap(U.at(a, j), U.at(b, j));
  };
  auto swap_cols = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < m; ++i) std::swap(A.at(i, a), A.at(i, b));
    for (int i = 0; i < n; ++i) std::swap(V.at(i, a), V.at(i, b));
  };
  auto add_row = [&](int dst, int src, std::int64_t f) {  // row dst += f*row src
    for (int j = 0; j < n; ++j) A.at(dst, j) += f * A.at(src, j);
    for (int j = 0; j < m; ++j) U.at(dst, j) += f * U.at(src, j);
  };
  auto add_col = [&](int dst, int src, std::int64_t f) {
    for (int i = 0; i < m; ++i) A.at(i, dst) += f * A.at(i, src);
    for (int i = 0; i < n; ++i) V.at(i, dst) += f * V.at(i, src);
  };
  auto negate_row = [&](int r) {
    for (int j = 0; j < n; ++j) A.at(r, j) = -A.at(r, j);
    for (int j = 0; j < m; ++j) U.at(r, j) = -U.at(r, j);
  };

  int k = std::min(m, n);
  for (int s = 0; s < k; ++s) {
    for (;;) {
      // minimal nonzero |entry| in the trailing block
      int pi = -1, pj = -1;
      std::int64_t best = 0;
      for (int i = s; i < m; ++i)
        for (int j = s; j < n; ++j) {
          std::int64_t v = std::abs(A.at(i, j));
          if (v != 0 && (pi < 0 || v < best)) { best = v; pi = i; pj = j; }
        }
      if (pi < 0) break;  // block is zero
      swap_rows(s, pi);
      swap_cols(s, pj);
      bool clean = true;
      for (int i = s + 1; i < m; ++i) {
        std::int64_t q = A.at(i, s) / A.at(s, s);
        if (q) add_row(i, s, -q);
        if (A.at(i, s) != 0) clean = false;
      }
      for (int j = s + 1; j < n; ++j) {
        std::int64_t q = A.at(s, j) / A.at(s, s);
        if (q) add_col(j, s, -q);
        if (A.at(s, j) != 0) clean = false;
      }
      if (!clean) continue;
      // enforce divisibility of the rest of the block by the pivot
      bool divides = true;
      for (int i = s + 1; i < m && divides; ++i)
        for (int j = s + 1; j < n && divides; ++j)
          if (A.at(i, j) % A.at(s, s) != 0) {
            add_row(s, i, 1);  // pulls the bad entry into the pivot row
            divides = false;
          }
      if (divides) break;
    }
    if (A.at(s, s) < 0) negate_row(s);
  }
  // zero out anything outside the diagonal chain (already true structurally)
  return SmithForm{U, A, V};
}

// Integer solve x*B = v for a row vector x (B square, full rank).
// Returns nullopt if no integral solution exists.
class RowSolver {
 public:
  explicit RowSolver(const IntMatrix& basis_rows) : n_(basis_rows.rows()) {
    if (basis_rows.rows() != basis_rows.cols())
      throw spec_error("row solver needs a square basis");
    // x*B = v  <=>  B^T x^T = v^T.  With U*B^T*V = D:  D*(V^{-1} x^T) = U v^T.
    auto f = smith_normal_form(basis_rows.transposed());
    U_ = f.U;
    V_ = f.V;
    d_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      d_[i] = f.D.at(i, i);
      if (d_[i] == 0) throw spec_error("row solver basis not full rank");
    }
  }

  std::optional<std::vector<std::int64_t>> solve(
      const std::vector<std::int64_t>& v) const {
    auto rhs = U_.apply(v);
    std::vector<std::int64_t> z(n_);
    for (int i = 0; i < n_; ++i) {
      if (rhs[i] % d_[i] != 0) return std::nullopt;
      z[i] = rhs[i] / d_[i];
    }
    return V_.apply(z);
  }

  bool contains(const std::vector<std::int64_t>& v) const {
    return solve(v).has_value();
  }

  // Canonical coset key of v modulo the row span.
  std::vector<std::int64_t> coset_key(const std::vector<std::int64_t>& v) const {
    auto rhs = U_.apply(v);
    std::vector<std::int64_t> key(n_);
    for (int i = 0; i < n_; ++i) key[i] = ((rhs[i] % d_[i]) + d_[i]) % d_[i];
    return key;
  }

 private:
  int n_;
  IntMatrix U_, V_;
  std::vector<std::int64_t> d_;
};

}  // namespace qdisc
