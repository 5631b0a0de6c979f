#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdisc/errors.hpp"
#include "qdisc/rational.hpp"

namespace qdisc {

namespace detail {

using Poly = std::vector<Rational>;  // dense, constant-first

inline void poly_trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  poly_trim(r);
  return r;
}

// Division with remainder over Q[x]; divisor must be nonzero.
inline std::pair<Poly, Poly> poly_divmod(Poly num, const Poly& den) {
  if (den.empty()) throw internal_check_error("poly division by zero");
  Poly quot;
  if (num.size() >= den.size())
    quot.assign(num.size() - den.size() + 1, Rational(0));
  while (num.size() >= den.size()) {
    Rational lead = num.back() / den.back();
    std::size_t shift = num.size() - den.size();
    quot[shift] = lead;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= lead * den[i];
    poly_trim(num);  // top coefficient cancels, so num strictly shrinks
  }
  poly_trim(quot);
  return {quot, num};
}

}  // namespace detail

class CycScalar;

// The cyclotomic field Q(zeta_N).  One field per computation session; all
// root-of-unity parameters live here.  Immutable and shared.
class CyclotomicField : public std::enable_shared_from_this<CyclotomicField> {
 public:
  using Ptr = std::shared_ptr<const CyclotomicField>;

  static Ptr make(unsigned order) {
    if (order < 1) throw spec_error("cyclotomic order must be >= 1");
    return Ptr(new CyclotomicField(order));
  }

  unsigned order() const { return order_; }
  unsigned degree() const { return degree_; }  // phi(N)
  const detail::Poly& modulus() const { return modulus_; }

  CycScalar zero() const;
  CycScalar one() const;
  CycScalar from_rational(const Rational& r) const;
  // zeta_N^k, k taken mod N.
  CycScalar zeta(long long k) const;
  // zeta_m^k where m | N.
  CycScalar root_of_order(unsigned m, long long k) const;

  // x^k reduced mod Phi_N, 0 <= k < max(N, 2*degree-1).
  const std::vector<Rational>& power_basis(std::size_t k) const {
    return pow_table_.at(k);
  }

  bool same(const CyclotomicField& other) const {
    return order_ == other.order_;
  }

 private:
  explicit CyclotomicField(unsigned order) : order_(order) {
    modulus_ = cyclotomic_polynomial(order);
    degree_ = static_cast<unsigned>(modulus_.size() - 1);
    // Table of x^k mod Phi_N, enough for products of two reduced elements
    // and for zeta(k) lookups.
    std::size_t need = std::max<std::size_t>(order_, 2 * degree_ - 1);
    pow_table_.reserve(need);
    for (std::size_t k = 0; k < need; ++k) {
      if (k < degree_) {
        std::vector<Rational> v(degree_, Rational(0));
        v[k] = 1;
        pow_table_.push_back(std::move(v));
      } else {
        // x * (previous row), reduce the overflow coefficient against the
        // monic modulus: x^degree = -(modulus minus leading term).
        const auto& prev = pow_table_[k - 1];
        std::vector<Rational> v(degree_, Rational(0));
        for (unsigned i = 0; i + 1 < degree_; ++i) v[i + 1] = prev[i];
        Rational top = prev[degree_ - 1];
        if (top != 0)
          for (unsigned i = 0; i < degree_; ++i) v[i] -= top * modulus_[i];
        pow_table_.push_back(std::move(v));
      }
    }
  }

  static detail::Poly cyclotomic_polynomial(unsigned n) {
    // Phi_d for all divisors d of n, by exact division of x^d - 1.
    std::map<unsigned, detail::Poly> table;
    for (unsigned d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      detail::Poly f(d + 1, Rational(0));
      f[0] = -1;
      f[d] = 1;
      for (auto& [e, phi] : table) {
        if (d % e != 0) continue;
        auto [q, r] = detail::poly_divmod(f, phi);
        if (!r.empty())
          throw internal_check_error("cyclotomic polynomial division failed");
        f = std::move(q);
      }
      table.emplace(d, std::move(f));
    }
    return table.at(n);
  }

  unsigned order_;
  unsigned degree_;
  detail::Poly modulus_;
  std::vector<std::vector<Rational>> pow_table_;
};

// Element of Q(zeta_N): dense coefficient vector of length phi(N) on the
// power basis 1, zeta, ..., zeta^{phi(N)-1}.  Canonical: equality is
// coefficient-vector equality.  Immutable value type, safe to share.
class CycScalar {
 public:
  CycScalar() = default;
  CycScalar(CyclotomicField::Ptr fld, std::vector<Rational> coeffs)
      : fld_(std::move(fld)), c_(std::move(coeffs)) {
    if (c_.size() != fld_->degree())
      throw internal_check_error("scalar coefficient length mismatch");
  }

  const CyclotomicField::Ptr& field() const { return fld_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_one() const {
    if (c_.empty() || c_[0] != 1) return false;
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  Rational rational_part() const { return c_.empty() ? Rational(0) : c_[0]; }

  const std::vector<Rational>& coeffs() const { return c_; }

  friend bool operator==(const CycScalar& a, const CycScalar& b) {
    a.check_field(b);
    return a.c_ == b.c_;
  }
  friend bool operator!=(const CycScalar& a, const CycScalar& b) {
    return !(a == b);
  }
  // Deterministic total order (for canonical sorting only).
  friend bool operator<(const CycScalar& a, const CycScalar& b) {
    a.check_field(b);
    return a.c_ < b.c_;
  }

  friend CycScalar operator+(const CycScalar& a, const CycScalar& b) {
    a.check_field(b);
    auto c = a.c_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.c_[i];
    return CycScalar(a.fld_, std::move(c));
  }
  friend CycScalar operator-(const CycScalar& a, const CycScalar& b) {
    a.check_field(b);
    auto c = a.c_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.c_[i];
    return CycScalar(a.fld_, std::move(c));
  }
  CycScalar operator-() const {
    auto c = c_;
    for (auto& x : c) x = -x;
    return CycScalar(fld_, std::move(c));
  }
  friend CycScalar operator*(const CycScalar& a, const CycScalar& b) {
    a.check_field(b);
    unsigned d = a.fld_->degree();
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (unsigned i = 0; i < d; ++i) {
      if (a.c_[i] == 0) continue;
      for (unsigned j = 0; j < d; ++j)
        if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
    std::vector<Rational> out(d, Rational(0));
    for (unsigned k = 0; k < prod.size(); ++k) {
      if (prod[k] == 0) continue;
      if (k < d) {
        out[k] += prod[k];
      } else {
        const auto& row = a.fld_->power_basis(k);
        for (unsigned i = 0; i < d; ++i) out[i] += prod[k] * row[i];
      }
    }
    return CycScalar(a.fld_, std::move(out));
  }
  CycScalar& operator+=(const CycScalar& b) { return *this = *this + b; }
  CycScalar& operator-=(const CycScalar& b) { return *this = *this - b; }
  CycScalar& operator*=(const CycScalar& b) { return *this = *this * b; }

  CycScalar inverse() const {
    if (is_zero()) throw spec_error("division by zero in Q(zeta)");
    // Extended Euclid in Q[x] against the (irreducible) modulus.
    detail::Poly r0 = fld_->modulus(), r1 = c_;
    detail::poly_trim(r1);
    detail::Poly s0 = {}, s1 = {Rational(1)};  // coefficients of this
    while (!r1.empty()) {
      auto [q, r2] = detail::poly_divmod(r0, r1);
      detail::Poly s2 = s0;  // s2 = s0 - q*s1
      detail::Poly qs1 = detail::poly_mul(q, s1);
      if (s2.size() < qs1.size()) s2.resize(qs1.size(), Rational(0));
      for (std::size_t i = 0; i < qs1.size(); ++i) s2[i] -= qs1[i];
      detail::poly_trim(s2);
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 = gcd, a nonzero constant since Phi_N is irreducible.
    if (r0.size() != 1)
      throw internal_check_error("nonunit gcd against irreducible modulus");
    std::vector<Rational> out(fld_->degree(), Rational(0));
    for (std::size_t i = 0; i < s0.size(); ++i) out[i] = s0[i] / r0[0];
    return CycScalar(fld_, std::move(out));
  }

  CycScalar pow(long long e) const {
    if (e < 0) return inverse().pow(-e);
    CycScalar acc = fld_->one();
    CycScalar base = *this;
    while (e > 0) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Rational v = c_[i];
      if (first) {
        if (v < 0) os << '-', v = -v;
      } else {
        os << (v < 0 ? " - " : " + ");
        if (v < 0) v = -v;
      }
      first = false;
      bool unit = (v == 1) && i > 0;
      if (!unit) os << to_string(v);
      if (i > 0) {
        if (!unit) os << '*';
        os << 'z';
        if (i > 1) os << '^' << i;
      }
    }
    if (first) os << '0';
    return os.str();
  }

 private:
  void check_field(const CycScalar& other) const {
    if (!fld_ || !other.fld_ || !fld_->same(*other.fld_))
      throw spec_error("scalars from different cyclotomic fields");
  }

  CyclotomicField::Ptr fld_;
  std::vector<Rational> c_;
};

inline CycScalar CyclotomicField::zero() const {
  return CycScalar(shared_from_this(),
                   std::vector<Rational>(degree_, Rational(0)));
}
inline CycScalar CyclotomicField::one() const { return from_rational(1); }
inline CycScalar CyclotomicField::from_rational(const Rational& r) const {
  std::vector<Rational> c(degree_, Rational(0));
  c[0] = r;
  return CycScalar(shared_from_this(), std::move(c));
}
inline CycScalar CyclotomicField::zeta(long long k) const {
  long long m = static_cast<long long>(order_);
  k = ((k % m) + m) % m;
  std::vector<Rational> c(degree_, Rational(0));
  const auto& row = power_basis(static_cast<std::size_t>(k));
  for (unsigned i = 0; i < degree_; ++i) c[i] = row[i];
  return CycScalar(shared_from_this(), std::move(c));
}
inline CycScalar CyclotomicField::root_of_order(unsigned m, long long k) const {
  if (m == 0 || order_ % m != 0)
    throw spec_error("root order " + std::to_string(m) +
                     " does not divide field order " + std::to_string(order_));
  return zeta(k * static_cast<long long>(order_ / m));
}

// zeta_N^k in canonical form, in the field Q(zeta_N).
inline CycScalar embed_root(long long k, unsigned N) {
  return CyclotomicField::make(N)->zeta(k);
}

// Re-embed a into a larger field (order of a's field must divide F's order).
inline CycScalar embed_into(const CyclotomicField::Ptr& F, const CycScalar& a) {
  unsigned n1 = a.field()->order();
  if (F->order() % n1 != 0)
    throw spec_error("cannot embed Q(zeta_" + std::to_string(n1) +
                     ") into Q(zeta_" + std::to_string(F->order()) + ")");
  unsigned stride = F->order() / n1;
  CycScalar out = F->zero();
  const auto& c = a.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    out += F->from_rational(c[i]) * F->zeta(static_cast<long long>(i * stride));
  }
  return out;
}

// Smallest k >= 1 with a^k = 1, or nullopt if a is not a root of unity.
// Roots of unity in Q(zeta_N) all have order dividing lcm(2, N), so
// exhaustive powering up to 2N decides.
inline std::optional<unsigned> multiplicative_order(const CycScalar& a) {
  if (a.is_zero()) throw spec_error("multiplicative order of zero");
  unsigned bound = 2 * a.field()->order();
  CycScalar acc = a;
  for (unsigned k = 1; k <= bound; ++k) {
    if (acc.is_one()) return k;
    acc *= a;
  }
  return std::nullopt;
}

}  // namespace qdisc
