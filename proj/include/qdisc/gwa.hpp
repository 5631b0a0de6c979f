#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qdisc/commring.hpp"
#include "qdisc/cyclotomic.hpp"
#include "qdisc/determinant.hpp"
#include "qdisc/parallel.hpp"

namespace qdisc {

// ---------------------------------------------------------------------------
// Univariate polynomials over Q(zeta), constant-first.  Coefficients of GWA
// normal forms live here.

using GwaPoly = std::vector<CycScalar>;

inline void gp_trim(GwaPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}
inline GwaPoly gp_add(const GwaPoly& a, const GwaPoly& b) {
  GwaPoly r = a;
  if (r.size() < b.size()) r.resize(b.size(), b.empty() ? CycScalar() : b[0].field()->zero());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  gp_trim(r);
  return r;
}
inline GwaPoly gp_neg(const GwaPoly& a) {
  GwaPoly r = a;
  for (auto& c : r) c = -c;
  return r;
}
inline GwaPoly gp_mul(const GwaPoly& a, const GwaPoly& b) {
  if (a.empty() || b.empty()) return {};
  GwaPoly r(a.size() + b.size() - 1, a[0].field()->zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  gp_trim(r);
  return r;
}
inline GwaPoly gp_scale(const GwaPoly& a, const CycScalar& c) {
  if (c.is_zero()) return {};
  GwaPoly r = a;
  for (auto& x : r) x *= c;
  return r;
}
// p(lambda * t)
inline GwaPoly gp_twist(const GwaPoly& a, const CycScalar& lambda) {
  GwaPoly r = a;
  CycScalar pw = lambda.field()->one();
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] *= pw;
    pw *= lambda;
  }
  gp_trim(r);
  return r;
}
inline int gp_t_valuation(const GwaPoly& p) {  // -1 for the zero polynomial
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!p[i].is_zero()) return static_cast<int>(i);
  return -1;
}
inline std::string gp_str(const GwaPoly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0 || !p[i].is_one()) os << '(' << p[i].str() << ')';
    if (i > 0) {
      if (!p[i].is_one()) os << '*';
      os << 't';
      if (i > 1) os << '^' << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Quantum generalized Weyl algebra of degree m over k[t]:
//   x_i p(t) = p(q_i t) x_i,  y_i p(t) = p(q_i^{-1} t) y_i,
//   x_i y_i = h_i(t),         y_i x_i = h_i(q_i^{-1} t),
// generators of distinct indices commute.  All q_i are roots of unity of
// pairwise coprime orders n_i >= 2 and every h_i is nonconstant.

class GwaAlgebra : public std::enable_shared_from_this<GwaAlgebra> {
 public:
  using Ptr = std::shared_ptr<const GwaAlgebra>;

  static Ptr make(const std::vector<unsigned>& orders,
                  const std::vector<long long>& q_exponents,
                  const std::vector<std::vector<Rational>>& h_coeffs) {
    return Ptr(new GwaAlgebra(orders, q_exponents, h_coeffs));
  }

  int degree() const { return m_; }
  unsigned order(int i) const { return orders_[i]; }
  std::int64_t n() const { return n_; }          // n_1 * ... * n_m
  std::int64_t rank() const { return n_ * n_; }  // over the center
  const CyclotomicField::Ptr& field() const { return field_; }
  const CycScalar& q(int i) const { return q_[i]; }
  const GwaPoly& h(int i) const { return h_[i]; }

  CycScalar q_power(int i, std::int64_t e) const {
    return field_->zeta(q_zeta_exp_[i] * e);
  }
  // prod_i q_i^{w_i}
  CycScalar q_window(const Exponent& w) const {
    std::int64_t acc = 0;
    for (int i = 0; i < m_; ++i) acc += q_zeta_exp_[i] * w[i];
    return field_->zeta(acc);
  }

  bool same(const GwaAlgebra& o) const {
    return orders_ == o.orders_ && q_zeta_exp_ == o.q_zeta_exp_ && h_raw_ == o.h_raw_;
  }

  bool window_central(const Exponent& w) const {
    for (int i = 0; i < m_; ++i)
      if (w[i] % static_cast<std::int64_t>(orders_[i]) != 0) return false;
    return true;
  }

 private:
  GwaAlgebra(const std::vector<unsigned>& orders,
             const std::vector<long long>& q_exponents,
             const std::vector<std::vector<Rational>>& h_coeffs)
      : m_(static_cast<int>(orders.size())), orders_(orders) {
    if (m_ < 1) throw spec_error("GWA needs degree >= 1");
    if (q_exponents.size() != orders.size() || h_coeffs.size() != orders.size())
      throw spec_error("GWA parameter lists must share the degree");
    unsigned N = 1;
    n_ = 1;
    for (int i = 0; i < m_; ++i) {
      if (orders_[i] < 2)
        throw spec_error("each q_i must be a root of unity different from 1");
      N = static_cast<unsigned>(std::lcm<std::uint64_t>(N, orders_[i]));
      n_ *= orders_[i];
      for (int j = 0; j < i; ++j)
        if (std::gcd(orders_[i], orders_[j]) != 1)
          throw spec_error("orders n_i must be pairwise coprime");
    }
    field_ = CyclotomicField::make(N);
    for (int i = 0; i < m_; ++i) {
      std::int64_t stride = static_cast<std::int64_t>(N / orders_[i]);
      q_zeta_exp_.push_back(stride * (((q_exponents[i] % orders_[i]) +
                                       orders_[i]) % orders_[i]));
      q_.push_back(field_->zeta(q_zeta_exp_[i]));
      auto ord = multiplicative_order(q_[i]);
      if (!ord || *ord != orders_[i])
        throw spec_error("q_" + std::to_string(i + 1) +
                         " does not have the declared order");
      GwaPoly h;
      for (const auto& r : h_coeffs[i]) h.push_back(field_->from_rational(r));
      gp_trim(h);
      if (h.size() < 2)
        throw spec_error("h_" + std::to_string(i + 1) +
                         " must be nonconstant (standing assumption)");
      h_.push_back(h);
      h_raw_.push_back(h_coeffs[i]);
    }
    // sigma_i(h_j) = h_j for i != j is part of the defining data
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        if (i == j) continue;
        if (gp_twist(h_[j], q_[i]) != h_[j])
          throw spec_error("h_" + std::to_string(j + 1) +
                           " is not invariant under sigma_" +
                           std::to_string(i + 1) +
                           "; not a valid GWA presentation");
      }
  }

  int m_;
  std::vector<unsigned> orders_;
  std::int64_t n_;
  CyclotomicField::Ptr field_;
  std::vector<CycScalar> q_;
  std::vector<std::int64_t> q_zeta_exp_;
  std::vector<GwaPoly> h_;
  std::vector<std::vector<Rational>> h_raw_;
};

// Normal form: sum over window vectors gamma of p_gamma(t) * z^gamma, the
// coefficient polynomial kept on the left.  z_i^k means x_i^k for k >= 0 and
// y_i^{-k} for k < 0.
class GwaElement {
 public:
  GwaElement() = default;
  explicit GwaElement(GwaAlgebra::Ptr alg) : alg_(std::move(alg)) {}

  static GwaElement term(GwaAlgebra::Ptr alg, const Exponent& window,
                         GwaPoly coeff) {
    GwaElement f(std::move(alg));
    gp_trim(coeff);
    if (!coeff.empty()) f.terms_.emplace(window, std::move(coeff));
    return f;
  }
  static GwaElement one(GwaAlgebra::Ptr alg) {
    GwaPoly p = {alg->field()->one()};
    return term(std::move(alg), Exponent(alg->degree(), 0), std::move(p));
  }
  static GwaElement t_power(GwaAlgebra::Ptr alg, int j) {
    GwaPoly p(j + 1, alg->field()->zero());
    p[j] = alg->field()->one();
    return term(std::move(alg), Exponent(alg->degree(), 0), std::move(p));
  }
  static GwaElement x(GwaAlgebra::Ptr alg, int i, std::int64_t pow = 1) {
    Exponent w(alg->degree(), 0);
    w[i] = pow;
    GwaPoly p = {alg->field()->one()};
    return term(std::move(alg), w, std::move(p));
  }
  static GwaElement y(GwaAlgebra::Ptr alg, int i, std::int64_t pow = 1) {
    return x(std::move(alg), i, -pow);
  }

  const GwaAlgebra::Ptr& algebra() const { return alg_; }
  const std::map<Exponent, GwaPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const GwaElement& a, const GwaElement& b) {
    return a.terms_ == b.terms_;
  }

  friend GwaElement operator+(const GwaElement& a, const GwaElement& b) {
    a.check(b);
    GwaElement r = a;
    for (const auto& [w, p] : b.terms_) r.add_term(w, p);
    return r;
  }
  friend GwaElement operator-(const GwaElement& a, const GwaElement& b) {
    a.check(b);
    GwaElement r = a;
    for (const auto& [w, p] : b.terms_) r.add_term(w, gp_neg(p));
    return r;
  }
  GwaElement operator-() const {
    GwaElement r(alg_);
    for (const auto& [w, p] : terms_) r.terms_[w] = gp_neg(p);
    return r;
  }
  GwaElement scaled(const CycScalar& c) const {
    GwaElement r(alg_);
    if (c.is_zero()) return r;
    for (const auto& [w, p] : terms_) r.terms_[w] = gp_scale(p, c);
    return r;
  }

  friend GwaElement operator*(const GwaElement& a, const GwaElement& b) {
    a.check(b);
    GwaElement r(a.alg_);
    const auto& A = *a.alg_;
    const int m = A.degree();
    for (const auto& [g, p] : a.terms_)
      for (const auto& [d, s] : b.terms_) {
        // p(t) z^g * s(t) z^d = p(t) s(q^g t) * (z^g z^d)
        GwaPoly coeff = gp_mul(p, gp_twist(s, A.q_window(g)));
        Exponent w(m);
        CycScalar tau = A.field()->one();  // twist for contraction factors
        for (int i = 0; i < m; ++i) {
          w[i] = g[i] + d[i];
          GwaPoly contraction = contraction_poly(A, i, g[i], d[i]);
          if (!contraction.empty())
            coeff = gp_mul(coeff, gp_twist(contraction, tau));
          tau *= A.q_power(i, w[i]);
        }
        r.add_term(w, coeff);
      }
    return r;
  }

  // Regular trace: t^j z^gamma -> n^2 * (itself) when central, 0 otherwise.
  GwaElement trace() const {
    GwaElement r(alg_);
    const auto& A = *alg_;
    auto n2 = A.field()->from_rational(Rational(A.rank()));
    const std::int64_t n = A.n();
    for (const auto& [w, p] : terms_) {
      if (!A.window_central(w)) continue;
      GwaPoly kept(p.size(), A.field()->zero());
      bool any = false;
      for (std::size_t r2 = 0; r2 < p.size(); ++r2)
        if (!p[r2].is_zero() && static_cast<std::int64_t>(r2) % n == 0) {
          kept[r2] = p[r2] * n2;
          any = true;
        }
      if (any) r.add_term(w, kept);
    }
    return r;
  }

  bool is_central() const {
    const auto& A = *alg_;
    for (const auto& [w, p] : terms_) {
      if (!A.window_central(w)) return false;
      for (std::size_t r = 0; r < p.size(); ++r)
        if (!p[r].is_zero() && static_cast<std::int64_t>(r) % A.n() != 0)
          return false;
    }
    return true;
  }

  // Every coefficient polynomial divisible by t^k; since t^k z^gamma equals
  // a unit scalar times z^gamma t^k this is divisibility by t^k in W.
  bool t_divisible(std::int64_t k) const {
    for (const auto& [w, p] : terms_) {
      int val = gp_t_valuation(p);
      if (val < 0 || val < k) return false;
    }
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, p] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << '[' << gp_str(p) << ']';
      for (int i = 0; i < alg_->degree(); ++i) {
        if (w[i] > 0) {
          os << "*x" << (i + 1);
          if (w[i] != 1) os << '^' << w[i];
        } else if (w[i] < 0) {
          os << "*y" << (i + 1);
          if (w[i] != -1) os << '^' << -w[i];
        }
      }
    }
    return os.str();
  }

 private:
  // x_i^a y_i^b (a = g, b = -d for g > 0 > d) contracts to
  // prod_{j=1..k} h_i(q_i^{g-j} t) with k = min(a, b); the mirrored case
  // y_i^e x_i^d contracts to prod_{j=0..k-1} h_i(q_i^{-(e-j)} t).
  static GwaPoly contraction_poly(const GwaAlgebra& A, int i, std::int64_t g,
                                  std::int64_t d) {
    if (g == 0 || d == 0 || (g > 0) == (d > 0)) return {};
    GwaPoly acc = {A.field()->one()};
    if (g > 0) {  // x^g y^{-d}
      std::int64_t k = std::min(g, -d);
      for (std::int64_t j = 1; j <= k; ++j)
        acc = gp_mul(acc, gp_twist(A.h(i), A.q_power(i, g - j)));
    } else {  // y^{-g} x^d
      std::int64_t e = -g, k = std::min(e, d);
      for (std::int64_t j = 0; j < k; ++j)
        acc = gp_mul(acc, gp_twist(A.h(i), A.q_power(i, -(e - j))));
    }
    return acc;
  }

  void check(const GwaElement& o) const {
    if (!alg_ || !o.alg_ || !alg_->same(*o.alg_))
      throw spec_error("GWA elements from different algebras");
  }
  void add_term(const Exponent& w, const GwaPoly& p) {
    if (p.empty()) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
      terms_.emplace(w, p);
      return;
    }
    it->second = gp_add(it->second, p);
    if (it->second.empty()) terms_.erase(it);
  }

  GwaAlgebra::Ptr alg_;
  std::map<Exponent, GwaPoly> terms_;
};

// ---------------------------------------------------------------------------
// Center presentation Z = k[a_1..a_m, b_1..b_m, c] / (a_i b_i - p_i(c)).

struct GwaCenter {
  PresentedCommRing::Ptr ring;
  std::vector<GwaElement> a, b;  // a_i = x_i^{n_i}, b_i = y_i^{n_i}
  GwaElement c;                  // t^n
  std::vector<GwaPoly> p;        // p_i as polynomials in c (constant-first)
};

// Variable layout in the center ring: a_1..a_m, b_1..b_m, c.
inline int center_var_a(int i) { return i; }
inline int center_var_b(const GwaAlgebra& A, int i) { return A.degree() + i; }
inline int center_var_c(const GwaAlgebra& A) { return 2 * A.degree(); }

inline GwaCenter gwa_center_presentation(const GwaAlgebra::Ptr& alg) {
  const auto& A = *alg;
  const int m = A.degree();
  const std::int64_t n = A.n();
  GwaCenter Z;
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back(m == 1 ? "a" : "a" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) names.push_back(m == 1 ? "b" : "b" + std::to_string(i + 1));
  names.push_back("c");
  std::vector<PresentedCommRing::PairRule> rules;
  for (int i = 0; i < m; ++i) {
    // P_i(t) = prod_j h_i(q_i^j t) is sigma-invariant, hence a polynomial in
    // t^n; rewrite it in c.
    GwaPoly P = {A.field()->one()};
    for (unsigned j = 0; j < A.order(i); ++j)
      P = gp_mul(P, gp_twist(A.h(i), A.q_power(i, j)));
    PresentedCommRing::PairRule rule;
    rule.u = i;
    rule.v = m + i;
    GwaPoly p_in_c;
    for (std::size_t r = 0; r < P.size(); ++r) {
      if (P[r].is_zero()) continue;
      if (static_cast<std::int64_t>(r) % n != 0)
        throw internal_check_error(
            "center relation polynomial is not sigma-invariant");
      std::size_t cr = r / n;
      if (p_in_c.size() <= cr) p_in_c.resize(cr + 1, A.field()->zero());
      p_in_c[cr] = P[r];
      Exponent e(2 * m + 1, 0);
      e[2 * m] = static_cast<std::int64_t>(cr);
      rule.rhs.emplace(std::move(e), P[r]);
    }
    rules.push_back(std::move(rule));
    Z.p.push_back(std::move(p_in_c));
  }
  Z.ring = PresentedCommRing::make(names, A.field(), rules);
  for (int i = 0; i < m; ++i) {
    Z.a.push_back(GwaElement::x(alg, i, A.order(i)));
    Z.b.push_back(GwaElement::y(alg, i, A.order(i)));
  }
  Z.c = GwaElement::t_power(alg, static_cast<int>(n));
  // verify a_i b_i = P_i(t) by direct multiplication in W
  for (int i = 0; i < m; ++i) {
    GwaElement lhs = Z.a[i] * Z.b[i];
    GwaPoly P = {A.field()->one()};
    for (unsigned j = 0; j < A.order(i); ++j)
      P = gp_mul(P, gp_twist(A.h(i), A.q_power(i, j)));
    GwaElement rhs = GwaElement::term(alg, Exponent(m, 0), P);
    if (!(lhs == rhs))
      throw internal_check_error(
          "center relation failed to verify: a_i b_i = " + lhs.str() +
          " but prod h_i^{sigma^j} = " + rhs.str());
  }
  return Z;
}

// Central GwaElement -> element of the presented center ring.
inline RingElement gwa_to_center(const GwaCenter& Z, const GwaElement& f) {
  const auto& A = *f.algebra();
  const int m = A.degree();
  const std::int64_t n = A.n();
  PresentedCommRing::Terms raw;
  for (const auto& [w, p] : f.terms()) {
    if (!A.window_central(w))
      throw internal_check_error("conversion of a non-central element");
    for (std::size_t r = 0; r < p.size(); ++r) {
      if (p[r].is_zero()) continue;
      if (static_cast<std::int64_t>(r) % n != 0)
        throw internal_check_error("conversion of a non-central element");
      Exponent e(2 * m + 1, 0);
      for (int i = 0; i < m; ++i) {
        std::int64_t k = w[i] / static_cast<std::int64_t>(A.order(i));
        if (k >= 0)
          e[center_var_a(i)] = k;
        else
          e[center_var_b(A, i)] = -k;
      }
      e[center_var_c(A)] = static_cast<std::int64_t>(r) / n;
      auto it = raw.find(e);
      if (it == raw.end())
        raw.emplace(std::move(e), p[r]);
      else
        it->second += p[r];
    }
  }
  return RingElement(Z.ring, raw);
}

// Normal-form center monomials map back exactly (no contractions arise).
inline GwaElement center_to_gwa(const GwaCenter& Z, const GwaAlgebra::Ptr& alg,
                                const RingElement& e) {
  (void)Z;  // signature kept symmetric with gwa_to_center
  const auto& A = *alg;
  const int m = A.degree();
  GwaElement out(alg);
  for (const auto& [exp, c] : e.terms()) {
    Exponent w(m, 0);
    for (int i = 0; i < m; ++i) {
      std::int64_t ka = exp[center_var_a(i)], kb = exp[center_var_b(A, i)];
      if (ka > 0 && kb > 0)
        throw internal_check_error("center monomial not in normal form");
      w[i] = (ka - kb) * static_cast<std::int64_t>(A.order(i));
    }
    std::int64_t tc = exp[center_var_c(A)] * A.n();
    GwaPoly p(tc + 1, A.field()->zero());
    p[tc] = c;
    out = out + GwaElement::term(alg, w, std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Charts: invert a_i or b_i per index; the localized algebra is free on
// {z_eps^alpha t^j : alpha_i < n_i, j < n}.

using ChartSigns = std::vector<bool>;  // true: a_i inverted (x-basis side)

inline std::string chart_name(const ChartSigns& eps) {
  std::string s;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i) s += ',';
    s += (eps[i] ? 'a' : 'b');
    if (eps.size() > 1) s += std::to_string(i + 1);
  }
  return s;
}

struct GwaBasis {
  std::vector<Exponent> windows;     // signed windows of the basis monomials
  std::vector<std::int64_t> t_exps;  // t exponents
  std::vector<GwaElement> elems;
};

inline GwaBasis gwa_chart_basis(const GwaAlgebra::Ptr& alg,
                                const ChartSigns& eps) {
  const auto& A = *alg;
  const int m = A.degree();
  GwaBasis B;
  Exponent alpha(m, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      for (std::int64_t j = 0; j < A.n(); ++j) {
        Exponent w(m);
        for (int k = 0; k < m; ++k) w[k] = eps[k] ? alpha[k] : -alpha[k];
        GwaPoly p(j + 1, A.field()->zero());
        p[j] = A.field()->one();
        B.windows.push_back(w);
        B.t_exps.push_back(j);
        B.elems.push_back(GwaElement::term(alg, w, std::move(p)));
      }
      return;
    }
    for (alpha[i] = 0; alpha[i] < static_cast<std::int64_t>(A.order(i)); ++alpha[i])
      rec(i + 1);
    alpha[i] = 0;
  };
  rec(0);
  return B;
}

// Coefficient in the localized center: num / prod_i (inverted gen_i)^denom_i.
struct CentralFraction {
  RingElement num;
  Exponent denom;  // length m

  bool is_zero() const { return num.is_zero(); }
};

inline Exponent fraction_denom_monomial(const GwaAlgebra& A,
                                        const ChartSigns& eps,
                                        const Exponent& denom) {
  Exponent e(2 * A.degree() + 1, 0);
  for (int i = 0; i < A.degree(); ++i)
    e[eps[i] ? center_var_a(i) : center_var_b(A, i)] = denom[i];
  return e;
}

inline bool fraction_equal(const GwaAlgebra& A, const ChartSigns& eps,
                           const CentralFraction& f, const CentralFraction& g) {
  // cross-multiply: f.num * D_g == g.num * D_f
  auto to_elem = [&](const Exponent& d, const PresentedCommRing::Ptr& ring) {
    return RingElement::monomial(ring, fraction_denom_monomial(A, eps, d),
                                 ring->field()->one());
  };
  const auto& ring = f.num.is_zero() ? g.num.ring() : f.num.ring();
  if (!ring) return f.num.is_zero() && g.num.is_zero();
  return f.num * to_elem(g.denom, ring) == g.num * to_elem(f.denom, ring);
}

// Decompose f over the chart basis with coefficients in the localized
// center.  Exact: multiply f by enough inverted-generator powers to clear
// all sign mismatches, then split windows and t-exponents.
inline std::vector<CentralFraction> gwa_chart_decompose(
    const GwaCenter& Z, const GwaBasis& B, const ChartSigns& eps,
    const GwaElement& f, bool verify = false) {
  const auto alg = f.algebra();
  const auto& A = *alg;
  const int m = A.degree();
  const std::int64_t n = A.n();

  std::vector<CentralFraction> out(B.elems.size());
  for (auto& fr : out) {
    fr.num = RingElement(Z.ring);
    fr.denom.assign(m, 0);
  }

  for (const auto& [w0, p0] : f.terms()) {
    // clearing powers: s_i of a_i (eps) or b_i (not eps)
    Exponent s(m, 0);
    GwaElement cleared = GwaElement::term(alg, w0, p0);
    for (int i = 0; i < m; ++i) {
      std::int64_t ni = A.order(i);
      if (eps[i] && w0[i] < 0)
        s[i] = (-w0[i] + ni - 1) / ni;
      else if (!eps[i] && w0[i] > 0)
        s[i] = (w0[i] + ni - 1) / ni;
      if (s[i] > 0) {
        GwaElement mul = eps[i] ? GwaElement::x(alg, i, s[i] * ni)
                                : GwaElement::y(alg, i, s[i] * ni);
        cleared = mul * cleared;
      }
    }
    // cleared terms now have windows on the chart side; split into
    // basis window + central multiples
    for (const auto& [w, p] : cleared.terms()) {
      Exponent alpha(m), central(2 * m + 1, 0);
      for (int i = 0; i < m; ++i) {
        std::int64_t ni = A.order(i);
        std::int64_t v = eps[i] ? w[i] : -w[i];
        if (v < 0)
          throw internal_check_error("chart clearing left a wrong-sign window");
        alpha[i] = v % ni;
        std::int64_t k = v / ni;
        central[eps[i] ? center_var_a(i) : center_var_b(A, i)] = k;
      }
      for (std::size_t r = 0; r < p.size(); ++r) {
        if (p[r].is_zero()) continue;
        std::int64_t j = static_cast<std::int64_t>(r) % n;
        Exponent ce = central;
        ce[center_var_c(A)] = static_cast<std::int64_t>(r) / n;
        // locate the basis slot (alpha, j)
        std::size_t slot = 0;
        for (; slot < B.windows.size(); ++slot) {
          bool match = B.t_exps[slot] == j;
          for (int i = 0; i < m && match; ++i)
            match = B.windows[slot][i] == (eps[i] ? alpha[i] : -alpha[i]);
          if (match) break;
        }
        if (slot == B.windows.size())
          throw internal_check_error("basis slot not found in decomposition");
        // merge into the fraction at this slot (common denominator)
        CentralFraction add;
        add.denom = s;
        add.num = RingElement::monomial(Z.ring, ce, p[r]);
        auto& cur = out[slot];
        Exponent lcm(m);
        for (int i = 0; i < m; ++i) lcm[i] = std::max(cur.denom[i], add.denom[i]);
        auto scale_up = [&](CentralFraction& fr) {
          Exponent diff(m);
          for (int i = 0; i < m; ++i) diff[i] = lcm[i] - fr.denom[i];
          bool any = false;
          for (int i = 0; i < m; ++i) any = any || diff[i] > 0;
          if (any)
            fr.num = fr.num * RingElement::monomial(
                                  Z.ring, fraction_denom_monomial(A, eps, diff),
                                  Z.ring->field()->one());
          fr.denom = lcm;
        };
        scale_up(cur);
        scale_up(add);
        cur.num = cur.num + add.num;
      }
    }
  }
  // normalize: strip common denominator factors that divide the numerator
  for (auto& fr : out) {
    if (fr.num.is_zero()) {
      fr.denom.assign(m, 0);
      continue;
    }
    for (int i = 0; i < m; ++i) {
      int var = eps[i] ? center_var_a(i) : center_var_b(A, i);
      while (fr.denom[i] > 0) {
        auto q = fr.num.divided_by_var(var);
        if (!q) break;
        fr.num = *q;
        --fr.denom[i];
      }
    }
  }

  if (verify) {
    // reconstruction: sum_slots num_slot * A^{S - denom_slot} * basis_slot
    // must equal A^S * f for the slotwise common denominator S
    Exponent S(m, 0);
    for (const auto& fr : out)
      for (int i = 0; i < m; ++i) S[i] = std::max(S[i], fr.denom[i]);
    GwaElement lhs(alg);
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (out[k].num.is_zero()) continue;
      GwaElement numel = center_to_gwa(Z, alg, out[k].num);
      for (int i = 0; i < m; ++i) {
        std::int64_t diff = S[i] - out[k].denom[i];
        if (diff > 0) {
          GwaElement mul = eps[i]
                               ? GwaElement::x(alg, i, diff * A.order(i))
                               : GwaElement::y(alg, i, diff * A.order(i));
          numel = mul * numel;
        }
      }
      lhs = lhs + numel * B.elems[k];
    }
    GwaElement rhs = f;
    for (int i = 0; i < m; ++i)
      if (S[i] > 0) {
        GwaElement mul = eps[i] ? GwaElement::x(alg, i, S[i] * A.order(i))
                                : GwaElement::y(alg, i, S[i] * A.order(i));
        rhs = mul * rhs;
      }
    if (!(lhs == rhs))
      throw internal_check_error("chart decomposition failed to reconstruct");
  }
  return out;
}

namespace detail {
struct CommElemRing {
  PresentedCommRing::Ptr ring;
  RingElement zero() const { return RingElement(ring); }
  RingElement one() const { return RingElement::one(ring); }
  RingElement add(const RingElement& a, const RingElement& b) const { return a + b; }
  RingElement mul(const RingElement& a, const RingElement& b) const { return a * b; }
  RingElement neg(const RingElement& a) const { return -a; }
  bool is_zero(const RingElement& a) const { return a.is_zero(); }
};
}  // namespace detail

// ---------------------------------------------------------------------------
// Trace matrix over a generating set, with the sparsity-pattern assertion.

struct GwaTraceMatrix {
  std::vector<Exponent> windows;
  std::vector<std::int64_t> t_exps;
  std::vector<GwaElement> gens;
  std::vector<std::vector<GwaElement>> entries;  // central traces
};

// The degree-one generating set {x^i t^j, y^i t^j} (size 2n^2 - n), or its
// degree-m analogue {z^gamma t^j : |gamma_i| < n_i, 0 <= j < n}.
inline std::vector<std::pair<Exponent, std::int64_t>> gwa_generating_set(
    const GwaAlgebra& A) {
  std::vector<std::pair<Exponent, std::int64_t>> out;
  const int m = A.degree();
  Exponent g(m, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == m) {
      for (std::int64_t j = 0; j < A.n(); ++j) out.emplace_back(g, j);
      return;
    }
    for (std::int64_t v = -(static_cast<std::int64_t>(A.order(i)) - 1);
         v < static_cast<std::int64_t>(A.order(i)); ++v) {
      g[i] = v;
      rec(i + 1);
    }
    g[i] = 0;
  };
  rec(0);
  return out;
}

// Trace oracle type: maps a product to its (central) trace.
using GwaTraceFn = std::function<GwaElement(const GwaElement&)>;

inline GwaTraceMatrix gwa_trace_matrix(
    const GwaAlgebra::Ptr& alg, GwaTraceFn trace_fn = nullptr) {
  const auto& A = *alg;
  GwaTraceMatrix M;
  for (auto& [w, j] : gwa_generating_set(A)) {
    M.windows.push_back(w);
    M.t_exps.push_back(j);
    GwaPoly p(j + 1, A.field()->zero());
    p[j] = A.field()->one();
    M.gens.push_back(GwaElement::term(alg, w, std::move(p)));
  }
  if (!trace_fn) trace_fn = [](const GwaElement& f) { return f.trace(); };
  const std::size_t G = M.gens.size();
  M.entries.assign(G, std::vector<GwaElement>(G, GwaElement(alg)));
  for (std::size_t k = 0; k < G; ++k)
    for (std::size_t l = 0; l < G; ++l)
      M.entries[k][l] = trace_fn(M.gens[k] * M.gens[l]);

  // Sparsity assertion: a nonzero trace forces the windows to cancel
  // modulo the orders, and with no contraction in play it also forces the
  // unique complementary t-column.
  for (std::size_t k = 0; k < G; ++k)
    for (std::size_t l = 0; l < G; ++l) {
      if (M.entries[k][l].is_zero()) continue;
      for (int i = 0; i < A.degree(); ++i)
        if ((M.windows[k][i] + M.windows[l][i]) %
                static_cast<std::int64_t>(A.order(i)) !=
            0)
          throw internal_check_error(
              "trace matrix sparsity violated: windows do not cancel at row " +
              M.gens[k].str() + ", column " + M.gens[l].str());
      bool contraction = false;
      for (int i = 0; i < A.degree(); ++i) {
        auto a = M.windows[k][i], b = M.windows[l][i];
        if (a != 0 && b != 0 && (a > 0) != (b > 0)) contraction = true;
      }
      if (!contraction &&
          (M.t_exps[k] + M.t_exps[l]) % A.n() != 0)
        throw internal_check_error(
            "trace matrix sparsity violated: non-complementary t-exponents "
            "at row " +
            M.gens[k].str() + ", column " + M.gens[l].str());
    }
  return M;
}

// ---------------------------------------------------------------------------
// Chart-local discriminant and the glued reflexive-hull discriminant.

struct GwaChartEvidence {
  ChartSigns signs;
  RingElement det;            // determinant of the basis trace matrix
  std::int64_t c_exp = 0;     // portable part: exponent of c
  Exponent inverted_exps;     // exponents of the inverted generators
  CycScalar unit_scalar;      // scalar factor of the (monomial) determinant
};

inline GwaChartEvidence gwa_local_discriminant(const GwaAlgebra::Ptr& alg,
                                               const GwaCenter& Z,
                                               const ChartSigns& eps,
                                               bool verify_freeness = true) {
  const auto& A = *alg;
  const int m = A.degree();
  auto B = gwa_chart_basis(alg, eps);

  if (verify_freeness) {
    // every generating-set element decomposes over the basis with localized
    // central coefficients, verified by reconstruction
    for (auto& [w, j] : gwa_generating_set(A)) {
      GwaPoly p(j + 1, A.field()->zero());
      p[j] = A.field()->one();
      auto g = GwaElement::term(alg, w, std::move(p));
      gwa_chart_decompose(Z, B, eps, g, /*verify=*/true);
    }
  }

  const std::size_t W = B.elems.size();
  std::vector<std::vector<RingElement>> T(W, std::vector<RingElement>(W));
  for (std::size_t k = 0; k < W; ++k)
    for (std::size_t l = 0; l < W; ++l)
      T[k][l] = gwa_to_center(Z, (B.elems[k] * B.elems[l]).trace());

  detail::CommElemRing ring{Z.ring};
  RingElement det = division_free_det(T, ring);
  if (det.is_zero())
    throw internal_check_error("chart trace pairing degenerate on chart " +
                               chart_name(eps));

  GwaChartEvidence ev;
  ev.signs = eps;
  ev.det = det;
  if (!det.is_monomial())
    throw internal_check_error("chart discriminant is not a monomial");
  const auto& [de, dc] = *det.terms().begin();
  ev.unit_scalar = dc;
  ev.c_exp = de[center_var_c(A)];
  ev.inverted_exps.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    int inv_var = eps[i] ? center_var_a(i) : center_var_b(A, i);
    int other = eps[i] ? center_var_b(A, i) : center_var_a(i);
    ev.inverted_exps[i] = de[inv_var];
    if (de[other] != 0)
      throw internal_check_error(
          "chart discriminant contains a non-invertible generator");
  }
  return ev;
}

struct GwaDiscriminant {
  std::int64_t t_exp = 0;  // csr = t^{t_exp}, equivalently c^{t_exp / n}
  std::int64_t c_exp = 0;
  std::vector<GwaChartEvidence> charts;
};

// Local discriminants on all 2^m sign charts; the portable part c^{n(n-1)}
// must agree across charts.  The codimension-2 gluing and center
// reflexivity are consumed as given (reported, not re-proved).
inline GwaDiscriminant gwa_reflexive_discriminant(const GwaAlgebra::Ptr& alg,
                                                  const GwaCenter& Z) {
  const auto& A = *alg;
  const int m = A.degree();
  GwaDiscriminant out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    ChartSigns eps(m);
    for (int i = 0; i < m; ++i) eps[i] = (mask & (1u << i)) != 0;
    out.charts.push_back(gwa_local_discriminant(alg, Z, eps));
  }
  out.c_exp = out.charts[0].c_exp;
  for (const auto& ev : out.charts)
    if (ev.c_exp != out.c_exp)
      throw internal_check_error(
          "charts disagree on the portable discriminant part: chart " +
          chart_name(ev.signs) + " gives c^" + std::to_string(ev.c_exp) +
          " against c^" + std::to_string(out.c_exp));
  out.t_exp = out.c_exp * A.n();
  return out;
}

// ---------------------------------------------------------------------------
// Modified discriminant ideal via base change against the chart basis
// (the quasi-basis factorization, generalized to multi-line coefficients).

struct GwaMdResult {
  CommIdeal ideal;
  bool quasi_basis = true;      // every generator on a single basis line
  std::uint64_t dets = 0;       // base-change determinants evaluated
  RingElement basis_disc;       // d_w(b, b)
  std::vector<std::pair<RingElement, Exponent>> coeff_dets;  // distinct (num, denom)
};

inline GwaMdResult gwa_md_quasibasis(const GwaAlgebra::Ptr& alg,
                                     const GwaCenter& Z,
                                     std::uint64_t guard = 10'000'000) {
  const auto& A = *alg;
  const int m = A.degree();
  ChartSigns eps(m, true);
  auto B = gwa_chart_basis(alg, eps);
  const std::size_t w = B.elems.size();

  auto gens = gwa_generating_set(A);
  const std::size_t G = gens.size();
  if (binomial_capped(G, w, guard) > guard)
    throw refusal_error("base-change determinant enumeration refused: C(" +
                        std::to_string(G) + "," + std::to_string(w) +
                        ") exceeds " + std::to_string(guard));

  GwaMdResult out;
  // coefficient rows: decomposition of every generator over the basis
  std::vector<std::vector<CentralFraction>> rows;
  std::vector<Exponent> row_denoms;
  for (auto& [wv, j] : gens) {
    GwaPoly p(j + 1, A.field()->zero());
    p[j] = A.field()->one();
    auto g = GwaElement::term(alg, wv, std::move(p));
    auto frac = gwa_chart_decompose(Z, B, eps, g, /*verify=*/true);
    int lines = 0;
    for (auto& fr : frac)
      if (!fr.is_zero()) ++lines;
    if (lines == 0) throw internal_check_error("generator decomposed to zero");
    if (lines > 1) out.quasi_basis = false;
    Exponent rd(m, 0);
    for (auto& fr : frac)
      for (int i = 0; i < m; ++i) rd[i] = std::max(rd[i], fr.denom[i]);
    rows.push_back(std::move(frac));
    row_denoms.push_back(std::move(rd));
  }

  // d_w(b,b): determinant of the basis trace pairing
  out.basis_disc = gwa_local_discriminant(alg, Z, eps, false).det;

  // distinct base-change determinants over all w-subsets of the rows
  auto subs = subsets_of_size(static_cast<int>(G), static_cast<int>(w));
  out.dets = subs.size();
  detail::CommElemRing ring{Z.ring};
  std::map<std::string, std::pair<RingElement, Exponent>> distinct;
  for (const auto& sub : subs) {
    std::vector<std::vector<RingElement>> C(w, std::vector<RingElement>(w));
    Exponent denom(m, 0);
    for (std::size_t r = 0; r < w; ++r) {
      const auto& row = rows[sub[r]];
      const auto& rd = row_denoms[sub[r]];
      for (int i = 0; i < m; ++i) denom[i] += rd[i];
      for (std::size_t cidx = 0; cidx < w; ++cidx) {
        // scale every entry to the common row denominator rd
        const auto& fr = row[cidx];
        if (fr.is_zero()) {
          C[r][cidx] = RingElement(Z.ring);
          continue;
        }
        Exponent diff(m);
        for (int i = 0; i < m; ++i) diff[i] = rd[i] - fr.denom[i];
        C[r][cidx] =
            fr.num * RingElement::monomial(
                         Z.ring, fraction_denom_monomial(A, eps, diff),
                         Z.ring->field()->one());
      }
    }
    RingElement det = division_free_det(C, ring);
    if (det.is_zero()) continue;
    auto norm = det.normalized();
    // strip denominator factors that divide the determinant
    for (int i = 0; i < m; ++i) {
      int var = center_var_a(i);
      while (denom[i] > 0) {
        auto q = norm.divided_by_var(var);
        if (!q) break;
        norm = q->normalized();
        --denom[i];
      }
    }
    std::string key = norm.str();
    for (int i = 0; i < m; ++i) key += "/" + std::to_string(denom[i]);
    distinct.emplace(key, std::make_pair(norm, denom));
  }
  for (auto& [k, v] : distinct) out.coeff_dets.push_back(v);

  // MD generators: d_w(b,b) * delta_U * delta_K, denominators cleared by
  // exact division (each product is an honest minor, hence lies in Z)
  std::vector<RingElement> md_gens;
  for (std::size_t i = 0; i < out.coeff_dets.size(); ++i)
    for (std::size_t j = i; j < out.coeff_dets.size(); ++j) {
      RingElement numer =
          out.basis_disc * out.coeff_dets[i].first * out.coeff_dets[j].first;
      Exponent denom(m);
      for (int k = 0; k < m; ++k)
        denom[k] = out.coeff_dets[i].second[k] + out.coeff_dets[j].second[k];
      Exponent dm = fraction_denom_monomial(A, eps, denom);
      auto q = numer.divided_by_monomial(dm);
      if (!q)
        throw internal_check_error(
            "modified discriminant generator failed to clear denominators");
      md_gens.push_back(std::move(*q));
    }
  out.ideal = CommIdeal::make(Z.ring, std::move(md_gens));
  return out;
}

// Exhaustive oracle: all v x v minors of the full trace matrix.
inline CommIdeal gwa_md_exhaustive(const GwaAlgebra::Ptr& alg,
                                   const GwaCenter& Z, int v,
                                   std::uint64_t guard = 10'000'000) {
  auto M = gwa_trace_matrix(alg);
  const std::size_t G = M.gens.size();
  std::uint64_t cnt = binomial_capped(G, v, guard);
  if (cnt * cnt > guard)
    throw refusal_error("exhaustive GWA minor enumeration refused");
  std::vector<std::vector<RingElement>> T(G, std::vector<RingElement>(G));
  for (std::size_t k = 0; k < G; ++k)
    for (std::size_t l = 0; l < G; ++l)
      T[k][l] = gwa_to_center(Z, M.entries[k][l]);
  auto subs = subsets_of_size(static_cast<int>(G), v);
  detail::CommElemRing ring{Z.ring};
  std::vector<std::vector<RingElement>> partial(subs.size());
  parallel_for(subs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ui = lo; ui < hi; ++ui)
      for (const auto& sub2 : subs) {
        std::vector<std::vector<RingElement>> sm(v, std::vector<RingElement>(v));
        for (int r = 0; r < v; ++r)
          for (int c = 0; c < v; ++c) sm[r][c] = T[subs[ui][r]][sub2[c]];
        RingElement d = division_free_det(sm, ring);
        if (!d.is_zero()) partial[ui].push_back(std::move(d));
      }
  });
  std::vector<RingElement> gens;
  for (auto& p : partial)
    for (auto& d : p) gens.push_back(std::move(d));
  return CommIdeal::make(Z.ring, std::move(gens));
}

// ---------------------------------------------------------------------------
// Slow trace: internal trace of left multiplication on a chart basis.

inline CentralFraction gwa_slow_trace(const GwaCenter& Z,
                                      const GwaAlgebra::Ptr& alg,
                                      const ChartSigns& eps,
                                      const GwaElement& f) {
  const auto& A = *alg;
  const int m = A.degree();
  auto B = gwa_chart_basis(alg, eps);
  CentralFraction acc;
  acc.num = RingElement(Z.ring);
  acc.denom.assign(m, 0);
  for (std::size_t k = 0; k < B.elems.size(); ++k) {
    auto col = gwa_chart_decompose(Z, B, eps, f * B.elems[k]);
    const auto& diag = col[k];
    if (diag.is_zero()) continue;
    Exponent lcm(m);
    for (int i = 0; i < m; ++i) lcm[i] = std::max(acc.denom[i], diag.denom[i]);
    auto scale_up = [&](CentralFraction& fr) {
      Exponent diff(m);
      for (int i = 0; i < m; ++i) diff[i] = lcm[i] - fr.denom[i];
      bool any = false;
      for (int i = 0; i < m; ++i) any = any || diff[i] > 0;
      if (any)
        fr.num = fr.num *
                 RingElement::monomial(Z.ring,
                                       fraction_denom_monomial(A, eps, diff),
                                       Z.ring->field()->one());
      fr.denom = lcm;
    };
    CentralFraction d2 = diag;
    scale_up(acc);
    scale_up(d2);
    acc.num = acc.num + d2.num;
  }
  return acc;
}

}  // namespace qdisc
