#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdisc/gwa.hpp"
#include "qdisc/skew.hpp"

namespace qdisc {

// ---------------------------------------------------------------------------
// Morphisms of quantum GWAs: generator images, relation verification (never
// assumed), application to normal-form elements.

struct GwaMorphism {
  GwaAlgebra::Ptr source, target;
  GwaElement img_t;
  std::vector<GwaElement> img_x, img_y;
  bool checked = false;
};

// Evaluate a source-coefficient polynomial at an element of the target.
inline GwaElement eval_poly_at(const GwaPoly& p, const GwaElement& at,
                               const GwaAlgebra::Ptr& target) {
  GwaElement acc(target);
  GwaElement pw = GwaElement::one(target);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k > 0) pw = pw * at;
    if (p[k].is_zero()) continue;
    acc = acc + pw.scaled(embed_into(target->field(), p[k]));
  }
  return acc;
}

// True iff every defining relation of the source maps to zero; otherwise the
// name of the first failing relation.
inline std::optional<std::string> gwa_morphism_witness(const GwaMorphism& phi) {
  const auto& S = *phi.source;
  const auto& T = phi.target;
  const int m = S.degree();
  auto embed_q = [&](int i, long long e) {
    return embed_into(T->field(), S.q_power(i, e));
  };
  auto idx = [&](const char* stem, int i) {
    return m == 1 ? std::string(stem) : std::string(stem) + std::to_string(i + 1);
  };
  for (int i = 0; i < m; ++i) {
    // x_i t - q_i t x_i
    auto r1 = phi.img_x[i] * phi.img_t -
              (phi.img_t * phi.img_x[i]).scaled(embed_q(i, 1));
    if (!r1.is_zero()) return idx("x", i) + "*t - q*t*" + idx("x", i);
    auto r2 = phi.img_y[i] * phi.img_t -
              (phi.img_t * phi.img_y[i]).scaled(embed_q(i, -1));
    if (!r2.is_zero()) return idx("y", i) + "*t - q^{-1}*t*" + idx("y", i);
    auto r3 = phi.img_x[i] * phi.img_y[i] - eval_poly_at(S.h(i), phi.img_t, T);
    if (!r3.is_zero()) return idx("x", i) + "*" + idx("y", i) + " - h(t)";
    auto r4 = phi.img_y[i] * phi.img_x[i] -
              eval_poly_at(gp_twist(S.h(i), S.q_power(i, -1)), phi.img_t, T);
    if (!r4.is_zero())
      return idx("y", i) + "*" + idx("x", i) + " - h(q^{-1}t)";
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (!(phi.img_x[i] * phi.img_x[j] - phi.img_x[j] * phi.img_x[i]).is_zero())
        return "[" + idx("x", i) + "," + idx("x", j) + "]";
      if (!(phi.img_x[i] * phi.img_y[j] - phi.img_y[j] * phi.img_x[i]).is_zero())
        return "[" + idx("x", i) + "," + idx("y", j) + "]";
      if (!(phi.img_y[i] * phi.img_y[j] - phi.img_y[j] * phi.img_y[i]).is_zero())
        return "[" + idx("y", i) + "," + idx("y", j) + "]";
    }
  }
  return std::nullopt;
}

inline bool check_morphism(GwaMorphism& phi) {
  phi.checked = !gwa_morphism_witness(phi).has_value();
  return phi.checked;
}

inline GwaElement apply_morphism(const GwaMorphism& phi, const GwaElement& e) {
  if (!phi.checked)
    throw spec_error("morphism must pass check_morphism before application");
  GwaElement out(phi.target);
  const int m = phi.source->degree();
  for (const auto& [w, p] : e.terms()) {
    GwaElement img = eval_poly_at(p, phi.img_t, phi.target);
    for (int i = 0; i < m; ++i) {
      const GwaElement& gen = w[i] >= 0 ? phi.img_x[i] : phi.img_y[i];
      for (std::int64_t k = 0; k < std::llabs(w[i]); ++k) img = img * gen;
    }
    out = out + img;
  }
  return out;
}

inline GwaMorphism compose(const GwaMorphism& phi, const GwaMorphism& psi) {
  if (!phi.source->same(*psi.target))
    throw spec_error("composition needs matching algebras");
  GwaMorphism out;
  out.source = psi.source;
  out.target = phi.target;
  out.img_t = apply_morphism(phi, psi.img_t);
  for (int i = 0; i < psi.source->degree(); ++i) {
    out.img_x.push_back(apply_morphism(phi, psi.img_x[i]));
    out.img_y.push_back(apply_morphism(phi, psi.img_y[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The automorphism family of a degree-one quantum GWA.

// g = gcd{ i - j : i < j, c_i c_j != 0 } over the support of h; 0 when h is
// a monomial (by convention the whole unit-root grid is then admissible).
inline std::int64_t support_gcd(const GwaPoly& h) {
  std::vector<std::int64_t> supp;
  for (std::size_t k = 0; k < h.size(); ++k)
    if (!h[k].is_zero()) supp.push_back(static_cast<std::int64_t>(k));
  std::int64_t g = 0;
  for (std::size_t a = 0; a < supp.size(); ++a)
    for (std::size_t b = a + 1; b < supp.size(); ++b)
      g = std::gcd(g, supp[b] - supp[a]);
  return g;
}

// All roots of unity inside Q(zeta_N): +-zeta^j, deduplicated.
inline std::vector<CycScalar> unit_root_grid(const CyclotomicField::Ptr& F) {
  std::set<CycScalar> seen;
  std::vector<CycScalar> out;
  for (unsigned j = 0; j < F->order(); ++j)
    for (int sgn : {1, -1}) {
      CycScalar z = F->zeta(j);
      if (sgn < 0) z = -z;
      if (seen.insert(z).second) out.push_back(z);
    }
  return out;
}

// gamma candidates for eta_{gamma, mu}: the g-th roots of 1 in the grid.
inline std::vector<CycScalar> admissible_gammas(const GwaAlgebra::Ptr& alg) {
  std::int64_t g = support_gcd(alg->h(0));
  std::vector<CycScalar> out;
  for (auto& z : unit_root_grid(alg->field()))
    if (g == 0 || z.pow(g).is_one()) out.push_back(z);
  return out;
}

// eta_{gamma,mu}: x -> mu x, y -> mu^{-1} gamma^{deg h} y, t -> gamma t.
inline GwaMorphism eta_automorphism(const GwaAlgebra::Ptr& alg,
                                    const CycScalar& gamma,
                                    const CycScalar& mu) {
  if (alg->degree() != 1)
    throw spec_error("eta family is defined for degree-one GWAs");
  GwaMorphism phi;
  phi.source = phi.target = alg;
  std::int64_t d = static_cast<std::int64_t>(alg->h(0).size()) - 1;
  GwaPoly gt = {alg->field()->zero(), gamma};
  phi.img_t = GwaElement::term(alg, {0}, gt);
  phi.img_x = {GwaElement::x(alg, 0).scaled(mu)};
  phi.img_y = {GwaElement::y(alg, 0).scaled(mu.inverse() * gamma.pow(d))};
  return phi;
}

// Omega: x -> y, y -> x, t -> -t (an automorphism exactly when q = -1).
inline GwaMorphism omega_automorphism(const GwaAlgebra::Ptr& alg) {
  if (alg->degree() != 1)
    throw spec_error("omega is defined for degree-one GWAs");
  GwaMorphism phi;
  phi.source = phi.target = alg;
  GwaPoly mt = {alg->field()->zero(), alg->field()->from_rational(-1)};
  phi.img_t = GwaElement::term(alg, {0}, mt);
  phi.img_x = {GwaElement::y(alg, 0)};
  phi.img_y = {GwaElement::x(alg, 0)};
  return phi;
}

// ---------------------------------------------------------------------------
// Discriminant invariance: phi(d) = lambda * d for a unit lambda.

struct InvarianceResult {
  bool invariant = false;
  CycScalar unit;  // lambda, valid when invariant
};

inline InvarianceResult discriminant_invariance_check(const GwaMorphism& phi,
                                                      const GwaElement& d) {
  if (!phi.checked)
    throw spec_error("morphism must pass check_morphism first");
  if (!phi.source->same(*phi.target))
    throw spec_error("invariance check needs an endomorphism");
  InvarianceResult out;
  auto img = apply_morphism(phi, d);
  if (d.is_zero()) {
    out.invariant = img.is_zero();
    out.unit = phi.source->field()->one();
    return out;
  }
  if (img.is_zero()) return out;
  // lambda from the first matching coefficient, then exact comparison
  const auto& [w0, p0] = *d.terms().begin();
  auto it = img.terms().find(w0);
  if (it == img.terms().end()) return out;
  int v = gp_t_valuation(p0);
  if (v < 0 || static_cast<std::size_t>(v) >= it->second.size()) return out;
  CycScalar lambda = it->second[v] * p0[v].inverse();
  out.invariant = img == d.scaled(lambda);
  if (out.invariant) out.unit = lambda;
  return out;
}

// ---------------------------------------------------------------------------
// Graded-ansatz enumeration (desk-scale exhaustiveness evidence).

struct GradedAutomorphism {
  bool swap = false;  // x -> alpha y, y -> beta x when true
  CycScalar alpha, beta, gamma;
};

inline std::vector<GradedAutomorphism> enumerate_graded_automorphisms(
    const GwaAlgebra::Ptr& alg) {
  if (alg->degree() != 1)
    throw spec_error("graded enumeration is defined for degree-one GWAs");
  auto grid = unit_root_grid(alg->field());
  std::vector<GradedAutomorphism> out;
  for (bool swap : {false, true})
    for (const auto& alpha : grid)
      for (const auto& beta : grid)
        for (const auto& gamma : grid) {
          GwaMorphism phi;
          phi.source = phi.target = alg;
          GwaPoly gt = {alg->field()->zero(), gamma};
          phi.img_t = GwaElement::term(alg, {0}, gt);
          if (!swap) {
            phi.img_x = {GwaElement::x(alg, 0).scaled(alpha)};
            phi.img_y = {GwaElement::y(alg, 0).scaled(beta)};
          } else {
            phi.img_x = {GwaElement::y(alg, 0).scaled(alpha)};
            phi.img_y = {GwaElement::x(alg, 0).scaled(beta)};
          }
          if (check_morphism(phi)) out.push_back({swap, alpha, beta, gamma});
        }
  return out;
}

// Membership of a graded triple in the family of eta's (plus the omega coset
// when q = -1): direct triples need gamma^g = 1 and alpha*beta = gamma^d;
// swap triples exist only for q^2 = 1 and satisfy the composed-family
// constraint alpha*beta = (-gamma)^d with -gamma in C_g.
inline bool in_published_family(const GwaAlgebra::Ptr& alg,
                                const GradedAutomorphism& g) {
  std::int64_t d = static_cast<std::int64_t>(alg->h(0).size()) - 1;
  std::int64_t gg = support_gcd(alg->h(0));
  auto in_cg = [&](const CycScalar& z) { return gg == 0 || z.pow(gg).is_one(); };
  if (!g.swap) return in_cg(g.gamma) && g.alpha * g.beta == g.gamma.pow(d);
  if (!(alg->q(0) * alg->q(0)).is_one()) return false;
  CycScalar mg = -g.gamma;
  return in_cg(mg) && g.alpha * g.beta == mg.pow(d);
}

// ---------------------------------------------------------------------------
// Isomorphism criterion for degree-one quantum GWAs.

struct IsoSolution {
  bool inverse_branch = false;  // q' = q^{-1} branch
  CycScalar gamma, mu;
};

inline std::vector<IsoSolution> iso_criterion(const GwaAlgebra::Ptr& W,
                                              const GwaAlgebra::Ptr& Wp) {
  if (W->degree() != 1 || Wp->degree() != 1)
    throw spec_error("isomorphism criterion handles degree-one GWAs");
  std::vector<IsoSolution> out;
  unsigned N = std::lcm(W->field()->order(), Wp->field()->order());
  auto F = CyclotomicField::make(N);
  CycScalar q = embed_into(F, W->q(0)), qp = embed_into(F, Wp->q(0));
  GwaPoly h, H;
  for (auto& c : W->h(0)) h.push_back(embed_into(F, c));
  for (auto& c : Wp->h(0)) H.push_back(embed_into(F, c));

  auto solve_branch = [&](bool inverse) {
    // h(gamma t) = mu * H(t) (direct) or mu * H(q^{-1} t) (inverse branch)
    GwaPoly rhs = inverse ? gp_twist(H, q.inverse()) : H;
    if (h.size() != rhs.size()) return;
    for (const auto& gamma : unit_root_grid(F)) {
      GwaPoly lhs = gp_twist(h, gamma);
      // solve lhs = mu * rhs for a single scalar mu
      CycScalar mu = F->zero();
      bool ok = true;
      for (std::size_t k = 0; k < rhs.size() && ok; ++k) {
        bool lz = lhs[k].is_zero(), rz = rhs[k].is_zero();
        if (lz != rz) ok = false;
        else if (!rz) {
          CycScalar cand = lhs[k] * rhs[k].inverse();
          if (mu.is_zero()) mu = cand;
          else ok = mu == cand;
        }
      }
      if (ok && !mu.is_zero()) out.push_back({inverse, gamma, mu});
    }
  };
  if (qp == q) solve_branch(false);
  if (qp == q.inverse()) solve_branch(true);
  return out;
}

// ---------------------------------------------------------------------------
// Derivations: values on generators, Leibniz extension, relation check.

struct GwaDerivation {
  GwaAlgebra::Ptr alg;
  GwaElement val_t;
  std::vector<GwaElement> val_x, val_y;
};

// delta(t^k) = sum_r t^r delta(t) t^{k-1-r}, and likewise along generator
// powers; the Leibniz extension evaluated on a normal-form element.
inline GwaElement apply_derivation(const GwaDerivation& d, const GwaElement& e) {
  const auto alg = d.alg;
  const int m = alg->degree();
  auto t = GwaElement::t_power(alg, 1);
  auto power_rule = [&](const GwaElement& gen, const GwaElement& dgen,
                        std::int64_t k) {
    GwaElement acc(alg);
    for (std::int64_t r = 0; r < k; ++r) {
      GwaElement term = GwaElement::one(alg);
      for (std::int64_t s = 0; s < r; ++s) term = term * gen;
      term = term * dgen;
      for (std::int64_t s = r + 1; s < k; ++s) term = term * gen;
      acc = acc + term;
    }
    return acc;
  };
  GwaElement out(alg);
  for (const auto& [w, p] : e.terms()) {
    // factors: t^k (per coefficient term), then z_1^{w_1}, ..., z_m^{w_m}
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (p[k].is_zero()) continue;
      std::vector<GwaElement> factors, dfactors;
      factors.push_back(GwaElement::t_power(alg, static_cast<int>(k)));
      dfactors.push_back(power_rule(t, d.val_t, static_cast<std::int64_t>(k)));
      for (int i = 0; i < m; ++i) {
        if (w[i] == 0) continue;
        auto gen = w[i] > 0 ? GwaElement::x(alg, i) : GwaElement::y(alg, i);
        auto dv = w[i] > 0 ? d.val_x[i] : d.val_y[i];
        GwaElement pw = GwaElement::one(alg);
        for (std::int64_t s = 0; s < std::llabs(w[i]); ++s) pw = pw * gen;
        factors.push_back(pw);
        dfactors.push_back(power_rule(gen, dv, std::llabs(w[i])));
      }
      GwaElement sum(alg);
      for (std::size_t f = 0; f < factors.size(); ++f) {
        GwaElement term = GwaElement::one(alg);
        for (std::size_t s = 0; s < factors.size(); ++s)
          term = term * (s == f ? dfactors[s] : factors[s]);
        sum = sum + term;
      }
      out = out + sum.scaled(p[k]);
    }
  }
  return out;
}

// Leibniz applied to every defining relation must give zero.
inline std::optional<std::string> derivation_witness(const GwaDerivation& d) {
  const auto alg = d.alg;
  const auto& A = *alg;
  const int m = A.degree();
  auto t = GwaElement::t_power(alg, 1);
  auto idx = [&](const char* stem, int i) {
    return m == 1 ? std::string(stem) : std::string(stem) + std::to_string(i + 1);
  };
  auto leibniz2 = [&](const GwaElement& u, const GwaElement& du,
                      const GwaElement& v, const GwaElement& dv) {
    return du * v + u * dv;
  };
  for (int i = 0; i < m; ++i) {
    auto x = GwaElement::x(alg, i), y = GwaElement::y(alg, i);
    // x t - q t x
    auto r1 = leibniz2(x, d.val_x[i], t, d.val_t) -
              leibniz2(t, d.val_t, x, d.val_x[i]).scaled(A.q_power(i, 1));
    if (!r1.is_zero()) return idx("x", i) + "*t - q*t*" + idx("x", i);
    auto r2 = leibniz2(y, d.val_y[i], t, d.val_t) -
              leibniz2(t, d.val_t, y, d.val_y[i]).scaled(A.q_power(i, -1));
    if (!r2.is_zero()) return idx("y", i) + "*t - q^{-1}*t*" + idx("y", i);
    // x y - h(t): delta(h(t)) via the power rule on t
    GwaElement dh(alg);
    {
      const GwaPoly& h = A.h(i);
      for (std::size_t k = 1; k < h.size(); ++k) {
        if (h[k].is_zero()) continue;
        GwaElement acc(alg);
        for (std::size_t r = 0; r + 1 <= k; ++r) {
          auto term = GwaElement::t_power(alg, static_cast<int>(r)) * d.val_t *
                      GwaElement::t_power(alg, static_cast<int>(k - 1 - r));
          acc = acc + term;
        }
        dh = dh + acc.scaled(h[k]);
      }
    }
    auto r3 = leibniz2(x, d.val_x[i], y, d.val_y[i]) - dh;
    if (!r3.is_zero()) return idx("x", i) + "*" + idx("y", i) + " - h(t)";
    GwaElement dh2(alg);
    {
      GwaPoly h2 = gp_twist(A.h(i), A.q_power(i, -1));
      for (std::size_t k = 1; k < h2.size(); ++k) {
        if (h2[k].is_zero()) continue;
        GwaElement acc(alg);
        for (std::size_t r = 0; r + 1 <= k; ++r)
          acc = acc + GwaElement::t_power(alg, static_cast<int>(r)) * d.val_t *
                          GwaElement::t_power(alg, static_cast<int>(k - 1 - r));
        dh2 = dh2 + acc.scaled(h2[k]);
      }
    }
    auto r4 = leibniz2(y, d.val_y[i], x, d.val_x[i]) - dh2;
    if (!r4.is_zero()) return idx("y", i) + "*" + idx("x", i) + " - h(q^{-1}t)";
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      auto xi = GwaElement::x(alg, i), xj = GwaElement::x(alg, j);
      auto yi = GwaElement::y(alg, i), yj = GwaElement::y(alg, j);
      if (!(leibniz2(xi, d.val_x[i], xj, d.val_x[j]) -
            leibniz2(xj, d.val_x[j], xi, d.val_x[i]))
               .is_zero())
        return "[" + idx("x", i) + "," + idx("x", j) + "]";
      if (!(leibniz2(xi, d.val_x[i], yj, d.val_y[j]) -
            leibniz2(yj, d.val_y[j], xi, d.val_x[i]))
               .is_zero())
        return "[" + idx("x", i) + "," + idx("y", j) + "]";
      if (!(leibniz2(yi, d.val_y[i], yj, d.val_y[j]) -
            leibniz2(yj, d.val_y[j], yi, d.val_y[i]))
               .is_zero())
        return "[" + idx("y", i) + "," + idx("y", j) + "]";
    }
  }
  return std::nullopt;
}

inline bool check_derivation(const GwaDerivation& d) {
  return !derivation_witness(d).has_value();
}

// ---------------------------------------------------------------------------
// Skew polynomial ring morphisms (same contract as the GWA version).

struct SkewMorphism {
  SkewAlgebra::Ptr source, target;
  std::vector<SkewElement> img_x;
  bool checked = false;
};

inline std::optional<std::string> skew_morphism_witness(const SkewMorphism& phi) {
  const auto& S = *phi.source;
  for (int i = 0; i < S.vars(); ++i)
    for (int j = i + 1; j < S.vars(); ++j) {
      // x_j x_i = p_ij x_i x_j
      Exponent ei(S.vars(), 0), ej(S.vars(), 0);
      ei[i] = 1;
      ej[j] = 1;
      auto p = embed_into(phi.target->field(),
                          S.field()->zeta(S.exponents().at(i, j)));
      auto r = phi.img_x[j] * phi.img_x[i] -
               (phi.img_x[i] * phi.img_x[j]).scaled(p);
      if (!r.is_zero())
        return "x" + std::to_string(j + 1) + "*x" + std::to_string(i + 1) +
               " - p*x" + std::to_string(i + 1) + "*x" + std::to_string(j + 1);
    }
  return std::nullopt;
}

inline bool check_morphism(SkewMorphism& phi) {
  phi.checked = !skew_morphism_witness(phi).has_value();
  return phi.checked;
}

inline SkewElement apply_morphism(const SkewMorphism& phi, const SkewElement& e) {
  if (!phi.checked)
    throw spec_error("morphism must pass check_morphism before application");
  SkewElement out(phi.target);
  for (const auto& [a, c] : e.terms()) {
    SkewElement img = SkewElement::one(phi.target)
                          .scaled(embed_into(phi.target->field(), c));
    for (int i = 0; i < phi.source->vars(); ++i)
      for (std::int64_t k = 0; k < a[i]; ++k) img = img * phi.img_x[i];
    out = out + img;
  }
  return out;
}

}  // namespace qdisc
