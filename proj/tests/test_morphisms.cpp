#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qdisc/morphisms.hpp"

using namespace qdisc;

namespace {

GwaAlgebra::Ptr gwa_n2() { return GwaAlgebra::make({2}, {1}, {{-1, 0, 1}}); }
GwaAlgebra::Ptr gwa_n3_weyl() { return GwaAlgebra::make({3}, {1}, {{-1, 1}}); }

GwaMorphism identity_morphism(const GwaAlgebra::Ptr& A) {
  GwaMorphism phi;
  phi.source = phi.target = A;
  phi.img_t = GwaElement::t_power(A, 1);
  for (int i = 0; i < A->degree(); ++i) {
    phi.img_x.push_back(GwaElement::x(A, i));
    phi.img_y.push_back(GwaElement::y(A, i));
  }
  return phi;
}

std::vector<CycScalar> mu_sample(const CyclotomicField::Ptr& F) {
  // twelve units: the root grid padded with a few rationals
  std::vector<CycScalar> out = unit_root_grid(F);
  for (int v : {2, 3, 5}) out.push_back(F->from_rational(v));
  for (int v : {2, 3, 5}) out.push_back(F->from_rational(Rational(1, v)));
  out.resize(std::min<std::size_t>(out.size(), 12));
  return out;
}

}  // namespace

TEST_CASE("eta family passes the relation check", "[morphisms]") {
  auto A = gwa_n2();
  // h = t^2 - 1: g = 2, C_g = {1, -1}
  auto gammas = admissible_gammas(A);
  REQUIRE(gammas.size() == 2);
  for (const auto& gamma : gammas)
    for (const auto& mu : mu_sample(A->field())) {
      auto phi = eta_automorphism(A, gamma, mu);
      REQUIRE(check_morphism(phi));
    }
  // gamma outside C_g fails: for h = t^2 - 1 nothing outside {1,-1} exists
  // in Q(zeta_2); check instead on the n = 3 fixture where C_1 = {1}
  auto W = gwa_n3_weyl();
  REQUIRE(support_gcd(W->h(0)) == 1);
  auto bad = eta_automorphism(W, W->q_power(0, 1), W->field()->one());
  REQUIRE_FALSE(check_morphism(bad));
  REQUIRE(gwa_morphism_witness(bad).has_value());
}

TEST_CASE("omega passes exactly when q = -1", "[morphisms]") {
  auto A = gwa_n2();
  auto omega = omega_automorphism(A);
  REQUIRE(check_morphism(omega));

  auto W = gwa_n3_weyl();
  auto bad = omega_automorphism(W);
  REQUIRE_FALSE(check_morphism(bad));
  auto witness = gwa_morphism_witness(bad);
  REQUIRE(witness.has_value());
  REQUIRE(*witness == "x*t - q*t*x");

  auto id = identity_morphism(A);
  REQUIRE(check_morphism(id));
}

TEST_CASE("applying morphisms", "[morphisms]") {
  auto A = gwa_n2();
  auto F = A->field();
  auto t4 = GwaElement::t_power(A, 4);
  for (const auto& gamma : admissible_gammas(A)) {
    auto phi = eta_automorphism(A, gamma, F->from_rational(3));
    REQUIRE(check_morphism(phi));
    REQUIRE(apply_morphism(phi, t4) == t4.scaled(gamma.pow(4)));
  }
  auto omega = omega_automorphism(A);
  REQUIRE(check_morphism(omega));
  REQUIRE(apply_morphism(omega, t4) == t4);  // (-t)^4
  auto id = identity_morphism(A);
  REQUIRE(check_morphism(id));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> wv(-2, 2), tv(0, 3), cv(-3, 3);
  for (int iter = 0; iter < 20; ++iter) {
    GwaElement f(A);
    for (int k = 0; k < 3; ++k) {
      Exponent w = {wv(rng)};
      GwaPoly p(tv(rng) + 1, F->zero());
      p.back() = F->from_rational(cv(rng));
      f = f + GwaElement::term(A, w, p);
    }
    REQUIRE(apply_morphism(id, f) == f);
  }

  // unchecked morphisms are rejected
  auto fresh = eta_automorphism(A, F->one(), F->one());
  REQUIRE_THROWS_AS(apply_morphism(fresh, t4), spec_error);
}

TEST_CASE("discriminant invariance across the automorphism family",
          "[morphisms]") {
  auto A = gwa_n2();
  auto F = A->field();
  auto Z = gwa_center_presentation(A);
  auto disc = gwa_reflexive_discriminant(A, Z);
  auto d = GwaElement::t_power(A, static_cast<int>(disc.t_exp));

  for (const auto& gamma : admissible_gammas(A))
    for (const auto& mu : mu_sample(F)) {
      auto phi = eta_automorphism(A, gamma, mu);
      REQUIRE(check_morphism(phi));
      auto inv = discriminant_invariance_check(phi, d);
      REQUIRE(inv.invariant);
      REQUIRE(inv.unit == gamma.pow(4));
    }
  auto omega = omega_automorphism(A);
  REQUIRE(check_morphism(omega));
  auto inv = discriminant_invariance_check(omega, d);
  REQUIRE(inv.invariant);
  REQUIRE(inv.unit.is_one());

  // the deliberately corrupted assignment t -> t + 1 already fails the
  // relation check (negative path)
  GwaMorphism broken = identity_morphism(A);
  GwaPoly tp1 = {F->one(), F->one()};
  broken.img_t = GwaElement::term(A, {0}, tp1);
  REQUIRE_FALSE(check_morphism(broken));
  REQUIRE_THROWS_AS(discriminant_invariance_check(broken, d), spec_error);
}

TEST_CASE("composition of checked morphisms passes", "[morphisms]") {
  auto A = gwa_n2();
  auto F = A->field();
  auto gammas = admissible_gammas(A);
  for (const auto& g1 : gammas)
    for (const auto& g2 : gammas) {
      auto phi = eta_automorphism(A, g1, F->from_rational(2));
      auto psi = eta_automorphism(A, g2, F->from_rational(Rational(1, 3)));
      REQUIRE(check_morphism(phi));
      REQUIRE(check_morphism(psi));
      auto comp = compose(phi, psi);
      REQUIRE(check_morphism(comp));
    }
  auto omega = omega_automorphism(A);
  auto phi = eta_automorphism(A, F->from_rational(-1), F->from_rational(2));
  REQUIRE(check_morphism(omega));
  REQUIRE(check_morphism(phi));
  auto comp = compose(phi, omega);
  REQUIRE(check_morphism(comp));
}

TEST_CASE("graded-ansatz exhaustiveness", "[morphisms]") {
  // q^2 != 1 fixture: everything found lies in the eta family, no swaps
  auto W = gwa_n3_weyl();
  auto found = enumerate_graded_automorphisms(W);
  REQUIRE_FALSE(found.empty());
  for (const auto& g : found) {
    REQUIRE_FALSE(g.swap);
    REQUIRE(in_published_family(W, g));
  }
  // and the family conditions characterize the passing set exactly:
  // gamma = 1 (C_1 = {1}), alpha*beta = gamma^d = 1
  for (const auto& g : found) {
    REQUIRE(g.gamma.is_one());
    REQUIRE((g.alpha * g.beta).is_one());
  }

  // q = -1 fixture: the swap coset appears and matches the omega composites
  auto A = gwa_n2();
  auto found2 = enumerate_graded_automorphisms(A);
  bool any_swap = false;
  for (const auto& g : found2) {
    any_swap = any_swap || g.swap;
    REQUIRE(in_published_family(A, g));
  }
  REQUIRE(any_swap);
}

TEST_CASE("isomorphism criterion", "[morphisms]") {
  auto W1 = gwa_n2();                                  // h = t^2 - 1
  auto W2 = GwaAlgebra::make({2}, {1}, {{-1, 0, 1}});  // same
  auto sols = iso_criterion(W1, W2);
  // q' = q = q^{-1} = -1: both branches return (1,1) and (-1,1)
  bool has_plus = false, has_minus = false;
  for (const auto& s : sols) {
    REQUIRE(s.mu.is_one());
    if (s.gamma.is_one()) has_plus = true;
    if ((-s.gamma).is_one()) has_minus = true;
  }
  REQUIRE(has_plus);
  REQUIRE(has_minus);

  // constant-term mismatch: h = t^2 - 1 vs H = T^2 - 2 has no solution
  auto W3 = GwaAlgebra::make({2}, {1}, {{-2, 0, 1}});
  REQUIRE(iso_criterion(W1, W3).empty());

  // q' not in {q, q^{-1}}: empty
  auto W4 = gwa_n3_weyl();
  REQUIRE(iso_criterion(W1, W4).empty());

  // symmetry on fixture pairs
  std::vector<std::pair<GwaAlgebra::Ptr, GwaAlgebra::Ptr>> pairs = {
      {W1, W2}, {W1, W3}, {W1, W4}, {W4, W4}};
  for (auto& [L, R] : pairs)
    REQUIRE(iso_criterion(L, R).empty() == iso_criterion(R, L).empty());
}

TEST_CASE("derivations: relation consistency and evaluation", "[morphisms]") {
  auto A = gwa_n2();
  auto F = A->field();
  // zero derivation
  GwaDerivation zero{A, GwaElement(A), {GwaElement(A)}, {GwaElement(A)}};
  REQUIRE(check_derivation(zero));
  REQUIRE(apply_derivation(zero, GwaElement::t_power(A, 3)).is_zero());

  // Euler-style: delta(x) = x, delta(y) = -y, delta(t) = 0
  GwaDerivation euler{A, GwaElement(A),
                      {GwaElement::x(A, 0)},
                      {GwaElement::y(A, 0).scaled(F->from_rational(-1))}};
  REQUIRE(check_derivation(euler));
  // delta(x^2) = 2 x^2, delta(x y) = 0
  REQUIRE(apply_derivation(euler, GwaElement::x(A, 0, 2)) ==
          GwaElement::x(A, 0, 2).scaled(F->from_rational(2)));
  auto xy = GwaElement::x(A, 0) * GwaElement::y(A, 0);
  REQUIRE(apply_derivation(euler, xy).is_zero());

  // delta(t) = 1, rest zero: fails with the x-t relation as witness
  GwaDerivation bad{A, GwaElement::one(A), {GwaElement(A)}, {GwaElement(A)}};
  REQUIRE_FALSE(check_derivation(bad));
  auto w = derivation_witness(bad);
  REQUIRE(w.has_value());
  REQUIRE(*w == "x*t - q*t*x");
}

TEST_CASE("skew morphisms", "[morphisms]") {
  auto A = SkewAlgebra::make(2, 2, IntMatrix::from_rows({{0, 1}, {-1, 0}}));
  SkewMorphism id;
  id.source = id.target = A;
  Exponent e1 = {1, 0}, e2 = {0, 1};
  id.img_x = {SkewElement::monomial(A, e1, A->field()->one()),
              SkewElement::monomial(A, e2, A->field()->one())};
  REQUIRE(check_morphism(id));
  auto f = SkewElement::monomial(A, {2, 1}, A->field()->from_rational(3));
  REQUIRE(apply_morphism(id, f) == f);

  // swapping x1, x2 in the quantum plane at q = -1: x2 x1 = -x1 x2 maps to
  // x1 x2 = -x2 x1, which holds, so the swap is an automorphism
  SkewMorphism swap;
  swap.source = swap.target = A;
  swap.img_x = {SkewElement::monomial(A, e2, A->field()->one()),
                SkewElement::monomial(A, e1, A->field()->one())};
  REQUIRE(check_morphism(swap));

  // scaling x1 -> 2 x1 is consistent; x1 -> x1 + 1 is not
  SkewMorphism bad;
  bad.source = bad.target = A;
  auto one = SkewElement::one(A);
  bad.img_x = {SkewElement::monomial(A, e1, A->field()->one()) + one,
               SkewElement::monomial(A, e2, A->field()->one())};
  REQUIRE_FALSE(check_morphism(bad));
  REQUIRE(skew_morphism_witness(bad).has_value());
}
