#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qdisc/skew.hpp"

using namespace qdisc;

namespace {

SkewAlgebra::Ptr algebra_n3(std::int64_t e12, std::int64_t e13, std::int64_t e23,
                            unsigned N) {
  return SkewAlgebra::make(3, N,
                           IntMatrix::from_rows({{0, e12, e13},
                                                 {-e12, 0, e23},
                                                 {-e13, -e23, 0}}));
}

// Three-variable fixtures: (p12, p13, p23) over N = 2.
SkewAlgebra::Ptr skew3_a() { return algebra_n3(1, 0, 0, 2); }  // (-1, 1, 1)
SkewAlgebra::Ptr skew3_b() { return algebra_n3(1, 1, 0, 2); }  // (-1, -1, 1)
SkewAlgebra::Ptr skew3_c() { return algebra_n3(1, 1, 1, 2); }  // (-1, -1, -1)

SkewAlgebra::Ptr quantum_plane_minus1() {
  return SkewAlgebra::make(2, 2, IntMatrix::from_rows({{0, 1}, {-1, 0}}));
}

SkewElement gen(const SkewAlgebra::Ptr& A, int i) {
  Exponent e(A->vars(), 0);
  e[i] = 1;
  return SkewElement::monomial(A, e, A->field()->one());
}

// Independent multiplication oracle: write both monomials as letter words,
// concatenate, and bubble-sort into normal order, picking up p_ji for every
// adjacent swap of x_i past x_j with i > j.
SkewElement slow_monomial_product(const SkewAlgebra::Ptr& A, const Exponent& a,
                                  const Exponent& b) {
  std::vector<int> word;
  for (int i = 0; i < A->vars(); ++i)
    for (std::int64_t k = 0; k < a[i]; ++k) word.push_back(i);
  for (int i = 0; i < A->vars(); ++i)
    for (std::int64_t k = 0; k < b[i]; ++k) word.push_back(i);
  std::int64_t zexp = 0;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t p = 0; p + 1 < word.size(); ++p) {
      if (word[p] > word[p + 1]) {
        // x_i x_j -> p_ji x_j x_i for i > j
        zexp += A->exponents().at(word[p + 1], word[p]);
        std::swap(word[p], word[p + 1]);
        moved = true;
      }
    }
  }
  Exponent sum(A->vars(), 0);
  for (int v : word) ++sum[v];
  return SkewElement::monomial(A, sum, A->field()->zeta(zexp));
}

Exponent rand_exp(int n, std::mt19937_64& rng, int hi) {
  std::uniform_int_distribution<int> d(0, hi);
  Exponent e(n);
  for (auto& x : e) x = d(rng);
  return e;
}

SkewElement rand_elem(const SkewAlgebra::Ptr& A, std::mt19937_64& rng,
                      int nterms = 3, int hi = 3) {
  std::uniform_int_distribution<int> coef(-3, 3);
  SkewElement f(A);
  for (int t = 0; t < nterms; ++t) {
    auto c = A->field()->from_rational(coef(rng));
    f = f + SkewElement::monomial(A, rand_exp(A->vars(), rng, hi), c);
  }
  return f;
}

}  // namespace

TEST_CASE("defining relation and identities", "[skew]") {
  auto A = skew3_b();
  auto x1 = gen(A, 0), x2 = gen(A, 1), x3 = gen(A, 2);
  // x2 x1 = p12 x1 x2 with p12 = -1
  REQUIRE(x2 * x1 == (x1 * x2).scaled(A->field()->from_rational(-1)));
  // x3 x2 = x2 x3 (p23 = 1)
  REQUIRE(x3 * x2 == x2 * x3);
  auto one = SkewElement::one(A);
  auto f = x1 * x2 + x3.scaled(A->field()->from_rational(Rational(1, 2)));
  REQUIRE(f * one == f);
  REQUIRE(one * f == f);
}

TEST_CASE("multiplication agrees with the word-reordering oracle",
          "[skew][property]") {
  std::mt19937_64 rng(424242);
  std::vector<SkewAlgebra::Ptr> fixtures = {skew3_a(), skew3_b(), skew3_c(),
                                            quantum_plane_minus1(),
                                            algebra_n3(1, 2, 3, 4)};
  for (auto& A : fixtures) {
    for (int iter = 0; iter < 50; ++iter) {
      auto a = rand_exp(A->vars(), rng, 4), b = rand_exp(A->vars(), rng, 4);
      auto fast = SkewElement::monomial(A, a, A->field()->one()) *
                  SkewElement::monomial(A, b, A->field()->one());
      REQUIRE(fast == slow_monomial_product(A, a, b));
    }
  }
}

TEST_CASE("associativity and grading on random triples", "[skew][property]") {
  std::mt19937_64 rng(31337);
  std::vector<SkewAlgebra::Ptr> fixtures = {skew3_b(), skew3_c(),
                                            algebra_n3(1, 2, 3, 4)};
  for (auto& A : fixtures) {
    for (int iter = 0; iter < 70; ++iter) {
      auto f = rand_elem(A, rng), g = rand_elem(A, rng), h = rand_elem(A, rng);
      REQUIRE((f * g) * h == f * (g * h));
    }
    // product of homogeneous elements is homogeneous of summed degree
    for (int iter = 0; iter < 30; ++iter) {
      auto a = rand_exp(A->vars(), rng, 4), b = rand_exp(A->vars(), rng, 4);
      auto f = SkewElement::monomial(A, a, A->field()->from_rational(2));
      auto g = SkewElement::monomial(A, b, A->field()->from_rational(-3));
      Exponent deg;
      REQUIRE((f * g).homogeneous_degree(deg));
      for (int i = 0; i < A->vars(); ++i) REQUIRE(deg[i] == a[i] + b[i]);
    }
  }
}

TEST_CASE("centrality: lattice criterion matches the direct check", "[skew]") {
  auto A = skew3_b();
  auto x1 = gen(A, 0);
  REQUIRE((x1 * x1).is_central());           // u = x1^2
  REQUIRE_FALSE(x1.is_central());
  REQUIRE(SkewElement::one(A).is_central());
  // z = x2 x3 is central in this fixture
  REQUIRE((gen(A, 1) * gen(A, 2)).is_central());

  std::mt19937_64 rng(5);
  std::vector<SkewAlgebra::Ptr> fixtures = {skew3_a(), skew3_b(), skew3_c()};
  for (auto& B : fixtures)
    for (int iter = 0; iter < 40; ++iter) {
      auto f = rand_elem(B, rng, 2, 3);
      REQUIRE(f.is_central() == f.commutes_with_generators());
    }
}

TEST_CASE("z = x1 x2 x3 squared is central in the all-minus fixture", "[skew]") {
  auto A = skew3_c();
  auto z = gen(A, 0) * gen(A, 1) * gen(A, 2);
  auto z2 = z * z;
  REQUIRE(z2.is_central());
  REQUIRE(z.is_central());  // z itself generates the center in degree 3
  REQUIRE(z2.is_monomial());
  Exponent expect = {2, 2, 2};
  REQUIRE(z2.terms().begin()->first == expect);
}

TEST_CASE("trace rule and trace properties", "[skew]") {
  auto A = skew3_b();
  REQUIRE(A->rank() == 4);
  auto x1 = gen(A, 0);
  auto u = x1 * x1;
  REQUIRE(u.trace() == u.scaled(A->field()->from_rational(4)));
  REQUIRE(x1.trace().is_zero());
  REQUIRE(SkewElement::one(A).trace() ==
          SkewElement::one(A).scaled(A->field()->from_rational(4)));

  std::mt19937_64 rng(8);
  std::vector<SkewAlgebra::Ptr> fixtures = {skew3_a(), skew3_b(), skew3_c(),
                                            quantum_plane_minus1()};
  for (auto& B : fixtures)
    for (int iter = 0; iter < 50; ++iter) {
      auto f = rand_elem(B, rng), g = rand_elem(B, rng);
      REQUIRE((f * g).trace() == (g * f).trace());
      // Z-linearity over a random central monomial
      Exponent ce = rand_exp(B->vars(), rng, 4);
      for (int i = 0; i < B->vars(); ++i)
        ce[i] *= B->chart_period(i);
      auto z = SkewElement::monomial(B, ce, B->field()->from_rational(2));
      REQUIRE(z.is_central());
      REQUIRE((z * f).trace() == z * f.trace());
    }
}

TEST_CASE("slow chart trace agrees with the r^2 rule", "[skew]") {
  std::mt19937_64 rng(99);
  std::vector<SkewAlgebra::Ptr> fixtures = {skew3_a(), skew3_b(), skew3_c(),
                                            quantum_plane_minus1()};
  for (auto& A : fixtures)
    for (int chart = 0; chart < A->vars(); ++chart)
      for (int iter = 0; iter < 10; ++iter) {
        auto f = rand_elem(A, rng, 3, 3);
        auto slow = sp_slow_trace_on_chart(f, chart);
        auto tr = f.trace();
        LocalizedCentral fast;
        for (auto& [e, c] : tr.terms()) fast[e] = c;
        REQUIRE(slow == fast);
      }
}

TEST_CASE("chart-local discriminants of the three-variable fixtures", "[skew]") {
  // (2): over the chart keeping x1, the local discriminant is x1^4 (times a
  // chart unit); the other charts contribute exponent 0.
  auto A2 = skew3_b();
  auto ev0 = sp_chart_local_discriminant(A2, 0);
  REQUIRE(ev0.portable_exp == 4);
  REQUIRE(sp_chart_local_discriminant(A2, 1).portable_exp == 0);
  REQUIRE(sp_chart_local_discriminant(A2, 2).portable_exp == 0);
  REQUIRE_FALSE(ev0.unit_scalar.is_zero());

  // (3): every chart sees a unit
  auto A3 = skew3_c();
  for (int i = 0; i < 3; ++i)
    REQUIRE(sp_chart_local_discriminant(A3, i).portable_exp == 0);

  // commutative case: A = Z, discriminant 1
  auto C = SkewAlgebra::make(3, 1, IntMatrix(3, 3));
  for (int i = 0; i < 3; ++i)
    REQUIRE(sp_chart_local_discriminant(C, i).portable_exp == 0);
}

TEST_CASE("glued reflexive discriminants of the three-variable fixtures", "[skew]") {
  REQUIRE(sp_reflexive_discriminant(skew3_a()).exponents == Exponent{4, 4, 0});
  REQUIRE(sp_reflexive_discriminant(skew3_b()).exponents == Exponent{4, 0, 0});
  REQUIRE(sp_reflexive_discriminant(skew3_c()).exponents == Exponent{0, 0, 0});
}

TEST_CASE("monomial hull and staircase evidence", "[skew]") {
  auto h1 = sp_monomial_hull({{4, 4}});
  REQUIRE(h1.exponents == Exponent{4, 4});
  REQUIRE(h1.quotient_dim == -1);
  REQUIRE(h1.pcc_holds);

  std::vector<Exponent> md262;
  for (int i = 0; i <= 4; ++i)
    md262.push_back({4, static_cast<std::int64_t>(i), static_cast<std::int64_t>(4 - i)});
  auto h2 = sp_monomial_hull(md262);
  REQUIRE(h2.exponents == Exponent{4, 0, 0});
  REQUIRE(h2.quotient_dim <= 1);
  REQUIRE(h2.pcc_holds);

  auto h3 = sp_monomial_hull({{1, 0}, {0, 1}});
  REQUIRE(h3.exponents == Exponent{0, 0});
  REQUIRE(h3.quotient_dim == 0);
  REQUIRE(h3.pcc_holds);

  REQUIRE_THROWS_AS(sp_monomial_hull({}), spec_error);
}

TEST_CASE("exhaustive MD oracle: quantum plane at q = -1", "[skew][oracle]") {
  // Pins the discriminant exponent before anything else depends on it.  The
  // trace pairing on the basis {1, x1, x2, x1x2} is diagonal with entries
  // 4, 4u, 4v, -4uv, so the hull over all minors is u^2 v^2 = (x1 x2)^4 --
  // consistent with (uv)^2 in the three-variable fixture and with t^4 in the
  // GWA picture (t = x1 x2).
  auto A = quantum_plane_minus1();
  REQUIRE(A->rank() == 4);
  auto md = sp_md_exhaustive(A, A->box_generating_set(), 4);
  REQUIRE_FALSE(md.gens.empty());
  auto hull = sp_monomial_hull(md.gens);
  REQUIRE(hull.exponents == Exponent{4, 4});
  // chart-glued result agrees with the exhaustive hull
  REQUIRE(sp_reflexive_discriminant(A).exponents == hull.exponents);

  // v = 1 over {1}: the ideal (r^2), i.e. the unit ideal up to normalization
  auto unit = sp_md_exhaustive(A, {Exponent{0, 0}}, 1);
  REQUIRE(unit.gens == std::vector<Exponent>{{0, 0}});

  // v larger than the generating set: vacuous, zero ideal
  REQUIRE(sp_md_exhaustive(A, {Exponent{0, 0}}, 3).gens.empty());
}

TEST_CASE("exhaustive MD of the (-1,-1,1) fixture matches the published generators",
          "[skew][oracle]") {
  auto A = skew3_b();
  auto md = sp_md_exhaustive(A, A->box_generating_set(), 4);
  auto hull = sp_monomial_hull(md.gens);
  REQUIRE(hull.exponents == Exponent{4, 0, 0});
  REQUIRE(hull.pcc_holds);
  // the five generators x1^4 x2^i x3^{4-i} all appear
  for (int i = 0; i <= 4; ++i) {
    Exponent g = {4, i, 4 - i};
    REQUIRE(std::find(md.gens.begin(), md.gens.end(), g) != md.gens.end());
  }
  // and everything the enumeration finds is a multiple of one of them
  for (const auto& g : md.gens) {
    bool dominated = false;
    for (int i = 0; i <= 4 && !dominated; ++i)
      dominated = g[0] >= 4 && g[1] >= i && g[2] >= 4 - i;
    REQUIRE(dominated);
  }
  // glued discriminant divides every exhaustive generator, and the two
  // agree after localization (chart-unit classes match on each chart)
  auto disc = sp_reflexive_discriminant(A);
  for (const auto& g : md.gens)
    for (int i = 0; i < 3; ++i) REQUIRE(g[i] >= disc.exponents[i]);
  for (int chart = 0; chart < 3; ++chart) {
    std::int64_t min_chart_exp = md.gens[0][chart];
    for (const auto& g : md.gens)
      min_chart_exp = std::min(min_chart_exp, g[chart]);
    REQUIRE(min_chart_exp == disc.charts[chart].portable_exp);
  }
}

TEST_CASE("glued discriminant vs exhaustive MD across the fixture class",
          "[skew][oracle]") {
  // n <= 3, N <= 4: the glued discriminant divides every exhaustive minor,
  // and on each chart the two ideals agree up to chart units (the minimal
  // chart exponent of the MD generators equals the portable exponent).
  struct Fixture {
    SkewAlgebra::Ptr A;
    std::vector<Exponent> gens;
  };
  std::vector<Fixture> fixtures;
  for (int v = 1; v <= 3; ++v) {
    auto A = skew3_a();
    switch (v) {
      case 1: A = skew3_a(); break;
      case 2: A = skew3_b(); break;
      case 3: A = skew3_c(); break;
    }
    fixtures.push_back({A, A->box_generating_set()});
  }
  {  // n = 2, N = 3: free of rank 9; basis plus two redundant monomials
    auto A = SkewAlgebra::make(2, 3, IntMatrix::from_rows({{0, 1}, {-1, 0}}));
    auto g = A->box_generating_set();
    g.push_back({3, 1});
    g.push_back({1, 3});
    fixtures.push_back({A, g});
  }
  {  // n = 2, N = 4, primitive parameter: rank 16
    auto A = SkewAlgebra::make(2, 4, IntMatrix::from_rows({{0, 1}, {-1, 0}}));
    auto g = A->box_generating_set();
    g.push_back({5, 1});
    g.push_back({1, 5});
    fixtures.push_back({A, g});
  }
  {  // n = 2, N = 4, parameter of order 2: rank 4
    auto A = SkewAlgebra::make(2, 4, IntMatrix::from_rows({{0, 2}, {-2, 0}}));
    std::vector<Exponent> g = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {3, 1}, {2, 3}};
    fixtures.push_back({A, g});
  }
  for (auto& [A, gens] : fixtures) {
    auto md = sp_md_exhaustive(A, gens, static_cast<int>(A->rank()));
    REQUIRE_FALSE(md.gens.empty());
    auto disc = sp_reflexive_discriminant(A);
    for (const auto& g : md.gens)
      for (int i = 0; i < A->vars(); ++i) REQUIRE(g[i] >= disc.exponents[i]);
    for (int chart = 0; chart < A->vars(); ++chart) {
      std::int64_t min_exp = md.gens[0][chart];
      for (const auto& g : md.gens) min_exp = std::min(min_exp, g[chart]);
      REQUIRE(min_exp == disc.charts[chart].portable_exp);
    }
  }
}

TEST_CASE("exhaustive guard refuses oversized enumerations", "[skew]") {
  auto A = skew3_b();
  std::vector<Exponent> big;
  Exponent v(3, 0);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) big.push_back({a, b, c});
  REQUIRE_THROWS_AS(sp_md_exhaustive(A, big, 4), refusal_error);
}

TEST_CASE("mismatched algebras are rejected", "[skew]") {
  auto A = skew3_a();
  auto B = skew3_b();
  REQUIRE_THROWS_AS(gen(A, 0) * gen(B, 0), spec_error);
}
