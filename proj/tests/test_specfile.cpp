#include <catch2/catch_amalgamated.hpp>

#include "qdisc/specfile.hpp"

using namespace qdisc;

TEST_CASE("spec parsing: scalars, arrays, comments", "[specfile]") {
  auto spec = AlgebraSpecFile::parse_text(
      "# comment line\n"
      "kind = gwa\n"
      "name = demo   # trailing comment\n"
      "orders = [2]\n"
      "q_exponents = [1]\n"
      "h_1 = [-1/2, 0, 1]\n");
  REQUIRE(spec.kind() == "gwa");
  REQUIRE(spec.name() == "demo");
  auto h = spec.require("h_1").as_rational_vector();
  REQUIRE(h.size() == 3);
  REQUIRE(h[0] == Rational(-1, 2));

  REQUIRE_THROWS_AS(AlgebraSpecFile::parse_text("kind gwa\n"), spec_error);
  REQUIRE_THROWS_AS(AlgebraSpecFile::parse_text("kind = gwa\nkind = skew\n"),
                    spec_error);
  REQUIRE_THROWS_AS(AlgebraSpecFile::parse_text("name = x\n"), spec_error);
  REQUIRE_THROWS_AS(
      AlgebraSpecFile::parse_text("kind = gwa\norders = [2\n"), spec_error);
}

TEST_CASE("nested arrays parse to matrices", "[specfile]") {
  auto spec = AlgebraSpecFile::parse_text(
      "kind = skew\nn = 2\nroot_order = 2\n"
      "exponents = [[0, 1], [-1, 0]]\n");
  auto A = build_skew(spec);
  REQUIRE(A->vars() == 2);
  REQUIRE(A->rank() == 4);
}

TEST_CASE("builder validation happens at load", "[specfile]") {
  // non-coprime orders rejected
  REQUIRE_THROWS_AS(
      build_gwa(AlgebraSpecFile::parse_text(
          "kind = gwa\norders = [2, 2]\nq_exponents = [1, 1]\n"
          "h_1 = [0, 0, 1]\nh_2 = [0, 0, 1]\n")),
      spec_error);
  // q of the wrong declared order rejected
  REQUIRE_THROWS_AS(
      build_gwa(AlgebraSpecFile::parse_text(
          "kind = gwa\norders = [4]\nq_exponents = [2]\nh_1 = [0, 1]\n")),
      spec_error);
  // ragged exponent matrix rejected
  REQUIRE_THROWS_AS(
      build_skew(AlgebraSpecFile::parse_text(
          "kind = skew\nn = 2\nroot_order = 2\nexponents = [[0, 1], [-1]]\n")),
      spec_error);
  // commring with two free variables rejected
  REQUIRE_THROWS_AS(
      build_commring(AlgebraSpecFile::parse_text(
          "kind = commring\nvars = [a, b, c, d]\npairs = [[a, b]]\n"
          "p_1 = [0, 0, 1]\n")),
      spec_error);
}

TEST_CASE("element term lists", "[specfile]") {
  auto gspec = AlgebraSpecFile::parse_text(
      "kind = gwa\norders = [2]\nq_exponents = [1]\nh_1 = [-1, 0, 1]\n");
  auto A = build_gwa(gspec);
  SpecValue v;
  {
    auto s = AlgebraSpecFile::parse_text(
        "kind = morphism\nimg = [[2, 1, 1, 1, 1]]\n");
    // (2/1) * zeta * t * x
    auto e = parse_gwa_element(A, s.require("img"));
    GwaPoly p = {A->field()->zero(),
                 A->field()->from_rational(-2)};  // 2*zeta_2 = -2, degree 1
    REQUIRE(e == GwaElement::term(A, {1}, p));
  }
  REQUIRE_THROWS_AS(
      parse_gwa_element(A, AlgebraSpecFile::parse_text(
                               "kind = morphism\nimg = [[1, 0, 0, 0, 0]]\n")
                               .require("img")),
      spec_error);
}

TEST_CASE("commring fixture spec round-trips the A2 data", "[specfile]") {
  auto spec = AlgebraSpecFile::parse_text(
      "kind = commring\nname = a2\nvars = [a, b, c]\npairs = [[a, b]]\n"
      "p_1 = [0, 0, 0, 1]\nideal = [[1, 0, 0], [0, 0, 1]]\n"
      "matrix_order = true\ntabulated = true\n");
  auto cr = build_commring(spec);
  REQUIRE(cr.ring->vars() == 3);
  REQUIRE(cr.ring->dimension() == 2);
  REQUIRE(cr.ideal.gens.size() == 2);
  REQUIRE(cr.matrix_order);
  REQUIRE(cr.tabulated);
  // the rule is a*b -> c^3
  auto ab = RingElement::monomial(cr.ring, {1, 1, 0}, cr.ring->field()->one());
  REQUIRE(ab == RingElement::monomial(cr.ring, {0, 0, 3},
                                      cr.ring->field()->one()));
}
