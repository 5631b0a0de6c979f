#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qdisc/cyclotomic.hpp"

using namespace qdisc;

namespace {

// Independent oracle: prod over d|N of Phi_d must equal x^N - 1.
detail::Poly poly_xn_minus_1(unsigned n) {
  detail::Poly f(n + 1, Rational(0));
  f[0] = -1;
  f[n] = 1;
  return f;
}

CycScalar random_scalar(const CyclotomicField::Ptr& F, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<Rational> c(F->degree());
  for (auto& x : c) x = Rational(num(rng), den(rng));
  return CycScalar(F, std::move(c));
}

}  // namespace

TEST_CASE("cyclotomic polynomials multiply to x^N - 1", "[cyclotomic]") {
  for (unsigned n : {1u, 2u, 3u, 4u, 6u, 8u, 12u, 15u, 24u}) {
    detail::Poly prod = {Rational(1)};
    for (unsigned d = 1; d <= n; ++d)
      if (n % d == 0)
        prod = detail::poly_mul(prod, CyclotomicField::make(d)->modulus());
    REQUIRE(prod == poly_xn_minus_1(n));
  }
}

TEST_CASE("embed_root basic identities", "[cyclotomic]") {
  REQUIRE(embed_root(0, 4).is_one());
  auto m1 = embed_root(2, 4);
  REQUIRE(m1.is_rational());
  REQUIRE(m1.rational_part() == -1);
  // forced by Phi_3: zeta + zeta^2 = -1
  auto F3 = CyclotomicField::make(3);
  auto s = F3->zeta(1) + F3->zeta(2);
  REQUIRE(s == F3->from_rational(-1));
}

TEST_CASE("embed_root is multiplicative", "[cyclotomic]") {
  for (unsigned N = 1; N <= 12; ++N) {
    auto F = CyclotomicField::make(N);
    for (unsigned k = 0; k < N; ++k)
      for (unsigned l = 0; l < N; ++l)
        REQUIRE(F->zeta(k) * F->zeta(l) == F->zeta(k + l));
  }
}

TEST_CASE("field operations", "[cyclotomic]") {
  auto F6 = CyclotomicField::make(6);
  REQUIRE(F6->zeta(1).pow(6).is_one());
  REQUIRE(F6->zeta(1).inverse() == F6->zeta(5));
  auto m1 = F6->from_rational(-1);
  REQUIRE((m1 * m1).is_one());
  REQUIRE_THROWS_AS(F6->zero().inverse(), spec_error);

  // zeta_N^{-1} = zeta_N^{N-1}
  for (unsigned N : {2u, 3u, 5u, 8u, 12u}) {
    auto F = CyclotomicField::make(N);
    REQUIRE(F->zeta(1).inverse() == F->zeta(static_cast<long long>(N) - 1));
  }
}

TEST_CASE("multiplicative order", "[cyclotomic]") {
  auto F6 = CyclotomicField::make(6);
  REQUIRE(multiplicative_order(F6->from_rational(-1)) == 2u);
  REQUIRE(multiplicative_order(F6->zeta(2)) == 3u);
  REQUIRE(multiplicative_order(F6->from_rational(2)) == std::nullopt);
  REQUIRE(multiplicative_order(F6->zeta(1)) == 6u);
  REQUIRE_THROWS_AS(multiplicative_order(F6->zero()), spec_error);
  // odd order: -zeta_3 has order 6 inside Q(zeta_3)
  auto F3 = CyclotomicField::make(3);
  REQUIRE(multiplicative_order(-F3->zeta(1)) == 6u);
}

TEST_CASE("field axioms on random samples", "[cyclotomic][property]") {
  std::mt19937_64 rng(20260811);
  for (unsigned N : {3u, 4u, 5u, 7u, 8u, 12u}) {
    auto F = CyclotomicField::make(N);
    for (int iter = 0; iter < 40; ++iter) {
      auto a = random_scalar(F, rng);
      auto b = random_scalar(F, rng);
      auto c = random_scalar(F, rng);
      REQUIRE((a * b) * c == a * (b * c));
      REQUIRE(a * (b + c) == a * b + a * c);
      REQUIRE((a + b) * c == a * c + b * c);
      if (!a.is_zero()) REQUIRE((a * a.inverse()).is_one());
    }
  }
}

TEST_CASE("re-embedding into a larger field", "[cyclotomic]") {
  auto F3 = CyclotomicField::make(3);
  auto F12 = CyclotomicField::make(12);
  auto z = embed_into(F12, F3->zeta(1));
  REQUIRE(z == F12->zeta(4));
  REQUIRE(multiplicative_order(z) == 3u);
  auto a = F3->zeta(1) + F3->from_rational(Rational(1, 2));
  auto b = embed_into(F12, a);
  REQUIRE(b == F12->zeta(4) + F12->from_rational(Rational(1, 2)));
  REQUIRE_THROWS_AS(embed_into(F3, F12->zeta(1)), spec_error);
}
