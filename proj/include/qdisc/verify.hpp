#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qdisc/disccore.hpp"
#include "qdisc/matrix_order.hpp"
#include "qdisc/morphisms.hpp"
#include "qdisc/report.hpp"

namespace qdisc {

// The worked-computation suite: every published value the engine is expected
// to reproduce, with the computed result next to it.

struct FixtureResult {
  std::string name;
  std::string expected;
  std::string computed;
  bool pass = false;
};

namespace fixtures {

inline SkewAlgebra::Ptr skew3(int variant) {
  // (p12, p13, p23) over N = 2: (1) (-1,1,1)  (2) (-1,-1,1)  (3) (-1,-1,-1)
  std::int64_t e12 = 1, e13 = variant >= 2, e23 = variant >= 3;
  return SkewAlgebra::make(
      3, 2,
      IntMatrix::from_rows(
          {{0, e12, e13}, {-e12, 0, e23}, {-e13, -e23, 0}}));
}
inline GwaAlgebra::Ptr gwa_n2() { return GwaAlgebra::make({2}, {1}, {{-1, 0, 1}}); }
inline GwaAlgebra::Ptr gwa_n3() { return GwaAlgebra::make({3}, {1}, {{-1, 1}}); }
inline GwaAlgebra::Ptr gwa_plane2() { return GwaAlgebra::make({2}, {1}, {{0, 1}}); }
inline GwaAlgebra::Ptr gwa_23() {
  return GwaAlgebra::make({2, 3}, {1, 1}, {{-1, 0, 0, 1}, {-1, 0, 1}});
}
inline PresentedCommRing::Ptr a2_ring() {
  auto F = CyclotomicField::make(1);
  PresentedCommRing::PairRule rule;
  rule.u = 0;
  rule.v = 1;
  rule.rhs.emplace(Exponent{0, 0, 3}, F->one());
  return PresentedCommRing::make({"a", "b", "c"}, F, {rule});
}

}  // namespace fixtures

inline std::vector<FixtureResult> verify_paper_suite() {
  std::vector<FixtureResult> out;
  auto add = [&](const std::string& name, const std::string& expected,
                 const std::string& computed) {
    out.push_back({name, expected, computed, expected == computed});
  };
  auto add_flag = [&](const std::string& name, const std::string& expected,
                      bool ok) {
    out.push_back({name, expected, ok ? expected : "FAILED", ok});
  };

  // --- three-variable skew fixtures -----------------------------------
  {
    const char* expect[3] = {"x1^4*x2^4", "x1^4", "1"};
    for (int v = 1; v <= 3; ++v) {
      auto A = fixtures::skew3(v);
      auto d = sp_reflexive_discriminant(A);
      auto rep = skew_report("three-variable skew fixture " + std::to_string(v),
                             A, d);
      add("skew fixture (" + std::to_string(v) + "): glued discriminant",
          expect[v - 1], rep.discriminant);
    }
    // exhaustive oracle agreement on fixture (2)
    auto A = fixtures::skew3(2);
    auto md = sp_md_exhaustive(A, A->box_generating_set(), 4);
    auto hull = sp_monomial_hull(md.gens);
    add("skew fixture (2): exhaustive MD hull", "x1^4",
        monomial_str(hull.exponents));
  }

  // --- degree-one GWA discriminants -----------------------------------
  {
    auto A2 = fixtures::gwa_n2();
    auto Z2 = gwa_center_presentation(A2);
    add("degree-one GWA, n = 2 (h = t^2 - 1): discriminant", "t^4",
        "t^" + std::to_string(gwa_reflexive_discriminant(A2, Z2).t_exp));
    auto A3 = fixtures::gwa_n3();
    auto Z3 = gwa_center_presentation(A3);
    add("degree-one GWA, n = 3 (h = t - 1): discriminant", "t^18",
        "t^" + std::to_string(gwa_reflexive_discriminant(A3, Z3).t_exp));
    // MD divisibility by the discriminant power
    auto md2 = gwa_md_quasibasis(A2, Z2);
    bool div2 = true;
    for (auto& g : md2.ideal.gens)
      div2 = div2 && center_to_gwa(Z2, A2, g).t_divisible(4);
    add_flag("degree-one GWA, n = 2: every MD generator divisible by t^4",
             "holds", div2);
    auto md3 = gwa_md_quasibasis(A3, Z3);
    bool div3 = true;
    for (auto& g : md3.ideal.gens)
      div3 = div3 && center_to_gwa(Z3, A3, g).t_divisible(18);
    add_flag("degree-one GWA, n = 3: every MD generator divisible by t^18",
             "holds", div3);
    // exhaustive minors at n = 2 equal the factored ideal
    auto ex = gwa_md_exhaustive(A2, Z2, 4);
    std::set<std::string> a, b;
    for (auto& g : md2.ideal.gens) a.insert(g.str());
    for (auto& g : ex.gens) b.insert(g.str());
    add_flag("degree-one GWA, n = 2: 225-minor oracle matches factored MD",
             "ideals equal", a == b);
  }

  // --- degree-two GWA ---------------------------------------------------
  {
    auto A = fixtures::gwa_23();
    auto Z = gwa_center_presentation(A);
    auto ev = gwa_local_discriminant(A, Z, {true, true});
    std::string chart = "c^" + std::to_string(ev.c_exp) + "*a1^" +
                        std::to_string(ev.inverted_exps[0]) + "*a2^" +
                        std::to_string(ev.inverted_exps[1]);
    add("degree-two GWA (2,3): a-chart local discriminant",
        "c^30*a1^18*a2^24", chart);
    auto d = gwa_reflexive_discriminant(A, Z);
    add("degree-two GWA (2,3): glued discriminant", "t^180",
        "t^" + std::to_string(d.t_exp));
    add_flag("degree-two GWA (2,3): all four sign charts agree on c^30",
             "agree", d.c_exp == 30 && d.charts.size() == 4);
  }

  // --- A2 matrix-order table -------------------------------------------
  {
    auto R = fixtures::a2_ring();
    auto one = R->field()->one();
    auto I = CommIdeal::make(
        R, {RingElement::monomial(R, {1, 0, 0}, one),
            RingElement::monomial(R, {0, 0, 1}, one)});
    auto I3 = cr_ideal_power(I, 3);
    std::set<std::string> got;
    for (auto& g : I3.gens) got.insert(g.str());
    add_flag("A2 ring: I^3 = (a^3, a^2*c, a*c^2, c^3)", "reproduced",
             got == std::set<std::string>{"a^3", "a^2*c", "a*c^2", "c^3"});
    auto pcc = cr_pcc_check(I3, RingElement::monomial(R, {1, 0, 0}, one));
    add_flag("A2 ring: PCC certifies (I^3)^vv = (a)", "certified",
             pcc.ok && pcc.quotient_dim == 0);

    MatrixOrder A;
    A.ring = R;
    A.ideal_gens = I.gens;
    auto md4 = A.md(4);
    auto p3 = cr_ppower_discriminant_table(md4, 3, true);
    add("A2 matrix order: p-power hull at (w, p) = (4, 3)", "a^2",
        p3.kind == PPowerEntry::Generator ? p3.generator.str() : "missing");
    auto p1 = cr_ppower_discriminant_table(md4, 1, true);
    add_flag("A2 matrix order: hull at (4, 1) does not exist",
             "does not exist", p1.kind == PPowerEntry::DoesNotExist);
    add_flag("A2 matrix order: MD_5 = 0", "zero ideal", A.md(5).is_zero());
    // the overlapping w = 3 table rows, computed from scratch
    auto md3 = A.md(3);
    std::set<std::string> md3s;
    for (auto& g : md3.gens) md3s.insert(g.str());
    bool md3_is_I = md3s == std::set<std::string>{"a", "c"};
    auto w3p3 = cr_ppower_discriminant_table(md3, 3, true);
    bool supports_second = w3p3.kind == PPowerEntry::Generator &&
                           w3p3.generator.str() == "a";
    add_flag(
        "A2 matrix order: w = 3 row discrepancy (MD_3 = I, so the a^{p/3} "
        "row is the computed one; 'hull = 1' only holds for w <= 2)",
        "a^{p/3} row supported", md3_is_I && supports_second);
  }

  // --- tensor products ---------------------------------------------------
  {
    auto A2 = fixtures::gwa_n2();
    auto Z2 = gwa_center_presentation(A2);
    auto r2 = gwa_report("gwa-n2", A2, Z2, gwa_reflexive_discriminant(A2, Z2));
    auto A3 = fixtures::gwa_n3();
    auto Z3 = gwa_center_presentation(A3);
    auto r3 = gwa_report("gwa-n3", A3, Z3, gwa_reflexive_discriminant(A3, Z3));
    add("tensor formula: (n = 2) (x) (n = 2)", "t^16 (x) t'^16",
        tensor_discriminant(r2, r2).discriminant);
    add("tensor formula: (n = 2) (x) (n = 3)", "t^36 (x) t'^72",
        tensor_discriminant(r2, r3).discriminant);
    auto P = tensor_factor_from_gwa(fixtures::gwa_plane2(), "plane");
    auto P2 = tensor_factor_from_gwa(fixtures::gwa_plane2(), "plane");
    auto G = tensor_factor_from_gwa(A2, "gwa-n2");
    auto rep1 = tensor_md_check(P, P2);
    add_flag("tensor MD identity: plane (x) plane",
             "both sides agree", rep1.ok && rep1.kronecker_det_ok);
    auto rep2 = tensor_md_check(G, P);
    add_flag("tensor MD identity: (n = 2 GWA) (x) plane",
             "both sides agree", rep2.ok && rep2.kronecker_det_ok);
  }

  // --- automorphisms, isomorphisms, derivations --------------------------
  {
    auto A = fixtures::gwa_n2();
    auto F = A->field();
    auto Z = gwa_center_presentation(A);
    auto disc = gwa_reflexive_discriminant(A, Z);
    auto d = GwaElement::t_power(A, static_cast<int>(disc.t_exp));
    bool family_ok = true;
    auto gammas = admissible_gammas(A);
    family_ok = family_ok && gammas.size() == 2;  // C_2 = {1, -1}
    for (const auto& gamma : gammas)
      for (const auto& mu : unit_root_grid(F)) {
        auto phi = eta_automorphism(A, gamma, mu);
        if (!check_morphism(phi)) family_ok = false;
        auto inv = discriminant_invariance_check(phi, d);
        if (!inv.invariant || !(inv.unit == gamma.pow(4))) family_ok = false;
      }
    add_flag("automorphisms: eta family over C_g fixes t^4 with unit gamma^4",
             "holds", family_ok);

    auto omega = omega_automorphism(A);
    bool omega_ok = check_morphism(omega);
    auto omega3 = omega_automorphism(fixtures::gwa_n3());
    omega_ok = omega_ok && !check_morphism(omega3);
    add_flag("automorphisms: omega passes exactly when q = -1", "holds",
             omega_ok);

    auto W = fixtures::gwa_n3();
    auto found = enumerate_graded_automorphisms(W);
    bool graded_ok = !found.empty();
    for (const auto& g : found)
      graded_ok = graded_ok && !g.swap && in_published_family(W, g);
    add_flag("automorphisms: graded search finds nothing outside the family "
             "(q^2 != 1)",
             "holds", graded_ok);

    auto W2 = GwaAlgebra::make({2}, {1}, {{-1, 0, 1}});
    auto W3 = GwaAlgebra::make({2}, {1}, {{-2, 0, 1}});
    bool iso_ok = !iso_criterion(A, W2).empty() &&
                  iso_criterion(A, W3).empty() &&
                  iso_criterion(A, fixtures::gwa_n3()).empty();
    add_flag("isomorphism criterion: crafted positive/negative pairs",
             "holds", iso_ok);

    GwaDerivation euler{A, GwaElement(A),
                        {GwaElement::x(A, 0)},
                        {GwaElement::y(A, 0).scaled(F->from_rational(-1))}};
    GwaDerivation bad{A, GwaElement::one(A), {GwaElement(A)}, {GwaElement(A)}};
    add_flag("derivations: Leibniz check accepts the Euler example and "
             "rejects delta(t) = 1",
             "holds", check_derivation(euler) && !check_derivation(bad));
  }

  return out;
}

}  // namespace qdisc
