// qdisc: exact reflexive-hull discriminants of skew polynomial rings and
// quantum generalized Weyl algebras over their centers, plus the
// automorphism/isomorphism machinery built on them.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>

#include "qdisc/report.hpp"
#include "qdisc/specfile.hpp"
#include "qdisc/verify.hpp"

using namespace qdisc;
using nlohmann::ordered_json;

namespace {

// exit codes: 0 ok, 1 refusal (guards), 2 invalid input, 3 internal assertion
constexpr int kOk = 0, kRefused = 1, kBadInput = 2, kInternal = 3;

void emit(const ordered_json& j, bool as_json, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

DiscriminantReport disc_report_for(const AlgebraSpecFile& spec) {
  std::string name = spec.name().empty() ? spec.path() : spec.name();
  if (spec.kind() == "skew") {
    auto A = build_skew(spec);
    return skew_report(name, A, sp_reflexive_discriminant(A));
  }
  if (spec.kind() == "gwa") {
    auto A = build_gwa(spec);
    auto Z = gwa_center_presentation(A);
    return gwa_report(name, A, Z, gwa_reflexive_discriminant(A, Z));
  }
  throw spec_error("disc expects a 'skew' or 'gwa' spec, got kind '" +
                   spec.kind() + "'");
}

int cmd_disc(const std::string& path, bool as_json) {
  auto spec = AlgebraSpecFile::parse_file(path);
  auto rep = disc_report_for(spec);
  emit(report_to_json(rep), as_json, report_to_text(rep));
  return kOk;
}

int cmd_md(const std::string& path, bool exhaustive, int v_opt, bool as_json) {
  auto spec = AlgebraSpecFile::parse_file(path);
  std::string name = spec.name().empty() ? spec.path() : spec.name();
  ordered_json j;
  j["schema"] = 1;
  j["algebra"] = name;
  std::ostringstream text;
  if (spec.kind() == "skew") {
    if (!exhaustive)
      throw refusal_error(
          "the modified discriminant of a skew fixture is an exhaustive "
          "oracle; pass --exhaustive to opt in");
    auto A = build_skew(spec);
    int v = v_opt > 0 ? v_opt : static_cast<int>(A->rank());
    auto md = sp_md_exhaustive(A, A->box_generating_set(), v);
    auto hull = sp_monomial_hull(md.gens);
    j["method"] = MethodTag::exhaustive;
    j["v"] = v;
    j["minors"] = md.minors;
    j["generators"] = ordered_json::array();
    for (auto& g : md.gens) j["generators"].push_back(monomial_str(g));
    j["hull"] = monomial_str(hull.exponents);
    j["hull_pcc"] = hull.pcc_holds;
    text << "modified discriminant ideal of " << name << " (v = " << v
         << ", " << md.minors << " minors)\n";
    for (auto& g : md.gens) text << "  " << monomial_str(g) << "\n";
    text << "monomial hull: " << monomial_str(hull.exponents)
         << (hull.pcc_holds ? "  [staircase codim >= 2]" : "") << "\n";
  } else if (spec.kind() == "gwa") {
    auto A = build_gwa(spec);
    auto Z = gwa_center_presentation(A);
    CommIdeal ideal;
    std::string method;
    if (exhaustive) {
      int v = v_opt > 0 ? v_opt : static_cast<int>(A->rank());
      ideal = gwa_md_exhaustive(A, Z, v);
      method = MethodTag::exhaustive;
      j["v"] = v;
    } else {
      auto md = gwa_md_quasibasis(A, Z);
      ideal = md.ideal;
      method = md.quasi_basis ? MethodTag::quasi_basis
                              : "base-change (multi-line coefficients)";
      j["base_change_determinants"] = md.dets;
    }
    j["method"] = method;
    j["generators"] = ordered_json::array();
    for (auto& g : ideal.gens) j["generators"].push_back(g.str());
    text << "modified discriminant ideal of " << name << " [" << method
         << "]\n";
    for (auto& g : ideal.gens) text << "  " << g.str() << "\n";
  } else {
    throw spec_error("md expects a 'skew' or 'gwa' spec");
  }
  emit(j, as_json, text.str());
  return kOk;
}

int cmd_ppower(const std::string& path, int p, int v, bool as_json) {
  auto spec = AlgebraSpecFile::parse_file(path);
  if (spec.kind() != "commring")
    throw spec_error("ppower expects a 'commring' spec with matrix_order data");
  auto cr = build_commring(spec);
  if (!cr.matrix_order || cr.ideal.is_zero())
    throw refusal_error(
        "ppower needs the matrix-order fixture (matrix_order = true with a "
        "nonzero ideal) to compute MD_v from scratch");
  if (p < 1 || v < 1) throw spec_error("ppower needs --p >= 1 and --v >= 1");
  MatrixOrder A;
  A.ring = cr.ring;
  A.ideal_gens = cr.ideal.gens;
  auto mdv = A.md(v);
  auto entry = cr_ppower_discriminant_table(mdv, p, cr.tabulated);
  DiscriminantReport rep;
  rep.algebra = spec.name().empty() ? path : spec.name();
  rep.flavor = "csr^[" + std::to_string(p) + "]_" + std::to_string(v);
  rep.rank = 4;
  rep.method = "p-power hull search (PCC certificates)";
  switch (entry.kind) {
    case PPowerEntry::Generator:
      rep.discriminant = entry.generator.str();
      break;
    case PPowerEntry::DoesNotExist:
      rep.discriminant = "does not exist";
      break;
    case PPowerEntry::Undecided:
      rep.discriminant = "undecided";
      break;
    case PPowerEntry::ZeroIdeal:
      rep.discriminant = "0";
      break;
  }
  auto j = report_to_json(rep);
  j["md_generators"] = ordered_json::array();
  for (auto& g : mdv.gens) j["md_generators"].push_back(g.str());
  if (entry.kind == PPowerEntry::Generator) {
    j["pcc_quotient_dim"] = entry.evidence.quotient_dim;
    j["pcc_ring_dim"] = entry.evidence.ring_dim;
  }
  std::ostringstream text;
  text << report_to_text(rep);
  text << "MD_" << v << " generators:\n";
  for (auto& g : mdv.gens) text << "  " << g.str() << "\n";
  emit(j, as_json, text.str());
  return kOk;
}

int cmd_tensor_disc(const std::string& path, bool as_json) {
  auto spec = AlgebraSpecFile::parse_file(path);
  if (spec.kind() != "tensor")
    throw spec_error("tensor-disc expects a 'tensor' spec");
  auto left =
      AlgebraSpecFile::parse_file(spec.resolve(spec.require("left").as_string()));
  auto right = AlgebraSpecFile::parse_file(
      spec.resolve(spec.require("right").as_string()));
  auto rep = tensor_discriminant(disc_report_for(left), disc_report_for(right));
  if (!spec.name().empty()) rep.algebra = spec.name();
  emit(report_to_json(rep), as_json, report_to_text(rep));
  return kOk;
}

int cmd_aut_check(const std::string& morphism_path, bool as_json) {
  auto spec = AlgebraSpecFile::parse_file(morphism_path);
  if (spec.kind() != "morphism")
    throw spec_error("aut-check expects a 'morphism' spec");
  auto M = build_morphism(spec);
  ordered_json j;
  j["schema"] = 1;
  j["morphism"] = spec.name();
  std::ostringstream text;
  bool passes = false;
  std::string witness;
  if (M.algebra_kind == "gwa") {
    auto w = gwa_morphism_witness(M.gwa);
    passes = !w.has_value();
    if (w) witness = *w;
    M.gwa.checked = passes;
    j["relations_preserved"] = passes;
    if (!passes) j["failing_relation"] = witness;
    text << "morphism " << spec.name() << ": relations "
         << (passes ? "preserved" : "violated at " + witness) << "\n";
    if (passes && M.gwa.source->same(*M.gwa.target)) {
      auto Z = gwa_center_presentation(M.gwa_source);
      auto disc = gwa_reflexive_discriminant(M.gwa_source, Z);
      auto d = GwaElement::t_power(M.gwa_source, static_cast<int>(disc.t_exp));
      auto inv = discriminant_invariance_check(M.gwa, d);
      j["discriminant"] = "t^" + std::to_string(disc.t_exp);
      j["discriminant_invariant"] = inv.invariant;
      if (inv.invariant) j["unit"] = inv.unit.str();
      text << "discriminant t^" << disc.t_exp << ": "
           << (inv.invariant ? "invariant, unit = " + inv.unit.str()
                             : "NOT invariant")
           << "\n";
    }
  } else {
    auto w = skew_morphism_witness(M.skew);
    passes = !w.has_value();
    if (w) witness = *w;
    j["relations_preserved"] = passes;
    if (!passes) j["failing_relation"] = witness;
    text << "morphism " << spec.name() << ": relations "
         << (passes ? "preserved" : "violated at " + witness) << "\n";
  }
  emit(j, as_json, text.str());
  return kOk;
}

int cmd_iso_check(const std::string& p1, const std::string& p2, bool as_json) {
  auto s1 = AlgebraSpecFile::parse_file(p1);
  auto s2 = AlgebraSpecFile::parse_file(p2);
  if (s1.kind() != "gwa" || s2.kind() != "gwa")
    throw spec_error("iso-check expects two degree-one 'gwa' specs");
  auto W = build_gwa(s1), Wp = build_gwa(s2);
  auto sols = iso_criterion(W, Wp);
  ordered_json j;
  j["schema"] = 1;
  j["left"] = s1.name();
  j["right"] = s2.name();
  j["isomorphic"] = !sols.empty();
  j["solutions"] = ordered_json::array();
  std::ostringstream text;
  text << s1.name() << " ~ " << s2.name() << ": "
       << (sols.empty() ? "no isomorphism of quantum GWAs"
                        : "isomorphic; witnesses (gamma, mu):")
       << "\n";
  for (auto& s : sols) {
    ordered_json e;
    e["branch"] = s.inverse_branch ? "q' = q^{-1}" : "q' = q";
    e["gamma"] = s.gamma.str();
    e["mu"] = s.mu.str();
    j["solutions"].push_back(std::move(e));
    text << "  gamma = " << s.gamma.str() << ", mu = " << s.mu.str() << "  ["
         << (s.inverse_branch ? "q' = q^{-1}" : "q' = q") << "]\n";
  }
  emit(j, as_json, text.str());
  return kOk;
}

int cmd_derivation_check(const std::string& path, bool as_json) {
  auto spec = AlgebraSpecFile::parse_file(path);
  if (spec.kind() != "derivation")
    throw spec_error("derivation-check expects a 'derivation' spec");
  auto D = build_derivation(spec);
  auto w = derivation_witness(D.der);
  ordered_json j;
  j["schema"] = 1;
  j["derivation"] = spec.name();
  j["leibniz_consistent"] = !w.has_value();
  if (w) j["failing_relation"] = *w;
  std::ostringstream text;
  text << "derivation " << spec.name() << ": "
       << (w ? "inconsistent at " + *w : "Leibniz-consistent on all relations")
       << "\n";
  emit(j, as_json, text.str());
  return kOk;
}

int cmd_verify_paper(bool as_json) {
  auto results = verify_paper_suite();
  ordered_json j;
  j["schema"] = 1;
  j["fixtures"] = ordered_json::array();
  bool all = true;
  std::ostringstream text;
  for (const auto& r : results) {
    all = all && r.pass;
    ordered_json e;
    e["name"] = r.name;
    e["expected"] = r.expected;
    e["computed"] = r.computed;
    e["pass"] = r.pass;
    j["fixtures"].push_back(std::move(e));
    text << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": expected "
         << r.expected << ", computed " << r.computed << "\n";
  }
  j["all_pass"] = all;
  text << (all ? "all fixtures PASS" : "some fixtures FAILED") << " ("
       << results.size() << " checks)\n";
  emit(j, as_json, text.str());
  return all ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qdisc: exact reflexive-hull discriminants of skew polynomial rings "
      "and quantum generalized Weyl algebras"};
  app.require_subcommand(1);

  std::string spec_path, spec_path2, morphism_path;
  bool as_json = false;
  int p = 1, v = 0;
  bool exhaustive = false;

  auto add_json = [&](CLI::App* c) { c->add_flag("--json", as_json, "machine-readable report"); };

  auto* disc = app.add_subcommand("disc", "reflexive-hull discriminant with chart evidence");
  disc->add_option("spec", spec_path, "algebra spec file")->required();
  add_json(disc);

  auto* md = app.add_subcommand("md", "modified discriminant ideal");
  md->add_option("spec", spec_path, "algebra spec file")->required();
  md->add_flag("--exhaustive", exhaustive, "full minor enumeration (guarded)");
  md->add_option("--v", v, "minor size (default: the rank)");
  add_json(md);

  auto* pp = app.add_subcommand("ppower", "p-power reflexive hull table entry");
  pp->add_option("spec", spec_path, "commring spec file")->required();
  pp->add_option("--p", p, "power")->required();
  pp->add_option("--v", v, "discriminant ideal size")->required();
  add_json(pp);

  auto* td = app.add_subcommand("tensor-disc", "discriminant of a tensor product");
  td->add_option("spec", spec_path, "tensor spec file")->required();
  add_json(td);

  auto* ac = app.add_subcommand("aut-check", "verify a morphism and discriminant invariance");
  ac->add_option("--morphism", morphism_path, "morphism spec file")->required();
  add_json(ac);

  auto* ic = app.add_subcommand("iso-check", "degree-one GWA isomorphism criterion");
  ic->add_option("spec1", spec_path, "left algebra spec")->required();
  ic->add_option("spec2", spec_path2, "right algebra spec")->required();
  add_json(ic);

  auto* dc = app.add_subcommand("derivation-check", "verify a derivation's Leibniz consistency");
  dc->add_option("--spec", spec_path, "derivation spec file")->required();
  add_json(dc);

  auto* vp = app.add_subcommand("verify-paper", "run the full worked-computation fixture suite");
  add_json(vp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    if (disc->parsed()) return cmd_disc(spec_path, as_json);
    if (md->parsed()) return cmd_md(spec_path, exhaustive, v, as_json);
    if (pp->parsed()) return cmd_ppower(spec_path, p, v, as_json);
    if (td->parsed()) return cmd_tensor_disc(spec_path, as_json);
    if (ac->parsed()) return cmd_aut_check(morphism_path, as_json);
    if (ic->parsed()) return cmd_iso_check(spec_path, spec_path2, as_json);
    if (dc->parsed()) return cmd_derivation_check(spec_path, as_json);
    if (vp->parsed()) return cmd_verify_paper(as_json);
  } catch (const refusal_error& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kRefused;
  } catch (const spec_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kBadInput;
  } catch (const internal_check_error& e) {
    std::cerr << "internal assertion: " << e.what() << "\n";
    return kInternal;
  }
  return kBadInput;
}
