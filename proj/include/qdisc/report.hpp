#pragma once

#include <json.hpp>

#include "qdisc/disccore.hpp"
#include "qdisc/skew.hpp"

namespace qdisc {

// Report assembly for the two primary algebra families, plus the stable
// JSON rendering (schema 1) used by the CLI.

inline DiscriminantReport skew_report(const std::string& name,
                                      const SkewAlgebra::Ptr& A,
                                      const SkewDiscriminant& d) {
  DiscriminantReport r;
  r.algebra = name;
  r.flavor = "csr";
  r.rank = A->rank();
  for (int i = 0; i < A->vars(); ++i)
    r.factors.emplace_back("x" + std::to_string(i + 1), d.exponents[i]);
  r.discriminant = factors_str(r.factors);
  r.method = MethodTag::chart_glued;
  for (const auto& ev : d.charts) {
    ChartReportEntry e;
    e.chart = "keep x" + std::to_string(ev.chart + 1);
    e.local_discriminant = monomial_str(ev.full_monomial);
    e.portable_part =
        monomial_str([&] {
          Exponent p(A->vars(), 0);
          p[ev.chart] = ev.portable_exp;
          return p;
        }());
    e.unit_annotation = "scalar " + ev.unit_scalar.str() +
                        ", remaining variables invertible on the chart";
    r.charts.push_back(std::move(e));
  }
  r.paper_justified_steps = {
      "complement of the chart union has codimension >= 2 (gluing license)",
      "extended variant agrees up to a unit in the base field"};
  return r;
}

inline DiscriminantReport gwa_report(const std::string& name,
                                     const GwaAlgebra::Ptr& A,
                                     const GwaCenter& Z,
                                     const GwaDiscriminant& d) {
  (void)Z;
  DiscriminantReport r;
  r.algebra = name;
  r.flavor = "csr";
  r.rank = A->rank();
  r.factors.emplace_back("t", d.t_exp);
  r.discriminant = factors_str(r.factors);
  r.method = MethodTag::chart_glued;
  for (const auto& ev : d.charts) {
    ChartReportEntry e;
    e.chart = chart_name(ev.signs);
    e.local_discriminant = ev.det.str();
    e.portable_part = "c^" + std::to_string(ev.c_exp);
    std::string inv;
    for (int i = 0; i < A->degree(); ++i) {
      if (ev.inverted_exps[i] == 0) continue;
      if (!inv.empty()) inv += "*";
      inv += (ev.signs[i] ? "a" : "b");
      if (A->degree() > 1) inv += std::to_string(i + 1);
      inv += "^" + std::to_string(ev.inverted_exps[i]);
    }
    e.unit_annotation = "scalar " + ev.unit_scalar.str() +
                        (inv.empty() ? "" : ", inverted part " + inv);
    r.charts.push_back(std::move(e));
  }
  r.paper_justified_steps = {
      "degenerate loci {a_i = b_i = 0} have codimension >= 2 (gluing license)",
      "center reflexivity of the algebra taken as given",
      "extended variant agrees up to a unit in the base field"};
  return r;
}

inline nlohmann::ordered_json report_to_json(const DiscriminantReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["algebra"] = r.algebra;
  j["flavor"] = r.flavor;
  j["rank"] = r.rank;
  j["discriminant"] = r.discriminant;
  j["unit_normalization"] = r.unit_normalization;
  j["charts"] = nlohmann::ordered_json::array();
  for (const auto& c : r.charts) {
    nlohmann::ordered_json e;
    e["chart"] = c.chart;
    e["local_discriminant"] = c.local_discriminant;
    e["portable_part"] = c.portable_part;
    e["unit_annotation"] = c.unit_annotation;
    j["charts"].push_back(std::move(e));
  }
  j["method"] = r.method;
  j["paper_justified_steps"] = r.paper_justified_steps;
  return j;
}

inline std::string report_to_text(const DiscriminantReport& r) {
  std::ostringstream os;
  os << "algebra:       " << r.algebra << "\n"
     << "flavor:        " << r.flavor << "\n"
     << "rank:          " << r.rank << "\n"
     << "discriminant:  " << r.discriminant << "\n"
     << "normalization: " << r.unit_normalization << "\n"
     << "method:        " << r.method << "\n";
  if (!r.charts.empty()) {
    os << "charts:\n";
    for (const auto& c : r.charts)
      os << "  [" << c.chart << "] local = " << c.local_discriminant
         << ", portable = " << c.portable_part << " (" << c.unit_annotation
         << ")\n";
  }
  if (!r.paper_justified_steps.empty()) {
    os << "given steps:\n";
    for (const auto& s : r.paper_justified_steps) os << "  - " << s << "\n";
  }
  return os.str();
}

}  // namespace qdisc
