#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qdisc/commring.hpp"
#include "qdisc/gwa.hpp"
#include "qdisc/matrix_order.hpp"
#include "qdisc/morphisms.hpp"
#include "qdisc/skew.hpp"

namespace qdisc {

// Declarative algebra presentations: one human-writable key/value text file
// per algebra.  Values are scalars ("3", "-1/2", bare words) or (nested)
// bracketed arrays; '#' starts a comment.  No expression syntax.

struct SpecValue {
  enum class Type { Scalar, Array };
  Type type = Type::Scalar;
  std::string scalar;
  std::vector<SpecValue> array;

  long long as_int() const {
    try {
      std::size_t used = 0;
      long long v = std::stoll(scalar, &used);
      if (used != scalar.size()) throw std::invalid_argument(scalar);
      return v;
    } catch (const std::exception&) {
      throw spec_error("expected an integer, got '" + scalar + "'");
    }
  }
  Rational as_rational() const {
    if (type != Type::Scalar)
      throw spec_error("expected a rational scalar, got an array");
    return parse_rational(scalar);
  }
  const std::string& as_string() const {
    if (type != Type::Scalar) throw spec_error("expected a string");
    return scalar;
  }
  const std::vector<SpecValue>& as_array() const {
    if (type != Type::Array) throw spec_error("expected an array");
    return array;
  }
  std::vector<long long> as_int_vector() const {
    std::vector<long long> out;
    for (const auto& v : as_array()) out.push_back(v.as_int());
    return out;
  }
  std::vector<Rational> as_rational_vector() const {
    std::vector<Rational> out;
    for (const auto& v : as_array()) out.push_back(v.as_rational());
    return out;
  }
};

class AlgebraSpecFile {
 public:
  static AlgebraSpecFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spec_error("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto spec = parse_text(ss.str());
    auto slash = path.find_last_of('/');
    spec.dir_ = slash == std::string::npos ? "." : path.substr(0, slash);
    spec.path_ = path;
    return spec;
  }

  static AlgebraSpecFile parse_text(const std::string& text) {
    AlgebraSpecFile spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trimmed = trim(line);
      if (trimmed.empty()) continue;
      auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw spec_error("line " + std::to_string(lineno) +
                         ": expected 'key = value'");
      std::string key = trim(trimmed.substr(0, eq));
      std::string val = trim(trimmed.substr(eq + 1));
      if (key.empty() || val.empty())
        throw spec_error("line " + std::to_string(lineno) +
                         ": empty key or value");
      std::size_t pos = 0;
      auto parsed = parse_value(val, pos);
      if (pos != val.size())
        throw spec_error("line " + std::to_string(lineno) +
                         ": trailing characters after value");
      if (!spec.kv_.emplace(key, std::move(parsed)).second)
        throw spec_error("duplicate key '" + key + "'");
    }
    spec.kind_ = spec.require("kind").as_string();
    if (auto* n = spec.find("name")) spec.name_ = n->as_string();
    return spec;
  }

  const std::string& kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::string& dir() const { return dir_; }
  const std::string& path() const { return path_; }

  const SpecValue* find(const std::string& key) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
  }
  const SpecValue& require(const std::string& key) const {
    if (auto* v = find(key)) return *v;
    throw spec_error("missing key '" + key + "'");
  }
  std::string resolve(const std::string& rel) const {
    if (rel.empty() || rel[0] == '/') return rel;
    return dir_.empty() ? rel : dir_ + "/" + rel;
  }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  static SpecValue parse_value(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    SpecValue v;
    if (pos < s.size() && s[pos] == '[') {
      v.type = SpecValue::Type::Array;
      ++pos;
      for (;;) {
        while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ','))
          ++pos;
        if (pos >= s.size()) throw spec_error("unterminated array");
        if (s[pos] == ']') {
          ++pos;
          break;
        }
        v.array.push_back(parse_value(s, pos));
      }
      return v;
    }
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ',' && s[pos] != ']' &&
           !std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    v.scalar = s.substr(start, pos - start);
    if (v.scalar.empty()) throw spec_error("empty value");
    return v;
  }

  std::map<std::string, SpecValue> kv_;
  std::string kind_, name_, dir_ = ".", path_;
};

// ---------------------------------------------------------------------------
// Builders: validate-then-construct for each spec kind.

inline SkewAlgebra::Ptr build_skew(const AlgebraSpecFile& spec) {
  int n = static_cast<int>(spec.require("n").as_int());
  long long N = spec.require("root_order").as_int();
  if (n < 1 || N < 1) throw spec_error("skew spec needs n >= 1, root_order >= 1");
  const auto& rows = spec.require("exponents").as_array();
  if (static_cast<int>(rows.size()) != n)
    throw spec_error("exponent matrix must have n rows");
  IntMatrix E(n, n);
  for (int i = 0; i < n; ++i) {
    auto row = rows[i].as_int_vector();
    if (static_cast<int>(row.size()) != n)
      throw spec_error("exponent matrix must be n x n");
    for (int j = 0; j < n; ++j) E.at(i, j) = row[j];
  }
  return SkewAlgebra::make(n, static_cast<unsigned>(N), E);
}

inline GwaAlgebra::Ptr build_gwa(const AlgebraSpecFile& spec) {
  auto orders_ll = spec.require("orders").as_int_vector();
  std::vector<unsigned> orders;
  for (auto v : orders_ll) {
    if (v < 1) throw spec_error("orders must be positive");
    orders.push_back(static_cast<unsigned>(v));
  }
  std::vector<long long> qexp(orders.size(), 1);
  if (auto* q = spec.find("q_exponents")) qexp = q->as_int_vector();
  if (qexp.size() != orders.size())
    throw spec_error("q_exponents must match the number of orders");
  std::vector<std::vector<Rational>> h;
  for (std::size_t i = 0; i < orders.size(); ++i)
    h.push_back(spec.require("h_" + std::to_string(i + 1)).as_rational_vector());
  return GwaAlgebra::make(orders, qexp, h);
}

struct CommRingSpec {
  PresentedCommRing::Ptr ring;
  CommIdeal ideal;           // the fixture ideal I (possibly empty)
  bool matrix_order = false; // A = (Z I; Z Z) data present
  bool tabulated = false;    // paper-tabulated fixture
};

inline CommRingSpec build_commring(const AlgebraSpecFile& spec) {
  CommRingSpec out;
  std::vector<std::string> names;
  for (const auto& v : spec.require("vars").as_array())
    names.push_back(v.as_string());
  const int n = static_cast<int>(names.size());
  auto var_index = [&](const std::string& nm) {
    for (int i = 0; i < n; ++i)
      if (names[i] == nm) return i;
    throw spec_error("unknown variable '" + nm + "'");
  };
  auto F = CyclotomicField::make(1);
  std::vector<PresentedCommRing::PairRule> rules;
  const auto& pairs = spec.require("pairs").as_array();
  // the free variable carrying the rule polynomials: the unique unpaired one
  std::vector<bool> paired(n, false);
  std::vector<std::pair<int, int>> pairidx;
  for (const auto& p : pairs) {
    const auto& uv = p.as_array();
    if (uv.size() != 2) throw spec_error("each pair needs two variables");
    int u = var_index(uv[0].as_string()), v = var_index(uv[1].as_string());
    paired[u] = paired[v] = true;
    pairidx.emplace_back(u, v);
  }
  int free_var = -1;
  for (int i = 0; i < n; ++i)
    if (!paired[i]) {
      if (free_var >= 0)
        throw spec_error("expected exactly one free variable for p_i(c)");
      free_var = i;
    }
  if (free_var < 0) throw spec_error("no free variable in the presentation");
  for (std::size_t k = 0; k < pairidx.size(); ++k) {
    PresentedCommRing::PairRule rule;
    rule.u = pairidx[k].first;
    rule.v = pairidx[k].second;
    auto coeffs = spec.require("p_" + std::to_string(k + 1)).as_rational_vector();
    for (std::size_t d = 0; d < coeffs.size(); ++d) {
      if (coeffs[d] == 0) continue;
      Exponent e(n, 0);
      e[free_var] = static_cast<std::int64_t>(d);
      rule.rhs.emplace(std::move(e), F->from_rational(coeffs[d]));
    }
    rules.push_back(std::move(rule));
  }
  out.ring = PresentedCommRing::make(names, F, rules);
  if (auto* gens = spec.find("ideal")) {
    std::vector<RingElement> gl;
    for (const auto& g : gens->as_array()) {
      auto e = g.as_int_vector();
      if (static_cast<int>(e.size()) != n)
        throw spec_error("ideal generator exponent width mismatch");
      Exponent ex(e.begin(), e.end());
      gl.push_back(RingElement::monomial(out.ring, ex, F->one()));
    }
    out.ideal = CommIdeal::make(out.ring, gl);
  } else {
    out.ideal.ring = out.ring;
  }
  if (auto* m = spec.find("matrix_order"))
    out.matrix_order = m->as_string() == "true";
  if (auto* t = spec.find("tabulated")) out.tabulated = t->as_string() == "true";
  return out;
}

// Element term lists: [num, den, zeta_pow, t_exp, window...] for GWA targets
// and [num, den, zeta_pow, exponents...] for skew targets.
inline GwaElement parse_gwa_element(const GwaAlgebra::Ptr& alg,
                                    const SpecValue& v) {
  GwaElement out(alg);
  const int m = alg->degree();
  for (const auto& term : v.as_array()) {
    auto nums = term.as_int_vector();
    if (static_cast<int>(nums.size()) != 4 + m)
      throw spec_error("GWA element term needs [num, den, zeta_pow, t_exp, " +
                       std::to_string(m) + " window entries]");
    if (nums[1] == 0) throw spec_error("zero denominator in element term");
    CycScalar c = alg->field()->from_rational(Rational(nums[0], nums[1])) *
                  alg->field()->zeta(nums[2]);
    if (nums[3] < 0) throw spec_error("negative t exponent");
    Exponent w(nums.begin() + 4, nums.end());
    GwaPoly p(nums[3] + 1, alg->field()->zero());
    p[nums[3]] = c;
    out = out + GwaElement::term(alg, w, std::move(p));
  }
  return out;
}

inline SkewElement parse_skew_element(const SkewAlgebra::Ptr& alg,
                                      const SpecValue& v) {
  SkewElement out(alg);
  const int n = alg->vars();
  for (const auto& term : v.as_array()) {
    auto nums = term.as_int_vector();
    if (static_cast<int>(nums.size()) != 3 + n)
      throw spec_error("skew element term needs [num, den, zeta_pow, " +
                       std::to_string(n) + " exponents]");
    if (nums[1] == 0) throw spec_error("zero denominator in element term");
    CycScalar c = alg->field()->from_rational(Rational(nums[0], nums[1])) *
                  alg->field()->zeta(nums[2]);
    Exponent e(nums.begin() + 3, nums.end());
    for (auto x : e)
      if (x < 0) throw spec_error("negative exponent in skew element");
    out = out + SkewElement::monomial(alg, e, c);
  }
  return out;
}

struct MorphismSpecFile {
  std::string algebra_kind;
  GwaAlgebra::Ptr gwa_source, gwa_target;
  SkewAlgebra::Ptr skew_source, skew_target;
  GwaMorphism gwa;
  SkewMorphism skew;
};

inline MorphismSpecFile build_morphism(const AlgebraSpecFile& spec) {
  MorphismSpecFile out;
  auto src = AlgebraSpecFile::parse_file(
      spec.resolve(spec.require("algebra").as_string()));
  auto tgt = src;
  if (auto* t = spec.find("target"))
    tgt = AlgebraSpecFile::parse_file(spec.resolve(t->as_string()));
  out.algebra_kind = src.kind();
  if (src.kind() == "gwa") {
    out.gwa_source = build_gwa(src);
    out.gwa_target = build_gwa(tgt);
    out.gwa.source = out.gwa_source;
    out.gwa.target = out.gwa_target;
    out.gwa.img_t = parse_gwa_element(out.gwa_target, spec.require("image_t"));
    for (int i = 0; i < out.gwa_source->degree(); ++i) {
      out.gwa.img_x.push_back(parse_gwa_element(
          out.gwa_target, spec.require("image_x_" + std::to_string(i + 1))));
      out.gwa.img_y.push_back(parse_gwa_element(
          out.gwa_target, spec.require("image_y_" + std::to_string(i + 1))));
    }
  } else if (src.kind() == "skew") {
    out.skew_source = build_skew(src);
    out.skew_target = build_skew(tgt);
    out.skew.source = out.skew_source;
    out.skew.target = out.skew_target;
    for (int i = 0; i < out.skew_source->vars(); ++i)
      out.skew.img_x.push_back(parse_skew_element(
          out.skew_target, spec.require("image_x_" + std::to_string(i + 1))));
  } else {
    throw spec_error("morphism over unsupported algebra kind: " + src.kind());
  }
  return out;
}

struct DerivationSpecFile {
  GwaAlgebra::Ptr alg;
  GwaDerivation der;
};

inline DerivationSpecFile build_derivation(const AlgebraSpecFile& spec) {
  DerivationSpecFile out;
  auto src = AlgebraSpecFile::parse_file(
      spec.resolve(spec.require("algebra").as_string()));
  if (src.kind() != "gwa")
    throw spec_error("derivations are specified over GWAs");
  out.alg = build_gwa(src);
  out.der.alg = out.alg;
  auto elem = [&](const std::string& key) {
    const auto* v = spec.find(key);
    if (!v || (v->type == SpecValue::Type::Array && v->array.empty()))
      return GwaElement(out.alg);
    return parse_gwa_element(out.alg, *v);
  };
  out.der.val_t = elem("value_t");
  for (int i = 0; i < out.alg->degree(); ++i) {
    out.der.val_x.push_back(elem("value_x_" + std::to_string(i + 1)));
    out.der.val_y.push_back(elem("value_y_" + std::to_string(i + 1)));
  }
  return out;
}

}  // namespace qdisc
