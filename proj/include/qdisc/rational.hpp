#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <string>

#include "qdisc/errors.hpp"

namespace qdisc {

// Exact arbitrary-precision arithmetic.  No floating point anywhere.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

// Accepts "p", "-p", "p/q".
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw spec_error("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw spec_error("cannot parse rational: '" + s + "'");
  }
}

}  // namespace qdisc
