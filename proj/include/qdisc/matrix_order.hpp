#pragma once

#include <array>
#include <string>
#include <vector>

#include "qdisc/commring.hpp"
#include "qdisc/disccore.hpp"

namespace qdisc {

// The matrix order A = (Z  I; Z  Z) inside M_2(Z) over a presented ring Z,
// for a (monomial) ideal I.  Rank 4 over the center; the regular trace of a
// matrix u is twice its internal 2x2 trace.  Used to reproduce the p-power
// hull table of the A_2 fixture from scratch.
struct MatrixOrder {
  PresentedCommRing::Ptr ring;
  std::vector<RingElement> ideal_gens;  // generators of I

  struct Elem {
    std::array<RingElement, 4> m;  // row-major 2x2
    friend Elem operator*(const Elem& a, const Elem& b) {
      Elem r;
      r.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
      r.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
      r.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
      r.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
      return r;
    }
  };

  // Z-module generating set: e11, e22, e21, and g * e12 for each generator
  // g of I.
  std::vector<Elem> generating_set() const {
    auto zero = RingElement(ring);
    auto one = RingElement::one(ring);
    std::vector<Elem> out;
    out.push_back({{one, zero, zero, zero}});   // e11
    out.push_back({{zero, zero, zero, one}});   // e22
    out.push_back({{zero, zero, one, zero}});   // e21
    for (const auto& g : ideal_gens) out.push_back({{zero, g, zero, zero}});
    return out;
  }

  RingElement trace(const Elem& u) const {
    auto tr = u.m[0] + u.m[3];
    return tr + tr;  // rank 4 = 2 * matrix size
  }

  // Modified v-discriminant ideal from the generating set.
  CommIdeal md(int v, std::uint64_t guard = 10'000'000) const {
    detail::CommElemRing R{ring};
    auto gens = generating_set();
    auto data = md_ideal<Elem, RingElement>(
        gens, v, [this](const Elem& u) { return trace(u); }, R,
        "matrix order", guard);
    return CommIdeal::make(ring, data.gens);
  }
};

}  // namespace qdisc
