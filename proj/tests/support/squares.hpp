#pragma once

// Standard squares used across the test suites.

#include "ferrand/conductor.hpp"

namespace squares {

using namespace ferrand;

inline PresentedRing ring(const std::string& name, std::vector<std::string> vars, std::vector<std::string> rels = {},
                          Field f = Field::rationals()) {
  Context c = make_context(f, std::move(vars));
  std::vector<MPoly> r;
  for (const auto& t : rels) r.push_back(parse_poly(t, c));
  return PresentedRing(name, c, r);
}

// Pinching {t = 1, t = -1} of the affine line to a point.
inline FerrandData nodal(Field f = Field::rationals()) {
  auto B = ring("B", {}, {}, f);
  auto C = ring("C", {"t"}, {}, f);
  auto K = ring("K", {"t"}, {"t^2 - 1"}, f);
  return build_square(validate_hom(B, K, std::vector<MPoly>{}), validate_hom(C, K, std::vector<std::string>{"t"}));
}

// B = k[x] ⊂ K = k[x^{±1}] ← C = k[x^{±1}, y], y ↦ 0.
inline FerrandData laurent_composition() {
  auto B = ring("B", {"x"});
  auto K = ring("K", {"x", "xi"}, {"x*xi - 1"});
  auto C = ring("C", {"x", "xi", "y"}, {"x*xi - 1"});
  return build_square(validate_hom(B, K, std::vector<std::string>{"x"}),
                      validate_hom(C, K, std::vector<std::string>{"x", "xi", "0"}));
}

}  // namespace squares
