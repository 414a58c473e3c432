#pragma once

// Patched modules over the nodal square, used by the module tests and the
// acceptance run.

#include <string>
#include <vector>

#include "ferrand/modules.hpp"
#include "support/squares.hpp"

namespace corpus {

using namespace ferrand;

inline const PushoutPresentation& nodal_presentation(const FerrandData& sq) {
  static const PushoutPresentation pres = present_pushout(sq, {8, 24});
  return pres;
}

inline Matrix mat(const Context& ctx, std::size_t rows, const std::vector<std::vector<std::string>>& cols) {
  Matrix m(ctx, rows);
  for (const auto& c : cols) {
    Vec v;
    for (const auto& s : c) v.push_back(parse_poly(s, ctx));
    m.columns.push_back(std::move(v));
  }
  return m;
}

inline PresentedModule module(const PresentedRing& r, std::size_t n,
                              const std::vector<std::vector<std::string>>& rels = {}) {
  return PresentedModule(r, n, mat(r.context(), n, rels));
}

// Line bundle on the nodal curve: the fibre at t = -1 is glued with a factor c.
inline PatchedModule twisted(const FerrandData& sq, const Scalar& c) {
  const Context& k = sq.K().context();
  auto eps = [&](const Scalar& s) {
    Scalar half(1, 2);
    return MPoly::constant(k, (1 + s) * half) + MPoly::constant(k, (1 - s) * half) * MPoly::variable(k, 0);
  };
  Matrix b(k, 1), bi(k, 1);
  b.columns.push_back({eps(c)});
  bi.columns.push_back({eps(Scalar(1) / c)});
  return make_patched(sq, PresentedModule::free(sq.B(), 1), PresentedModule::free(sq.C(), 1),
                      PresentedModule::free(sq.K(), 1), Matrix::identity(k, 1), Matrix::identity(k, 1), b, bi);
}

struct Entry {
  std::string name;
  PatchedModule module;
  bool flat;  // every component projective
};

inline std::vector<Entry> nodal_modules(const FerrandData& sq) {
  const Context& k = sq.K().context();
  const auto& pres = nodal_presentation(sq);
  const auto& A = pres.ring;
  std::vector<Entry> out;
  out.push_back({"free rank 1", free_patched(sq, 1), true});
  out.push_back({"free rank 2", free_patched(sq, 2), true});
  out.push_back({"twisted c=2", twisted(sq, Scalar(2)), true});
  out.push_back({"twisted c=-1", twisted(sq, Scalar(-1)), true});
  out.push_back({"twisted c=1/3", twisted(sq, Scalar(1, 3)), true});
  out.push_back({"skyscraper at t=2",
                 make_patched(sq, PresentedModule::free(sq.B(), 0), module(sq.C(), 1, {{"t - 2"}}),
                              PresentedModule::free(sq.K(), 0), Matrix(k, 0), Matrix(k, 0), Matrix(k, 0, 1),
                              Matrix(k, 1, 0)),
                 false});
  out.push_back({"C plus torsion at 0",
                 make_patched(sq, PresentedModule::free(sq.B(), 1), module(sq.C(), 2, {{"0", "t"}}),
                              PresentedModule::free(sq.K(), 1), Matrix::identity(k, 1), Matrix::identity(k, 1),
                              mat(k, 1, {{"1"}, {"0"}}), mat(k, 2, {{"1", "0"}})),
                 false});
  out.push_back({"torsion through the node",
                 make_patched(sq, PresentedModule::free(sq.B(), 1), module(sq.C(), 1, {{"(t^2 - 1)*(t - 2)"}}),
                              PresentedModule::free(sq.K(), 1), Matrix::identity(k, 1), Matrix::identity(k, 1),
                              Matrix::identity(k, 1), Matrix::identity(k, 1)),
                 false});
  out.push_back({"pullback of A/(a1 - 1)", pullback(sq, pres, module(A, 1, {{"a1 - 1"}})), false});
  out.push_back({"pullback of A/(a2)", pullback(sq, pres, module(A, 1, {{"a2"}})), false});
  out.push_back({"pullback of A/(a1 - 3)", pullback(sq, pres, module(A, 1, {{"a1 - 3"}})), false});
  out.push_back({"rank 2 swapped",
                 make_patched(sq, PresentedModule::free(sq.B(), 2), PresentedModule::free(sq.C(), 2),
                              PresentedModule::free(sq.K(), 2), Matrix::identity(k, 2), Matrix::identity(k, 2),
                              mat(k, 2, {{"0", "1"}, {"1", "0"}}), mat(k, 2, {{"0", "1"}, {"1", "0"}})),
                 true});
  return out;
}

}  // namespace corpus
