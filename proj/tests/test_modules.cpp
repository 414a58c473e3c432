#include <random>

#include "doctest.h"
#include "support/module_corpus.hpp"

using namespace ferrand;
using corpus::mat;
using corpus::module;
using squares::ring;

namespace {

// A pair (b, f) lies in the twisted bundle iff f(1) = b and c f(-1) = b.
bool twisted_rule(const MPoly& b, const MPoly& f, const Scalar& c) {
  auto at = [&](long v) {
    Scalar s = 0, pw = 1;
    std::map<int, Scalar> by_deg;
    for (const auto& t : f.terms()) by_deg[t.exp[0]] += t.coeff;
    for (int d = 0; !by_deg.empty() && d <= by_deg.rbegin()->first; ++d, pw *= v) s += by_deg[d] * pw;
    return s;
  };
  Scalar bb = b.is_zero() ? Scalar(0) : b.constant_term();
  return at(1) == bb && c * at(-1) == bb;
}

}  // namespace

TEST_CASE("prune removes generators killed by unit entries") {
  auto R = ring("R", {"t"});
  auto m = module(R, 2, {{"t", "0"}, {"1", "t"}});
  auto p = prune(m);
  REQUIRE(p.module.ngens() == 1);
  REQUIRE(p.module.relations().cols() == 1);
  CHECK(p.module.relations().at(0, 0) == R.parse("-t^2"));
  CHECK(p.kept == std::vector<std::size_t>{1});
  // e0 = -t e1 in the quotient.
  CHECK(p.to_pruned.at(0, 0) == R.parse("-t"));
  CHECK(p.to_pruned.at(0, 1) == R.one());
}

TEST_CASE("certify_module_iso examples") {
  auto R = ring("R", {"t"});
  auto unitq = module(R, 1, {{"t^2 - 1"}});
  auto r = certify_module_iso(unitq, unitq, mat(R.context(), 1, {{"t"}}));
  CHECK(r.iso);
  REQUIRE(r.inverse);
  CHECK(unitq.equal({r.inverse->at(0, 0)}, {R.parse("t")}));

  auto nil = module(R, 1, {{"t^2"}});
  auto n = certify_module_iso(nil, nil, mat(R.context(), 1, {{"t"}}));
  CHECK_FALSE(n.iso);
  CHECK(n.witness.find("cokernel") != std::string::npos);

  auto f = PresentedModule::free(R, 1);
  auto q = module(R, 1, {{"t"}});
  auto k = certify_module_iso(f, q, Matrix::identity(R.context(), 1));
  CHECK_FALSE(k.iso);
  CHECK(k.witness == "kernel contains (t)");

  auto bad = certify_module_iso(q, f, Matrix::identity(R.context(), 1));
  CHECK_FALSE(bad.iso);
  CHECK(bad.witness.find("not well defined") != std::string::npos);
}

TEST_CASE("flat_fp_test examples") {
  auto R = ring("R", {"t"});
  for (std::size_t r : {0u, 1u, 3u}) {
    auto v = flat_fp_test(PresentedModule::free(R, r));
    CHECK(v.kind == FlatVerdict::Kind::Projective);
    CHECK(v.rank == static_cast<int>(r));
  }
  auto v = flat_fp_test(module(R, 1, {{"t"}}));
  CHECK(v.kind == FlatVerdict::Kind::NotFlat);
  CHECK(v.failing_index == 0);
  CHECK(v.failing_ideal == "(t)");

  auto S = ring("S", {"t"}, {"t^2 - t"});
  auto w = flat_fp_test(module(S, 1, {{"t"}}));
  CHECK(w.kind == FlatVerdict::Kind::NotConstantRank);

  // A presentation with a redundant generator still reads as rank 1.
  auto x = flat_fp_test(module(R, 2, {{"1", "t"}}));
  CHECK(x.kind == FlatVerdict::Kind::Projective);
  CHECK(x.rank == 1);
}

TEST_CASE("fitting ideals of a diagonal presentation") {
  auto R = ring("R", {"x", "y"});
  auto m = module(R, 2, {{"x", "0"}, {"0", "y"}});
  CHECK(fitting_ideal(m, 0) == std::vector<MPoly>{R.parse("x*y")});
  auto f1 = fitting_ideal(m, 1);
  CHECK(f1.size() == 2);
  CHECK(fitting_ideal(m, 2) == std::vector<MPoly>{R.one()});
}

TEST_CASE("make_patched rejects a gluing that is not invertible") {
  auto sq = squares::nodal();
  const Context& k = sq.K().context();
  auto F = [&](const PresentedRing& r) { return PresentedModule::free(r, 1); };
  CHECK_THROWS_AS(make_patched(sq, F(sq.B()), F(sq.C()), F(sq.K()), mat(k, 1, {{"t + 1"}}), mat(k, 1, {{"1"}}),
                               Matrix::identity(k, 1), Matrix::identity(k, 1)),
                  InvalidArgument);
  CHECK_NOTHROW(make_patched(sq, F(sq.B()), F(sq.C()), F(sq.K()), mat(k, 1, {{"t"}}), mat(k, 1, {{"t"}}),
                             Matrix::identity(k, 1), Matrix::identity(k, 1)));
}

TEST_CASE("pullback examples on the nodal square") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  const auto& A = pres.ring;

  auto one = pullback(sq, pres, PresentedModule::free(A, 1));
  CHECK(one.my.ngens() == 1);
  CHECK(one.mz.relations().cols() == 0);

  auto m = pullback(sq, pres, module(A, 1, {{"a1 - 1"}}));
  // Componentwise tensor: B ⊗ A/(x) = k, C ⊗ A/(x) = k[t]/(t^2 - 1).
  CHECK(m.my.is_zero({sq.B().zero()}));
  CHECK_FALSE(m.my.is_zero({sq.B().one()}));
  REQUIRE(m.mz.relations().cols() == 1);
  CHECK(IdealHandle(sq.C().context(), {m.mz.relations().at(0, 0)})
            .equals(IdealHandle(sq.C().context(), {sq.C().parse("t^2 - 1")})));
  CHECK(m.mt.is_zero({sq.K().zero()}));
  CHECK_FALSE(m.mt.is_zero({sq.K().one()}));

  auto z = pullback(sq, pres, PresentedModule::free(A, 0));
  CHECK(z.my.ngens() == 0);
  CHECK(z.mz.ngens() == 0);
  CHECK(z.mt.ngens() == 0);
}

TEST_CASE("pushforward of the structure triple is free of rank 1") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  auto bare = pushforward(sq, free_patched(sq, 1));
  CHECK_FALSE(bare.presentation);
  CHECK(bare.contains(sq, {sq.B().one()}, {sq.C().one()}));
  CHECK_FALSE(bare.contains(sq, {sq.B().one()}, {sq.C().parse("t")}));

  auto pf = pushforward(sq, free_patched(sq, 1), pres);
  REQUIRE(pf.presentation);
  CHECK(pf.presentation->ngens() == 1);
  CHECK(pf.presentation->relations().cols() == 0);
  for (const auto& [y, z] : pf.generators) CHECK(pf.contains(sq, y, z));
}

TEST_CASE("pushforward after pullback of free rank 2 is free of rank 2") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  auto f2 = PresentedModule::free(pres.ring, 2);
  auto pf = pushforward(sq, pullback(sq, pres, f2), pres);
  REQUIRE(pf.presentation);
  auto v = flat_fp_test(*pf.presentation);
  CHECK(v.kind == FlatVerdict::Kind::Projective);
  CHECK(v.rank == 2);
  auto u = unit_check(sq, pres, f2);
  CHECK(u.iso);
}

TEST_CASE("twisted nodal line bundles") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  for (Scalar c : {Scalar(2), Scalar(-1), Scalar(1, 3), Scalar(1)}) {
    CAPTURE(c.get_str());
    auto m = corpus::twisted(sq, c);
    auto pf = pushforward(sq, m, pres);
    REQUIRE(pf.presentation);
    for (const auto& [y, z] : pf.generators) {
      CHECK(pf.contains(sq, y, z));
      CHECK(twisted_rule(y[0], z[0], c));
    }
    auto v = flat_fp_test(*pf.presentation);
    CHECK(v.kind == FlatVerdict::Kind::Projective);
    CHECK(v.rank == 1);
    auto g = find_free_generator(sq, m, 4);
    CHECK(g.found == (c == 1));
    CHECK(counit_check(sq, pres, m).iso);
  }
}

TEST_CASE("adjunction examples") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  auto m = pullback(sq, pres, module(pres.ring, 1, {{"a1 - 1"}}));
  auto c = counit_check(sq, pres, m);
  CHECK(c.iso);
  CHECK(c.components.size() == 3);
  CHECK(unit_check(sq, pres, PresentedModule::free(pres.ring, 1)).iso);
}

TEST_CASE("property: counit is an isomorphism across the corpus") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  for (const auto& e : corpus::nodal_modules(sq)) {
    CAPTURE(e.name);
    auto r = counit_check(sq, pres, e.module);
    CHECK(r.iso);
    if (!r.iso) MESSAGE(r.witness);
  }
}

TEST_CASE("property: flat components give a flat pushforward of the same rank") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  for (const auto& e : corpus::nodal_modules(sq)) {
    CAPTURE(e.name);
    auto vy = flat_fp_test(e.module.my), vz = flat_fp_test(e.module.mz);
    bool flat = vy.kind == FlatVerdict::Kind::Projective && vz.kind == FlatVerdict::Kind::Projective;
    CHECK(flat == e.flat);
    auto pf = pushforward(sq, e.module, pres);
    REQUIRE(pf.presentation);
    CHECK(pf.generators.size() == pf.presentation->ngens());
    if (!flat) continue;
    auto v = flat_fp_test(*pf.presentation);
    CHECK(v.kind == FlatVerdict::Kind::Projective);
    CHECK(v.rank == vz.rank);
    // Round trip through the equivalence of flat objects.
    CHECK(unit_check(sq, pres, *pf.presentation).iso);
  }
}

TEST_CASE("property: random rank-2 gluings by unipotent scalar matrices") {
  auto sq = squares::nodal();
  const auto& pres = corpus::nodal_presentation(sq);
  const Context& k = sq.K().context();
  std::mt19937 rng(20261016);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 4; ++trial) {
    // beta = [[1, s t], [0, 1]] with inverse [[1, -s t], [0, 1]].
    int s = coef(rng);
    CAPTURE(s);
    Matrix b = mat(k, 2, {{"1", "0"}, {std::to_string(s) + "*t", "1"}});
    Matrix bi = mat(k, 2, {{"1", "0"}, {std::to_string(-s) + "*t", "1"}});
    auto m = make_patched(sq, PresentedModule::free(sq.B(), 2), PresentedModule::free(sq.C(), 2),
                          PresentedModule::free(sq.K(), 2), Matrix::identity(k, 2), Matrix::identity(k, 2), b, bi);
    CHECK(counit_check(sq, pres, m).iso);
    auto pf = pushforward(sq, m, pres);
    REQUIRE(pf.presentation);
    auto v = flat_fp_test(*pf.presentation);
    CHECK(v.kind == FlatVerdict::Kind::Projective);
    CHECK(v.rank == 2);
  }
}
