#include <random>

#include "doctest.h"
#include "ferrand/errors.hpp"
#include "ferrand/scheme.hpp"
#include "ferrand/spectral.hpp"
#include "support/squares.hpp"

using namespace ferrand;
using squares::ring;

namespace {

// Square with B = K = 0: its pushout is C itself.
FerrandData open_chart(const PresentedRing& c) {
  auto zero = ring("Z", {}, {"1"}, c.field());
  std::vector<std::string> zeros(c.nvars(), "0");
  return build_square(validate_hom(zero, zero, std::vector<MPoly>{}), validate_hom(c, zero, zeros));
}

FiberElement pair(const FerrandData& sq, const std::string& b, const std::string& c) {
  return sq.make(sq.B().parse(b), sq.C().parse(c));
}

// The nodal pinch of the affine line, and P^1 minus {1, -1} in the coordinate
// u = (t + 1)/(t - 1), glued along the complement of the node.
ChartedPushoutDatum nodal_projective() {
  FerrandData p1 = squares::nodal();
  FerrandData p2 = open_chart(ring("C2", {"u", "ui"}, {"u*ui - 1"}));
  OverlapData o = make_overlap(p1, p2, 0, 1, pair(p1, "0", "t^2 - 1"), pair(p2, "0", "u - 1"), {},
                               {"(u + 1)*s", "1/4*(u - 1)^2*ui"}, {});
  return {{p1, p2}, {o}};
}

ChartedPushoutDatum three_lines(const std::string& twist) {
  FerrandData p = open_chart(ring("C", {"t"}));
  FiberElement one = pair(p, "0", "1");
  std::vector<OverlapData> ov;
  ov.push_back(make_overlap(p, p, 0, 1, one, one, {}, {"t", "s"}, {}));
  ov.push_back(make_overlap(p, p, 0, 2, one, one, {}, {twist, "s"}, {}));
  ov.push_back(make_overlap(p, p, 1, 2, one, one, {}, {"t", "s"}, {}));
  return {{p, p, p}, ov};
}

}  // namespace

TEST_CASE("glue_pushout: single chart") {
  FerrandData p = squares::nodal();
  GluedPushout g = glue_pushout({{p}, {}});
  REQUIRE(g.charts.size() == 1);
  CHECK(g.gluings.empty());
  CHECK(g.cocycles.empty());
  REQUIRE(g.charts[0].presentation);
  auto ref = ring("A", {"x", "y"}, {"y^2 - x^3 - x^2"});
  CHECK(match_presentation(p, *g.charts[0].presentation, ref, {p.C().parse("t^2 - 1"), p.C().parse("t^3 - t")}).iso);
}

TEST_CASE("glue_pushout: nodal projective cubic") {
  ChartedPushoutDatum d = nodal_projective();
  GluedPushout g = glue_pushout(d);
  REQUIRE(g.charts.size() == 2);
  REQUIRE(g.charts[0].presentation);
  REQUIRE(g.charts[1].presentation);
  // Oracle: the chart-1 pushout is the nodal cubic y^2 = x^3 + x^2.
  auto ref = ring("A", {"x", "y"}, {"y^2 - x^3 - x^2"});
  CHECK(match_presentation(d.charts[0], *g.charts[0].presentation, ref,
                           {d.charts[0].C().parse("t^2 - 1"), d.charts[0].C().parse("t^3 - t")})
            .iso);
  // Chart 2 is its own pushout.
  CHECK(match_presentation(d.charts[1], *g.charts[1].presentation, d.charts[1].C(),
                           {d.charts[1].C().var(0), d.charts[1].C().var(1)})
            .iso);
  REQUIRE(g.gluings.size() == 1);
  CHECK(check_isomorphism(g.gluings[0].phi).iso);
  CHECK(g.overlap_is_pushout == std::vector<bool>{true});

  // Oracle for the gluing: t = (u + 1)/(u - 1) inverts to u = (t + 1)/(t - 1).
  const RingHom& hc = d.overlaps[0].inverse.c;
  const PresentedRing& l = d.overlaps[0].left.C();
  CHECK(l.equal(hc.apply(hc.source().var("u")) * (l.var("t") - l.one()), l.var("t") + l.one()));

  SUBCASE("refinement replay") {
    CHECK(refine_and_compare(g, 0, pair(d.charts[0], "1", "t^2")).iso);
    CHECK(refine_and_compare(g, 1, pair(d.charts[1], "0", "u + 1")).iso);
  }
}

TEST_CASE("glue_pushout: cocycle on triple overlaps") {
  GluedPushout good = glue_pushout(three_lines("t"));
  // One triple per corner, plus the presented pushouts.
  CHECK(good.cocycles.size() == 4);
  try {
    glue_pushout(three_lines("-t"));
    FAIL("expected CocycleError");
  } catch (const CocycleError& e) {
    CHECK(e.i() == 0);
    CHECK(e.j() == 1);
    CHECK(e.k() == 2);
    CHECK(e.witness().find("-t") != std::string::npos);
  }
}

TEST_CASE("make_overlap rejects non-isomorphisms") {
  FerrandData p = open_chart(ring("C", {"t"}));
  FiberElement one = pair(p, "0", "1");
  CHECK_THROWS_AS(make_overlap(p, p, 0, 1, one, one, {}, {"t^2", "s"}, {}), InvalidArgument);
  CHECK_THROWS_AS(make_overlap(p, p, 1, 0, one, one, {}, {"t", "s"}, {}), InvalidArgument);
}

TEST_CASE("lift_etale_affine examples") {
  auto C = ring("C", {"t"});
  auto K = ring("K", {});
  RingHom pi = validate_hom(C, K, std::vector<std::string>{"0"});

  SUBCASE("identity") {
    auto kp = make_std_etale(K, "x", "x", "1");
    EtaleLift l = lift_etale_affine(pi, kp);
    CHECK(l.base_change_iso);
    CHECK(check_isomorphism(l.algebra.structure).iso);
  }
  SUBCASE("split double cover") {
    auto kp = make_std_etale(K, "u", "u^2 - u", "1");
    CHECK(kp.ring.equal(kp.derivative_inverse, kp.ring.parse("2*u - 1")));
    EtaleLift l = lift_etale_affine(pi, kp);
    const PresentedRing& cp = l.algebra.ring;
    CHECK(cp.equal(cp.parse("(2*u - 1)^2"), cp.one()));
    // Oracle: C' = k[t][u]/(u^2 - u).
    auto ref = ring("R", {"t", "u"}, {"u^2 - u"});
    CHECK(check_isomorphism(validate_hom(ref, cp, std::vector<std::string>{"t", "u"})).iso);
    CHECK(l.base_change_iso);
    CHECK(spec_points_zero_dim(l.tensor).points.size() == 2);
  }
  SUBCASE("irreducible quadratic") {
    auto kp = make_std_etale(K, "u", "u^2 + u + 1", "1");
    EtaleLift l = lift_etale_affine(pi, kp);
    CHECK(l.base_change_iso);
    auto pts = spec_points_zero_dim(l.tensor);
    REQUIRE(pts.points.size() == 1);
    CHECK(pts.points[0].degree == 2);
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(make_std_etale(K, "u", "2*u^2 - u", "1"), InvalidArgument);
    // (u - 1)^2 over F_3: f' = 2u + 1 = 2(u - 1) is nilpotent.
    auto K3 = ring("K", {}, {}, Field::prime(3));
    CHECK_THROWS_AS(make_std_etale(K3, "u", "u^2 + u + 1", "1"), InvalidArgument);
    CHECK_THROWS_AS(make_std_etale(C, "t", "t", "1"), NameClash);
  }
}

TEST_CASE("property: etale lifts are standard etale and restrict to K'") {
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> co(-3, 3);
  auto C = ring("C", {"x"});
  std::size_t lifted = 0;
  for (int trial = 0; trial < 12; ++trial) {
    int c = co(rng);
    auto K = ring("K", {"x"}, {"x^2 - " + std::to_string(c) + "*x"});
    RingHom pi = validate_hom(C, K, std::vector<std::string>{"x"});
    std::string f = "u^2 + (" + std::to_string(co(rng)) + "*x + " + std::to_string(co(rng)) + ")*u + " +
                    std::to_string(co(rng));
    std::string g = "u + " + std::to_string(co(rng));
    std::optional<StdEtaleAlgebra> kp;
    try {
      kp = make_std_etale(K, "u", f, g);
    } catch (const InvalidArgument&) {
      continue;
    }
    if (kp->ring.is_zero_ring()) continue;
    EtaleLift l = lift_etale_affine(pi, *kp);
    const StdEtaleAlgebra& a = l.algebra;
    const PresentedRing& r = a.ring;
    // f monic of degree 2 in u, and f' invertible by the recorded certificate.
    int top = 0;
    Scalar lead = 0;
    std::vector<Term> dterms;
    for (const auto& term : a.f.terms()) {
      if (term.exp[1] > top) top = term.exp[1], lead = term.coeff;
      if (term.exp[1] == 0) continue;
      Term d = term;
      d.coeff *= term.exp[1];
      d.exp[1] -= 1;
      dterms.push_back(d);
    }
    CHECK(top == 2);
    CHECK(lead == 1);
    MPoly df = MPoly::from_terms(r.context(), dterms);
    CHECK(r.equal(df * a.derivative_inverse, r.one()));
    CHECK(l.base_change_iso);
    ++lifted;
  }
  CHECK(lifted >= 4);
}

TEST_CASE("check_datum_morphism") {
  FerrandData p = squares::nodal();
  SUBCASE("identity") { CHECK(check_datum_morphism(identity_morphism(p)).cartesian()); }
  SUBCASE("localizations and their composite") {
    DatumMorphism a = localization_morphism(p, pair(p, "1", "t^2"));
    CHECK(check_datum_morphism(a).cartesian());
    DatumMorphism c = localization_morphism(p, pair(p, "0", "t^2 - 1"));
    CHECK(check_datum_morphism(c).cartesian());
    const FerrandData& l = a.over;
    DatumMorphism b = localization_morphism(l, l.make(l.B().one(), l.C().parse("t^4")));
    CHECK(check_datum_morphism(b).cartesian());
    CHECK(check_datum_morphism(compose_morphisms(a, b)).cartesian());
  }
  SUBCASE("product projection is not a morphism") {
    TensorProduct bb = tensor_over_field(p.B(), p.B());
    TensorProduct cc = tensor_over_field(p.C(), p.C());
    TensorProduct kk = tensor_over_field(p.K(), p.K());
    MPoly t = p.K().var(0);
    FerrandData pp = build_square(
        validate_hom(bb.ring, kk.ring, std::vector<MPoly>{}),
        validate_hom(cc.ring, kk.ring, std::vector<MPoly>{kk.from_left.apply(t), kk.from_right.apply(t)}));
    DatumMorphism pr = make_datum_morphism(p, pp, bb.from_left, cc.from_left, kk.from_left);
    CartesianVerdict v = check_datum_morphism(pr);
    CHECK_FALSE(v.cartesian());
    CHECK_FALSE(v.y_square);
    CHECK_FALSE(v.y_witness.empty());
    CHECK_FALSE(v.z_square);  // K ⊗_C (C ⊗ C) = K ⊗ C, not K ⊗ K
  }
  SUBCASE("non-commuting maps are rejected") {
    auto k = p.K();
    RingHom flip = validate_hom(k, k, std::vector<std::string>{"-t"});
    CHECK_THROWS_AS(make_datum_morphism(p, p, identity_hom(p.B()), identity_hom(p.C()), flip), InvalidArgument);
  }
}
