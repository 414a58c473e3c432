#include <random>
#include <thread>

#include "doctest.h"
#include "ferrand/module_gb.hpp"
#include "support/oracles.hpp"

using namespace ferrand;

namespace {

Context qq(std::vector<std::string> vars) { return make_context(Field::rationals(), std::move(vars)); }

std::vector<MPoly> P(const Context& c, std::initializer_list<const char*> texts) {
  std::vector<MPoly> out;
  for (auto t : texts) out.push_back(parse_poly(t, c));
  return out;
}

}  // namespace

TEST_CASE("canonical text form") {
  auto c = qq({"x", "y"});
  CHECK(parse_poly("3/2*x^2*y - 1", c).to_string() == "3/2*x^2*y - 1");
  CHECK(parse_poly("(x+y)^2 - x*x", c).to_string() == "2*x*y + y^2");
  CHECK(parse_poly("0", c).to_string() == "0");
  CHECK(parse_poly("x - x", c).is_zero());
}

TEST_CASE("mixed contexts are rejected") {
  auto a = qq({"x", "y"});
  auto b = qq({"y", "x"});
  CHECK_THROWS_AS(parse_poly("x", a) + parse_poly("x", b), MixedContext);
  auto f = make_context(Field::prime(5), {"x", "y"});
  CHECK_THROWS_AS(groebner_basis({parse_poly("x", a), parse_poly("x", f)}, MonomialOrder::grevlex()), MixedContext);
}

TEST_CASE("groebner basis examples") {
  auto c = qq({"x"});
  CHECK(groebner_basis({MPoly(c)}, MonomialOrder::grevlex()).empty());
  auto gb = groebner_basis(P(c, {"x^2 - 1", "x - 1"}), MonomialOrder::grevlex());
  REQUIRE(gb.size() == 1);
  CHECK(gb[0] == parse_poly("x - 1", c));

  auto yx = qq({"y", "x"});
  auto lex = groebner_basis(P(yx, {"y - x^2", "x*y - 1"}), MonomialOrder::lex());
  REQUIRE(lex.size() == 2);
  CHECK(lex[0] == parse_poly("x^3 - 1", yx));
  CHECK(lex[1] == parse_poly("y - x^2", yx));
}

TEST_CASE("groebner basis over a prime field") {
  auto c = make_context(Field::prime(5), {"x", "y"});
  auto gb = groebner_basis(P(c, {"x^2 + 1", "x*y - 2"}), MonomialOrder::lex());
  for (const auto& g : gb) CHECK(g.leading_term(MonomialOrder::lex()).coeff == 1);
  IdealHandle I(c, P(c, {"x^2 + 1", "x*y - 2"}));
  CHECK(I.contains(parse_poly("5*x", c)));
  CHECK(I.contains(parse_poly("(x^2+1)*y^3 + 3*(x*y-2)", c)));
}

TEST_CASE("normal form examples") {
  auto xy = qq({"x", "y"});
  IdealHandle a(xy, P(xy, {"x^2 - y"}));
  CHECK(a.normal_form(parse_poly("x^2", xy), MonomialOrder::lex()) == parse_poly("y", xy));
  IdealHandle b(xy, P(xy, {"x - 1"}));
  CHECK(b.normal_form(parse_poly("(x-1)*(x+1)", xy)).is_zero());
  IdealHandle c(xy, P(xy, {"x - y"}));
  CHECK(c.normal_form(parse_poly("x + y", xy), MonomialOrder::lex()) == parse_poly("2*y", xy));
}

TEST_CASE("elimination examples") {
  auto c = qq({"t", "u", "v"});
  IdealHandle I(c, P(c, {"u - t^2", "v - t^3"}));
  auto e = eliminate(I, std::vector<std::string>{"t"});
  REQUIRE(e.generators().size() == 1);
  MPoly g = e.generators()[0];
  // Oracle: substituting u = t^2, v = t^3 kills the generator.
  auto tt = qq({"t"});
  MPoly t = MPoly::variable(tt, 0);
  CHECK(substitute(g, {t, t.pow(2), t.pow(3)}, tt).is_zero());
  CHECK(g.total_degree() == 3);
  CHECK((g == parse_poly("v^2 - u^3", c) || g == parse_poly("u^3 - v^2", c)));

  CHECK(eliminate(I, std::vector<std::size_t>{}).generators() == I.generators());
  auto x = qq({"x"});
  CHECK(eliminate(IdealHandle(x, P(x, {"x - 1"})), std::vector<std::size_t>{0}).is_zero());
}

TEST_CASE("intersection of monomial ideals") {
  auto c = qq({"x", "y"});
  auto I = intersect(IdealHandle(c, P(c, {"x"})), IdealHandle(c, P(c, {"y"})));
  CHECK(I.equals(IdealHandle(c, P(c, {"x*y"}))));
}

TEST_CASE("degree cap raises BoundExceeded") {
  auto c = qq({"x", "y", "z"});
  Limits lim;
  lim.degree_cap = 3;
  CHECK_THROWS_AS(groebner_basis(P(c, {"x^3 - y*z^2", "y^3 - x*z^2 + 1", "z^3 - x^2*y"}), MonomialOrder::lex(), lim),
                  BoundExceeded);
}

TEST_CASE("syzygy examples") {
  auto xy = qq({"x", "y"});
  Matrix m(xy, 1);
  m.add_column(P(xy, {"x"}));
  m.add_column(P(xy, {"y"}));
  auto s = syzygy_matrix(m);
  REQUIRE(s.cols() == 1);
  Vec expect = P(xy, {"y", "-x"});
  CHECK((s.columns[0] == expect || s.columns[0] == Vec{-expect[0], -expect[1]}));

  CHECK(syzygy_matrix(Matrix::identity(xy, 3)).cols() == 0);

  auto t = qq({"t"});
  Matrix n(t, 1);
  n.add_column(P(t, {"t^2"}));
  n.add_column(P(t, {"t^3"}));
  auto s2 = syzygy_matrix(n);
  REQUIRE(s2.cols() == 1);
  Vec e2 = P(t, {"t", "-1"});
  CHECK((s2.columns[0] == e2 || s2.columns[0] == Vec{-e2[0], -e2[1]}));
  CHECK(is_zero(n * s2.columns[0]));
}

TEST_CASE("syzygies over a quotient ring") {
  auto t = qq({"t"});
  IdealHandle J(t, P(t, {"t^2"}));
  Matrix m(t, 1);
  m.add_column(P(t, {"t"}));
  auto s = syzygy_matrix(m, J);
  REQUIRE(s.cols() == 1);
  CHECK(s.columns[0][0] == parse_poly("t", t));
}

TEST_CASE("module lift recovers coefficients") {
  auto xy = qq({"x", "y"});
  Matrix m(xy, 2);
  m.add_column(P(xy, {"x", "y"}));
  m.add_column(P(xy, {"1", "x"}));
  IdealHandle zero(xy, {});
  ModuleBasis mb(m, zero, true);
  Vec w = parse_poly("x+3", xy) * m.columns[0] - parse_poly("y^2", xy) * m.columns[1];
  auto cw = mb.lift(w);
  REQUIRE(cw);
  CHECK(m * *cw == w);
  // det = x^2 - y, so (0, 1) is outside the column span.
  CHECK_FALSE(mb.contains(P(xy, {"0", "1"})));
  CHECK_FALSE(mb.lift(P(xy, {"0", "1"})).has_value());
  CHECK(mb.contains(P(xy, {"0", "x^2 - y"})));
}

// ---------------------------------------------------------------------------
// Seeded properties.

TEST_CASE("property: normal form is idempotent and decides membership") {
  std::mt19937 rng(20240611);
  for (int round = 0; round < 40; ++round) {
    Field f = round % 2 ? Field::prime(7) : Field::rationals();
    auto c = make_context(f, {"x", "y", "z"});
    std::vector<MPoly> gens;
    int ng = 1 + round % 3;
    for (int k = 0; k < ng; ++k) gens.push_back(oracle::random_poly(rng, c, 2, 3));
    IdealHandle I(c, gens);
    MonomialOrder ord = round % 3 == 0 ? MonomialOrder::lex() : MonomialOrder::grevlex();

    MPoly p = oracle::random_poly(rng, c, 3, 4);
    MPoly nf = I.normal_form(p, ord);
    CHECK(I.normal_form(nf, ord) == nf);
    CHECK(I.contains(p - nf));

    MPoly member(c);
    for (const auto& g : gens) member += oracle::random_poly(rng, c, 2, 2) * g;
    CHECK(I.normal_form(member, ord).is_zero());

    // Bounded-degree linear algebra can only witness membership.
    if (oracle::in_span(oracle::multiples_up_to(gens, 4), p)) CHECK(nf.is_zero());
    if (!nf.is_zero()) CHECK_FALSE(oracle::in_span(oracle::multiples_up_to(gens, 4), p));
  }
}

TEST_CASE("property: groebner output is reproducible and order-sorted") {
  std::mt19937 rng(77);
  for (int round = 0; round < 20; ++round) {
    auto c = qq({"x", "y", "z"});
    std::vector<MPoly> gens;
    for (int k = 0; k < 3; ++k) gens.push_back(oracle::random_poly(rng, c, 2, 3));
    auto a = groebner_basis(gens, MonomialOrder::grevlex());
    std::reverse(gens.begin(), gens.end());
    auto b = groebner_basis(gens, MonomialOrder::grevlex());
    CHECK(a == b);
    for (std::size_t k = 1; k < a.size(); ++k)
      CHECK(MonomialOrder::grevlex().less(a[k - 1].leading_term(MonomialOrder::grevlex()).exp,
                                          a[k].leading_term(MonomialOrder::grevlex()).exp));
  }
}

TEST_CASE("property: elimination stays inside the ideal and drops the variables") {
  std::mt19937 rng(99);
  for (int round = 0; round < 20; ++round) {
    auto c = qq({"t", "x", "y"});
    std::vector<MPoly> gens;
    for (int k = 0; k < 2; ++k) gens.push_back(oracle::random_poly(rng, c, 2, 3));
    IdealHandle I(c, gens);
    auto e = eliminate(I, std::vector<std::size_t>{0});
    for (const auto& g : e.generators()) {
      CHECK_FALSE(g.uses_variable(0));
      CHECK(I.contains(g));
    }
  }
}

TEST_CASE("property: concurrent basis requests agree") {
  auto c = qq({"x", "y", "z"});
  IdealHandle I(c, P(c, {"x^2 - y*z", "y^2 - x*z", "z^2 - x*y"}));
  std::vector<GroebnerPtr> got(4);
  std::vector<std::thread> ts;
  for (int k = 0; k < 4; ++k) ts.emplace_back([&, k] { got[k] = I.basis(); });
  for (auto& t : ts) t.join();
  for (int k = 1; k < 4; ++k) CHECK(got[k].get() == got[0].get());
}
