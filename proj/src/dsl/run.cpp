#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <set>

#include "ferrand/dsl.hpp"
#include "ferrand/modules.hpp"
#include "ferrand/scheme.hpp"
#include "ferrand/spectral.hpp"
#include "ferrand/valuation.hpp"
#include "json.hpp"

namespace ferrand::dsl {

namespace {

using json = nlohmann::ordered_json;

struct Check {
  std::string name, anchor;
  bool pass = false;
  std::string witness;
};

struct Record {
  std::string operation, anchor;
  std::vector<Check> checks;
  json result = json::object();
  std::optional<std::pair<std::string, std::string>> error;  // kind, message
  bool bound_exceeded = false;

  void check(std::string name, std::string anch, bool pass, std::string witness = {}) {
    checks.push_back({std::move(name), std::move(anch), pass, std::move(witness)});
  }
  std::string status() const {
    if (bound_exceeded) return "BOUND_EXCEEDED";
    if (error) return "ERROR";
    if (checks.empty()) return "INFO";
    for (const auto& c : checks)
      if (!c.pass) return "FAIL";
    return "PASS";
  }
};

struct SquareObj {
  FerrandData sq;
  std::mutex mu;
  bool tried = false;
  std::optional<PushoutPresentation> pres;
  std::string pres_error;
};

struct ModuleObj {
  std::string over;
  std::optional<PatchedModule> patched;
  std::optional<PresentedModule> plain;
};

struct ChartsObj {
  std::vector<std::string> squares;
  std::mutex mu;
  std::vector<OverlapData> overlaps;
};

// Every declared object. Names are unique, so entries never move once
// inserted; the mutex only guards the maps themselves.
class Env {
 public:
  template <class T>
  void put(std::map<std::string, std::shared_ptr<T>>& m, const std::string& name, std::shared_ptr<T> v) {
    std::lock_guard<std::mutex> lock(mu_);
    m[name] = std::move(v);
  }
  template <class T>
  std::shared_ptr<T> get(const std::map<std::string, std::shared_ptr<T>>& m, const std::string& name,
                         const std::string& what) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = m.find(name);
    if (it == m.end()) throw InvalidArgument("'" + name + "' is not a " + what);
    return it->second;
  }

  std::map<std::string, std::shared_ptr<PresentedRing>> rings;
  std::map<std::string, std::shared_ptr<RingHom>> homs;
  std::map<std::string, std::shared_ptr<SquareObj>> squares;
  std::map<std::string, std::shared_ptr<ModuleObj>> modules;
  std::map<std::string, std::shared_ptr<LexValuationRing>> valrings;
  std::map<std::string, std::shared_ptr<SpecPoset>> posets;
  std::map<std::string, std::shared_ptr<ChartsObj>> charts;
  std::map<std::string, std::shared_ptr<StdEtaleAlgebra>> etale;

 private:
  mutable std::mutex mu_;
};

json str_list(const std::vector<MPoly>& ps) {
  json a = json::array();
  for (const auto& p : ps) a.push_back(p.to_string());
  return a;
}

class Runner {
 public:
  explicit Runner(const RunConfig& cfg) : cfg_(cfg) {
    lim_.degree_cap = cfg.degree_bound;
    lim_.probe_degree = cfg.probe_degree;
  }

  Record execute(const Statement& st) {
    Record r;
    try {
      std::visit([&](const auto& b) { exec(b, r); }, st.body);
    } catch (const BoundExceeded& e) {
      r.bound_exceeded = true;
      r.error = {e.kind(), e.what()};
    } catch (const Error& e) {
      r.error = {e.kind(), e.what()};
    } catch (const std::exception& e) {
      r.error = {"InternalError", e.what()};
    }
    return r;
  }

 private:
  // ---- helpers ----
  Field field_of(const std::string& f) const {
    if (f == "k") return cfg_.field;
    if (f == "QQ") return Field::rationals();
    return Field::prime(static_cast<std::uint32_t>(std::stoul(f.substr(1))));
  }

  PresentedRing make_ring(const std::string& name, const RingLit& lit) const {
    Context ctx = make_context(field_of(lit.field), lit.vars);
    std::vector<MPoly> rels;
    for (const auto& t : lit.relations) rels.push_back(parse_poly(t, ctx));
    return PresentedRing(name, ctx, std::move(rels));
  }

  // Images of the source variables, by name.
  std::vector<MPoly> images(const PresentedRing& src, const PresentedRing& tgt, const std::vector<Assignment>& as) const {
    std::map<std::string, MPoly> given;
    for (const auto& [v, p] : as) {
      if (!src.context()->index_of(v)) throw InvalidArgument(v + " is not a variable of " + src.name());
      if (!given.emplace(v, tgt.parse(p)).second) throw InvalidArgument(v + " is assigned twice");
    }
    std::vector<MPoly> out;
    for (const auto& v : src.context()->vars()) {
      auto it = given.find(v);
      if (it == given.end()) throw InvalidArgument("no image for " + v);
      out.push_back(it->second);
    }
    return out;
  }

  std::shared_ptr<SquareObj> square(const std::string& n) const { return env_.get(env_.squares, n, "square"); }

  FiberElement element(const FerrandData& sq, const PairLit& p) const {
    return sq.make(sq.B().parse(p.first), sq.C().parse(p.second));
  }

  // The presentation shared by later statements, always computed with the
  // configured probe degree so that it does not depend on statement order.
  const PushoutPresentation* presentation(SquareObj& s) const {
    std::lock_guard<std::mutex> lock(s.mu);
    if (!s.tried) {
      s.tried = true;
      try {
        s.pres = present_pushout(s.sq, {cfg_.probe_degree, 24});
      } catch (const BoundExceeded& e) {
        s.pres_error = e.what();
      }
    }
    return s.pres ? &*s.pres : nullptr;
  }

  const PushoutPresentation& require_presentation(SquareObj& s, const std::string& name) const {
    const PushoutPresentation* p = presentation(s);
    if (!p) throw NoPresentation("square " + name + " has no presentation: " + s.pres_error);
    return *p;
  }

  PresentedModule make_module(const ModuleLit& m) const {
    auto r = env_.get(env_.rings, m.ring, "ring");
    Matrix rel(r->context(), m.rank);
    for (const auto& col : m.relations) {
      if (col.size() != m.rank) throw InvalidArgument("relation of length " + std::to_string(col.size()) +
                                                      " in a module of rank " + std::to_string(m.rank));
      Vec v;
      for (const auto& p : col) v.push_back(r->parse(p));
      rel.columns.push_back(std::move(v));
    }
    return PresentedModule(*r, m.rank, std::move(rel));
  }

  Matrix make_matrix(const PresentedRing& ring, std::size_t rows, const std::vector<Column>& cols) const {
    Matrix m(ring.context(), rows);
    for (const auto& col : cols) {
      if (col.size() != rows) throw InvalidArgument("matrix column of length " + std::to_string(col.size()) +
                                                    ", expected " + std::to_string(rows));
      Vec v;
      for (const auto& p : col) v.push_back(ring.parse(p));
      m.columns.push_back(std::move(v));
    }
    return m;
  }

  PatchedModule make_patch(const SquareObj& s, const PatchLit& p) const {
    PresentedModule my = make_module(p.my), mz = make_module(p.mz), mt = make_module(p.mt);
    const PresentedRing& k = s.sq.K();
    return make_patched(s.sq, my, mz, mt, make_matrix(k, mt.ngens(), p.alpha), make_matrix(k, my.ngens(), p.alpha_inv),
                        make_matrix(k, mt.ngens(), p.beta), make_matrix(k, mz.ngens(), p.beta_inv));
  }

  static json flat_json(const FlatVerdict& v) {
    json j;
    j["verdict"] = v.to_string();
    j["rank"] = v.rank;
    return j;
  }

  // ---- statements ----
  void exec(const RingDecl& d, Record& r) {
    r.operation = "ring";
    r.anchor = "presented rings";
    auto ring = std::make_shared<PresentedRing>(make_ring(d.name, d.lit));
    r.result["ring"] = ring->to_string();
    env_.put(env_.rings, d.name, ring);
  }

  void exec(const HomDecl& d, Record& r) {
    r.operation = "validate_hom";
    r.anchor = "ring maps with relation certificates";
    auto s = env_.get(env_.rings, d.source, "ring");
    auto t = env_.get(env_.rings, d.target, "ring");
    auto h = std::make_shared<RingHom>(validate_hom(*s, *t, images(*s, *t, d.images), lim_));
    r.result["hom"] = h->to_string(d.name);
    env_.put(env_.homs, d.name, h);
  }

  void exec(const SquareDecl& d, Record& r) {
    r.operation = "build_square";
    r.anchor = "Ferrand datum with surjective pi";
    auto beta = env_.get(env_.homs, d.beta, "hom");
    auto pi = env_.get(env_.homs, d.pi, "hom");
    FerrandData sq = build_square(*beta, *pi, lim_);
    r.result["beta_injective"] = sq.beta_injective();
    r.result["beta_kernel"] = str_list(sq.beta_kernel().generators());
    env_.put(env_.squares, d.name, std::shared_ptr<SquareObj>(new SquareObj{sq, {}, false, {}, {}}));
  }

  void exec(const Present& p, Record& r) {
    r.operation = "present_pushout";
    r.anchor = "Ferrand squares are bicartesian";
    auto s = square(p.square);
    const FerrandData& sq = s->sq;
    int bound = p.bound.value_or(cfg_.probe_degree);
    r.result["bound"] = bound;
    std::optional<PushoutPresentation> pres;
    try {
      pres = present_pushout(sq, {bound, 24});
    } catch (const BoundExceeded& e) {
      if (!p.expect_none) throw;
      r.check("no finite presentation within the bound", "non-noetherian pushout", true, e.what());
      return;
    }
    if (p.expect_none) r.check("no finite presentation within the bound", "non-noetherian pushout", false);
    r.result["ring"] = pres->ring.to_string();
    r.result["degree"] = pres->degree_found;
    r.result["to_b"] = pres->to_b.to_string("to_b");
    r.result["to_c"] = pres->to_c.to_string("to_c");

    TensorProduct t = tensor_over_base(pres->to_b, pres->to_c, lim_);
    std::vector<MPoly> im;
    for (std::size_t i = 0; i < sq.B().nvars(); ++i) im.push_back(sq.beta().images()[i]);
    for (std::size_t i = 0; i < sq.C().nvars(); ++i) im.push_back(sq.pi().images()[i]);
    IsoCheck iso = check_isomorphism(validate_hom(t.ring, sq.K(), std::move(im), lim_), lim_);
    r.check("B (x)_A C -> K is an isomorphism", "Ferrand squares are bicartesian", iso.iso, iso.witness);
    const BicartesianReport& cert = *pres->certificate;
    r.check("bicartesian certificate", "Ferrand squares are bicartesian", cert.pass, cert.witness);

    if (p.expect) {
      PresentedRing ref = make_ring("expected", *p.expect);
      std::vector<MPoly> to_c = images(ref, sq.C(), p.via);
      bool vanish = true;
      for (const auto& rel : ref.relations())
        vanish = vanish && sq.C().is_zero(substitute(rel, to_c, sq.C().context()), lim_);
      r.check("expected relations vanish on the parametrization", "presentation oracle", vanish);
      PresentationMatch m = match_presentation(sq, *pres, ref, to_c);
      r.check("presentation isomorphic to the expected ring", "presentation oracle", m.iso, m.witness);
      if (m.iso) {
        r.result["forward"] = m.forward->to_string("forward");
        r.result["inverse"] = m.inverse->to_string("inverse");
      }
    }
  }

  void exec(const Conductor& c, Record& r) {
    r.operation = "conductor";
    r.anchor = "open complement of the conductor";
    auto s = square(c.square);
    ConductorView cv = conductor(s->sq);
    r.result["generators"] = str_list(cv.ideal.generators());
    const PushoutPresentation* pres = presentation(*s);
    std::optional<PushoutPresentation> opt;
    if (pres) opt = *pres;
    for (const auto& e : cv.elements) {
      LocalizedSquare ls = localize_square(s->sq, e, opt);
      r.check("B_f = 0 and A_f = C_f at f = " + e.c.to_string(), "open complement of the conductor",
              ls.b_zero && ls.open_iso, ls.open_iso_method);
    }
  }

  void exec(const Localize& l, Record& r) {
    r.operation = "localize_square";
    r.anchor = "localization of a Ferrand square";
    auto s = square(l.square);
    const PushoutPresentation* pres = presentation(*s);
    std::optional<PushoutPresentation> opt;
    if (pres) opt = *pres;
    LocalizedSquare ls = localize_square(s->sq, element(s->sq, l.at), opt);
    r.result["in_conductor"] = ls.in_conductor;
    r.result["b_zero"] = ls.b_zero;
    r.result["k_zero"] = ls.k_zero;
    r.result["open_iso"] = ls.open_iso;
    r.result["method"] = ls.open_iso_method;
  }

  void exec(const Member& m, Record& r) {
    r.operation = "fiber_membership";
    r.anchor = "elements of the fiber product";
    auto s = square(m.square);
    auto x = fiber_membership(s->sq, s->sq.C().parse(m.c));
    r.result["member"] = x.has_value();
    if (x) r.result["b"] = x->b.to_string();
    if (m.expect)
      r.check("membership of " + m.c, "elements of the fiber product", x.has_value() == *m.expect);
  }

  void exec(const ModuleDecl& d, Record& r) {
    auto obj = std::make_shared<ModuleObj>();
    obj->over = d.over;
    if (const auto* lit = std::get_if<ModuleLit>(&d.body)) {
      r.operation = "module";
      r.anchor = "finitely presented modules";
      obj->plain = make_module(*lit);
      r.result["module"] = obj->plain->to_string();
    } else {
      r.operation = "make_patched";
      r.anchor = "patching data";
      obj->patched = make_patch(*square(d.over), std::get<PatchLit>(d.body));
      r.result["my"] = obj->patched->my.to_string();
      r.result["mz"] = obj->patched->mz.to_string();
      r.result["mt"] = obj->patched->mt.to_string();
    }
    env_.put(env_.modules, d.name, obj);
  }

  std::pair<std::shared_ptr<ModuleObj>, std::shared_ptr<SquareObj>> patched(const std::string& name) const {
    auto m = env_.get(env_.modules, name, "module");
    if (!m->patched) throw InvalidArgument(name + " is not a patched module over a square");
    return {m, square(m->over)};
  }

  void exec(const CheckAdjunction& c, Record& r) {
    r.operation = "counit_check, unit_check";
    r.anchor = "patching adjunction";
    std::shared_ptr<ModuleObj> m;
    std::shared_ptr<SquareObj> s;
    if (c.patch) {
      s = square(c.target);
      m = std::make_shared<ModuleObj>(ModuleObj{c.target, make_patch(*s, *c.patch), std::nullopt});
    } else {
      std::tie(m, s) = patched(c.target);
    }
    const PushoutPresentation& pres = require_presentation(*s, m->over);
    AdjunctionReport counit = counit_check(s->sq, pres, *m->patched);
    r.check("counit phi^* phi_* M -> M is an isomorphism", "patching adjunction", counit.iso, counit.witness);
    MatchedPairModule pf = pushforward(s->sq, *m->patched, pres);
    r.result["pushforward"] = pf.presentation->to_string();
    FlatVerdict flat = flat_fp_test(*pf.presentation);
    r.result["flat"] = flat_json(flat);
    if (flat.kind == FlatVerdict::Kind::Projective) {
      AdjunctionReport unit = unit_check(s->sq, pres, *pf.presentation);
      r.check("unit N -> phi_* phi^* N is an isomorphism for N = phi_* M", "equivalence on flat modules", unit.iso,
              unit.witness);
    }
  }

  void exec(const Pushforward& p, Record& r) {
    r.operation = "pushforward";
    r.anchor = "fiber product of modules";
    auto [m, s] = patched(p.module);
    const PushoutPresentation& pres = require_presentation(*s, m->over);
    MatchedPairModule pf = pushforward(s->sq, *m->patched, pres);
    r.result["generators"] = pf.generators.size();
    r.result["presentation"] = pf.presentation->to_string();
    r.result["flat"] = flat_json(flat_fp_test(*pf.presentation));
  }

  void exec(const CheckCartesian& c, Record& r) {
    r.operation = "check_datum_morphism";
    r.anchor = "morphisms of pushout data";
    auto s = square(c.square);
    CartesianVerdict v = check_datum_morphism(localization_morphism(s->sq, element(s->sq, c.at)));
    r.check("T' = T x_Y Y'", "morphisms of pushout data", v.y_square, v.y_witness);
    r.check("T' = T x_Z Z'", "morphisms of pushout data", v.z_square, v.z_witness);
  }

  LexValuationRing valring(const ValExpr& e) const {
    switch (e.kind) {
      case ValExpr::Kind::Dvr: return LexValuationRing::dvr(e.name, cfg_.field);
      case ValExpr::Kind::Name: return *env_.get(env_.valrings, e.name, "valuation ring");
      case ValExpr::Kind::Compose: return compose(valring(e.children[0]), valring(e.children[1]));
    }
    throw InvalidArgument("bad valuation expression");
  }

  void exec(const ValringDecl& d, Record& r) {
    r.operation = "compose";
    r.anchor = "composite valuation rings";
    auto v = std::make_shared<LexValuationRing>(valring(d.expr));
    r.result["ring"] = v->to_string();
    r.result["rank"] = v->rank();
    env_.put(env_.valrings, d.name, v);
  }

  void exec(const Suite& s, Record& r) {
    r.operation = "conductor_chain_suite";
    r.anchor = "non-noetherian conductor chain";
    ChainSuiteReport rep = conductor_chain_suite(s.n);
    r.result["n"] = rep.n;
    r.result["ring"] = rep.ring.to_string();
    r.result["witness"] = rep.witness.to_string();
    r.result["witness_value"] = value_text(rep.witness_value);
    r.result["conductor"] = rep.conductor.to_string();
    r.result["I_n"] = rep.i_n.to_string();
    r.result["I_next"] = rep.i_next.to_string();
    json comps = json::array();
    for (const auto& [name, text] : rep.components) comps.push_back({{"component", name}, {"value", text}});
    r.result["components"] = comps;
    r.result["pushforward"] = rep.pushforward;
    r.result["unit_kernel_witness"] = rep.unit_kernel_witness;
    r.result["chain_reading"] = rep.chain_reading;
    r.check("I_n is strictly contained in I_(n+1)", "strict conductor chain", rep.chain_strict, rep.witness.to_string());
    r.check("conductor is not finitely generated", "non-noetherian conductor chain",
            !rep.conductor_fg.finitely_generated);
    r.check("components finitely presented", "components independent of n", rep.components_finitely_presented);
    r.check("components independent of n", "components independent of n", rep.components_independent_of_n);
    r.check("unit A'_n -> phi_* phi^* A'_n is not injective", "outside the essential image", !rep.unit_injective,
            rep.unit_kernel_witness);
  }

  void exec(const PosetDecl& d, Record& r) {
    r.operation = "spec_poset";
    r.anchor = "finite spectral spaces";
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    auto idx = [&](const std::string& n) {
      auto [it, fresh] = index.emplace(n, names.size());
      if (fresh) names.push_back(n);
      return it->second;
    };
    for (const auto& chain : d.chains) {
      for (std::size_t k = 0; k < chain.size(); ++k) {
        std::size_t b = idx(chain[k]);
        if (k > 0) edges.emplace_back(idx(chain[k - 1]), b);
      }
    }
    auto p = std::make_shared<SpecPoset>(names, edges);
    r.result["poset"] = p->to_string();
    env_.put(env_.posets, d.name, p);
  }

  static PointMap point_map(const SpecPoset& from, const SpecPoset& to,
                            const std::vector<std::pair<std::string, std::string>>& pairs) {
    PointMap m(from.size(), SIZE_MAX);
    for (const auto& [a, b] : pairs) {
      auto i = from.index_of(a), j = to.index_of(b);
      if (!i) throw InvalidArgument("no point " + a);
      if (!j) throw InvalidArgument("no point " + b);
      m[*i] = *j;
    }
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] == SIZE_MAX) throw InvalidArgument("no image for point " + from.names()[i]);
    return m;
  }

  void exec(const TopPush& t, Record& r) {
    r.operation = "topological_pushout";
    r.anchor = "pushout of underlying spaces";
    auto y = env_.get(env_.posets, t.y, "poset");
    auto z = env_.get(env_.posets, t.z, "poset");
    auto tt = env_.get(env_.posets, t.t, "poset");
    std::optional<SpecPoset> ref;
    if (t.expect) ref = *env_.get(env_.posets, *t.expect, "poset");
    PushoutTopReport rep =
        topological_pushout(*y, *z, *tt, point_map(*tt, *y, t.f), point_map(*tt, *z, t.g), ref);
    r.result["space"] = rep.space.to_string();
    r.result["quotient_enumerated"] = rep.quotient_enumerated;
    const std::string a = "pushout of underlying spaces";
    r.check("|X| = |Y| + |Z \\ T|", a, rep.partition);
    r.check("Y -> X is a closed embedding", a, rep.y_closed_embedding);
    r.check("Z \\ T -> X is an open embedding", a, rep.u_open_embedding);
    r.check("jointly surjective", a, rep.jointly_surjective);
    r.check("the two maps agree on T", a, rep.agree_on_t);
    if (rep.quotient_enumerated) r.check("quotient topology is the order topology", a, rep.order_topology_matches);
    if (rep.matches_reference) r.check("homeomorphic to the expected space", a, *rep.matches_reference);
    env_.put(env_.posets, t.name, std::make_shared<SpecPoset>(rep.space));
  }

  void exec(const ChartsDecl& c, Record& r) {
    r.operation = "charts";
    r.anchor = "open affine coverings";
    auto obj = std::make_shared<ChartsObj>();
    obj->squares = c.squares;
    r.result["charts"] = c.squares;
    env_.put(env_.charts, c.name, obj);
  }

  void exec(const OverlapDecl& o, Record& r) {
    r.operation = "make_overlap";
    r.anchor = "gluing along localizations";
    auto d = env_.get(env_.charts, o.datum, "chart datum");
    auto in_range = [&](int i, const std::string& name) {
      if (i < 1 || static_cast<std::size_t>(i) > d->squares.size())
        throw InvalidArgument("chart " + std::to_string(i) + " is out of range");
      if (d->squares[static_cast<std::size_t>(i - 1)] != name)
        throw InvalidArgument("chart " + std::to_string(i) + " of " + o.datum + " is not " + name);
    };
    in_range(o.i, o.left);
    in_range(o.j, o.right);
    auto si = square(o.left), sj = square(o.right);
    auto corner = [&](const char* k) {
      auto it = o.maps.find(k);
      return it == o.maps.end() ? std::vector<std::string>{} : it->second;
    };
    OverlapData od = make_overlap(si->sq, sj->sq, static_cast<std::size_t>(o.i - 1), static_cast<std::size_t>(o.j - 1),
                                  element(si->sq, o.u), element(sj->sq, o.v), corner("B"), corner("C"), corner("K"));
    r.result["b"] = od.iso.b.to_string("h_B");
    r.result["c"] = od.iso.c.to_string("h_C");
    r.result["k"] = od.iso.k.to_string("h_K");
    r.result["c_inverse"] = od.inverse.c.to_string("h_C^-1");
    std::lock_guard<std::mutex> lock(d->mu);
    d->overlaps.push_back(std::move(od));
  }

  void exec(const Glue& g, Record& r) {
    r.operation = "glue_pushout";
    r.anchor = "gluing affine pushouts";
    auto d = env_.get(env_.charts, g.datum, "chart datum");
    ChartedPushoutDatum datum;
    for (const auto& n : d->squares) datum.charts.push_back(square(n)->sq);
    {
      std::lock_guard<std::mutex> lock(d->mu);
      datum.overlaps = d->overlaps;
    }
    std::optional<GluedPushout> result;
    try {
      result = glue_pushout(datum, {cfg_.probe_degree, 24});
    } catch (const CocycleError& e) {
      r.check("cocycle on triple overlaps", "gluing affine pushouts", false,
              "charts (" + std::to_string(e.i() + 1) + ", " + std::to_string(e.j() + 1) + ", " +
                  std::to_string(e.k() + 1) + "): " + e.witness());
      return;
    }
    const GluedPushout& glued = *result;
    json charts = json::array();
    for (const auto& c : glued.charts)
      charts.push_back(c.presentation ? c.presentation->ring.to_string() : c.presentation_note);
    r.result["charts"] = charts;
    json gl = json::array();
    for (const auto& e : glued.gluings)
      gl.push_back("(" + std::to_string(e.i + 1) + ", " + std::to_string(e.j + 1) + ") " + e.phi.to_string("phi"));
    r.result["gluings"] = gl;
    r.result["triples_checked"] = glued.cocycles.size();
    r.check("cocycle on triple overlaps", "gluing affine pushouts", true);
    for (std::size_t k = 0; k < glued.overlap_is_pushout.size(); ++k) {
      const auto& o = datum.overlaps[k];
      r.check("overlap (" + std::to_string(o.i + 1) + ", " + std::to_string(o.j + 1) +
                  ") of pushouts is the pushout of the overlap",
              "gluing affine pushouts", glued.overlap_is_pushout[k]);
    }
    if (g.refine) {
      std::size_t i = static_cast<std::size_t>(*g.refine - 1);
      if (*g.refine < 1 || i >= datum.charts.size()) throw InvalidArgument("no chart " + std::to_string(*g.refine));
      RefinementReport rr = refine_and_compare(glued, i, element(datum.charts[i], g.at), {cfg_.probe_degree, 24});
      r.check("refined covering agrees chart by chart", "independence of the covering", rr.iso, rr.witness);
    }
  }

  void exec(const EtaleDecl& e, Record& r) {
    r.operation = "make_std_etale";
    r.anchor = "standard etale algebras";
    auto base = env_.get(env_.rings, e.base, "ring");
    auto a = std::make_shared<StdEtaleAlgebra>(make_std_etale(*base, e.var, e.f, e.g, lim_));
    r.result["ring"] = a->ring.to_string();
    r.result["derivative_inverse"] = a->derivative_inverse.to_string();
    env_.put(env_.etale, e.name, a);
  }

  void exec(const LiftEtale& l, Record& r) {
    r.operation = "lift_etale_affine";
    r.anchor = "affine etale lifting";
    auto a = env_.get(env_.etale, l.algebra, "etale algebra");
    auto pi = env_.get(env_.homs, l.along, "hom");
    EtaleLift lift = lift_etale_affine(*pi, *a, lim_);
    const StdEtaleAlgebra& alg = lift.algebra;
    const std::size_t x = alg.base.nvars();
    r.result["ring"] = alg.ring.to_string();
    r.result["f"] = alg.f.to_string();
    r.result["g"] = alg.g.to_string();
    r.result["derivative_inverse"] = alg.derivative_inverse.to_string();
    r.result["tensor"] = lift.tensor.to_string();
    MPoly df = partial_derivative(alg.f, x);
    r.check("f' * certificate = 1", "affine etale lifting",
            alg.ring.equal(df * alg.derivative_inverse, alg.ring.one(), lim_));
    r.check("C' (x)_C K = K'", "affine etale lifting", lift.base_change_iso, lift.witness);
  }

  RunConfig cfg_;
  Limits lim_;
  mutable Env env_;
};

json record_json(std::size_t index, const Statement& st, const Record& r) {
  json j;
  j["index"] = index + 1;
  j["line"] = st.span.line;
  j["statement"] = print(st);
  j["operation"] = r.operation;
  j["anchor"] = r.anchor;
  j["status"] = r.status();
  json checks = json::array();
  for (const auto& c : r.checks) {
    json cj;
    cj["check"] = c.name;
    cj["anchor"] = c.anchor;
    cj["verdict"] = c.pass ? "PASS" : "FAIL";
    if (!c.witness.empty()) cj["witness"] = c.witness;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["result"] = r.result;
  if (r.error) j["error"] = {{"kind", r.error->first}, {"message", r.error->second}};
  return j;
}

bool failed(const Record& r) {
  std::string s = r.status();
  return s == "FAIL" || s == "ERROR" || s == "BOUND_EXCEEDED";
}

// Waves of statements whose dependencies all lie in earlier waves. A
// statement depends on the declarations it reads and on every earlier
// statement touching a chart datum it extends.
std::vector<std::vector<std::size_t>> waves(const Script& script) {
  const auto& sts = script.statements;
  std::vector<int> level(sts.size(), 0);
  std::map<std::string, std::vector<std::size_t>> touched;
  for (std::size_t i = 0; i < sts.size(); ++i) {
    std::vector<std::string> refs = referenced_names(sts[i]);
    bool extends = std::holds_alternative<OverlapDecl>(sts[i].body);
    for (const auto& n : refs) {
      for (std::size_t j : touched[n]) {
        bool writer = declared_name(sts[j]) == n || std::holds_alternative<OverlapDecl>(sts[j].body);
        if (writer || (extends && n == refs.front())) level[i] = std::max(level[i], level[j] + 1);
      }
      touched[n].push_back(i);
    }
    if (auto d = declared_name(sts[i])) touched[*d].push_back(i);
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < sts.size(); ++i) {
    std::size_t l = static_cast<std::size_t>(level[i]);
    if (out.size() <= l) out.resize(l + 1);
    out[l].push_back(i);
  }
  return out;
}

}  // namespace

RunResult run(const Script& script, const RunConfig& cfg) {
  Runner runner(cfg);
  const auto& sts = script.statements;
  std::vector<std::optional<Record>> records(sts.size());
  bool stop = false;

  if (cfg.parallel) {
    for (const auto& wave : waves(script)) {
      std::vector<std::future<Record>> fut;
      for (std::size_t i : wave) fut.push_back(std::async(std::launch::async, [&, i] { return runner.execute(sts[i]); }));
      for (std::size_t k = 0; k < wave.size(); ++k) records[wave[k]] = fut[k].get();
      for (std::size_t i : wave) stop = stop || (cfg.fail_fast && failed(*records[i]));
      if (stop) break;
    }
  } else {
    for (std::size_t i = 0; i < sts.size() && !stop; ++i) {
      records[i] = runner.execute(sts[i]);
      stop = cfg.fail_fast && failed(*records[i]);
    }
  }

  json report;
  report["schema"] = 1;
  report["config"] = {{"field", cfg.field.name()},
                      {"degree_bound", cfg.degree_bound},
                      {"probe_degree", cfg.probe_degree},
                      {"seed", cfg.seed},
                      {"fail_fast", cfg.fail_fast}};
  json recs = json::array();
  std::size_t pass = 0, fail = 0, error = 0, bound = 0, info = 0, executed = 0;
  std::string text;
  for (std::size_t i = 0; i < sts.size(); ++i) {
    if (!records[i]) continue;
    const Record& r = *records[i];
    ++executed;
    std::string s = r.status();
    pass += s == "PASS";
    fail += s == "FAIL";
    error += s == "ERROR";
    bound += s == "BOUND_EXCEEDED";
    info += s == "INFO";
    recs.push_back(record_json(i, sts[i], r));
    text += "[" + s + "] " + std::to_string(i + 1) + " " + print(sts[i]) + "\n";
    for (const auto& c : r.checks)
      text += std::string("    ") + (c.pass ? "PASS " : "FAIL ") + c.name + (c.witness.empty() ? "" : " -- " + c.witness) + "\n";
    if (r.error) text += "    " + r.error->first + ": " + r.error->second + "\n";
  }
  RunResult out;
  out.exit_code = bound ? 3 : (fail || error) ? 1 : 0;
  report["records"] = recs;
  report["summary"] = {{"statements", sts.size()}, {"executed", executed}, {"pass", pass},   {"fail", fail},
                       {"error", error},            {"bound_exceeded", bound}, {"info", info},
                       {"exit_code", out.exit_code}};
  out.json = report.dump(2) + "\n";
  out.text = std::move(text);
  return out;
}

}  // namespace ferrand::dsl
