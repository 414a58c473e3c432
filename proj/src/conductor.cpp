#include "ferrand/conductor.hpp"

#include <algorithm>

namespace ferrand {

FerrandData::FerrandData(RingHom beta, RingHom pi)
    : beta_(std::move(beta)), pi_(std::move(pi)), beta_kernel_(beta_.source().context(), {}) {}

FerrandData build_square(const RingHom& beta, const RingHom& pi, const Limits& limits) {
  require_same(beta.target().context(), pi.target().context());
  if (!beta.target().ideal().equals(pi.target().ideal(), limits))
    throw InvalidArgument("beta and pi have different target rings");
  FerrandData sq(beta, pi);
  sq.limits_ = limits;
  sq.surj_ = certify_surjective(pi, limits);
  sq.beta_graph_ = std::make_shared<HomGraph>(beta, limits);
  sq.beta_kernel_ = sq.beta_graph_->kernel();
  return sq;
}

bool FerrandData::matched(const MPoly& b, const MPoly& c) const {
  return K().equal(beta_.apply(b), pi_.apply(c), limits_);
}

FiberElement FerrandData::make(const MPoly& b, const MPoly& c) const {
  MPoly kb = beta_.apply(b);
  MPoly kc = pi_.apply(c);
  if (kb != kc)
    throw InvalidArgument("(" + b.to_string() + ", " + c.to_string() + ") is not a matched pair: " + kb.to_string() +
                          " != " + kc.to_string() + " in " + K().name());
  return {B().reduce(b, limits_), C().reduce(c, limits_), kb};
}

FiberElement FerrandData::add(const FiberElement& x, const FiberElement& y) const { return make(x.b + y.b, x.c + y.c); }
FiberElement FerrandData::sub(const FiberElement& x, const FiberElement& y) const { return make(x.b - y.b, x.c - y.c); }
FiberElement FerrandData::mul(const FiberElement& x, const FiberElement& y) const { return make(x.b * y.b, x.c * y.c); }
FiberElement FerrandData::one() const { return make(B().one(), C().one()); }

bool FerrandData::equal(const FiberElement& x, const FiberElement& y) const {
  return B().equal(x.b, y.b, limits_) && C().equal(x.c, y.c, limits_);
}

std::optional<FiberElement> fiber_membership(const FerrandData& sq, const MPoly& c) {
  require_same(c.context(), sq.C().context());
  auto b = sq.beta_graph().preimage(sq.pi().apply(c));
  if (!b) return std::nullopt;
  return sq.make(*b, c);
}

// ---------------------------------------------------------------------------

FiberSpace::FiberSpace(const FerrandData& sq) : sq_(&sq) {}

std::vector<FiberElement> FiberSpace::extend_to(int d) {
  std::vector<FiberElement> out;
  const PresentedRing& C = sq_->C();
  const Context& cctx = C.context();
  auto cgb = C.ideal().basis(MonomialOrder::grevlex(), sq_->limits());
  std::vector<Exponent> leads;
  for (const auto& g : cgb->polys()) leads.push_back(g.leading_term(MonomialOrder::grevlex()).exp);
  const MonomialOrder grevlex = MonomialOrder::grevlex();
  const Field& kf = sq_->K().field();

  for (int e = degree_ + 1; e <= d; ++e) {
    sq_->limits().poll();
    auto monos = monomials_of_degree(cctx->nvars(), e);
    std::sort(monos.begin(), monos.end(), [&](const Exponent& a, const Exponent& b) { return grevlex.less(a, b); });
    for (const auto& m : monos) {
      bool standard = std::none_of(leads.begin(), leads.end(), [&](const Exponent& l) { return divides(l, m); });
      if (!standard) continue;
      auto split = sq_->beta_graph().split(sq_->pi().apply(MPoly::monomial(cctx, m)));
      Pivot row{{{m, Scalar(1)}}, std::move(split.obstruction), std::move(split.preimage)};
      while (!row.obstruction.is_zero()) {
        const Term& lead = row.obstruction.terms().front();
        auto it = pivots_.find(lead.exp);
        if (it == pivots_.end()) break;
        const Pivot& pv = it->second;
        Scalar f = kf.div(lead.coeff, pv.obstruction.terms().front().coeff);
        MPoly fpoly = MPoly::constant(row.obstruction.context(), f);
        row.obstruction -= fpoly * pv.obstruction;
        row.preimage -= MPoly::constant(row.preimage.context(), f) * pv.preimage;
        for (const auto& [mm, cc] : pv.combination) row.combination.push_back({mm, kf.neg(kf.mul(f, cc))});
      }
      if (row.obstruction.is_zero()) {
        std::vector<Term> terms;
        for (auto& [mm, cc] : row.combination) terms.push_back({mm, cc});
        MPoly c = MPoly::from_terms(cctx, std::move(terms));
        out.push_back(sq_->make(row.preimage, c));
      } else {
        Exponent key = row.obstruction.terms().front().exp;
        pivots_.emplace(std::move(key), std::move(row));
      }
    }
    degree_ = e;
  }
  return out;
}

// ---------------------------------------------------------------------------

ConductorView conductor(const FerrandData& sq) {
  IdealHandle ker = kernel(sq.pi(), sq.limits());
  ConductorView v{ker, {}, 0};
  for (const auto& g : ker.generators()) v.elements.push_back(sq.make(sq.B().zero(), g));
  std::vector<MPoly> with_rels = ker.generators();
  for (const auto& r : sq.C().relations()) with_rels.push_back(r);
  IdealHandle in_c(sq.C().context(), with_rels);
  FiberSpace fs(sq);
  int top = sq.limits().probe_degree;
  for (const auto& x : fs.extend_to(top)) {
    if (!sq.B().is_zero(x.b)) continue;
    if (!in_c.contains(x.c, sq.limits()))
      throw InvalidArgument("conductor check failed: (0, " + x.c.to_string() + ") is in A but not in ker(pi)");
  }
  v.verified_degree = top;
  return v;
}

// ---------------------------------------------------------------------------

namespace {

// Where A embeds: C itself when β is injective, otherwise B × C.
struct Ambient {
  std::optional<ProductRing> product;
  PresentedRing ring;

  static Ambient of(const FerrandData& sq) {
    if (sq.beta_injective()) return {std::nullopt, sq.C()};
    ProductRing p = product_ring(sq.B(), sq.C(), sq.limits());
    PresentedRing r = p.ring;
    return {std::move(p), std::move(r)};
  }
  MPoly embed(const MPoly& b, const MPoly& c) const { return product ? product->pair(b, c) : c; }
};

std::vector<MPoly> ambient_images(const Ambient& amb, const PushoutPresentation& cand) {
  std::vector<MPoly> out;
  for (std::size_t i = 0; i < cand.ring.nvars(); ++i) out.push_back(amb.embed(cand.to_b.images()[i], cand.to_c.images()[i]));
  return out;
}

std::string pair_text(const FiberElement& x) { return "(" + x.b.to_string() + ", " + x.c.to_string() + ")"; }

}  // namespace

PushoutPresentation make_candidate(const FerrandData& sq, const PresentedRing& a, const std::vector<MPoly>& to_b,
                                   const std::vector<MPoly>& to_c) {
  RingHom hb = validate_hom(a, sq.B(), to_b, sq.limits());
  RingHom hc = validate_hom(a, sq.C(), to_c, sq.limits());
  for (std::size_t i = 0; i < a.nvars(); ++i)
    if (!sq.matched(hb.images()[i], hc.images()[i]))
      throw InvalidArgument("candidate maps do not commute with the square at generator " + a.context()->vars()[i]);
  return {a, hb, hc, std::nullopt, 0};
}

BicartesianReport check_bicartesian(const FerrandData& sq, const PushoutPresentation& cand, int probe_degree) {
  const Limits& lim = sq.limits();
  BicartesianReport rep;
  rep.probe_degree = probe_degree;
  for (std::size_t i = 0; i < cand.ring.nvars(); ++i)
    if (!sq.matched(cand.to_b.images()[i], cand.to_c.images()[i]))
      throw InvalidArgument("candidate maps do not commute with the square");

  // (a) B ⊗_A C → K.
  TensorProduct t = tensor_over_base(cand.to_b, cand.to_c, lim);
  std::vector<MPoly> imgs = sq.beta().images();
  for (const auto& p : sq.pi().images()) imgs.push_back(p);
  RingHom induced = validate_hom(t.ring, sq.K(), imgs, lim);
  IsoCheck iso = check_isomorphism(induced, lim);
  if (!iso.iso) {
    rep.clause = 'a';
    rep.witness = "B (x)_A C -> K is " + iso.witness;
    return rep;
  }

  // (b) matched generators, faithful embedding into B × C.
  Ambient amb = Ambient::of(sq);
  RingHom emb = validate_hom(cand.ring, amb.ring, ambient_images(amb, cand), lim);
  HomGraph graph(emb, lim);
  IdealHandle ker = graph.kernel();
  if (!ker.generators().empty()) {
    rep.clause = 'b';
    rep.witness = "A -> B x C is not injective: " + ker.generators().front().to_string() + " maps to 0";
    return rep;
  }

  // (c) every probed matched pair comes from A.
  for (const auto& k : sq.beta_kernel().generators()) {
    ++rep.probes;
    if (!graph.preimage(amb.embed(k, sq.C().zero()))) {
      rep.clause = 'c';
      rep.witness = "(" + k.to_string() + ", 0) is not in the image of A";
      return rep;
    }
  }
  FiberSpace fs(sq);
  for (int e = 0; e <= probe_degree; ++e) {
    for (const auto& x : fs.extend_to(e)) {
      ++rep.probes;
      if (!graph.preimage(amb.embed(x.b, x.c))) {
        rep.clause = 'c';
        rep.witness = pair_text(x) + " is not in the image of A";
        return rep;
      }
    }
  }
  rep.pass = true;
  return rep;
}

PushoutPresentation present_pushout(const FerrandData& sq, const PresentOptions& opts) {
  const Limits& lim = sq.limits();
  const Field& field = sq.C().field();
  Ambient amb = Ambient::of(sq);
  FiberSpace fs(sq);
  std::vector<FiberElement> gens;
  std::optional<HomGraph> graph;

  auto free_ring = [&]() {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < gens.size(); ++i) vars.push_back("a" + std::to_string(i + 1));
    return PresentedRing::polynomial("A", field, vars);
  };
  auto rebuild = [&]() {
    PresentedRing f = free_ring();
    std::vector<MPoly> imgs;
    for (const auto& g : gens) imgs.push_back(amb.embed(g.b, g.c));
    graph.emplace(validate_hom(f, amb.ring, imgs, lim), lim);
  };
  auto offer = [&](const FiberElement& x) {
    if (x.b.is_constant() && x.c.is_constant()) return false;
    if (!graph) rebuild();
    if (graph->preimage(amb.embed(x.b, x.c))) return false;
    gens.push_back(x);
    if (gens.size() > opts.max_generators)
      throw BoundExceeded("pushout ring needs more than " + std::to_string(opts.max_generators) + " generators");
    rebuild();
    return true;
  };

  bool checked = false;
  std::vector<FiberElement> pending;
  for (const auto& k : sq.beta_kernel().generators()) pending.push_back(sq.make(k, sq.C().zero()));
  for (int d = 1; d <= opts.degree_bound; ++d) {
    lim.poll();
    for (auto& x : fs.extend_to(d)) pending.push_back(std::move(x));
    bool changed = false;
    for (const auto& x : pending) changed = offer(x) || changed;
    pending.clear();
    if (checked && !changed) continue;
    checked = true;

    if (!graph) rebuild();
    PresentedRing a = free_ring();
    PresentedRing apres("A", a.context(), graph->kernel().generators());
    std::vector<MPoly> tb, tc;
    for (const auto& g : gens) {
      tb.push_back(g.b);
      tc.push_back(g.c);
    }
    PushoutPresentation cand = make_candidate(sq, apres, tb, tc);
    BicartesianReport rep = check_bicartesian(sq, cand, std::max(lim.probe_degree, 2 * d + 1));
    if (rep.pass) {
      cand.certificate = rep;
      cand.degree_found = d;
      return cand;
    }
  }
  throw BoundExceeded("no verified presentation of " + sq.B().name() + " x_" + sq.K().name() + " " + sq.C().name() +
                      " with generators of degree <= " + std::to_string(opts.degree_bound));
}

PresentationMatch match_presentation(const FerrandData& sq, const PushoutPresentation& pres,
                                     const PresentedRing& ref, const std::vector<MPoly>& ref_to_c) {
  PresentationMatch res;
  Ambient amb = Ambient::of(sq);
  RingHom emb = validate_hom(pres.ring, amb.ring, ambient_images(amb, pres), sq.limits());
  HomGraph graph(emb, sq.limits());
  std::vector<MPoly> pre;
  for (const auto& c : ref_to_c) {
    auto x = fiber_membership(sq, c);
    if (!x) {
      res.witness = c.to_string() + " is not in A";
      return res;
    }
    auto p = graph.preimage(amb.embed(x->b, x->c));
    if (!p) {
      res.witness = c.to_string() + " is not in the image of the presentation";
      return res;
    }
    pre.push_back(*p);
  }
  try {
    res.forward = validate_hom(ref, pres.ring, pre, sq.limits());
  } catch (const RelationViolated& e) {
    res.witness = e.what();
    return res;
  }
  IsoCheck iso = check_isomorphism(*res.forward, sq.limits());
  res.iso = iso.iso;
  res.inverse = iso.inverse;
  res.witness = iso.witness;
  return res;
}

// ---------------------------------------------------------------------------

LocalizedSquare localize_square(const FerrandData& sq, const FiberElement& f,
                                const std::optional<PushoutPresentation>& pres) {
  const Limits& lim = sq.limits();
  FiberElement g = sq.make(f.b, f.c);
  Localization bf = localize(sq.B(), g.b, "s", lim);
  Localization cf = localize(sq.C(), g.c, "s", lim);
  Localization kf = localize(sq.K(), g.k, "s", lim);

  std::vector<MPoly> bimgs, cimgs;
  for (const auto& im : sq.beta().images()) bimgs.push_back(kf.map.apply(im));
  bimgs.push_back(kf.inverse);
  for (const auto& im : sq.pi().images()) cimgs.push_back(kf.map.apply(im));
  cimgs.push_back(kf.inverse);

  LocalizedSquare out;
  out.square = build_square(validate_hom(bf.ring, kf.ring, bimgs, lim), validate_hom(cf.ring, kf.ring, cimgs, lim), lim);
  out.in_conductor = sq.B().is_zero(g.b, lim);
  out.b_zero = bf.ring.is_zero_ring(lim);
  out.k_zero = kf.ring.is_zero_ring(lim);
  if (!out.in_conductor) return out;

  if (pres) {
    Ambient amb = Ambient::of(sq);
    RingHom emb = validate_hom(pres->ring, amb.ring, ambient_images(amb, *pres), lim);
    auto af = HomGraph(emb, lim).preimage(amb.embed(g.b, g.c));
    if (af) {
      Localization al = localize(pres->ring, *af, "s", lim);
      std::vector<MPoly> imgs;
      for (const auto& im : pres->to_c.images()) imgs.push_back(cf.map.apply(im));
      imgs.push_back(cf.inverse);
      IsoCheck iso = check_isomorphism(validate_hom(al.ring, cf.ring, imgs, lim), lim);
      out.open_iso = iso.iso && out.b_zero;
      out.open_iso_method = "presentation localized at the conductor element";
      return out;
    }
  }
  // Intrinsic certificate: f*g lies in the conductor for every generator g of
  // C, so g = (f g)/f is in A_f; pairs (k, 0) with k ∈ ker β die after
  // inverting f because f*(k, 0) = (0, 0).
  bool ok = out.b_zero;
  for (std::size_t i = 0; i < sq.C().nvars() && ok; ++i) {
    auto x = fiber_membership(sq, g.c * sq.C().var(i));
    ok = x && sq.B().is_zero(x->b, lim);
    if (ok) out.open_iso_witnesses.push_back(*x);
  }
  out.open_iso = ok;
  out.open_iso_method = "conductor multiples of the generators of C";
  return out;
}

}  // namespace ferrand
