#include "ferrand/scheme.hpp"

#include <map>

#include "ferrand/errors.hpp"

namespace ferrand {

namespace {

std::vector<std::size_t> identity_index(std::size_t n) {
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  return id;
}

// p lives on the first variables of `target`.
MPoly widen(const MPoly& p, const PresentedRing& target) {
  return rename(p, target.context(), identity_index(p.context()->nvars()));
}

MPoly last_var(const PresentedRing& r) { return r.var(r.nvars() - 1); }

RingHom hom_from_texts(const PresentedRing& s, const PresentedRing& t, const std::vector<std::string>& texts,
                       const std::string& corner, const Limits& lim) {
  std::vector<MPoly> im;
  if (texts.empty() && t.is_zero_ring(lim)) {
    im.assign(s.nvars(), t.zero());
  } else {
    if (texts.size() != s.nvars())
      throw InvalidArgument(corner + " map needs " + std::to_string(s.nvars()) + " images, got " +
                            std::to_string(texts.size()));
    for (const auto& x : texts) im.push_back(t.parse(x));
  }
  return validate_hom(s, t, std::move(im), lim);
}

RingHom certify_iso(const RingHom& h, const std::string& corner, const Limits& lim) {
  IsoCheck c = check_isomorphism(h, lim);
  if (!c.iso) throw InvalidArgument(corner + " map is not an isomorphism: " + c.witness);
  return *c.inverse;
}

// First generator where the two routes around a square disagree.
std::optional<std::string> commutes(const PresentedRing& src, const RingHom& first, const RingHom& then_first,
                                    const RingHom& second, const RingHom& then_second, const Limits& lim) {
  const PresentedRing& t = then_first.target();
  for (std::size_t x = 0; x < src.nvars(); ++x) {
    MPoly a = then_first.apply(first.apply(src.var(x)));
    MPoly b = then_second.apply(second.apply(src.var(x)));
    if (!t.equal(a, b, lim))
      return src.context()->vars()[x] + " goes to " + a.to_string() + " and " + b.to_string();
  }
  return std::nullopt;
}

// A → B × C for a presentation, as a ring map into the product ring.
RingHom into_product(const PushoutPresentation& pres, const ProductRing& prod, const Limits& lim) {
  std::vector<MPoly> im;
  for (std::size_t x = 0; x < pres.ring.nvars(); ++x)
    im.push_back(prod.pair(pres.to_b.images()[x], pres.to_c.images()[x]));
  return validate_hom(pres.ring, prod.ring, std::move(im), lim);
}

MPoly preimage_in_presentation(const PushoutPresentation& pres, const FiberElement& x, const Limits& lim) {
  ProductRing prod = product_ring(pres.to_b.target(), pres.to_c.target(), lim);
  auto a = HomGraph(into_product(pres, prod, lim), lim).preimage(prod.pair(x.b, x.c));
  if (!a) throw InvalidArgument("(" + x.b.to_string() + ", " + x.c.to_string() + ") is not in the presented pushout");
  return *a;
}

// A[1/a] with its maps to the corners of the localized square.
struct LocalizedPresentation {
  Localization loc;
  std::vector<MPoly> to_b, to_c;  // images of loc.ring's variables
};

LocalizedPresentation localize_presentation(const PushoutPresentation& pres, const MPoly& a, const FerrandData& lsq,
                                            const Limits& lim) {
  LocalizedPresentation out{localize(pres.ring, a, "s", lim), {}, {}};
  for (std::size_t x = 0; x < pres.ring.nvars(); ++x) {
    out.to_b.push_back(widen(pres.to_b.images()[x], lsq.B()));
    out.to_c.push_back(widen(pres.to_c.images()[x], lsq.C()));
  }
  out.to_b.push_back(last_var(lsq.B()));
  out.to_c.push_back(last_var(lsq.C()));
  return out;
}

RefinementReport compare_localized(const FerrandData& sq, const PushoutPresentation& pres, const FiberElement& w,
                                   const PresentOptions& opts) {
  const Limits& lim = sq.limits();
  FerrandData lsq = *localize_square(sq, w).square;
  MPoly a = preimage_in_presentation(pres, sq.make(w.b, w.c), lim);
  LocalizedPresentation lp = localize_presentation(pres, a, lsq, lim);
  PushoutPresentation fresh = present_pushout(lsq, opts);
  PresentationMatch m = match_presentation(lsq, fresh, lp.loc.ring, lp.to_c);
  return {m.iso, m.witness};
}

}  // namespace

OverlapData make_overlap(const FerrandData& chart_i, const FerrandData& chart_j, std::size_t i, std::size_t j,
                         const FiberElement& u, const FiberElement& v, const std::vector<std::string>& b_images,
                         const std::vector<std::string>& c_images, const std::vector<std::string>& k_images) {
  if (i >= j) throw InvalidArgument("overlaps are declared with i < j");
  const Limits& lim = chart_i.limits();
  FerrandData left = *localize_square(chart_i, u).square;
  FerrandData right = *localize_square(chart_j, v).square;
  RingHom hb = hom_from_texts(left.B(), right.B(), b_images, "B", lim);
  RingHom hc = hom_from_texts(left.C(), right.C(), c_images, "C", lim);
  RingHom hk = hom_from_texts(left.K(), right.K(), k_images, "K", lim);
  if (auto w = commutes(left.B(), left.beta(), hk, hb, right.beta(), lim))
    throw InvalidArgument("overlap maps do not commute with beta: " + *w);
  if (auto w = commutes(left.C(), left.pi(), hk, hc, right.pi(), lim))
    throw InvalidArgument("overlap maps do not commute with pi: " + *w);
  RingHom ib = certify_iso(hb, "B", lim), ic = certify_iso(hc, "C", lim), ik = certify_iso(hk, "K", lim);
  return OverlapData{i, j, chart_i.make(u.b, u.c), chart_j.make(v.b, v.c), left, right, SquareIso{hb, hc, hk},
                     SquareIso{ib, ic, ik}};
}

std::vector<CocycleRecord> check_cocycle(const std::vector<PresentedRing>& rings,
                                         const std::vector<RingGluingEdge>& edges, const std::string& corner,
                                         const Limits& lim) {
  std::map<std::pair<std::size_t, std::size_t>, const RingGluingEdge*> by_pair;
  for (const auto& e : edges) by_pair[{e.i, e.j}] = &e;
  auto edge = [&](std::size_t a, std::size_t b) -> const RingGluingEdge* {
    auto it = by_pair.find({a, b});
    return it == by_pair.end() ? nullptr : it->second;
  };

  std::vector<CocycleRecord> out;
  const std::size_t n = rings.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const RingGluingEdge *eij = edge(i, j), *ejk = edge(j, k), *eik = edge(i, k);
        if (!eij || !ejk || !eik) continue;
        lim.poll();
        const PresentedRing& rk = rings[k];
        std::vector<std::string> vars = rk.context()->vars();
        for (const char* stem : {"w1", "w2", "w3"}) vars.push_back(fresh_variable(stem, vars));
        Context ctx = make_context(rk.field(), vars);
        const std::size_t nk = rk.nvars();
        auto id = identity_index(nk);
        MPoly s1 = MPoly::variable(ctx, nk), s2 = MPoly::variable(ctx, nk + 1), s3 = MPoly::variable(ctx, nk + 2);
        MPoly one = MPoly::constant(ctx, 1);

        // R_k[1/v_jk] -> W and R_k[1/v_ik] -> W.
        std::vector<MPoly> via_jk, via_ik;
        for (std::size_t x = 0; x < nk; ++x) via_jk.push_back(MPoly::variable(ctx, x));
        via_ik = via_jk;
        via_jk.push_back(s2);
        via_ik.push_back(s1);

        MPoly uji = substitute(ejk->phi.apply(widen(eij->v, ejk->left)), via_jk, ctx);
        std::vector<MPoly> rels;
        for (const auto& r : rk.relations()) rels.push_back(rename(r, ctx, id));
        rels.push_back(s1 * rename(eik->v, ctx, id) - one);
        rels.push_back(s2 * rename(ejk->v, ctx, id) - one);
        rels.push_back(s3 * uji - one);
        PresentedRing w(rk.name() + "_triple", ctx, std::move(rels));
        if (w.is_zero_ring(lim)) {
          out.push_back({i, j, k, corner, true});
          continue;
        }
        RingHom direct = validate_hom(eik->right, w, via_ik, lim);
        std::vector<MPoly> through;
        for (std::size_t y = 0; y < rings[j].nvars(); ++y)
          through.push_back(substitute(ejk->phi.apply(ejk->left.var(y)), via_jk, ctx));
        through.push_back(s3);
        RingHom second = validate_hom(eij->right, w, std::move(through), lim);

        const PresentedRing& ri = rings[i];
        for (std::size_t x = 0; x < ri.nvars(); ++x) {
          MPoly a = direct.apply(eik->phi.apply(eik->left.var(x)));
          MPoly b = second.apply(eij->phi.apply(eij->left.var(x)));
          if (!w.equal(a, b, lim))
            throw CocycleError(i, j, k,
                               corner + ": " + ri.context()->vars()[x] + " goes to " + b.to_string() + " through chart " +
                                   std::to_string(j) + " but to " + a.to_string() + " directly");
        }
        out.push_back({i, j, k, corner, false});
      }
  return out;
}

GluedPushout glue_pushout(const ChartedPushoutDatum& datum, const PresentOptions& opts) {
  GluedPushout out;
  const std::size_t n = datum.charts.size();
  for (const auto& o : datum.overlaps)
    if (o.i >= o.j || o.j >= n) throw InvalidArgument("overlap refers to a missing chart");

  // Cocycle on each corner of the data.
  struct Corner {
    const char* name;
    const PresentedRing& (FerrandData::*ring)() const;
    RingHom SquareIso::*map;
    MPoly FiberElement::*elem;
  };
  const Corner corners[] = {{"B", &FerrandData::B, &SquareIso::b, &FiberElement::b},
                            {"C", &FerrandData::C, &SquareIso::c, &FiberElement::c},
                            {"K", &FerrandData::K, &SquareIso::k, &FiberElement::k}};
  for (const auto& c : corners) {
    std::vector<PresentedRing> rings;
    for (const auto& ch : datum.charts) rings.push_back((ch.*c.ring)());
    std::vector<RingGluingEdge> edges;
    for (const auto& o : datum.overlaps)
      edges.push_back({o.i, o.j, o.u.*c.elem, o.v.*c.elem, (o.left.*c.ring)(), (o.right.*c.ring)(), o.iso.*c.map});
    auto recs = check_cocycle(rings, edges, c.name, datum.charts.empty() ? Limits{} : datum.charts[0].limits());
    out.cocycles.insert(out.cocycles.end(), recs.begin(), recs.end());
  }

  for (const auto& ch : datum.charts) {
    GluedChart g{ch, std::nullopt, ""};
    try {
      g.presentation = present_pushout(ch, opts);
      g.presentation_note = "presented in degree " + std::to_string(g.presentation->degree_found);
    } catch (const BoundExceeded& e) {
      g.presentation_note = std::string("intrinsic square kept: ") + e.what();
    }
    out.charts.push_back(std::move(g));
  }

  // Transport the overlap isomorphisms to the presented pushouts.
  std::vector<PresentedRing> arings;
  bool all_presented = true;
  for (const auto& g : out.charts) {
    all_presented = all_presented && g.presentation.has_value();
    if (g.presentation) arings.push_back(g.presentation->ring);
  }
  for (const auto& o : datum.overlaps) {
    const auto& pi = out.charts[o.i].presentation;
    const auto& pj = out.charts[o.j].presentation;
    if (!pi || !pj) {
      out.overlap_is_pushout.push_back(false);
      continue;
    }
    const Limits& lim = o.left.limits();
    MPoly ua = preimage_in_presentation(*pi, o.u, lim);
    MPoly va = preimage_in_presentation(*pj, o.v, lim);
    LocalizedPresentation li = localize_presentation(*pi, ua, o.left, lim);
    LocalizedPresentation lj = localize_presentation(*pj, va, o.right, lim);

    ProductRing prod = product_ring(o.right.B(), o.right.C(), lim);
    std::vector<MPoly> emb;
    for (std::size_t x = 0; x < lj.loc.ring.nvars(); ++x) emb.push_back(prod.pair(lj.to_b[x], lj.to_c[x]));
    HomGraph graph(validate_hom(lj.loc.ring, prod.ring, std::move(emb), lim), lim);
    std::vector<MPoly> images;
    for (std::size_t x = 0; x < li.loc.ring.nvars(); ++x) {
      MPoly target = prod.pair(o.iso.b.apply(li.to_b[x]), o.iso.c.apply(li.to_c[x]));
      auto a = graph.preimage(target);
      if (!a) throw InvalidArgument("overlap isomorphism does not preserve the pushout ring");
      images.push_back(*a);
    }
    RingHom phi = validate_hom(li.loc.ring, lj.loc.ring, std::move(images), lim);
    out.gluings.push_back({o.i, o.j, ua, va, li.loc.ring, lj.loc.ring, phi});
    out.overlap_is_pushout.push_back(compare_localized(datum.charts[o.i], *pi, o.u, opts).iso &&
                                     compare_localized(datum.charts[o.j], *pj, o.v, opts).iso);
  }
  if (all_presented) {
    auto recs = check_cocycle(arings, out.gluings, "A", datum.charts.empty() ? Limits{} : datum.charts[0].limits());
    out.cocycles.insert(out.cocycles.end(), recs.begin(), recs.end());
  }
  return out;
}

RefinementReport refine_and_compare(const GluedPushout& glued, std::size_t i, const FiberElement& w,
                                    const PresentOptions& opts) {
  if (i >= glued.charts.size()) throw InvalidArgument("no chart " + std::to_string(i));
  const GluedChart& c = glued.charts[i];
  if (!c.presentation) return {false, "chart " + std::to_string(i) + " has no presentation"};
  return compare_localized(c.square, *c.presentation, w, opts);
}

// ---------------------------------------------------------------------------
// Standard étale algebras

MPoly partial_derivative(const MPoly& p, std::size_t var) {
  const Field& f = p.field();
  std::vector<Term> terms;
  for (const auto& t : p.terms()) {
    if (t.exp[var] == 0) continue;
    Term d = t;
    d.coeff = f.mul(f.from_int(t.exp[var]), t.coeff);
    d.exp[var] -= 1;
    if (d.coeff != 0) terms.push_back(std::move(d));
  }
  return MPoly::from_terms(p.context(), std::move(terms));
}

namespace {

bool involves(const MPoly& p, std::size_t var) {
  for (const auto& t : p.terms())
    if (t.exp[var]) return true;
  return false;
}

// Throws unless p is monic of positive degree in `var`.
void require_monic(const MPoly& p, std::size_t var) {
  int deg = -1;
  for (const auto& t : p.terms()) deg = std::max(deg, t.exp[var]);
  if (deg < 1) throw InvalidArgument(p.to_string() + " has no positive degree in the new variable");
  for (const auto& t : p.terms()) {
    if (t.exp[var] != deg) continue;
    bool constant = t.coeff == 1;
    for (std::size_t x = 0; x < t.exp.size() && constant; ++x) constant = x == var || t.exp[x] == 0;
    if (!constant) throw InvalidArgument(p.to_string() + " is not monic in the new variable");
  }
}

}  // namespace

std::optional<MPoly> unit_inverse(const PresentedRing& r, const MPoly& x, const Limits& lim) {
  Localization l = localize(r, x, "s", lim);
  auto a = HomGraph(l.map, lim).preimage(l.inverse);
  if (!a || !r.equal(*a * x, r.one(), lim)) return std::nullopt;
  return r.reduce(*a, lim);
}

StdEtaleAlgebra make_std_etale(const PresentedRing& base, const std::string& var, const std::string& f,
                               const std::string& g, const Limits& lim) {
  std::vector<std::string> vars = base.context()->vars();
  for (const auto& v : vars)
    if (v == var) throw NameClash(var + " is already a variable of " + base.name());
  vars.push_back(var);
  vars.push_back(fresh_variable("s", vars));
  Context ctx = make_context(base.field(), vars);
  const std::size_t x = base.nvars(), s = x + 1;
  MPoly fp = parse_poly(f, ctx), gp = parse_poly(g, ctx);
  if (involves(fp, s) || involves(gp, s)) throw InvalidArgument("f and g may not use the inverse variable");
  require_monic(fp, x);
  std::vector<MPoly> rels;
  for (const auto& r : base.relations()) rels.push_back(widen(r, PresentedRing(base.name(), ctx, {})));
  rels.push_back(fp);
  rels.push_back(MPoly::variable(ctx, s) * gp - MPoly::constant(ctx, 1));
  PresentedRing ring(base.name() + "_et", ctx, std::move(rels));
  std::vector<MPoly> im;
  for (std::size_t i = 0; i < base.nvars(); ++i) im.push_back(ring.var(i));
  RingHom structure = validate_hom(base, ring, std::move(im), lim);
  auto inv = unit_inverse(ring, partial_derivative(fp, x), lim);
  if (!inv) throw InvalidArgument("f' = " + partial_derivative(fp, x).to_string() + " is not a unit");
  return {base, ring, structure, fp, gp, *inv};
}

EtaleLift lift_etale_affine(const RingHom& pi, const StdEtaleAlgebra& kp, const Limits& lim) {
  const PresentedRing& c = pi.source();
  const PresentedRing& k = pi.target();
  require_same(k.context(), kp.base.context());
  certify_surjective(pi, lim);
  HomGraph graph(pi, lim);

  const std::size_t nk = k.nvars(), kx = nk;
  std::vector<std::string> vars = c.context()->vars();
  vars.push_back(fresh_variable(kp.ring.context()->vars()[kx], vars));
  vars.push_back(fresh_variable(kp.ring.context()->vars()[kx + 1], vars));
  Context ctx = make_context(c.field(), vars);
  const std::size_t x = c.nvars(), s = x + 1;
  PresentedRing scratch(c.name(), ctx, {});

  // Coefficientwise normal-form preimages along π.
  auto lift = [&](const MPoly& p, bool leading_one) {
    std::map<int, std::vector<Term>> by_degree;
    int top = -1;
    for (const auto& t : p.terms()) {
      Exponent e(t.exp.begin(), t.exp.begin() + static_cast<long>(nk));
      by_degree[t.exp[kx]].push_back({std::move(e), t.coeff});
      top = std::max(top, t.exp[kx]);
    }
    MPoly out(ctx);
    for (auto& [d, terms] : by_degree) {
      MPoly coeff = MPoly::from_terms(k.context(), std::move(terms));
      MPoly pre = leading_one && d == top ? c.one() : [&] {
        auto q = graph.preimage(coeff);
        if (!q) throw NotSurjective(coeff.to_string() + " has no preimage");
        return *q;
      }();
      out = out + widen(pre, scratch) * MPoly::variable(ctx, x).pow(static_cast<unsigned>(d));
    }
    return out;
  };

  MPoly f = lift(kp.f, true);
  MPoly g = lift(kp.g, false);
  MPoly df = partial_derivative(f, x);
  MPoly sv = MPoly::variable(ctx, s), one = MPoly::constant(ctx, 1);
  std::vector<MPoly> rels;
  for (const auto& r : c.relations()) rels.push_back(widen(r, scratch));
  rels.push_back(f);
  rels.push_back(sv * g * df - one);
  PresentedRing ring(c.name() + "_et", ctx, std::move(rels));
  std::vector<MPoly> im;
  for (std::size_t i = 0; i < c.nvars(); ++i) im.push_back(ring.var(i));
  RingHom structure = validate_hom(c, ring, std::move(im), lim);
  MPoly dinv = ring.reduce(sv * g, lim);
  if (!ring.equal(df * dinv, ring.one(), lim)) throw InvalidArgument("derivative certificate failed");
  StdEtaleAlgebra alg{c, ring, structure, f, g * df, dinv};

  TensorProduct t = tensor_over_base(structure, pi, lim);
  std::vector<MPoly> bc;
  for (std::size_t i = 0; i < nk; ++i) bc.push_back(t.from_right.apply(k.var(i)));
  bc.push_back(t.from_left.apply(ring.var(x)));
  bc.push_back(t.from_left.apply(sv * df));
  RingHom base_change = validate_hom(kp.ring, t.ring, std::move(bc), lim);
  IsoCheck iso = check_isomorphism(base_change, lim);
  return {alg, t.ring, base_change, iso.iso, iso.witness};
}

// ---------------------------------------------------------------------------
// Morphisms of data

DatumMorphism make_datum_morphism(const FerrandData& base, const FerrandData& over, const RingHom& b,
                                  const RingHom& c, const RingHom& k) {
  require_same(b.source().context(), base.B().context());
  require_same(b.target().context(), over.B().context());
  require_same(c.source().context(), base.C().context());
  require_same(c.target().context(), over.C().context());
  require_same(k.source().context(), base.K().context());
  require_same(k.target().context(), over.K().context());
  const Limits& lim = base.limits();
  if (auto w = commutes(base.B(), base.beta(), k, b, over.beta(), lim))
    throw InvalidArgument("component maps do not commute with beta: " + *w);
  if (auto w = commutes(base.C(), base.pi(), k, c, over.pi(), lim))
    throw InvalidArgument("component maps do not commute with pi: " + *w);
  return {base, over, b, c, k};
}

DatumMorphism identity_morphism(const FerrandData& sq) {
  return {sq, sq, identity_hom(sq.B()), identity_hom(sq.C()), identity_hom(sq.K())};
}

DatumMorphism localization_morphism(const FerrandData& sq, const FiberElement& f) {
  FerrandData l = *localize_square(sq, f).square;
  const Limits& lim = sq.limits();
  auto first = [&](const PresentedRing& s, const PresentedRing& t) {
    std::vector<MPoly> im;
    for (std::size_t i = 0; i < s.nvars(); ++i) im.push_back(t.var(i));
    return validate_hom(s, t, std::move(im), lim);
  };
  return make_datum_morphism(sq, l, first(sq.B(), l.B()), first(sq.C(), l.C()), first(sq.K(), l.K()));
}

DatumMorphism compose_morphisms(const DatumMorphism& first, const DatumMorphism& second) {
  const Limits& lim = first.base.limits();
  return make_datum_morphism(first.base, second.over, first.b.then(second.b, lim), first.c.then(second.c, lim),
                             first.k.then(second.k, lim));
}

CartesianVerdict check_datum_morphism(const DatumMorphism& phi) {
  const Limits& lim = phi.base.limits();
  // K ⊗_R R' → K' for R = B (via β) or C (via π).
  auto compare = [&](const RingHom& to_k, const RingHom& along, const RingHom& over_to_k, std::string& witness) {
    TensorProduct t = tensor_over_base(to_k, along, lim);
    std::vector<MPoly> im;
    const PresentedRing& k = to_k.target();
    for (std::size_t i = 0; i < k.nvars(); ++i) im.push_back(phi.k.apply(k.var(i)));
    const PresentedRing& r = along.target();
    for (std::size_t i = 0; i < r.nvars(); ++i) im.push_back(over_to_k.apply(r.var(i)));
    IsoCheck c = check_isomorphism(validate_hom(t.ring, phi.over.K(), std::move(im), lim), lim);
    witness = c.witness;
    return c.iso;
  };
  CartesianVerdict v;
  v.y_square = compare(phi.base.beta(), phi.b, phi.over.beta(), v.y_witness);
  v.z_square = compare(phi.base.pi(), phi.c, phi.over.pi(), v.z_witness);
  return v;
}

}  // namespace ferrand
