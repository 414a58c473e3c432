#include "ferrand/rings.hpp"

#include <algorithm>
#include <sstream>

namespace ferrand {

std::string fresh_variable(const std::string& stem, const std::vector<std::string>& taken) {
  std::string s = stem;
  for (int k = 1; std::find(taken.begin(), taken.end(), s) != taken.end(); ++k) s = stem + std::to_string(k);
  return s;
}

PresentedRing::PresentedRing(std::string name, Context ctx, std::vector<MPoly> relations)
    : name_(std::move(name)), ideal_(std::move(ctx), std::move(relations)) {}

PresentedRing PresentedRing::polynomial(std::string name, const Field& field, std::vector<std::string> vars) {
  return PresentedRing(std::move(name), make_context(field, std::move(vars)), {});
}

MPoly PresentedRing::reduce(const MPoly& p, const Limits& limits) const {
  return ideal_.normal_form(p, MonomialOrder::grevlex(), limits);
}

bool PresentedRing::equal(const MPoly& a, const MPoly& b, const Limits& limits) const {
  return is_zero(a - b, limits);
}

bool PresentedRing::is_zero(const MPoly& p, const Limits& limits) const { return reduce(p, limits).is_zero(); }

bool PresentedRing::is_unit(const MPoly& p, const Limits& limits) const {
  return (ideal_ + IdealHandle(context(), {p})).is_unit(limits);
}

bool PresentedRing::is_zero_ring(const Limits& limits) const { return ideal_.is_unit(limits); }

PresentedRing PresentedRing::renamed(std::string name) const {
  PresentedRing r = *this;
  r.name_ = std::move(name);
  return r;
}

std::string PresentedRing::to_string() const {
  std::ostringstream os;
  os << "ring " << name_ << " = " << field().name() << "[";
  for (std::size_t i = 0; i < nvars(); ++i) os << (i ? "," : "") << context()->vars()[i];
  os << "]";
  if (!relations().empty()) {
    os << " / (";
    for (std::size_t i = 0; i < relations().size(); ++i) os << (i ? ", " : "") << relations()[i].to_string();
    os << ")";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

MPoly RingHom::apply(const MPoly& p) const {
  require_same(p.context(), source_.context());
  return target_.reduce(substitute(p, images_, target_.context()));
}

RingHom RingHom::then(const RingHom& after, const Limits& limits) const {
  require_same(after.source().context(), target_.context());
  std::vector<MPoly> imgs;
  for (const auto& im : images_) imgs.push_back(after.apply(im));
  return validate_hom(source_, after.target(), std::move(imgs), limits);
}

std::string RingHom::to_string(const std::string& name) const {
  std::ostringstream os;
  os << "hom " << name << ": " << source_.name() << " -> " << target_.name() << " { ";
  for (std::size_t i = 0; i < images_.size(); ++i)
    os << (i ? ", " : "") << source_.context()->vars()[i] << " -> " << images_[i].to_string();
  os << " }";
  return os.str();
}

RingHom validate_hom(const PresentedRing& source, const PresentedRing& target, std::vector<MPoly> images,
                     const Limits& limits) {
  if (images.size() != source.nvars())
    throw InvalidArgument("expected " + std::to_string(source.nvars()) + " generator images, got " +
                          std::to_string(images.size()));
  RingHom h(source, target);
  for (auto& im : images) {
    require_same(im.context(), target.context());
    h.images_.push_back(target.reduce(im, limits));
  }
  for (const auto& r : source.relations()) {
    MPoly nf = target.reduce(substitute(r, h.images_, target.context()), limits);
    if (!nf.is_zero()) throw RelationViolated(r.to_string(), nf.to_string());
    h.certificate_.push_back({r, nf});
  }
  return h;
}

RingHom validate_hom(const PresentedRing& source, const PresentedRing& target,
                     const std::vector<std::string>& image_texts, const Limits& limits) {
  std::vector<MPoly> imgs;
  for (const auto& t : image_texts) imgs.push_back(target.parse(t));
  return validate_hom(source, target, std::move(imgs), limits);
}

RingHom identity_hom(const PresentedRing& r) {
  std::vector<MPoly> imgs;
  for (std::size_t i = 0; i < r.nvars(); ++i) imgs.push_back(r.var(i));
  return validate_hom(r, r, std::move(imgs));
}

// ---------------------------------------------------------------------------

HomGraph::HomGraph(const RingHom& h, const Limits& limits) : h_(h) {
  const auto& tv = h.target().context()->vars();
  const std::size_t nt = tv.size(), ns = h.source().nvars();
  std::vector<std::string> vars = tv;
  for (std::size_t j = 0; j < ns; ++j) vars.push_back(fresh_variable("__src" + std::to_string(j), vars));
  graph_ = make_context(h.target().field(), vars);
  for (std::size_t i = 0; i < nt; ++i) to_graph_target_.push_back(i);
  for (std::size_t j = 0; j < ns; ++j) to_graph_source_.push_back(nt + j);
  from_graph_.assign(nt + ns, 0);
  for (std::size_t j = 0; j < ns; ++j) from_graph_[nt + j] = j;

  std::vector<MPoly> gens;
  for (const auto& r : h.target().relations()) gens.push_back(rename(r, graph_, to_graph_target_));
  for (std::size_t j = 0; j < ns; ++j)
    gens.push_back(MPoly::variable(graph_, nt + j) - rename(h.images()[j], graph_, to_graph_target_));
  std::vector<std::size_t> first(nt);
  for (std::size_t i = 0; i < nt; ++i) first[i] = i;
  GbOptions opts;
  opts.limits = limits;
  gb_ = compute_groebner(graph_, gens, MonomialOrder::elimination(nt + ns, first), opts);
}

std::optional<MPoly> HomGraph::preimage(const MPoly& t) const {
  require_same(t.context(), h_.target().context());
  MPoly nf = gb_->reduce(rename(t, graph_, to_graph_target_));
  for (std::size_t i = 0; i < h_.target().nvars(); ++i)
    if (nf.uses_variable(i)) return std::nullopt;
  return h_.source().reduce(rename(nf, h_.source().context(), from_graph_));
}

HomGraph::Split HomGraph::split(const MPoly& t) const {
  require_same(t.context(), h_.target().context());
  MPoly nf = gb_->reduce(rename(t, graph_, to_graph_target_));
  const std::size_t nt = h_.target().nvars();
  std::vector<Term> obst, pre;
  for (const auto& term : nf.terms()) {
    bool target = false;
    for (std::size_t i = 0; i < nt && !target; ++i) target = term.exp[i] != 0;
    (target ? obst : pre).push_back(term);
  }
  return {MPoly::from_terms(graph_, std::move(obst)),
          rename(MPoly::from_terms(graph_, std::move(pre)), h_.source().context(), from_graph_)};
}

IdealHandle HomGraph::kernel() const {
  std::vector<MPoly> out;
  for (const auto& g : gb_->polys()) {
    bool clean = true;
    for (std::size_t i = 0; i < h_.target().nvars() && clean; ++i) clean = !g.uses_variable(i);
    if (!clean) continue;
    MPoly k = h_.source().reduce(rename(g, h_.source().context(), from_graph_));
    if (!k.is_zero()) out.push_back(std::move(k));
  }
  return IdealHandle(h_.source().context(), std::move(out));
}

IdealHandle kernel(const RingHom& h, const Limits& limits) { return HomGraph(h, limits).kernel(); }

SurjectivityCertificate certify_surjective(const RingHom& h, const Limits& limits) {
  HomGraph g(h, limits);
  SurjectivityCertificate cert;
  for (std::size_t i = 0; i < h.target().nvars(); ++i) {
    auto p = g.preimage(h.target().var(i));
    if (!p)
      throw NotSurjective("target generator " + h.target().context()->vars()[i] + " of " + h.target().name() +
                          " is not in the image of " + h.source().name());
    cert.preimages.push_back(*p);
  }
  return cert;
}

IsoCheck check_isomorphism(const RingHom& h, const Limits& limits) {
  HomGraph g(h, limits);
  IsoCheck res;
  std::vector<MPoly> pre;
  for (std::size_t i = 0; i < h.target().nvars(); ++i) {
    auto p = g.preimage(h.target().var(i));
    if (!p) {
      res.witness = "not surjective: " + h.target().context()->vars()[i] + " has no preimage";
      return res;
    }
    pre.push_back(*p);
  }
  auto ker = g.kernel();
  if (!ker.generators().empty()) {
    res.witness = "not injective: kernel contains " + ker.generators().front().to_string();
    return res;
  }
  res.inverse = validate_hom(h.target(), h.source(), std::move(pre), limits);
  res.iso = true;
  return res;
}

// ---------------------------------------------------------------------------

namespace {

// Variables of b followed by those of c, renaming clashes in c.
std::vector<std::string> joined_vars(const PresentedRing& b, const PresentedRing& c,
                                     std::vector<std::string> prefix = {}) {
  std::vector<std::string> vars = std::move(prefix);
  for (const auto& v : b.context()->vars()) vars.push_back(v);
  for (const auto& v : c.context()->vars()) {
    std::string n = v;
    if (std::find(vars.begin(), vars.end(), n) != vars.end()) n = fresh_variable(v + "_" + c.name(), vars);
    vars.push_back(n);
  }
  return vars;
}

std::vector<std::size_t> iota_from(std::size_t start, std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = start + i;
  return v;
}

std::vector<MPoly> vars_of(const Context& ctx, const std::vector<std::size_t>& idx) {
  std::vector<MPoly> out;
  for (auto i : idx) out.push_back(MPoly::variable(ctx, i));
  return out;
}

}  // namespace

TensorProduct tensor_over_base(const RingHom& f, const RingHom& g, const Limits& limits) {
  require_same(f.source().context(), g.source().context());
  const PresentedRing& b = f.target();
  const PresentedRing& c = g.target();
  Context ctx = make_context(b.field(), joined_vars(b, c));
  auto bmap = iota_from(0, b.nvars()), cmap = iota_from(b.nvars(), c.nvars());
  std::vector<MPoly> rels;
  for (const auto& r : b.relations()) rels.push_back(rename(r, ctx, bmap));
  for (const auto& r : c.relations()) rels.push_back(rename(r, ctx, cmap));
  for (std::size_t i = 0; i < f.source().nvars(); ++i) {
    MPoly d = rename(f.images()[i], ctx, bmap) - rename(g.images()[i], ctx, cmap);
    if (!d.is_zero()) rels.push_back(std::move(d));
  }
  PresentedRing t(b.name() + "_" + c.name(), ctx, std::move(rels));
  RingHom l = validate_hom(b, t, vars_of(ctx, bmap), limits);
  RingHom r = validate_hom(c, t, vars_of(ctx, cmap), limits);
  return {t, l, r};
}

TensorProduct tensor_over_field(const PresentedRing& b, const PresentedRing& c, const Limits& limits) {
  PresentedRing k = PresentedRing::polynomial("k", b.field(), {});
  return tensor_over_base(validate_hom(k, b, std::vector<MPoly>{}), validate_hom(k, c, std::vector<MPoly>{}),
                          limits);
}

Localization localize(const PresentedRing& r, const MPoly& f, const std::string& inverse_name,
                      const Limits& limits) {
  require_same(f.context(), r.context());
  std::vector<std::string> vars = r.context()->vars();
  std::string s = fresh_variable(inverse_name, vars);
  vars.push_back(s);
  Context ctx = make_context(r.field(), vars);
  auto id = iota_from(0, r.nvars());
  std::vector<MPoly> rels;
  for (const auto& g : r.relations()) rels.push_back(rename(g, ctx, id));
  MPoly sv = MPoly::variable(ctx, r.nvars());
  rels.push_back(sv * rename(f, ctx, id) - MPoly::constant(ctx, 1));
  PresentedRing rf(r.name() + "_loc", ctx, std::move(rels));
  RingHom map = validate_hom(r, rf, vars_of(ctx, id), limits);
  return {rf, map, sv};
}

MPoly ProductRing::pair(const MPoly& b, const MPoly& c) const {
  const Context& ctx = ring.context();
  MPoly bb = rename(b, ctx, left_vars);
  MPoly cc = rename(c, ctx, right_vars);
  return ring.reduce(idempotent * bb + (MPoly::constant(ctx, 1) - idempotent) * cc);
}

ProductRing product_ring(const PresentedRing& b, const PresentedRing& c, const Limits& limits) {
  std::vector<std::string> taken = b.context()->vars();
  for (const auto& v : c.context()->vars()) taken.push_back(v);
  std::string e = fresh_variable("e", taken);
  Context ctx = make_context(b.field(), joined_vars(b, c, {e}));
  MPoly ev = MPoly::variable(ctx, 0);
  MPoly one = MPoly::constant(ctx, 1);
  auto bmap = iota_from(1, b.nvars()), cmap = iota_from(1 + b.nvars(), c.nvars());
  std::vector<MPoly> rels{ev * ev - ev};
  for (const auto& r : b.relations()) rels.push_back(ev * rename(r, ctx, bmap));
  for (const auto& r : c.relations()) rels.push_back((one - ev) * rename(r, ctx, cmap));
  for (auto i : bmap) rels.push_back((one - ev) * MPoly::variable(ctx, i));
  for (auto i : cmap) rels.push_back(ev * MPoly::variable(ctx, i));
  PresentedRing p(b.name() + "x" + c.name(), ctx, std::move(rels));

  std::vector<MPoly> left{b.one()}, right{c.zero()};
  for (std::size_t i = 0; i < b.nvars(); ++i) {
    left.push_back(b.var(i));
    right.push_back(c.zero());
  }
  for (std::size_t i = 0; i < c.nvars(); ++i) {
    left.push_back(b.zero());
    right.push_back(c.var(i));
  }
  ProductRing out{p, validate_hom(p, b, left, limits), validate_hom(p, c, right, limits), ev, {}, {}};
  out.left_vars = bmap;
  out.right_vars = cmap;
  return out;
}

std::pair<PresentedRing, RingHom> quotient(const PresentedRing& r, const std::vector<MPoly>& extra,
                                           const std::string& name, const Limits& limits) {
  std::vector<MPoly> rels = r.relations();
  for (const auto& g : extra) {
    require_same(g.context(), r.context());
    rels.push_back(g);
  }
  PresentedRing q(name, r.context(), std::move(rels));
  std::vector<MPoly> imgs;
  for (std::size_t i = 0; i < r.nvars(); ++i) imgs.push_back(q.var(i));
  return {q, validate_hom(r, q, std::move(imgs), limits)};
}

}  // namespace ferrand
