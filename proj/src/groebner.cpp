#include "ferrand/groebner.hpp"

#include <algorithm>
#include <cstdint>

namespace ferrand {

namespace detail {

// Terms sorted ascending in the active order; back() is the leading term.
using OPoly = std::vector<Term>;

namespace {

std::uint64_t mask_of(const Exponent& e) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) m |= std::uint64_t{1} << (i % 64);
  return m;
}

OPoly to_opoly(const MPoly& p, const MonomialOrder& ord) {
  OPoly o = p.terms();
  std::sort(o.begin(), o.end(), [&](const Term& a, const Term& b) { return ord.compare(a.exp, b.exp) < 0; });
  return o;
}

MPoly from_opoly(const Context& ctx, OPoly o) { return MPoly::from_terms(ctx, std::move(o)); }

// h -= c * x^e * g[0 .. glen), both ascending.
void sub_scaled(OPoly& h, const Scalar& c, const Exponent& e, const OPoly& g, std::size_t glen,
                const MonomialOrder& ord, const Field& f) {
  OPoly out;
  out.reserve(h.size() + glen);
  std::size_t i = 0, j = 0;
  Exponent shifted;
  bool have = false;
  auto load = [&]() {
    if (j < glen) {
      shifted = g[j].exp + e;
      have = true;
    } else {
      have = false;
    }
  };
  load();
  while (i < h.size() || have) {
    int cmp;
    if (!have)
      cmp = -1;
    else if (i == h.size())
      cmp = 1;
    else
      cmp = ord.compare(h[i].exp, shifted);
    if (cmp < 0) {
      out.push_back(std::move(h[i++]));
    } else if (cmp > 0) {
      out.push_back({shifted, f.neg(f.mul(c, g[j].coeff))});
      ++j;
      load();
    } else {
      Scalar v = f.sub(h[i].coeff, f.mul(c, g[j].coeff));
      if (v != 0) out.push_back({std::move(h[i].exp), std::move(v)});
      ++i;
      ++j;
      load();
    }
  }
  h = std::move(out);
}

void make_monic(OPoly& p, const Field& f) {
  if (p.empty()) return;
  Scalar inv = f.inv(p.back().coeff);
  if (inv == 1) return;
  for (auto& t : p) t.coeff = f.mul(t.coeff, inv);
}

}  // namespace

struct Reducer {
  const MonomialOrder* ord = nullptr;
  Field field;
  std::vector<OPoly> polys;  // monic
  std::vector<std::uint64_t> masks;

  void add(OPoly p) {
    masks.push_back(mask_of(p.back().exp));
    polys.push_back(std::move(p));
  }

  const OPoly* find_divisor(const Exponent& m, std::uint64_t mm, std::size_t skip = SIZE_MAX) const {
    for (std::size_t k = 0; k < polys.size(); ++k) {
      if (k == skip) continue;
      if ((masks[k] & ~mm) != 0) continue;
      if (divides(polys[k].back().exp, m)) return &polys[k];
    }
    return nullptr;
  }

  OPoly reduce(OPoly h, std::size_t skip = SIZE_MAX) const {
    OPoly rem;
    while (!h.empty()) {
      const Term& lt = h.back();
      const OPoly* g = find_divisor(lt.exp, mask_of(lt.exp), skip);
      if (g) {
        Exponent e = lt.exp - g->back().exp;
        Scalar c = lt.coeff;
        h.pop_back();
        sub_scaled(h, c, e, *g, g->size() - 1, *ord, field);
      } else {
        rem.push_back(std::move(h.back()));
        h.pop_back();
      }
    }
    std::reverse(rem.begin(), rem.end());
    return rem;
  }
};

namespace {

struct Entry {
  OPoly p;
  Exponent lm;
  std::uint64_t mask;
  int component;
  bool active;
};

struct Pair {
  std::size_t i, j;
  Exponent lcm;
  int degree;
};

class Buchberger {
 public:
  Buchberger(const Context& ctx, const MonomialOrder& ord, const GbOptions& opts)
      : ctx_(ctx), ord_(ord), opts_(opts), field_(ctx->field()) {
    comp_.assign(ctx->nvars(), false);
    for (std::size_t i = 0; i < opts.component_vars.size() && i < comp_.size(); ++i)
      comp_[i] = opts.component_vars[i];
  }

  std::vector<MPoly> run(const std::vector<MPoly>& gens) {
    for (const auto& g : gens) {
      require_same(g.context(), ctx_);
      if (g.is_zero()) continue;
      OPoly r = reduce_active(to_opoly(g, ord_));
      if (r.empty()) continue;
      make_monic(r, field_);
      insert(std::move(r));
    }
    while (!pairs_.empty()) {
      opts_.limits.poll();
      std::size_t best = 0;
      for (std::size_t k = 1; k < pairs_.size(); ++k) {
        const Pair& a = pairs_[k];
        const Pair& b = pairs_[best];
        if (a.degree != b.degree ? a.degree < b.degree : ord_.compare(a.lcm, b.lcm) < 0) best = k;
      }
      Pair pr = std::move(pairs_[best]);
      pairs_.erase(pairs_.begin() + static_cast<std::ptrdiff_t>(best));
      if (pr.degree > opts_.limits.degree_cap)
        throw BoundExceeded("Groebner basis computation exceeded degree cap " +
                            std::to_string(opts_.limits.degree_cap));
      OPoly s = spoly(pr);
      OPoly r = reduce_active(std::move(s));
      if (r.empty()) continue;
      make_monic(r, field_);
      insert(std::move(r));
      if (entries_.size() > opts_.limits.max_basis)
        throw BoundExceeded("Groebner basis grew beyond " + std::to_string(opts_.limits.max_basis) +
                            " elements");
    }
    return finish();
  }

 private:
  int degree_of(const Exponent& e) const {
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (!comp_[i]) d += e[i];
    return d;
  }

  int component_of(const Exponent& e) const {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (comp_[i] && e[i]) return static_cast<int>(i);
    return -1;
  }

  static bool coprime(const Exponent& a, const Exponent& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && b[i]) return false;
    return true;
  }

  OPoly reduce_active(OPoly h) const {
    OPoly rem;
    while (!h.empty()) {
      const Term& lt = h.back();
      std::uint64_t mm = mask_of(lt.exp);
      const Entry* g = nullptr;
      for (const auto& en : entries_) {
        if (!en.active || (en.mask & ~mm) != 0) continue;
        if (divides(en.lm, lt.exp)) {
          g = &en;
          break;
        }
      }
      if (g) {
        Exponent e = lt.exp - g->lm;
        Scalar c = lt.coeff;
        h.pop_back();
        sub_scaled(h, c, e, g->p, g->p.size() - 1, ord_, field_);
      } else {
        rem.push_back(std::move(h.back()));
        h.pop_back();
      }
    }
    std::reverse(rem.begin(), rem.end());
    return rem;
  }

  OPoly spoly(const Pair& pr) const {
    const Entry& a = entries_[pr.i];
    const Entry& b = entries_[pr.j];
    OPoly s;
    Exponent ea = pr.lcm - a.lm;
    Exponent eb = pr.lcm - b.lm;
    sub_scaled(s, field_.neg(Scalar(1)), ea, a.p, a.p.size() - 1, ord_, field_);
    sub_scaled(s, Scalar(1), eb, b.p, b.p.size() - 1, ord_, field_);
    return s;
  }

  // Gebauer-Moeller update.
  void insert(OPoly h) {
    const std::size_t hi = entries_.size();
    Exponent hlm = h.back().exp;
    Entry en{std::move(h), hlm, mask_of(hlm), component_of(hlm), true};

    std::vector<Pair> cand;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (!entries_[k].active) continue;
      if (entries_[k].component != en.component) continue;
      Exponent l = lcm(entries_[k].lm, hlm);
      cand.push_back({k, hi, l, degree_of(l)});
    }
    std::vector<bool> keep(cand.size(), true);
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (coprime(entries_[cand[a].i].lm, hlm)) continue;
      for (std::size_t b = 0; b < cand.size(); ++b) {
        if (a == b || !keep[b]) continue;
        if (divides(cand[b].lcm, cand[a].lcm) &&
            (cand[b].lcm != cand[a].lcm || b < a)) {
          keep[a] = false;
          break;
        }
      }
    }
    std::vector<Pair> fresh;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (!keep[a]) continue;
      if (coprime(entries_[cand[a].i].lm, hlm)) continue;
      fresh.push_back(std::move(cand[a]));
    }
    std::vector<Pair> old;
    for (auto& pr : pairs_) {
      bool drop = divides(hlm, pr.lcm) && lcm(entries_[pr.i].lm, hlm) != pr.lcm &&
                  lcm(entries_[pr.j].lm, hlm) != pr.lcm;
      if (!drop) old.push_back(std::move(pr));
    }
    pairs_ = std::move(old);
    for (auto& pr : fresh) pairs_.push_back(std::move(pr));
    for (auto& e : entries_)
      if (e.active && divides(hlm, e.lm)) e.active = false;
    entries_.push_back(std::move(en));
  }

  std::vector<MPoly> finish() {
    Reducer red;
    red.ord = &ord_;
    red.field = field_;
    for (auto& e : entries_)
      if (e.active) red.add(e.p);
    std::vector<OPoly> out;
    for (std::size_t k = 0; k < red.polys.size(); ++k) {
      OPoly tail(red.polys[k].begin(), red.polys[k].end() - 1);
      OPoly r = red.reduce(std::move(tail), k);
      r.push_back(red.polys[k].back());
      out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(),
              [&](const OPoly& a, const OPoly& b) { return ord_.compare(a.back().exp, b.back().exp) < 0; });
    std::vector<MPoly> res;
    for (auto& o : out) res.push_back(from_opoly(ctx_, std::move(o)));
    return res;
  }

  Context ctx_;
  MonomialOrder ord_;
  GbOptions opts_;
  Field field_;
  std::vector<bool> comp_;
  std::vector<Entry> entries_;
  std::vector<Pair> pairs_;
};

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------

GroebnerBasis::GroebnerBasis(Context ctx, MonomialOrder order, std::vector<MPoly> polys)
    : ctx_(std::move(ctx)), order_(std::move(order)), polys_(std::move(polys)),
      reducer_(std::make_unique<detail::Reducer>()) {
  reducer_->ord = &order_;
  reducer_->field = ctx_->field();
  for (const auto& p : polys_) reducer_->add(detail::to_opoly(p, order_));
}

GroebnerBasis::~GroebnerBasis() = default;

MPoly GroebnerBasis::reduce(const MPoly& p) const {
  require_same(p.context(), ctx_);
  if (polys_.empty()) return p;
  return detail::from_opoly(ctx_, reducer_->reduce(detail::to_opoly(p, order_)));
}

bool GroebnerBasis::is_unit_ideal() const {
  return polys_.size() == 1 && polys_[0].is_constant() && !polys_[0].is_zero();
}

GroebnerPtr compute_groebner(const Context& ctx, const std::vector<MPoly>& gens,
                             const MonomialOrder& order, const GbOptions& opts) {
  detail::Buchberger bb(ctx, order, opts);
  return std::make_shared<const GroebnerBasis>(ctx, order, bb.run(gens));
}

std::vector<MPoly> groebner_basis(const std::vector<MPoly>& gens, const MonomialOrder& order,
                                  const Limits& limits) {
  if (gens.empty()) return {};
  Context ctx = gens.front().context();
  GbOptions opts;
  opts.limits = limits;
  return compute_groebner(ctx, gens, order, opts)->polys();
}

// ---------------------------------------------------------------------------

IdealHandle::IdealHandle(Context ctx, std::vector<MPoly> gens) : impl_(std::make_shared<Impl>()) {
  for (const auto& g : gens) require_same(g.context(), ctx);
  impl_->ctx = std::move(ctx);
  for (auto& g : gens)
    if (!g.is_zero()) impl_->gens.push_back(std::move(g));
}

GroebnerPtr IdealHandle::basis(const MonomialOrder& order, const Limits& limits) const {
  const std::string key = order.key();
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end()) return it->second;
  }
  GbOptions opts;
  opts.limits = limits;
  GroebnerPtr gb = compute_groebner(impl_->ctx, impl_->gens, order, opts);
  std::lock_guard<std::mutex> lock(impl_->mu);
  return impl_->cache.emplace(key, std::move(gb)).first->second;
}

MPoly IdealHandle::normal_form(const MPoly& p, const MonomialOrder& order, const Limits& limits) const {
  require_same(p.context(), impl_->ctx);
  return basis(order, limits)->reduce(p);
}

bool IdealHandle::contains(const MPoly& p, const Limits& limits) const {
  return normal_form(p, MonomialOrder::grevlex(), limits).is_zero();
}

bool IdealHandle::contains(const IdealHandle& other, const Limits& limits) const {
  require_same(other.context(), impl_->ctx);
  for (const auto& g : other.generators())
    if (!contains(g, limits)) return false;
  return true;
}

bool IdealHandle::equals(const IdealHandle& other, const Limits& limits) const {
  require_same(other.context(), impl_->ctx);
  return basis(MonomialOrder::grevlex(), limits)->polys() ==
         other.basis(MonomialOrder::grevlex(), limits)->polys();
}

bool IdealHandle::is_unit(const Limits& limits) const { return basis(MonomialOrder::grevlex(), limits)->is_unit_ideal(); }

bool IdealHandle::is_zero(const Limits&) const { return impl_->gens.empty(); }

IdealHandle IdealHandle::operator+(const IdealHandle& other) const {
  require_same(other.context(), impl_->ctx);
  std::vector<MPoly> g = impl_->gens;
  g.insert(g.end(), other.generators().begin(), other.generators().end());
  return IdealHandle(impl_->ctx, std::move(g));
}

std::string IdealHandle::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < impl_->gens.size(); ++i) {
    if (i) s += ", ";
    s += impl_->gens[i].to_string();
  }
  return s + ")";
}

MPoly normal_form(const MPoly& p, const IdealHandle& ideal, const MonomialOrder& order, const Limits& limits) {
  return ideal.normal_form(p, order, limits);
}

IdealHandle eliminate(const IdealHandle& ideal, const std::vector<std::size_t>& drop_vars, const Limits& limits) {
  if (drop_vars.empty()) return ideal;
  const Context& ctx = ideal.context();
  auto gb = ideal.basis(MonomialOrder::elimination(ctx->nvars(), drop_vars), limits);
  std::vector<MPoly> kept;
  for (const auto& p : gb->polys()) {
    bool clean = std::none_of(drop_vars.begin(), drop_vars.end(), [&](std::size_t v) { return p.uses_variable(v); });
    if (clean) kept.push_back(p);
  }
  return IdealHandle(ctx, std::move(kept));
}

IdealHandle eliminate(const IdealHandle& ideal, const std::vector<std::string>& drop_names, const Limits& limits) {
  std::vector<std::size_t> idx;
  for (const auto& n : drop_names) {
    auto i = ideal.context()->index_of(n);
    if (!i) throw MixedContext("variable '" + n + "' is not in the ideal's context");
    idx.push_back(*i);
  }
  return eliminate(ideal, idx, limits);
}

IdealHandle intersect(const IdealHandle& a, const IdealHandle& b, const Limits& limits) {
  require_same(a.context(), b.context());
  const Context& ctx = a.context();
  std::vector<std::string> vars = ctx->vars();
  std::string t = "__t";
  while (ctx->index_of(t)) t += "_";
  vars.insert(vars.begin(), t);
  Context ext = make_context(ctx->field(), vars);
  std::vector<std::size_t> shift(ctx->nvars());
  std::vector<std::size_t> back(ext->nvars(), 0);
  for (std::size_t i = 0; i < ctx->nvars(); ++i) {
    shift[i] = i + 1;
    back[i + 1] = i;
  }
  MPoly tv = MPoly::variable(ext, 0);
  MPoly one = MPoly::constant(ext, 1);
  std::vector<MPoly> gens;
  for (const auto& g : a.generators()) gens.push_back(tv * rename(g, ext, shift));
  for (const auto& g : b.generators()) gens.push_back((one - tv) * rename(g, ext, shift));
  IdealHandle elim = eliminate(IdealHandle(ext, gens), std::vector<std::size_t>{0}, limits);
  std::vector<MPoly> out;
  for (const auto& g : elim.generators()) out.push_back(rename(g, ctx, back));
  return IdealHandle(ctx, std::move(out));
}

}  // namespace ferrand
