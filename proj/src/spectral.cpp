#include "ferrand/spectral.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ferrand/univariate.hpp"

namespace ferrand {

namespace {

bool has(PointSet s, std::size_t i) { return (s >> i) & 1u; }
PointSet bit(std::size_t i) { return PointSet(1) << i; }

}  // namespace

SpecPoset::SpecPoset(std::vector<std::string> names,
                     const std::vector<std::pair<std::size_t, std::size_t>>& specializations)
    : names_(std::move(names)) {
  if (names_.size() > 32) throw InvalidArgument("finite spaces are limited to 32 points");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw NameClash("point " + n + " appears twice");
  down_.resize(names_.size());
  for (std::size_t i = 0; i < size(); ++i) down_[i] = bit(i);
  for (const auto& [a, b] : specializations) {
    if (a >= size() || b >= size()) throw InvalidArgument("specialization refers to a missing point");
    down_[a] |= bit(b);
  }
  close_order();
}

void SpecPoset::close_order() {
  for (std::size_t k = 0; k < size(); ++k)
    for (std::size_t i = 0; i < size(); ++i)
      if (has(down_[i], k)) down_[i] |= down_[k];
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = a + 1; b < size(); ++b)
      if (specializes(a, b) && specializes(b, a))
        throw InvalidArgument("points " + names_[a] + " and " + names_[b] + " are topologically indistinguishable");
}

SpecPoset SpecPoset::with_opens(std::vector<std::string> names, std::vector<PointSet> opens) {
  SpecPoset s;
  s.names_ = std::move(names);
  if (s.names_.size() > 32) throw InvalidArgument("finite spaces are limited to 32 points");
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  s.opens_ = std::move(opens);
  s.explicit_ = true;
  auto contains = [&](PointSet u) { return std::binary_search(s.opens_.begin(), s.opens_.end(), u); };
  if (!contains(0) || !contains(s.all())) throw InvalidArgument("a topology contains the empty set and the space");
  if (s.opens_.size() <= 2048)
    for (auto u : s.opens_)
      for (auto v : s.opens_)
        if (!contains(u | v) || !contains(u & v))
          throw InvalidArgument("open sets are not closed under union and intersection");
  // b is in the closure of a iff every open containing b contains a.
  s.down_.assign(s.size(), 0);
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      bool spec = true;
      for (auto u : s.opens_)
        if (has(u, b) && !has(u, a)) {
          spec = false;
          break;
        }
      if (spec) s.down_[a] |= bit(b);
    }
  s.close_order();
  return s;
}

SpecPoset SpecPoset::discrete(std::vector<std::string> names) { return SpecPoset(std::move(names), {}); }

SpecPoset SpecPoset::chain(std::size_t r, const std::string& prefix) {
  std::vector<std::string> names;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i <= r; ++i) {
    names.push_back(prefix + std::to_string(i));
    if (i) edges.emplace_back(i - 1, i);
  }
  return SpecPoset(std::move(names), edges);
}

std::optional<std::size_t> SpecPoset::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

bool SpecPoset::is_open(PointSet s) const {
  if (explicit_) return std::binary_search(opens_.begin(), opens_.end(), s);
  for (std::size_t a = 0; a < size(); ++a)
    if ((down_[a] & s) && !has(s, a)) return false;
  return true;
}

std::vector<PointSet> SpecPoset::open_sets() const {
  if (explicit_) return opens_;
  if (size() > 16) throw InvalidArgument("open-set enumeration is limited to 16 points");
  std::vector<PointSet> out;
  for (PointSet s = 0; s <= all(); ++s)
    if (is_open(s)) out.push_back(s);
  return out;
}

SpecPoset SpecPoset::subspace(PointSet s) const {
  std::vector<std::size_t> idx;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < size(); ++i)
    if (has(s, i)) {
      idx.push_back(i);
      names.push_back(names_[i]);
    }
  auto restrict = [&](PointSet u) {
    PointSet r = 0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (has(u, idx[k])) r |= bit(k);
    return r;
  };
  if (explicit_) {
    std::vector<PointSet> traces;
    for (auto u : opens_) traces.push_back(restrict(u));
    return with_opens(std::move(names), std::move(traces));
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b)
      if (a != b && specializes(idx[a], idx[b])) edges.emplace_back(a, b);
  return SpecPoset(std::move(names), edges);
}

std::string SpecPoset::to_string() const {
  // Covering relations, generic point first; isolated points listed alone.
  std::string s = "{";
  bool first = true;
  std::vector<bool> mentioned(size(), false);
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) {
      if (a == b || !specializes(a, b)) continue;
      bool cover = true;
      for (std::size_t c = 0; c < size() && cover; ++c)
        if (c != a && c != b && specializes(a, c) && specializes(c, b)) cover = false;
      if (!cover) continue;
      s += (first ? "" : ", ") + names_[a] + " > " + names_[b];
      first = false;
      mentioned[a] = mentioned[b] = true;
    }
  for (std::size_t a = 0; a < size(); ++a)
    if (!mentioned[a]) {
      s += (first ? "" : ", ") + names_[a];
      first = false;
    }
  return s + "}";
}

// ---------------------------------------------------------------------------

PointSet image_of(const PointMap& f, PointSet s) {
  PointSet r = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (has(s, i)) r |= bit(f[i]);
  return r;
}

PointSet preimage_of(const PointMap& f, PointSet s) {
  PointSet r = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (has(s, f[i])) r |= bit(i);
  return r;
}

namespace {

void check_map(const SpecPoset& from, const SpecPoset& to, const PointMap& f) {
  if (f.size() != from.size()) throw InvalidArgument("map does not cover every source point");
  for (auto v : f)
    if (v >= to.size()) throw InvalidArgument("map sends a point outside the target");
}

// Opens that generate the topology under unions.
std::vector<PointSet> subbasis(const SpecPoset& s) {
  if (s.has_explicit_opens()) return s.open_sets();
  std::vector<PointSet> out;
  for (std::size_t b = 0; b < s.size(); ++b) {
    PointSet u = 0;
    for (std::size_t a = 0; a < s.size(); ++a)
      if (s.specializes(a, b)) u |= bit(a);
    out.push_back(u);
  }
  return out;
}

}  // namespace

bool is_continuous(const SpecPoset& from, const SpecPoset& to, const PointMap& f) {
  check_map(from, to, f);
  for (auto u : subbasis(to))
    if (!from.is_open(preimage_of(f, u))) return false;
  return true;
}

bool is_embedding(const SpecPoset& from, const SpecPoset& to, const PointMap& f) {
  check_map(from, to, f);
  std::set<std::size_t> distinct(f.begin(), f.end());
  if (distinct.size() != f.size() || !is_continuous(from, to, f)) return false;
  std::set<PointSet> induced;
  for (auto u : to.open_sets()) induced.insert(preimage_of(f, u));
  auto own = from.open_sets();
  return induced == std::set<PointSet>(own.begin(), own.end());
}

bool is_closed_embedding(const SpecPoset& from, const SpecPoset& to, const PointMap& f) {
  return is_embedding(from, to, f) && to.is_closed(image_of(f, from.all()));
}

bool is_open_embedding(const SpecPoset& from, const SpecPoset& to, const PointMap& f) {
  return is_embedding(from, to, f) && to.is_open(image_of(f, from.all()));
}

std::optional<PointMap> find_homeomorphism(const SpecPoset& a, const SpecPoset& b) {
  if (a.size() != b.size()) return std::nullopt;
  const std::size_t n = a.size();
  PointMap f(n);
  std::vector<bool> used(n, false);
  std::optional<PointMap> found;
  auto rec = [&](auto& self, std::size_t i) -> void {
    if (found) return;
    if (i == n) {
      PointMap inv(n);
      for (std::size_t k = 0; k < n; ++k) inv[f[k]] = k;
      if (is_continuous(a, b, f) && is_continuous(b, a, inv)) found = f;
      return;
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k)
        ok = a.specializes(k, i) == b.specializes(f[k], c) && a.specializes(i, k) == b.specializes(c, f[k]);
      if (!ok) continue;
      used[c] = true;
      f[i] = c;
      self(self, i + 1);
      used[c] = false;
    }
  };
  rec(rec, 0);
  return found;
}

PushoutTopReport topological_pushout(const SpecPoset& y, const SpecPoset& z, const SpecPoset& t, const PointMap& f,
                                     const PointMap& g, const std::optional<SpecPoset>& reference) {
  check_map(t, y, f);
  check_map(t, z, g);
  if (!is_continuous(t, y, f)) throw NotContinuous("T -> Y is not continuous");
  if (!is_continuous(t, z, g)) throw NotContinuous("T -> Z is not continuous");
  if (!is_closed_embedding(t, z, g)) throw NotClosedEmbedding("T -> Z is not a closed embedding");

  PushoutTopReport rep;
  const PointSet gt = image_of(g, t.all());
  std::vector<std::string> names = y.names();
  std::set<std::string> taken(names.begin(), names.end());
  rep.from_y.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) rep.from_y[i] = i;
  rep.from_z.resize(z.size());
  std::vector<std::size_t> t_of(z.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) t_of[g[i]] = i;
  for (std::size_t zi = 0; zi < z.size(); ++zi) {
    if (has(gt, zi)) {
      rep.from_z[zi] = f[t_of[zi]];
      continue;
    }
    std::string n = z.names()[zi];
    while (taken.count(n)) n += "'";
    taken.insert(n);
    rep.from_z[zi] = names.size();
    names.push_back(n);
  }
  const std::size_t nx = names.size();
  if (nx > 32) throw InvalidArgument("pushout has more than 32 points");

  // Order generated by the images of both orders.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t a = 0; a < y.size(); ++a)
    for (std::size_t b = 0; b < y.size(); ++b)
      if (a != b && y.specializes(a, b)) edges.emplace_back(rep.from_y[a], rep.from_y[b]);
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = 0; b < z.size(); ++b)
      if (a != b && z.specializes(a, b) && rep.from_z[a] != rep.from_z[b])
        edges.emplace_back(rep.from_z[a], rep.from_z[b]);
  SpecPoset order_space(names, edges);

  if (nx <= 16) {
    std::vector<PointSet> opens;
    const PointSet full = nx == 32 ? ~PointSet(0) : (PointSet(1) << nx) - 1;
    for (PointSet m = 0;; ++m) {
      if (y.is_open(preimage_of(rep.from_y, m)) && z.is_open(preimage_of(rep.from_z, m))) opens.push_back(m);
      if (m == full) break;
    }
    rep.space = SpecPoset::with_opens(names, std::move(opens));
    rep.quotient_enumerated = true;
    rep.order_topology_matches = rep.space.open_sets() == order_space.open_sets();
  } else {
    rep.space = order_space;
  }

  const PointSet iy = image_of(rep.from_y, y.all());
  const PointSet u = z.all() & ~gt;
  const PointSet iu = image_of(rep.from_z, u);
  rep.partition = (iy & iu) == 0 && (iy | iu) == rep.space.all();
  rep.jointly_surjective = (iy | image_of(rep.from_z, z.all())) == rep.space.all();
  rep.agree_on_t = true;
  for (std::size_t i = 0; i < t.size(); ++i) rep.agree_on_t = rep.agree_on_t && rep.from_y[f[i]] == rep.from_z[g[i]];
  if (rep.quotient_enumerated) {
    rep.y_closed_embedding = is_closed_embedding(y, rep.space, rep.from_y);
    PointMap u_map;
    for (std::size_t zi = 0; zi < z.size(); ++zi)
      if (has(u, zi)) u_map.push_back(rep.from_z[zi]);
    rep.u_open_embedding = is_open_embedding(z.subspace(u), rep.space, u_map);
  }
  if (reference) {
    rep.homeomorphism = find_homeomorphism(rep.space, *reference);
    rep.matches_reference = rep.homeomorphism.has_value();
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

void require_zero_dimensional(const GroebnerPtr& gb, std::size_t nvars) {
  for (std::size_t v = 0; v < nvars; ++v) {
    bool pure = false;
    for (const auto& p : gb->polys()) {
      const Exponent& e = p.leading_term(MonomialOrder::grevlex()).exp;
      bool only_v = e[v] > 0;
      for (std::size_t k = 0; k < nvars && only_v; ++k)
        if (k != v && e[k]) only_v = false;
      pure = pure || only_v;
    }
    if (!pure) throw NotZeroDimensional("no leading term is a pure power of variable " + std::to_string(v));
  }
}

}  // namespace

std::size_t quotient_dimension(const IdealHandle& ideal, const Limits& limits) {
  auto gb = ideal.basis(MonomialOrder::grevlex(), limits);
  if (gb->is_unit_ideal()) return 0;
  const std::size_t n = ideal.context()->nvars();
  require_zero_dimensional(gb, n);
  std::vector<Exponent> leads;
  for (const auto& p : gb->polys()) leads.push_back(p.leading_term(MonomialOrder::grevlex()).exp);
  std::set<Exponent> seen{Exponent(n, 0)};
  std::vector<Exponent> todo{Exponent(n, 0)};
  while (!todo.empty()) {
    Exponent e = todo.back();
    todo.pop_back();
    for (std::size_t v = 0; v < n; ++v) {
      Exponent next = e;
      ++next[v];
      if (std::any_of(leads.begin(), leads.end(), [&](const Exponent& l) { return divides(l, next); })) continue;
      if (seen.insert(next).second) todo.push_back(next);
    }
    if (seen.size() > static_cast<std::size_t>(limits.max_basis) * 16)
      throw BoundExceeded("quotient dimension exceeds the enumeration bound");
  }
  return seen.size();
}

ZeroDimSpec spec_points_zero_dim(const PresentedRing& r, const Limits& limits) {
  const Context& ctx = r.context();
  const std::size_t n = ctx->nvars();
  auto gb = r.ideal().basis(MonomialOrder::grevlex(), limits);
  ZeroDimSpec out;
  if (gb->is_unit_ideal()) return out;
  require_zero_dimensional(gb, n);

  auto rec = [&](auto& self, std::vector<MPoly> gens, std::size_t v, bool exact) -> void {
    IdealHandle j(ctx, gens);
    if (j.is_unit(limits)) return;
    if (v == n) {
      ZeroDimPoint p;
      p.ideal = j.basis(MonomialOrder::grevlex(), limits)->polys();
      p.exact = exact;
      p.degree = quotient_dimension(j, limits);
      p.label = "(";
      for (std::size_t i = 0; i < p.ideal.size(); ++i) p.label += (i ? ", " : "") + p.ideal[i].to_string();
      p.label += p.ideal.empty() ? "0)" : ")";
      out.points.push_back(std::move(p));
      return;
    }
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < n; ++k)
      if (k != v) others.push_back(k);
    IdealHandle e = eliminate(j, others, limits);
    const MPoly* best = nullptr;
    for (const auto& g : e.generators())
      if (!g.is_zero() && (!best || g.degree(v) < best->degree(v))) best = &g;
    if (!best) throw NotZeroDimensional("no univariate relation in variable " + ctx->vars()[v]);
    RootSplit split = split_roots(UPoly::from_mpoly(*best, v));
    if (!split.complete) out.factorization_incomplete = true;
    for (const auto& a : split.roots) {
      auto next = gens;
      next.push_back(MPoly::variable(ctx, v) - MPoly::constant(ctx, a));
      self(self, std::move(next), v + 1, exact);
    }
    if (split.rest.degree() > 0) {
      out.factorization_incomplete = true;
      auto next = gens;
      next.push_back(split.rest.to_mpoly(ctx, v));
      self(self, std::move(next), v + 1, false);
    }
  };
  rec(rec, r.relations(), 0, true);

  std::vector<std::string> labels;
  for (auto& p : out.points) {
    std::string l = p.label;
    while (std::find(labels.begin(), labels.end(), l) != labels.end()) l += "'";
    labels.push_back(l);
  }
  out.poset = SpecPoset::discrete(std::move(labels));
  return out;
}

}  // namespace ferrand
