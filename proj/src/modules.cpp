#include "ferrand/modules.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace ferrand {

struct PresentedModule::Cache {
  std::mutex mu;
  std::optional<ModuleBasis> basis;
};

PresentedModule::PresentedModule(PresentedRing ring, std::size_t ngens, Matrix relations)
    : ring_(std::move(ring)), ngens_(ngens), relations_(std::move(relations)), cache_(std::make_shared<Cache>()) {
  if (!relations_.ctx) relations_.ctx = ring_.context();
  require_same(relations_.ctx, ring_.context());
  if (relations_.rows != ngens_) {
    if (relations_.cols() == 0)
      relations_.rows = ngens_;
    else
      throw InvalidArgument("relation matrix has " + std::to_string(relations_.rows) + " rows for " +
                            std::to_string(ngens_) + " generators");
  }
}

PresentedModule PresentedModule::free(const PresentedRing& ring, std::size_t n) {
  return PresentedModule(ring, n, Matrix(ring.context(), n));
}

const ModuleBasis& PresentedModule::basis() const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (!cache_->basis) cache_->basis.emplace(relations_, ring_.ideal(), false);
  return *cache_->basis;
}

Vec PresentedModule::reduce(const Vec& v) const {
  if (v.size() != ngens_) throw InvalidArgument("vector length does not match generator count");
  return basis().reduce(v);
}

bool PresentedModule::is_zero(const Vec& v) const { return ferrand::is_zero(reduce(v)); }

std::string PresentedModule::to_string() const {
  std::ostringstream os;
  os << ring_.name() << "^" << ngens_;
  if (relations_.cols()) {
    os << " / <";
    for (std::size_t j = 0; j < relations_.cols(); ++j) {
      os << (j ? ", " : "") << "(";
      for (std::size_t i = 0; i < ngens_; ++i) os << (i ? ", " : "") << relations_.at(i, j).to_string();
      os << ")";
    }
    os << ">";
  }
  return os.str();
}

PresentedModule base_change(const PresentedModule& m, const RingHom& h) {
  require_same(m.ring().context(), h.source().context());
  Matrix rel(h.target().context(), m.ngens());
  for (const auto& col : m.relations().columns) {
    Vec v;
    for (const auto& p : col) v.push_back(h.apply(p));
    if (!is_zero(v)) rel.columns.push_back(std::move(v));
  }
  return PresentedModule(h.target(), m.ngens(), std::move(rel));
}

// ---------------------------------------------------------------------------

PrunedModule prune(const PresentedModule& m) {
  const PresentedRing& R = m.ring();
  const Context& ctx = R.context();
  std::size_t n = m.ngens();
  std::vector<Vec> cols;
  for (const auto& c : m.relations().columns) {
    Vec v;
    for (const auto& p : c) v.push_back(R.reduce(p));
    if (!is_zero(v)) cols.push_back(std::move(v));
  }
  Matrix T = Matrix::identity(ctx, n);
  std::vector<std::size_t> kept(n);
  for (std::size_t i = 0; i < n; ++i) kept[i] = i;

  for (;;) {
    std::size_t pc = cols.size(), pr = 0;
    for (std::size_t j = 0; j < cols.size() && pc == cols.size(); ++j)
      for (std::size_t i = 0; i < cols[j].size(); ++i)
        if (cols[j][i].is_constant() && !cols[j][i].is_zero()) {
          pc = j;
          pr = i;
          break;
        }
    if (pc == cols.size()) break;
    Vec piv = cols[pc];
    Scalar inv = ctx->field().inv(piv[pr].constant_term());
    auto eliminate_row = [&](Vec& v) {
      if (!v[pr].is_zero()) {
        MPoly f = MPoly::constant(ctx, inv) * v[pr];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = R.reduce(v[i] - f * piv[i]);
      }
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(pr));
    };
    std::vector<Vec> next;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j == pc) continue;
      Vec v = cols[j];
      eliminate_row(v);
      if (!is_zero(v)) next.push_back(std::move(v));
    }
    cols = std::move(next);
    // Coordinates transform the same way as the relation columns.
    Matrix nt(ctx, T.rows - 1);
    for (auto c : T.columns) {
      eliminate_row(c);
      nt.columns.push_back(std::move(c));
    }
    T = std::move(nt);
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pr));
  }
  Matrix rel(ctx, kept.size());
  rel.columns = std::move(cols);
  return {PresentedModule(R, kept.size(), std::move(rel)), std::move(T), std::move(kept)};
}

// ---------------------------------------------------------------------------

namespace {

void check_shape(const PresentedModule& p, const PresentedModule& q, const Matrix& phi) {
  require_same(p.ring().context(), q.ring().context());
  if (phi.rows != q.ngens() || phi.cols() != p.ngens())
    throw InvalidArgument("map matrix is " + std::to_string(phi.rows) + "x" + std::to_string(phi.cols()) +
                          ", expected " + std::to_string(q.ngens()) + "x" + std::to_string(p.ngens()));
}

std::string vec_text(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

// Empty string when phi and psi are mutually inverse isomorphisms.
std::string check_inverse_pair(const PresentedModule& p, const PresentedModule& q, const Matrix& phi,
                               const Matrix& psi) {
  if (!is_well_defined(p, q, phi)) return "forward map does not respect relations";
  if (!is_well_defined(q, p, psi)) return "inverse map does not respect relations";
  for (std::size_t j = 0; j < p.ngens(); ++j) {
    Vec e = unit_vec(p.ring().context(), p.ngens(), j);
    if (!p.equal(psi * (phi * e), e)) return "inverse fails on source generator " + std::to_string(j);
  }
  for (std::size_t k = 0; k < q.ngens(); ++k) {
    Vec e = unit_vec(q.ring().context(), q.ngens(), k);
    if (!q.equal(phi * (psi * e), e)) return "inverse fails on target generator " + std::to_string(k);
  }
  return "";
}

Vec map_vec(const Vec& v, const RingHom& h) {
  Vec out;
  for (const auto& p : v) out.push_back(h.apply(p));
  return out;
}

Vec reduce_vec(const Vec& v, const PresentedRing& r) {
  Vec out;
  for (const auto& p : v) out.push_back(r.reduce(p));
  return out;
}

}  // namespace

bool is_well_defined(const PresentedModule& p, const PresentedModule& q, const Matrix& phi) {
  check_shape(p, q, phi);
  for (const auto& s : p.relations().columns)
    if (!q.is_zero(phi * s)) return false;
  return true;
}

ModuleIsoReport certify_module_iso(const PresentedModule& p, const PresentedModule& q, const Matrix& phi) {
  check_shape(p, q, phi);
  ModuleIsoReport rep;
  for (const auto& s : p.relations().columns)
    if (!q.is_zero(phi * s)) {
      rep.witness = "map is not well defined: relation " + vec_text(s) + " goes to a nonzero element";
      return rep;
    }
  const Context& ctx = q.ring().context();
  ModuleBasis mb(hconcat(phi, q.relations()), q.ring().ideal(), true);
  Matrix psi(ctx, p.ngens());
  for (std::size_t k = 0; k < q.ngens(); ++k) {
    auto c = mb.lift(unit_vec(ctx, q.ngens(), k));
    if (!c) {
      rep.witness = "cokernel: target generator " + std::to_string(k) + " is not in the image";
      return rep;
    }
    c->resize(p.ngens(), MPoly(ctx));
    psi.columns.push_back(reduce_vec(*c, p.ring()));
  }
  for (const auto& s : q.relations().columns) {
    Vec w = psi * s;
    if (!p.is_zero(w)) {
      rep.witness = "kernel contains " + vec_text(p.reduce(w));
      return rep;
    }
  }
  for (std::size_t j = 0; j < p.ngens(); ++j) {
    Vec e = unit_vec(ctx, p.ngens(), j);
    Vec d = psi * (phi * e) - e;
    if (!p.is_zero(d)) {
      rep.witness = "kernel contains " + vec_text(p.reduce(d));
      return rep;
    }
  }
  std::string err = check_inverse_pair(p, q, phi, psi);
  if (!err.empty()) {
    rep.witness = err;
    return rep;
  }
  rep.iso = true;
  rep.inverse = std::move(psi);
  return rep;
}

// ---------------------------------------------------------------------------

PatchedModule make_patched(const FerrandData& sq, PresentedModule my, PresentedModule mz, PresentedModule mt,
                           Matrix alpha, Matrix alpha_inv, Matrix beta, Matrix beta_inv) {
  require_same(my.ring().context(), sq.B().context());
  require_same(mz.ring().context(), sq.C().context());
  require_same(mt.ring().context(), sq.K().context());
  PresentedModule myk = base_change(my, sq.beta());
  PresentedModule mzk = base_change(mz, sq.pi());
  std::string err = check_inverse_pair(myk, mt, alpha, alpha_inv);
  if (!err.empty()) throw InvalidArgument("alpha is not a certified isomorphism: " + err);
  err = check_inverse_pair(mzk, mt, beta, beta_inv);
  if (!err.empty()) throw InvalidArgument("beta is not a certified isomorphism: " + err);
  return {std::move(my), std::move(mz), std::move(mt), std::move(alpha), std::move(alpha_inv), std::move(beta),
          std::move(beta_inv)};
}

PatchedModule free_patched(const FerrandData& sq, std::size_t n) {
  const Context& k = sq.K().context();
  return make_patched(sq, PresentedModule::free(sq.B(), n), PresentedModule::free(sq.C(), n),
                      PresentedModule::free(sq.K(), n), Matrix::identity(k, n), Matrix::identity(k, n),
                      Matrix::identity(k, n), Matrix::identity(k, n));
}

PatchedModule pullback(const FerrandData& sq, const PushoutPresentation& pres, const PresentedModule& m) {
  require_same(m.ring().context(), pres.ring.context());
  RingHom to_k = pres.to_b.then(sq.beta(), sq.limits());
  const Context& k = sq.K().context();
  std::size_t n = m.ngens();
  return make_patched(sq, base_change(m, pres.to_b), base_change(m, pres.to_c), base_change(m, to_k),
                      Matrix::identity(k, n), Matrix::identity(k, n), Matrix::identity(k, n), Matrix::identity(k, n));
}

bool MatchedPairModule::contains(const FerrandData& sq, const Vec& m_y, const Vec& m_z) const {
  Vec ay = source.alpha * map_vec(m_y, sq.beta());
  Vec bz = source.beta * map_vec(m_z, sq.pi());
  return source.mt.equal(ay, bz);
}

// ---------------------------------------------------------------------------
// Restriction of scalars along ψ: A → R'. An R'-module M' generated by
// e_1..e_n is generated over A by w_l e_i, where the w_l generate R' as an
// A-module. Work in k[z, a] with components E_i (for M') and F_(l,i) (for the
// A-side generators), eliminating z and E.

namespace {

struct Restriction {
  PresentedRing a;
  PresentedRing target;
  std::size_t n = 0, nz = 0, na = 0;
  std::vector<MPoly> w;
  Context ext;
  GroebnerPtr gb;
  Matrix relations;  // over A, rows = w.size() * n

  std::size_t comps() const { return w.size() * n; }

  MPoly embed(const Vec& m) const {
    std::vector<std::size_t> zmap(nz);
    for (std::size_t i = 0; i < nz; ++i) zmap[i] = n + i;
    MPoly out(ext);
    for (std::size_t i = 0; i < n; ++i)
      if (!m[i].is_zero()) out += rename(m[i], ext, zmap) * MPoly::variable(ext, i);
    return out;
  }

  // F-part of an ext polynomial as a vector over A, if it has no E or z terms.
  std::optional<Vec> f_part(const MPoly& p) const {
    std::vector<std::vector<Term>> parts(comps());
    for (const auto& t : p.terms()) {
      for (std::size_t i = 0; i < n + nz; ++i)
        if (t.exp[i]) return std::nullopt;
      for (std::size_t c = 0; c < comps(); ++c) {
        if (!t.exp[n + nz + na + c]) continue;
        Exponent e(t.exp.begin() + static_cast<std::ptrdiff_t>(n + nz),
                   t.exp.begin() + static_cast<std::ptrdiff_t>(n + nz + na));
        parts[c].push_back({std::move(e), t.coeff});
        break;
      }
    }
    Vec out;
    for (auto& terms : parts) out.push_back(a.reduce(MPoly::from_terms(a.context(), std::move(terms))));
    return out;
  }

  bool in_span(const Vec& m) const { return f_part(gb->reduce(embed(m))).has_value(); }

  Vec coordinates(const Vec& m) const {
    auto v = f_part(gb->reduce(embed(m)));
    if (!v) throw InvalidArgument("element is outside the A-span of the chosen generators");
    return *v;
  }

  // The element sum_c v_c * w_l e_i of M' for an A-vector v.
  Vec realize(const Vec& v, const RingHom& psi) const {
    Vec out = zero_vec(target.context(), n);
    for (std::size_t l = 0; l < w.size(); ++l)
      for (std::size_t i = 0; i < n; ++i) out[i] += psi.apply(v[l * n + i]) * w[l];
    return reduce_vec(out, target);
  }
};

Restriction build_restriction(const RingHom& psi, const PresentedModule& m, std::vector<MPoly> w,
                              const Limits& limits) {
  Restriction r{psi.source(), psi.target(), m.ngens(), psi.target().nvars(), psi.source().nvars(), std::move(w),
                nullptr, nullptr, Matrix()};
  const std::size_t n = r.n, nz = r.nz, na = r.na, L = r.w.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("__E" + std::to_string(i));
  for (std::size_t i = 0; i < nz; ++i) names.push_back("__z" + std::to_string(i));
  for (std::size_t i = 0; i < na; ++i) names.push_back("__a" + std::to_string(i));
  for (std::size_t c = 0; c < L * n; ++c) names.push_back("__F" + std::to_string(c));
  r.ext = make_context(psi.target().field(), names);

  std::vector<std::size_t> zmap(nz), amap(na);
  for (std::size_t i = 0; i < nz; ++i) zmap[i] = n + i;
  for (std::size_t i = 0; i < na; ++i) amap[i] = n + nz + i;
  auto E = [&](std::size_t i) { return MPoly::variable(r.ext, i); };

  std::vector<MPoly> gens;
  for (const auto& col : m.relations().columns) gens.push_back(r.embed(col));
  for (const auto& g : psi.target().relations()) {
    MPoly gg = rename(g, r.ext, zmap);
    for (std::size_t i = 0; i < n; ++i) gens.push_back(gg * E(i));
  }
  for (std::size_t j = 0; j < na; ++j) {
    MPoly d = MPoly::variable(r.ext, n + nz + j) - rename(psi.images()[j], r.ext, zmap);
    for (std::size_t i = 0; i < n; ++i) gens.push_back(d * E(i));
  }
  for (std::size_t l = 0; l < L; ++l) {
    MPoly wl = rename(r.w[l], r.ext, zmap);
    for (std::size_t i = 0; i < n; ++i)
      gens.push_back(MPoly::variable(r.ext, n + nz + na + l * n + i) - wl * E(i));
  }
  std::vector<int> blocks(r.ext->nvars(), 1);
  GbOptions opts;
  opts.limits = limits;
  opts.component_vars.assign(r.ext->nvars(), false);
  for (std::size_t i = 0; i < n + nz; ++i) blocks[i] = 0;
  for (std::size_t i = 0; i < n; ++i) opts.component_vars[i] = true;
  for (std::size_t c = 0; c < L * n; ++c) opts.component_vars[n + nz + na + c] = true;
  r.gb = compute_groebner(r.ext, gens, MonomialOrder::block(blocks), opts);

  r.relations = Matrix(r.a.context(), L * n);
  for (const auto& g : r.gb->polys()) {
    auto v = r.f_part(g);
    if (v && !is_zero(*v)) r.relations.columns.push_back(std::move(*v));
  }
  return r;
}

// Standard monomials of R' up to degree D until their A-span is closed under
// multiplication by the variables of R'.
std::vector<MPoly> module_generators_over(const RingHom& psi, const Limits& limits) {
  const PresentedRing& R = psi.target();
  const Context& ctx = R.context();
  auto gb = R.ideal().basis(MonomialOrder::grevlex(), limits);
  if (gb->is_unit_ideal()) return {};
  std::vector<Exponent> leads;
  for (const auto& g : gb->polys()) leads.push_back(g.leading_term(MonomialOrder::grevlex()).exp);
  PresentedModule free1 = PresentedModule::free(R, 1);
  std::vector<MPoly> w;
  for (int d = 0; d <= limits.probe_degree; ++d) {
    auto monos = monomials_of_degree(ctx->nvars(), d);
    std::sort(monos.begin(), monos.end(),
              [](const Exponent& a, const Exponent& b) { return MonomialOrder::grevlex().less(a, b); });
    for (const auto& m : monos)
      if (std::none_of(leads.begin(), leads.end(), [&](const Exponent& l) { return divides(l, m); }))
        w.push_back(MPoly::monomial(ctx, m));
    Restriction r = build_restriction(psi, free1, w, limits);
    bool closed = true;
    for (std::size_t j = 0; j < ctx->nvars() && closed; ++j)
      for (const auto& x : w)
        if (!r.in_span({R.reduce(R.var(j) * x)})) {
          closed = false;
          break;
        }
    if (closed) return w;
  }
  throw BoundExceeded(R.name() + " is not generated as a module over " + psi.source().name() +
                      " by monomials of degree <= " + std::to_string(limits.probe_degree));
}

struct PushforwardData {
  RingHom to_k;
  Restriction ry, rz, rt;
  Matrix k0;       // generators of φ_*M inside A^{G_Y} ⊕ A^{G_Z}
  Matrix base_rel; // relations of M_Y ⊕ M_Z over A
  PrunedModule pruned;
  std::vector<std::pair<Vec, Vec>> pairs;
};

Matrix project_rows(const Matrix& m, std::size_t rows) {
  Matrix out(m.ctx, rows);
  for (const auto& c : m.columns) {
    Vec v(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(rows));
    if (!is_zero(v)) out.columns.push_back(std::move(v));
  }
  return out;
}

PushforwardData compute_pushforward(const FerrandData& sq, const PushoutPresentation& pres, const PatchedModule& m) {
  const Limits& lim = sq.limits();
  const PresentedRing& A = pres.ring;
  RingHom to_k = pres.to_b.then(sq.beta(), lim);
  Restriction ry = build_restriction(pres.to_b, m.my, module_generators_over(pres.to_b, lim), lim);
  Restriction rz = build_restriction(pres.to_c, m.mz, module_generators_over(pres.to_c, lim), lim);
  Restriction rt = build_restriction(to_k, m.mt, module_generators_over(to_k, lim), lim);

  const std::size_t gy = ry.comps(), gz = rz.comps();
  Matrix phi(A.context(), rt.comps());
  for (std::size_t l = 0; l < ry.w.size(); ++l)
    for (std::size_t i = 0; i < ry.n; ++i) {
      Vec v = reduce_vec(sq.beta().apply(ry.w[l]) * m.alpha.columns[i], sq.K());
      phi.columns.push_back(rt.coordinates(v));
    }
  for (std::size_t l = 0; l < rz.w.size(); ++l)
    for (std::size_t i = 0; i < rz.n; ++i) {
      Vec v = reduce_vec((-sq.pi().apply(rz.w[l])) * m.beta.columns[i], sq.K());
      phi.columns.push_back(rt.coordinates(v));
    }
  Matrix k0 = project_rows(syzygy_matrix(hconcat(phi, rt.relations), A.ideal(), lim), gy + gz);
  for (auto& c : k0.columns) c = reduce_vec(c, A);
  Matrix base_rel = direct_sum(ry.relations, rz.relations);
  base_rel.ctx = A.context();
  Matrix rel = project_rows(syzygy_matrix(hconcat(k0, base_rel), A.ideal(), lim), k0.cols());
  PrunedModule pruned = prune(PresentedModule(A, k0.cols(), rel));

  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t j : pruned.kept) {
    const Vec& v = k0.columns[j];
    Vec vy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(gy));
    Vec vz(v.begin() + static_cast<std::ptrdiff_t>(gy), v.end());
    pairs.emplace_back(ry.realize(vy, pres.to_b), rz.realize(vz, pres.to_c));
  }
  return {to_k, std::move(ry), std::move(rz), std::move(rt), std::move(k0), std::move(base_rel), std::move(pruned),
          std::move(pairs)};
}

}  // namespace

MatchedPairModule pushforward(const FerrandData& sq, const PatchedModule& m,
                              const std::optional<PushoutPresentation>& pres) {
  MatchedPairModule out{m, {}, std::nullopt};
  if (!pres) return out;
  PushforwardData d = compute_pushforward(sq, *pres, m);
  out.generators = d.pairs;
  out.presentation = d.pruned.module;
  return out;
}

AdjunctionReport counit_check(const FerrandData& sq, const PushoutPresentation& pres, const PatchedModule& m) {
  PushforwardData d = compute_pushforward(sq, pres, m);
  const PresentedModule& P = d.pruned.module;
  AdjunctionReport rep;
  rep.direction = "counit";
  Matrix fy(sq.B().context(), m.my.ngens()), fz(sq.C().context(), m.mz.ngens()), fk(sq.K().context(), m.mt.ngens());
  for (const auto& [y, z] : d.pairs) {
    fy.columns.push_back(y);
    fz.columns.push_back(z);
    fk.columns.push_back(reduce_vec(m.alpha * map_vec(y, sq.beta()), sq.K()));
  }
  rep.components.push_back(certify_module_iso(base_change(P, pres.to_b), m.my, fy));
  rep.components.push_back(certify_module_iso(base_change(P, pres.to_c), m.mz, fz));
  rep.components.push_back(certify_module_iso(base_change(P, d.to_k), m.mt, fk));
  const char* names[] = {"B", "C", "K"};
  rep.iso = true;
  for (std::size_t i = 0; i < 3; ++i)
    if (!rep.components[i].iso) {
      rep.iso = false;
      rep.witness = std::string(names[i]) + "-component: " + rep.components[i].witness;
      break;
    }
  return rep;
}

AdjunctionReport unit_check(const FerrandData& sq, const PushoutPresentation& pres, const PresentedModule& m) {
  PatchedModule n = pullback(sq, pres, m);
  PushforwardData d = compute_pushforward(sq, pres, n);
  const PresentedRing& A = pres.ring;
  AdjunctionReport rep;
  rep.direction = "unit";
  ModuleBasis lifter(hconcat(d.k0, d.base_rel), A.ideal(), true);
  Matrix u(A.context(), d.pruned.module.ngens());
  for (std::size_t i = 0; i < m.ngens(); ++i) {
    Vec cy = d.ry.coordinates(unit_vec(sq.B().context(), m.ngens(), i));
    Vec cz = d.rz.coordinates(unit_vec(sq.C().context(), m.ngens(), i));
    cy.insert(cy.end(), cz.begin(), cz.end());
    auto c = lifter.lift(cy);
    if (!c) {
      rep.witness = "image of generator " + std::to_string(i) + " is not a matched pair";
      return rep;
    }
    c->resize(d.k0.cols(), MPoly(A.context()));
    u.columns.push_back(reduce_vec(d.pruned.to_pruned * *c, A));
  }
  rep.components.push_back(certify_module_iso(m, d.pruned.module, u));
  rep.iso = rep.components.back().iso;
  rep.witness = rep.components.back().witness;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

MPoly determinant(const std::vector<std::vector<MPoly>>& m, const PresentedRing& r) {
  const std::size_t k = m.size();
  if (k == 1) return m[0][0];
  if (k == 2) return r.reduce(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
  MPoly det(r.context());
  for (std::size_t i = 0; i < k; ++i) {
    if (m[i][0].is_zero()) continue;
    std::vector<std::vector<MPoly>> minor;
    for (std::size_t a = 0; a < k; ++a) {
      if (a == i) continue;
      minor.emplace_back(m[a].begin() + 1, m[a].end());
    }
    MPoly term = m[i][0] * determinant(minor, r);
    if (i % 2)
      det -= term;
    else
      det += term;
  }
  return r.reduce(det);
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::string ideal_text(const std::vector<MPoly>& gens) {
  if (gens.empty()) return "(0)";
  std::string s = "(";
  for (std::size_t i = 0; i < gens.size(); ++i) s += (i ? ", " : "") + gens[i].to_string();
  return s + ")";
}

}  // namespace

std::vector<MPoly> fitting_ideal(const PresentedModule& m, int j) {
  const PresentedRing& R = m.ring();
  const int n = static_cast<int>(m.ngens());
  const int k = n - j;
  if (k <= 0) return {R.one()};
  const Matrix& s = m.relations();
  if (static_cast<std::size_t>(k) > s.cols()) return {};
  std::vector<std::vector<std::size_t>> rows, cols;
  std::vector<std::size_t> cur;
  combinations(m.ngens(), static_cast<std::size_t>(k), 0, cur, rows);
  combinations(s.cols(), static_cast<std::size_t>(k), 0, cur, cols);
  std::vector<MPoly> out;
  for (const auto& rs : rows)
    for (const auto& cs : cols) {
      std::vector<std::vector<MPoly>> sub;
      for (auto r : rs) {
        std::vector<MPoly> row;
        for (auto c : cs) row.push_back(s.at(r, c));
        sub.push_back(std::move(row));
      }
      MPoly d = R.reduce(determinant(sub, R));
      if (!d.is_zero() && std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
    }
  return out;
}

std::string FlatVerdict::to_string() const {
  switch (kind) {
    case Kind::Projective:
      return "projective of rank " + std::to_string(rank);
    case Kind::NotConstantRank:
      return "locally free of non-constant rank: Fitt_" + std::to_string(failing_index) + " = " + failing_ideal +
             " is idempotent";
    case Kind::NotFlat:
      break;
  }
  return "not flat and finitely presented: Fitt_" + std::to_string(failing_index) + " = " + failing_ideal;
}

FlatVerdict flat_fp_test(const PresentedModule& m) {
  PresentedModule p = prune(m).module;
  const PresentedRing& R = p.ring();
  auto with_ring = [&](std::vector<MPoly> g) {
    for (const auto& r : R.relations()) g.push_back(r);
    return IdealHandle(R.context(), std::move(g));
  };
  FlatVerdict v;
  int r = 0;
  for (; r <= static_cast<int>(p.ngens()); ++r)
    if (with_ring(fitting_ideal(p, r)).is_unit()) break;
  if (r == 0) {
    v.kind = FlatVerdict::Kind::Projective;
    v.rank = 0;
    return v;
  }
  std::vector<MPoly> prev = fitting_ideal(p, r - 1);
  if (prev.empty()) {
    v.kind = FlatVerdict::Kind::Projective;
    v.rank = r;
    return v;
  }
  v.failing_index = r - 1;
  v.failing_ideal = ideal_text(prev);
  std::vector<MPoly> sq;
  for (std::size_t a = 0; a < prev.size(); ++a)
    for (std::size_t b = a; b < prev.size(); ++b) sq.push_back(prev[a] * prev[b]);
  IdealHandle i2 = with_ring(sq);
  bool idempotent = std::all_of(prev.begin(), prev.end(), [&](const MPoly& g) { return i2.contains(g); });
  v.kind = idempotent ? FlatVerdict::Kind::NotConstantRank : FlatVerdict::Kind::NotFlat;
  return v;
}

FreeGeneratorSearch find_free_generator(const FerrandData& sq, const PatchedModule& m, int degree) {
  if (m.my.ngens() != 1 || m.mz.ngens() != 1 || m.mt.ngens() != 1)
    throw InvalidArgument("free generator search needs rank-one components with one generator each");
  FreeGeneratorSearch res;
  const PresentedRing& C = sq.C();
  auto gb = C.ideal().basis();
  std::vector<Exponent> leads;
  for (const auto& g : gb->polys()) leads.push_back(g.leading_term(MonomialOrder::grevlex()).exp);
  for (int d = 0; d <= degree; ++d) {
    auto monos = monomials_of_degree(C.nvars(), d);
    std::sort(monos.begin(), monos.end(),
              [](const Exponent& a, const Exponent& b) { return MonomialOrder::grevlex().less(a, b); });
    for (const auto& e : monos) {
      if (std::any_of(leads.begin(), leads.end(), [&](const Exponent& l) { return divides(l, e); })) continue;
      MPoly u = MPoly::monomial(C.context(), e);
      if (!C.is_unit(u)) continue;
      ++res.candidates;
      res.units_tried.push_back(u.to_string());
      // β(u e_Z) = α(b e_Y) forces β(b) = π(u) β_00 α^{-1}_00.
      MPoly target = sq.K().reduce(sq.pi().apply(u) * m.beta.at(0, 0) * m.alpha_inv.at(0, 0));
      auto b = sq.beta_graph().preimage(target);
      if (b && sq.B().is_unit(*b) && C.is_unit(u)) {
        res.found = true;
        res.generator = std::make_pair(*b, u);
        return res;
      }
    }
  }
  return res;
}

}  // namespace ferrand
