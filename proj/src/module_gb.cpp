#include "ferrand/module_gb.hpp"

#include <sstream>

namespace ferrand {

Matrix::Matrix(Context c, std::size_t r, std::size_t cols) : ctx(std::move(c)), rows(r) {
  for (std::size_t j = 0; j < cols; ++j) columns.push_back(zero_vec(ctx, rows));
}

Matrix Matrix::identity(const Context& ctx, std::size_t n) {
  Matrix m(ctx, n);
  for (std::size_t j = 0; j < n; ++j) m.columns.push_back(unit_vec(ctx, n, j));
  return m;
}

void Matrix::add_column(Vec v) {
  if (v.size() != rows) throw InvalidArgument("column length does not match matrix rows");
  columns.push_back(std::move(v));
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols(); ++j) {
      if (j) os << ", ";
      os << at(i, j).to_string();
    }
  }
  os << "]";
  return os.str();
}

Vec zero_vec(const Context& ctx, std::size_t n) { return Vec(n, MPoly(ctx)); }

Vec unit_vec(const Context& ctx, std::size_t n, std::size_t i) {
  Vec v = zero_vec(ctx, n);
  v[i] = MPoly::constant(ctx, 1);
  return v;
}

bool is_zero(const Vec& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

Vec operator+(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vec operator-(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vec operator*(const MPoly& c, const Vec& v) {
  Vec r;
  r.reserve(v.size());
  for (const auto& p : v) r.push_back(c * p);
  return r;
}

Vec operator*(const Matrix& m, const Vec& v) {
  if (v.size() != m.cols()) throw InvalidArgument("matrix-vector size mismatch");
  Vec r = zero_vec(m.ctx, m.rows);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (v[j].is_zero()) continue;
    for (std::size_t i = 0; i < m.rows; ++i)
      if (!m.at(i, j).is_zero()) r[i] += v[j] * m.at(i, j);
  }
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  Matrix r(a.ctx, a.rows);
  for (const auto& col : b.columns) r.columns.push_back(a * col);
  return r;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw InvalidArgument("hconcat: row counts differ");
  Matrix r = a;
  for (const auto& c : b.columns) r.columns.push_back(c);
  return r;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix r(a.ctx, a.rows + b.rows);
  for (const auto& c : a.columns) {
    Vec v = c;
    v.resize(r.rows, MPoly(a.ctx));
    r.columns.push_back(std::move(v));
  }
  for (const auto& c : b.columns) {
    Vec v = zero_vec(a.ctx, a.rows);
    v.insert(v.end(), c.begin(), c.end());
    r.columns.push_back(std::move(v));
  }
  return r;
}

Matrix substitute(const Matrix& m, const std::vector<MPoly>& images, const Context& target) {
  Matrix r(target, m.rows);
  for (const auto& c : m.columns) {
    Vec v;
    for (const auto& p : c) v.push_back(substitute(p, images, target));
    r.columns.push_back(std::move(v));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

std::string fresh_name(const PolyContext& base, const std::string& stem) {
  std::string s = stem;
  while (base.index_of(s)) s += "_";
  return s;
}

}  // namespace

ModuleBasis::ModuleBasis(const Matrix& gens, const IdealHandle& ring, bool track, const Limits& limits)
    : base_(ring.context()), rows_(gens.rows), ngens_(gens.cols()), track_(track), ring_(ring) {
  if (gens.ctx) require_same(gens.ctx, base_);
  const std::size_t n = base_->nvars();
  std::vector<std::string> vars;
  std::string estem = fresh_name(*base_, "__e"), fstem = fresh_name(*base_, "__f");
  for (std::size_t i = 0; i < rows_; ++i) vars.push_back(estem + std::to_string(i));
  for (const auto& v : base_->vars()) vars.push_back(v);
  if (track_)
    for (std::size_t j = 0; j < ngens_; ++j) vars.push_back(fstem + std::to_string(j));
  ext_ = make_context(base_->field(), vars);

  std::vector<int> blocks(ext_->nvars(), 1);
  GbOptions opts;
  opts.limits = limits;
  opts.component_vars.assign(ext_->nvars(), false);
  for (std::size_t i = 0; i < rows_; ++i) {
    blocks[i] = 0;
    opts.component_vars[i] = true;
  }
  for (std::size_t j = 0; j < (track_ ? ngens_ : 0); ++j) opts.component_vars[rows_ + n + j] = true;

  std::vector<std::size_t> shift(n);
  for (std::size_t i = 0; i < n; ++i) shift[i] = rows_ + i;
  std::vector<MPoly> polys;
  for (std::size_t j = 0; j < ngens_; ++j) {
    MPoly p = embed(gens.columns[j]);
    if (track_) p += MPoly::variable(ext_, rows_ + n + j);
    if (!p.is_zero()) polys.push_back(std::move(p));
  }
  for (const auto& h : ring.generators()) {
    MPoly hh = rename(h, ext_, shift);
    for (std::size_t i = 0; i < rows_; ++i) polys.push_back(hh * MPoly::variable(ext_, i));
    if (track_)
      for (std::size_t j = 0; j < ngens_; ++j) polys.push_back(hh * MPoly::variable(ext_, rows_ + n + j));
  }
  gb_ = compute_groebner(ext_, polys, MonomialOrder::block(blocks), opts);
}

MPoly ModuleBasis::embed(const Vec& u) const {
  if (u.size() != rows_) throw InvalidArgument("vector length does not match module rank");
  const std::size_t n = base_->nvars();
  std::vector<Term> terms;
  for (std::size_t i = 0; i < rows_; ++i) {
    require_same(u[i].context(), base_);
    for (const auto& t : u[i].terms()) {
      Exponent e(ext_->nvars(), 0);
      e[i] = 1;
      for (std::size_t k = 0; k < n; ++k) e[rows_ + k] = t.exp[k];
      terms.push_back({std::move(e), t.coeff});
    }
  }
  return MPoly::from_terms(ext_, std::move(terms));
}

Vec ModuleBasis::extract(const MPoly& p, std::size_t offset, std::size_t count) const {
  const std::size_t n = base_->nvars();
  std::vector<std::vector<Term>> parts(count);
  for (const auto& t : p.terms()) {
    for (std::size_t c = 0; c < count; ++c) {
      if (t.exp[offset + c] == 0) continue;
      Exponent e(t.exp.begin() + static_cast<std::ptrdiff_t>(rows_),
                 t.exp.begin() + static_cast<std::ptrdiff_t>(rows_ + n));
      parts[c].push_back({std::move(e), t.coeff});
      break;
    }
  }
  Vec out;
  for (auto& terms : parts) out.push_back(MPoly::from_terms(base_, std::move(terms)));
  return out;
}

Vec ModuleBasis::reduce(const Vec& u) const { return extract(gb_->reduce(embed(u)), 0, rows_); }

std::optional<Vec> ModuleBasis::lift(const Vec& u) const {
  if (!track_) throw InvalidArgument("lift requires a tracked module basis");
  MPoly r = gb_->reduce(embed(u));
  if (!is_zero(extract(r, 0, rows_))) return std::nullopt;
  Vec c = extract(r, rows_ + base_->nvars(), ngens_);
  for (auto& p : c) p = -p;
  return c;
}

Matrix ModuleBasis::syzygies() const {
  if (!track_) throw InvalidArgument("syzygies require a tracked module basis");
  Matrix out(base_, ngens_);
  for (const auto& g : gb_->polys()) {
    bool has_e = false;
    for (std::size_t i = 0; i < rows_ && !has_e; ++i) has_e = g.uses_variable(i);
    if (has_e) continue;
    Vec v = extract(g, rows_ + base_->nvars(), ngens_);
    bool trivial = true;
    for (auto& p : v) {
      p = ring_.normal_form(p);
      if (!p.is_zero()) trivial = false;
    }
    if (!trivial) out.columns.push_back(std::move(v));
  }
  return out;
}

Matrix syzygy_matrix(const Matrix& m, const IdealHandle& ring, const Limits& limits) {
  return ModuleBasis(m, ring, true, limits).syzygies();
}

Matrix syzygy_matrix(const Matrix& m, const Limits& limits) {
  return syzygy_matrix(m, IdealHandle(m.ctx, {}), limits);
}

}  // namespace ferrand
