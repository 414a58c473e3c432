#include "ferrand/mpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "ferrand/errors.hpp"

namespace ferrand {

PolyContext::PolyContext(Field field, std::vector<std::string> vars)
    : field_(field), vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw NameClash("duplicate variable '" + vars_[i] + "'");
}

std::optional<std::size_t> PolyContext::index_of(const std::string& name) const {
  auto it = std::find(vars_.begin(), vars_.end(), name);
  if (it == vars_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vars_.begin());
}

Context make_context(Field field, std::vector<std::string> vars) {
  return std::make_shared<const PolyContext>(field, std::move(vars));
}

void require_same(const Context& a, const Context& b) {
  if (a == b) return;
  if (!a || !b || !a->same_as(*b))
    throw MixedContext("polynomials live over different fields or variable lists");
}

// ---------------------------------------------------------------------------
// Monomial orders

MonomialOrder::MonomialOrder(Kind kind, std::vector<int> blocks)
    : kind_(kind), blocks_(std::move(blocks)) {
  if (kind_ != Kind::Block) return;
  int nb = blocks_.empty() ? 0 : *std::max_element(blocks_.begin(), blocks_.end()) + 1;
  groups_.resize(static_cast<std::size_t>(nb));
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i] < 0) throw InvalidArgument("negative block index");
    groups_[static_cast<std::size_t>(blocks_[i])].push_back(i);
  }
}

MonomialOrder MonomialOrder::block(std::vector<int> block_of_var) {
  return MonomialOrder(Kind::Block, std::move(block_of_var));
}

MonomialOrder MonomialOrder::elimination(std::size_t nvars, const std::vector<std::size_t>& first) {
  std::vector<int> b(nvars, 1);
  for (auto i : first) b.at(i) = 0;
  return block(std::move(b));
}

namespace {

int grevlex_on(const Exponent& a, const Exponent& b, const std::vector<std::size_t>& idx) {
  int da = 0, db = 0;
  for (auto i : idx) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da < db ? -1 : 1;
  for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
    if (a[*it] != b[*it]) return a[*it] > b[*it] ? -1 : 1;
  }
  return 0;
}

}  // namespace

int MonomialOrder::compare(const Exponent& a, const Exponent& b) const {
  const std::size_t n = a.size();
  switch (kind_) {
    case Kind::Lex:
      for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
      return 0;
    case Kind::Grevlex: {
      int da = 0, db = 0;
      for (std::size_t i = 0; i < n; ++i) {
        da += a[i];
        db += b[i];
      }
      if (da != db) return da < db ? -1 : 1;
      for (std::size_t i = n; i-- > 0;)
        if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
      return 0;
    }
    case Kind::Block:
      for (const auto& g : groups_)
        if (int c = grevlex_on(a, b, g)) return c;
      return 0;
  }
  return 0;
}

std::string MonomialOrder::key() const {
  switch (kind_) {
    case Kind::Lex:
      return "lex";
    case Kind::Grevlex:
      return "grevlex";
    case Kind::Block: {
      std::string s = "block:";
      for (int b : blocks_) s += std::to_string(b) + ",";
      return s;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Exponent helpers

int total_degree(const Exponent& e) {
  int d = 0;
  for (int v : e) d += v;
  return d;
}

bool divides(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exponent lcm(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

Exponent operator+(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Exponent operator-(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// ---------------------------------------------------------------------------
// MPoly

namespace {

bool lex_greater(const Term& a, const Term& b) { return a.exp > b.exp; }

}  // namespace

MPoly MPoly::constant(const Context& ctx, const Scalar& c) {
  return monomial(ctx, Exponent(ctx->nvars(), 0), c);
}

MPoly MPoly::variable(const Context& ctx, std::size_t index) {
  Exponent e(ctx->nvars(), 0);
  e.at(index) = 1;
  return monomial(ctx, std::move(e), 1);
}

MPoly MPoly::variable(const Context& ctx, const std::string& name) {
  auto i = ctx->index_of(name);
  if (!i) throw ParseError("unknown variable '" + name + "'");
  return variable(ctx, *i);
}

MPoly MPoly::monomial(const Context& ctx, Exponent exp, const Scalar& c) {
  MPoly p(ctx);
  Scalar v = ctx->field().normalize(c);
  if (v != 0) p.terms_.push_back({std::move(exp), std::move(v)});
  return p;
}

MPoly MPoly::from_terms(const Context& ctx, std::vector<Term> terms) {
  const Field& f = ctx->field();
  std::sort(terms.begin(), terms.end(), lex_greater);
  MPoly p(ctx);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exp == t.exp) {
      p.terms_.back().coeff = f.add(p.terms_.back().coeff, f.normalize(t.coeff));
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      t.coeff = f.normalize(std::move(t.coeff));
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && ferrand::total_degree(terms_[0].exp) == 0);
}

Scalar MPoly::constant_term() const {
  if (!terms_.empty() && ferrand::total_degree(terms_.back().exp) == 0) return terms_.back().coeff;
  return 0;
}

Scalar MPoly::coeff(const Exponent& e) const {
  for (const auto& t : terms_)
    if (t.exp == e) return t.coeff;
  return 0;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, ferrand::total_degree(t.exp));
  return d;
}

int MPoly::degree(std::size_t var) const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.exp[var]);
  return d;
}

bool MPoly::uses_variable(std::size_t var) const {
  for (const auto& t : terms_)
    if (t.exp[var] != 0) return true;
  return false;
}

const Term& MPoly::leading_term(const MonomialOrder& order) const {
  if (terms_.empty()) throw InvalidArgument("leading term of the zero polynomial");
  const Term* best = &terms_[0];
  for (const auto& t : terms_)
    if (order.compare(t.exp, best->exp) > 0) best = &t;
  return *best;
}

MPoly MPoly::operator-() const {
  MPoly r(ctx_);
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff = field().neg(t.coeff);
  return r;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, const Field& f,
                              bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].exp > b[j].exp)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].exp > a[i].exp) {
      out.push_back({b[j].exp, subtract ? f.neg(b[j].coeff) : b[j].coeff});
      ++j;
    } else {
      Scalar c = subtract ? f.sub(a[i].coeff, b[j].coeff) : f.add(a[i].coeff, b[j].coeff);
      if (c != 0) out.push_back({a[i].exp, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

MPoly& MPoly::operator+=(const MPoly& o) {
  require_same(ctx_, o.ctx_);
  terms_ = merge_terms(terms_, o.terms_, field(), false);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  require_same(ctx_, o.ctx_);
  terms_ = merge_terms(terms_, o.terms_, field(), true);
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  require_same(a.ctx_, b.ctx_);
  if (a.is_zero() || b.is_zero()) return MPoly(a.ctx_);
  const Field& f = a.field();
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.exp + t.exp, f.mul(s.coeff, t.coeff)});
  return MPoly::from_terms(a.ctx_, std::move(prod));
}

MPoly operator*(const Scalar& c, const MPoly& a) {
  const Field& f = a.field();
  Scalar cn = f.normalize(c);
  MPoly r(a.ctx_);
  if (cn == 0) return r;
  r.terms_.reserve(a.terms_.size());
  for (const auto& t : a.terms_) r.terms_.push_back({t.exp, f.mul(cn, t.coeff)});
  return r;
}

MPoly MPoly::mul_term(const Exponent& e, const Scalar& c) const {
  MPoly r(ctx_);
  if (c == 0) return r;
  const Field& f = field();
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.exp + e, f.mul(c, t.coeff)});
  return r;
}

MPoly MPoly::pow(unsigned n) const {
  MPoly result = constant(ctx_, 1);
  MPoly base = *this;
  while (n) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n) base = base * base;
  }
  return result;
}

MPoly MPoly::monic(const MonomialOrder& order) const {
  if (is_zero()) return *this;
  return field().inv(leading_term(order).coeff) * *this;
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.ctx_ != b.ctx_ && !a.ctx_->same_as(*b.ctx_)) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

std::string format_monomial(const Exponent& e, const PolyContext& ctx) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += ctx.vars()[i];
    if (e[i] != 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

std::string MPoly::to_string(const MonomialOrder& order) const {
  if (terms_.empty()) return "0";
  std::vector<const Term*> sorted;
  for (const auto& t : terms_) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [&](const Term* a, const Term* b) { return order.compare(a->exp, b->exp) > 0; });
  std::string out;
  bool first = true;
  for (const Term* t : sorted) {
    Scalar c = t->coeff;
    bool negative = !field().is_prime() && c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    const bool unit_monomial = ferrand::total_degree(t->exp) == 0;
    if (unit_monomial) {
      out += field().format(c);
    } else if (c == 1) {
      out += format_monomial(t->exp, *ctx_);
    } else {
      out += field().format(c) + "*" + format_monomial(t->exp, *ctx_);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing: sums of products of integers, fractions, variables and powers.

namespace {

class PolyParser {
 public:
  PolyParser(const std::string& text, const Context& ctx) : s_(text), ctx_(ctx) {}

  MPoly parse() {
    MPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  MPoly expr() {
    skip();
    MPoly acc(ctx_);
    bool neg = accept('-');
    if (!neg) accept('+');
    MPoly t = term();
    acc = neg ? -t : t;
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        break;
    }
    return acc;
  }

  MPoly term() {
    MPoly acc = power();
    for (;;) {
      if (accept('*')) {
        acc = acc * power();
      } else if (accept('/')) {
        MPoly d = power();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc = ctx_->field().inv(d.constant_term()) * acc;
      } else {
        break;
      }
    }
    return acc;
  }

  MPoly power() {
    MPoly base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      base = base.pow(static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  MPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of polynomial");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      MPoly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return MPoly::constant(ctx_, Scalar(mpz_class(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto idx = ctx_->index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return MPoly::variable(ctx_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  Context ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

MPoly parse_poly(const std::string& text, const Context& ctx) { return PolyParser(text, ctx).parse(); }

MPoly substitute(const MPoly& p, const std::vector<MPoly>& images, const Context& target) {
  if (images.size() != p.context()->nvars())
    throw InvalidArgument("substitution needs one image per variable");
  std::vector<std::vector<MPoly>> powers(images.size());
  auto power_of = [&](std::size_t var, int e) -> const MPoly& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(MPoly::constant(target, 1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[var]);
    return cache[static_cast<std::size_t>(e)];
  };
  MPoly out(target);
  for (const auto& t : p.terms()) {
    MPoly term = MPoly::constant(target, t.coeff);
    for (std::size_t i = 0; i < t.exp.size(); ++i)
      if (t.exp[i]) term = term * power_of(i, t.exp[i]);
    out += term;
  }
  return out;
}

MPoly rename(const MPoly& p, const Context& target, const std::vector<std::size_t>& index_map) {
  if (!(p.field() == target->field())) throw MixedContext("rename across different fields");
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    Exponent e(target->nvars(), 0);
    for (std::size_t i = 0; i < t.exp.size(); ++i)
      if (t.exp[i]) e.at(index_map.at(i)) += t.exp[i];
    terms.push_back({std::move(e), t.coeff});
  }
  return MPoly::from_terms(target, std::move(terms));
}

std::vector<Exponent> monomials_of_degree(std::size_t n, int d) {
  std::vector<Exponent> out;
  if (n == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  Exponent cur(n, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == n) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
  };
  rec(rec, 0, d);
  return out;
}

}  // namespace ferrand
