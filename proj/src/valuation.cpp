#include "ferrand/valuation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ferrand {

int lex_compare(const ValueVec& a, const ValueVec& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  if (a.size() != b.size()) throw InvalidArgument("value vectors of different rank");
  return 0;
}

std::string value_text(const ValueVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + ")";
}

ValueVec operator+(const ValueVec& a, const ValueVec& b) {
  if (a.size() != b.size()) throw InvalidArgument("value vectors of different rank");
  ValueVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

namespace {

bool nonneg(const ValueVec& v) { return lex_compare(v, ValueVec(v.size(), 0)) >= 0; }

// Rank of a rational matrix given by rows.
std::size_t matrix_rank(std::vector<std::vector<Scalar>> m) {
  std::size_t rank = 0, cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Scalar f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

struct Solution {
  bool consistent = true;
  bool unique = true;
  std::vector<Scalar> x;
};

Solution solve_unique(std::vector<std::vector<Scalar>> m, std::vector<Scalar> rhs, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    std::swap(rhs[p], rhs[rank]);
    Scalar inv = 1 / m[rank][c];
    for (auto& x : m[rank]) x *= inv;
    rhs[rank] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Scalar f = m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[rank][k];
      rhs[r] -= f * rhs[rank];
    }
    pivots.push_back(c);
    ++rank;
  }
  Solution out;
  for (std::size_t r = rank; r < m.size(); ++r)
    if (rhs[r] != 0) out.consistent = false;
  out.unique = rank == cols;
  out.x.assign(cols, 0);
  for (std::size_t i = 0; i < rank; ++i) out.x[pivots[i]] = rhs[i];
  return out;
}

struct ParsedTerm {
  Scalar coeff = 1;
  std::map<std::string, long> powers;
};

// Terms like "3*x^-2*y" or "-1/2*x^(3)", joined by + and -.
std::vector<ParsedTerm> parse_terms(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty expression");
  std::vector<ParsedTerm> out;
  std::size_t i = 0;
  auto read_int = [&](long& v) {
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start || !std::isdigit(static_cast<unsigned char>(s[i - 1])))
      throw ParseError("expected an integer in '" + text + "'");
    v = std::stol(s.substr(start, i - start));
  };
  while (i < s.size()) {
    ParsedTerm t;
    if (s[i] == '+' || s[i] == '-') {
      if (s[i] == '-') t.coeff = -1;
      ++i;
    } else if (!out.empty()) {
      throw ParseError("expected + or - in '" + text + "'");
    }
    for (;;) {
      if (i >= s.size()) throw ParseError("unexpected end of '" + text + "'");
      if (std::isdigit(static_cast<unsigned char>(s[i]))) {
        std::size_t start = i;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
        t.coeff *= Scalar(s.substr(start, i - start));
      } else if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
        std::size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
        std::string name = s.substr(start, i - start);
        long e = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          bool paren = i < s.size() && s[i] == '(';
          if (paren) ++i;
          read_int(e);
          if (paren) {
            if (i >= s.size() || s[i] != ')') throw ParseError("unbalanced parenthesis in '" + text + "'");
            ++i;
          }
        }
        t.powers[name] += e;
      } else {
        throw ParseError("unexpected '" + std::string(1, s[i]) + "' in '" + text + "'");
      }
      if (i < s.size() && s[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    t.coeff.canonicalize();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

LexValuationRing::LexValuationRing(std::size_t rank, std::vector<std::string> names, std::vector<ValueVec> values,
                                   Field field) {
  if (names.size() != values.size()) throw InvalidArgument("one value vector per generator is required");
  std::set<std::string> seen;
  std::vector<std::vector<Scalar>> rows;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen.insert(names[i]).second) throw NameClash("generator " + names[i] + " appears twice");
    if (values[i].size() != rank)
      throw InvalidArgument("value of " + names[i] + " has " + std::to_string(values[i].size()) + " coordinates");
    rows.emplace_back(values[i].begin(), values[i].end());
  }
  if (matrix_rank(rows) != names.size())
    throw InvalidArgument("generator values are linearly dependent; the value map would not be injective");
  data_ = std::make_shared<Data>(Data{rank, std::move(names), std::move(values), field});
}

LexValuationRing LexValuationRing::dvr(const std::string& name, Field field) {
  return LexValuationRing(1, {name}, {{1}}, field);
}

LexValuationRing LexValuationRing::trivial(Field field) { return LexValuationRing(0, {}, {}, field); }

std::optional<std::size_t> LexValuationRing::index_of(const std::string& name) const {
  auto it = std::find(data_->names.begin(), data_->names.end(), name);
  if (it == data_->names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - data_->names.begin());
}

const ValueVec& LexValuationRing::value_of(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw InvalidArgument("unknown generator " + name);
  return data_->values[*i];
}

ValueVec LexValuationRing::monomial_value(const std::vector<long>& exps) const {
  ValueVec v(rank(), 0);
  for (std::size_t g = 0; g < exps.size(); ++g)
    for (std::size_t c = 0; c < rank(); ++c) v[c] += exps[g] * data_->values[g][c];
  return v;
}

MonomialElement LexValuationRing::generator(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw InvalidArgument("unknown generator " + name);
  MonomialElement e(*this);
  std::vector<long> exps(names().size(), 0);
  exps[*i] = 1;
  e.add_term(exps, 1);
  return e;
}

MonomialElement LexValuationRing::constant(const Scalar& c) const {
  MonomialElement e(*this);
  e.add_term(std::vector<long>(names().size(), 0), c);
  return e;
}

MonomialElement LexValuationRing::parse(const std::string& text) const {
  MonomialElement e(*this);
  for (const auto& t : parse_terms(text)) {
    std::vector<long> exps(names().size(), 0);
    for (const auto& [n, p] : t.powers) {
      auto i = index_of(n);
      if (!i) throw ParseError("unknown generator " + n);
      exps[*i] += p;
    }
    e.add_term(exps, t.coeff);
  }
  return e;
}

std::string LexValuationRing::to_string() const {
  std::ostringstream os;
  os << "valring rank " << rank() << " [";
  for (std::size_t i = 0; i < names().size(); ++i)
    os << (i ? ", " : "") << names()[i] << ": " << value_text(values()[i]);
  os << "]";
  return os.str();
}

void MonomialElement::add_term(const std::vector<long>& e, const Scalar& c) {
  Scalar v = ring_.field().add(terms_.count(e) ? terms_[e] : Scalar(0), ring_.field().normalize(c));
  if (v == 0)
    terms_.erase(e);
  else
    terms_[e] = v;
}

std::optional<ValueVec> MonomialElement::value() const {
  std::optional<ValueVec> best;
  for (const auto& [e, c] : terms_) {
    ValueVec v = ring_.monomial_value(e);
    if (!best || lex_compare(v, *best) < 0) best = v;
  }
  return best;
}

bool MonomialElement::in_ring() const {
  auto v = value();
  return !v || nonneg(*v);
}

MonomialElement MonomialElement::inverse() const {
  if (terms_.size() != 1) throw InvalidArgument("only monomials are inverted");
  const auto& [e, c] = *terms_.begin();
  std::vector<long> neg(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) neg[i] = -e[i];
  MonomialElement out(ring_);
  out.add_term(neg, ring_.field().inv(c));
  return out;
}

MonomialElement MonomialElement::operator+(const MonomialElement& o) const {
  if (!ring_.same_ring(o.ring_)) throw MixedContext("elements of different valuation rings");
  MonomialElement out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, c);
  return out;
}

MonomialElement MonomialElement::operator-(const MonomialElement& o) const {
  if (!ring_.same_ring(o.ring_)) throw MixedContext("elements of different valuation rings");
  MonomialElement out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e, ring_.field().neg(c));
  return out;
}

MonomialElement MonomialElement::operator*(const MonomialElement& o) const {
  if (!ring_.same_ring(o.ring_)) throw MixedContext("elements of different valuation rings");
  MonomialElement out(ring_);
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) {
      std::vector<long> e(e1.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = e1[i] + e2[i];
      out.add_term(e, ring_.field().mul(c1, c2));
    }
  return out;
}

std::string MonomialElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  // Highest value first reads most naturally for these rings: print in
  // descending exponent order.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_.names()[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    std::string coeff = ring_.field().format(c);
    bool negative = !coeff.empty() && coeff[0] == '-';
    if (negative) coeff = coeff.substr(1);
    if (s.empty())
      s += negative ? "-" : "";
    else
      s += negative ? " - " : " + ";
    if (mono.empty())
      s += coeff;
    else
      s += (coeff == "1" ? "" : coeff + "*") + mono;
  }
  return s;
}

LexValuationRing compose(const LexValuationRing& lower, const LexValuationRing& upper) {
  if (!(lower.field() == upper.field())) throw InvalidArgument("valuation rings over different fields");
  for (const auto& n : lower.names())
    if (upper.index_of(n)) throw NameClash("generator " + n + " occurs in both rings");
  const std::size_t r1 = lower.rank(), r2 = upper.rank();
  std::vector<std::string> names;
  std::vector<ValueVec> values;
  for (std::size_t i = 0; i < lower.names().size(); ++i) {
    names.push_back(lower.names()[i]);
    ValueVec v(r2, 0);
    v.insert(v.end(), lower.values()[i].begin(), lower.values()[i].end());
    values.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < upper.names().size(); ++i) {
    names.push_back(upper.names()[i]);
    ValueVec v = upper.values()[i];
    v.resize(r1 + r2, 0);
    values.push_back(std::move(v));
  }
  return LexValuationRing(r1 + r2, std::move(names), std::move(values), lower.field());
}

// ---------------------------------------------------------------------------

namespace {

// Compares infima whose coordinates past their length are -infinity.
int cut_compare(const ValueVec& a, const ValueVec& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

}  // namespace

ValueIdeal ValueIdeal::zero(std::size_t rank) { return ValueIdeal(rank, true, {}); }
ValueIdeal ValueIdeal::unit(std::size_t rank) { return ValueIdeal(rank, false, ValueVec(rank, 0)); }

ValueIdeal ValueIdeal::principal(const ValueVec& v) {
  ValueIdeal i(v.size(), false, v);
  i.normalize();
  return i;
}

ValueIdeal ValueIdeal::cone(std::size_t rank, const ValueVec& prefix) {
  if (prefix.size() > rank) throw InvalidArgument("cone prefix longer than the rank");
  ValueIdeal i(rank, false, prefix);
  i.normalize();
  return i;
}

ValueIdeal ValueIdeal::prime(std::size_t rank, std::size_t j) {
  if (j > rank) throw InvalidArgument("prime height exceeds the rank");
  if (j == 0) return zero(rank);
  ValueVec p(j, 0);
  p.back() = 1;
  return ValueIdeal(rank, false, p);
}

void ValueIdeal::normalize() {
  if (zero_) return;
  if (cut_compare(prefix_, ValueVec(prefix_.size(), 0)) <= 0) prefix_ = ValueVec(rank_, 0);
}

bool ValueIdeal::is_unit() const {
  return !zero_ && prefix_.size() == rank_ && std::all_of(prefix_.begin(), prefix_.end(), [](long x) { return !x; });
}

bool ValueIdeal::contains(const ValueVec& v) const {
  if (v.size() != rank_) throw InvalidArgument("value of the wrong rank");
  if (zero_ || !nonneg(v)) return false;
  return cut_compare(ValueVec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(prefix_.size())), prefix_) >= 0;
}

bool ValueIdeal::contains(const MonomialElement& a) const {
  auto v = a.value();
  return !v || contains(*v);
}

bool ValueIdeal::subset_of(const ValueIdeal& o) const {
  if (rank_ != o.rank_) throw InvalidArgument("ideals of different rank");
  if (zero_) return true;
  if (o.zero_) return false;
  return cut_compare(prefix_, o.prefix_) >= 0;
}

ValueIdeal ValueIdeal::join(const ValueIdeal& o) const { return subset_of(o) ? o : *this; }

ValueIdeal ValueIdeal::radical() const {
  if (zero_ || is_unit()) return *this;
  std::size_t l = 0;
  while (prefix_[l] == 0) ++l;
  return prime(rank_, l + 1);
}

std::optional<std::size_t> ValueIdeal::prime_height() const {
  if (zero_) return 0;
  if (prefix_.empty() || prefix_.back() != 1) return std::nullopt;
  for (std::size_t i = 0; i + 1 < prefix_.size(); ++i)
    if (prefix_[i]) return std::nullopt;
  return prefix_.size();
}

std::string ValueIdeal::to_string() const {
  if (zero_) return "(0)";
  if (is_unit()) return "(1)";
  std::string s = "{v >= (";
  for (std::size_t i = 0; i < rank_; ++i) {
    if (i) s += ", ";
    s += i < prefix_.size() ? std::to_string(prefix_[i]) : "-inf";
  }
  return s + ")}";
}

FgReport value_ideal_fg_test(const ValueIdeal& i, std::size_t chain_length) {
  FgReport r;
  if (i.is_zero()) {
    r.finitely_generated = true;
    return r;
  }
  const ValueVec& p = i.bounded_prefix();
  if (p.size() == i.rank()) {
    r.finitely_generated = true;
    r.generator = p;
    return r;
  }
  // (p, -n, 0, ...) decreases strictly in n, so the principal ideals grow.
  for (std::size_t n = 1; n <= chain_length; ++n) {
    ValueVec v = p;
    v.push_back(-static_cast<long>(n));
    v.resize(i.rank(), 0);
    r.chain.push_back(std::move(v));
  }
  r.chain_pattern = "(";
  for (std::size_t k = 0; k < i.rank(); ++k) {
    if (k) r.chain_pattern += ", ";
    r.chain_pattern += k < p.size() ? std::to_string(p[k]) : (k == p.size() ? "-n" : "0");
  }
  r.chain_pattern += ")";
  return r;
}

// ---------------------------------------------------------------------------

MonomialSquare MonomialSquare::laurent_example() { return {{"x"}, {true}, {"y"}}; }

bool MonomialSquare::in_conductor(const std::vector<long>& exps) const {
  bool positive = false;
  for (std::size_t j = units.size(); j < nvars(); ++j) {
    if (exps[j] < 0) return false;
    positive = positive || exps[j] > 0;
  }
  return positive;
}

bool MonomialSquare::in_a(const std::vector<long>& exps) const {
  for (std::size_t j = units.size(); j < nvars(); ++j)
    if (exps[j] < 0) return false;
  if (in_conductor(exps)) return true;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (b_positive[i] && exps[i] < 0) return false;
  return true;
}

namespace {

std::size_t leading_index(const ValueVec& v) {
  std::size_t i = 0;
  while (i < v.size() && v[i] == 0) ++i;
  return i;
}

std::vector<long> parse_monomial(const MonomialSquare& sq, const std::string& text) {
  auto terms = parse_terms(text);
  if (terms.size() != 1 || terms[0].coeff != 1) throw ParseError("expected a monomial, got '" + text + "'");
  std::vector<long> exps(sq.nvars(), 0);
  for (const auto& [n, p] : terms[0].powers) {
    std::size_t j = 0;
    while (j < sq.nvars() && (j < sq.units.size() ? sq.units[j] : sq.conductor[j - sq.units.size()]) != n) ++j;
    if (j == sq.nvars()) throw ParseError("unknown variable " + n);
    exps[j] += p;
  }
  return exps;
}

std::string heights_text(const std::vector<std::size_t>& hs) {
  std::string s = "{";
  for (std::size_t i = 0; i < hs.size(); ++i) s += (i ? ", " : "") + std::to_string(hs[i]);
  return s + "}";
}

}  // namespace

LiftReport lift_semivaluation(const MonomialSquare& sq, std::size_t rank,
                              const std::vector<std::pair<std::string, std::optional<ValueVec>>>& f) {
  if (sq.conductor.empty()) throw InvalidArgument("the square needs a conductor variable");
  if (sq.b_positive.size() != sq.units.size()) throw InvalidArgument("b_positive must flag every unit");
  const std::size_t nu = sq.units.size(), nv = sq.nvars();
  auto var_name = [&](std::size_t j) { return j < nu ? sq.units[j] : sq.conductor[j - nu]; };

  // Conductor variables sent to zero.
  std::vector<bool> infinite(nv, false);
  std::vector<std::pair<std::vector<long>, ValueVec>> finite;
  for (const auto& [text, val] : f) {
    auto e = parse_monomial(sq, text);
    if (!sq.in_a(e)) throw NotAValuation(text + " is not an element of A");
    if (val) {
      if (val->size() != rank) throw NotAValuation("value " + value_text(*val) + " has the wrong rank");
      finite.emplace_back(std::move(e), *val);
      continue;
    }
    std::size_t count = 0, which = 0;
    for (std::size_t j = nu; j < nv; ++j)
      if (e[j] > 0) ++count, which = j;
    if (count != 1) throw NotAValuation(text + " = 0 needs exactly one conductor variable");
    infinite[which] = true;
  }
  std::vector<std::size_t> unknowns;
  for (std::size_t j = 0; j < nv; ++j)
    if (!infinite[j]) unknowns.push_back(j);
  std::vector<std::vector<Scalar>> rows;
  for (const auto& [e, v] : finite) {
    for (std::size_t j = 0; j < nv; ++j)
      if (infinite[j] && e[j] != 0)
        throw NotAValuation("a monomial containing a variable sent to 0 has finite value " + value_text(v));
    std::vector<Scalar> row;
    for (auto j : unknowns) row.emplace_back(e[j]);
    rows.push_back(std::move(row));
  }
  std::vector<std::optional<ValueVec>> nu_val(nv);
  for (std::size_t j = 0; j < nv; ++j)
    if (!infinite[j]) nu_val[j] = ValueVec(rank, 0);
  std::vector<Solution> sols;
  for (std::size_t c = 0; c < rank; ++c) {
    std::vector<Scalar> rhs;
    for (const auto& fv : finite) rhs.emplace_back(fv.second[c]);
    sols.push_back(solve_unique(rows, rhs, unknowns.size()));
    if (!sols.back().consistent) throw NotAValuation("the values violate v(ab) = v(a) + v(b)");
  }
  if (rank && !sols[0].unique) throw InvalidArgument("values do not determine the assignment on every variable");
  for (std::size_t c = 0; c < rank; ++c)
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
      const Scalar& x = sols[c].x[k];
      if (x.get_den() != 1) throw NotAValuation("the values violate v(ab) = v(a) + v(b) over ZZ");
      (*nu_val[unknowns[k]])[c] = x.get_num().get_si();
    }
  for (std::size_t i = 0; i < nu; ++i)
    if (infinite[i]) throw NotAValuation("unit " + sq.units[i] + " cannot be sent to 0");

  // f must send A into R: B-part and every y * (Laurent monomial in units).
  std::size_t lead_units = rank;
  for (std::size_t i = 0; i < nu; ++i) {
    const ValueVec& v = *nu_val[i];
    if (sq.b_positive[i] ? !nonneg(v) : leading_index(v) != rank)
      throw NotAValuation("f sends " + sq.units[i] + " to value " + value_text(v) + ", outside R");
    lead_units = std::min(lead_units, leading_index(v));
  }
  ValueIdeal fi = ValueIdeal::zero(rank);  // f*I R
  for (std::size_t j = nu; j < nv; ++j) {
    if (infinite[j]) continue;
    const ValueVec& v = *nu_val[j];
    std::size_t ly = leading_index(v);
    bool zero_value = ly == rank;
    if (!nonneg(v) || (zero_value ? lead_units != rank : ly >= lead_units))
      throw NotAValuation("f sends " + var_name(j) + " times a unit monomial to negative value");
    // Values of y * x^n over all n: bounded only in the coordinates where
    // every unit value vanishes.
    ValueVec prefix(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lead_units));
    fi = fi.join(lead_units == rank ? ValueIdeal::principal(v) : ValueIdeal::cone(rank, prefix));
  }

  LiftReport rep;
  // f^{-1}(Y) = primes containing f*I R = primes containing its radical.
  ValueIdeal rad = fi.radical();
  auto h = rad.prime_height();
  if (!h && !rad.is_unit()) throw InvalidArgument("radical of f*I is not prime: " + rad.to_string());
  if (h)
    for (std::size_t j = *h; j <= rank; ++j) rep.preimage_of_y.push_back(j);
  rep.closed_point_configuration = rank >= 1 && rep.preimage_of_y == std::vector<std::size_t>{rank};

  rep.lifts = lead_units == rank;
  if (rep.lifts) {
    for (std::size_t j = 0; j < nv; ++j) rep.lift[var_name(j)] = nu_val[j];
    // T = V(y) in Z; with all units of value 0 this is the same prime set.
    rep.preimage_of_t = rep.preimage_of_y;
  } else {
    std::size_t i = 0;
    while (leading_index(*nu_val[i]) == rank) ++i;
    rep.refutation = "f*" + sq.units[i] + " has value " + value_text(*nu_val[i]) +
                     " > 0, so it is not invertible; sqrt(f*I R) = " + rad.to_string() +
                     " is prime and f^{-1}(Y) has points of heights " + heights_text(rep.preimage_of_y) +
                     (rep.preimage_of_y.size() >= 2 ? ", at least two" : "");
  }
  return rep;
}

std::vector<LiftReport> lift_on_product(
    const MonomialSquare& sq,
    const std::vector<std::pair<std::size_t, std::vector<std::pair<std::string, std::optional<ValueVec>>>>>&
        factors) {
  std::vector<LiftReport> out;
  for (const auto& [rank, f] : factors) {
    if (rank == 0) throw InvalidArgument("a field factor is an isolated point");
    LiftReport r = lift_semivaluation(sq, rank, f);
    for (auto h : r.preimage_of_y)
      if (h != rank) throw InvalidArgument("preimage of Y meets a non-closed point of height " + std::to_string(h));
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Images of I_m = x^{-m} y A in B = k[x]_(x), C = K[y]_(y) and K = k(x).
std::vector<std::pair<std::string, ValueIdeal>> chain_components(int m) {
  // y maps to 0 in B and K; in C the unit x^{-m} disappears from the value.
  ValueVec in_c{1};
  (void)m;
  return {{"B", ValueIdeal::zero(1)}, {"C", ValueIdeal::principal(in_c)}, {"K", ValueIdeal::zero(0)}};
}

}  // namespace

ChainSuiteReport conductor_chain_suite(int n) {
  if (n < 1) throw InvalidArgument("the chain index must be positive");
  ChainSuiteReport r;
  r.n = n;
  r.ring = compose(LexValuationRing::dvr("x"), LexValuationRing::dvr("y"));
  r.witness = r.ring.parse("x^" + std::to_string(-(n + 1)) + "*y");
  r.witness_value = *r.witness.value();
  r.conductor = ValueIdeal::cone(2, {1});
  r.i_n = ValueIdeal::principal(*r.ring.parse("x^" + std::to_string(-n) + "*y").value());
  r.i_next = ValueIdeal::principal(*r.ring.parse("x^" + std::to_string(-(n + 1)) + "*y").value());
  r.chain_strict = r.i_n.subset_of(r.i_next) && !r.i_next.subset_of(r.i_n) && r.i_next.contains(r.witness) &&
                   !r.i_n.contains(r.witness) && r.i_next.subset_of(r.conductor);
  r.conductor_fg = value_ideal_fg_test(r.conductor);

  auto comps = chain_components(n);
  auto base = chain_components(1);
  r.components_finitely_presented = true;
  r.components_independent_of_n = true;
  const char* quotient_names[] = {"B", "K", "K"};
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& [name, ideal] = comps[i];
    r.components_finitely_presented =
        r.components_finitely_presented && value_ideal_fg_test(ideal).finitely_generated;
    r.components_independent_of_n = r.components_independent_of_n && ideal == base[i].second;
    r.components.emplace_back(name + "'_" + std::to_string(n),
                              name + " / " + ideal.to_string() + " = " + quotient_names[i]);
  }
  r.pushforward = "B'_n x_{K'_n} C'_n = B = A/I";
  r.unit_injective = r.conductor.subset_of(r.i_n);
  if (!r.unit_injective && r.conductor.contains(r.witness) && !r.i_n.contains(r.witness))
    r.unit_kernel_witness = r.witness.to_string() + " + I_" + std::to_string(n);
  r.chain_reading = "strictly increasing: I_" + std::to_string(n) + " is contained in I_" + std::to_string(n + 1) +
                    " and the reverse inclusion fails";
  return r;
}

}  // namespace ferrand
