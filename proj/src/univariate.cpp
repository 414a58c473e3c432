#include "ferrand/univariate.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "ferrand/errors.hpp"

namespace ferrand {

UPoly::UPoly(Field f, std::vector<Scalar> coeffs) : field_(f), c_(std::move(coeffs)) {
  for (auto& c : c_) c = field_.normalize(c);
  trim();
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::x(Field f) { return UPoly(f, {0, 1}); }
UPoly UPoly::constant(Field f, const Scalar& c) { return UPoly(f, {c}); }

UPoly UPoly::from_mpoly(const MPoly& p, std::size_t var) {
  std::vector<Scalar> c;
  for (const auto& t : p.terms()) {
    for (std::size_t i = 0; i < t.exp.size(); ++i)
      if (i != var && t.exp[i]) throw InvalidArgument(p.to_string() + " is not univariate");
    std::size_t d = static_cast<std::size_t>(t.exp[var]);
    if (c.size() <= d) c.resize(d + 1, 0);
    c[d] = t.coeff;
  }
  return UPoly(p.field(), std::move(c));
}

MPoly UPoly::to_mpoly(const Context& ctx, std::size_t var) const {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    Exponent e(ctx->nvars(), 0);
    e[var] = static_cast<int>(i);
    terms.push_back({std::move(e), c_[i]});
  }
  return MPoly::from_terms(ctx, std::move(terms));
}

Scalar UPoly::eval(const Scalar& a) const {
  Scalar r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = field_.add(field_.mul(r, a), *it);
  return r;
}

UPoly UPoly::operator+(const UPoly& o) const {
  std::vector<Scalar> c(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = field_.add(i < c_.size() ? c_[i] : Scalar(0), i < o.c_.size() ? o.c_[i] : Scalar(0));
  return UPoly(field_, std::move(c));
}

UPoly UPoly::operator-(const UPoly& o) const {
  std::vector<Scalar> c(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = field_.sub(i < c_.size() ? c_[i] : Scalar(0), i < o.c_.size() ? o.c_[i] : Scalar(0));
  return UPoly(field_, std::move(c));
}

UPoly UPoly::operator*(const UPoly& o) const {
  if (is_zero() || o.is_zero()) return UPoly(field_, {});
  std::vector<Scalar> c(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] = field_.add(c[i + j], field_.mul(c_[i], o.c_[j]));
  return UPoly(field_, std::move(c));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  Scalar inv = field_.inv(lead());
  std::vector<Scalar> c;
  for (const auto& a : c_) c.push_back(field_.mul(a, inv));
  return UPoly(field_, std::move(c));
}

UPoly UPoly::derivative() const {
  std::vector<Scalar> c;
  for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(field_.mul(field_.from_int(static_cast<long>(i)), c_[i]));
  return UPoly(field_, std::move(c));
}

UDivision divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw InvalidArgument("division by the zero polynomial");
  const Field& f = a.field();
  std::vector<Scalar> r = a.coeffs();
  int db = b.degree();
  std::vector<Scalar> q(std::max(0, a.degree() - db + 1), 0);
  Scalar inv = f.inv(b.lead());
  for (int d = a.degree(); d >= db; --d) {
    Scalar c = f.mul(r[static_cast<std::size_t>(d)], inv);
    if (c == 0) continue;
    q[static_cast<std::size_t>(d - db)] = c;
    for (int i = 0; i <= db; ++i) {
      auto& slot = r[static_cast<std::size_t>(d - db + i)];
      slot = f.sub(slot, f.mul(c, b.coeffs()[static_cast<std::size_t>(i)]));
    }
  }
  return {UPoly(f, std::move(q)), UPoly(f, std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).remainder;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UPoly powmod(const UPoly& base, const mpz_class& e, const UPoly& mod) {
  UPoly result = divmod(UPoly::constant(base.field(), 1), mod).remainder;
  UPoly b = divmod(base, mod).remainder;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = divmod(result * result, mod).remainder;
    if (mpz_tstbit(e.get_mpz_t(), i)) result = divmod(result * b, mod).remainder;
  }
  return result;
}

UPoly squarefree_part(const UPoly& f) {
  if (f.degree() <= 0) return f.monic();
  UPoly d = f.derivative();
  if (d.is_zero()) {
    // f = g(x^p) in characteristic p; over F_p, g(x^p) = g(x)^p.
    const std::uint32_t p = f.field().characteristic();
    std::vector<Scalar> c;
    for (std::size_t i = 0; i < f.coeffs().size(); i += p) c.push_back(f.coeffs()[i]);
    return squarefree_part(UPoly(f.field(), std::move(c)));
  }
  return divmod(f, gcd(f, d)).quotient.monic();
}

namespace {

// Prime factors by trial division; false when a cofactor could not be
// certified prime within the bound.
bool prime_factors(mpz_class n, std::vector<mpz_class>& out) {
  if (n < 0) n = -n;
  const unsigned long bound = 1000000;
  for (unsigned long d = 2; d <= bound && mpz_class(d) * d <= n; ++d) {
    if (n % d != 0) continue;
    out.emplace_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return n <= mpz_class(bound) * bound;
}

std::vector<mpz_class> divisors(const mpz_class& n, bool& complete) {
  std::vector<mpz_class> primes;
  complete = prime_factors(n, primes) && complete;
  std::vector<mpz_class> divs{1};
  mpz_class m = abs(n);
  for (const auto& p : primes) {
    std::size_t k = divs.size();
    mpz_class pk = 1;
    while (m % p == 0) {
      m /= p;
      pk *= p;
      for (std::size_t i = 0; i < k; ++i) divs.push_back(divs[i] * pk);
    }
    if (divs.size() > 20000) {
      complete = false;
      break;
    }
  }
  return divs;
}

std::vector<Scalar> rational_roots(const UPoly& f, bool& complete) {
  // Integer coefficients with the same roots.
  mpz_class den = 1;
  for (const auto& c : f.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> z;
  for (const auto& c : f.coeffs()) z.push_back(mpz_class(c * den));
  std::vector<Scalar> roots;
  std::size_t low = 0;
  while (low < z.size() && z[low] == 0) ++low;
  if (low > 0) roots.emplace_back(0);
  if (z.size() - low <= 1) return roots;
  auto ps = divisors(z[low], complete);
  auto qs = divisors(z.back(), complete);
  std::set<Scalar> seen;
  for (const auto& p : ps)
    for (const auto& q : qs)
      for (int s : {1, -1}) {
        Scalar r(p * s, q);
        r.canonicalize();
        if (seen.insert(r).second && f.eval(r) == 0) roots.push_back(r);
      }
  return roots;
}

void split_equal_degree(const UPoly& g, std::mt19937_64& rng, std::vector<Scalar>& roots) {
  const Field& f = g.field();
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    roots.push_back(f.neg(g.monic().coeffs()[0]));
    return;
  }
  const std::uint32_t p = f.characteristic();
  std::uniform_int_distribution<std::uint32_t> pick(0, p - 1);
  mpz_class e = (mpz_class(p) - 1) / 2;
  for (;;) {
    UPoly shift = UPoly::x(f) + UPoly::constant(f, Scalar(pick(rng)));
    UPoly h = gcd(g, powmod(shift, e, g) - UPoly::constant(f, 1));
    if (h.degree() > 0 && h.degree() < g.degree()) {
      split_equal_degree(h, rng, roots);
      split_equal_degree(divmod(g, h).quotient, rng, roots);
      return;
    }
  }
}

std::vector<Scalar> prime_field_roots(const UPoly& f) {
  const Field& fld = f.field();
  const std::uint32_t p = fld.characteristic();
  std::vector<Scalar> roots;
  if (p <= 4096) {
    for (std::uint32_t a = 0; a < p; ++a)
      if (f.eval(Scalar(a)) == 0) roots.emplace_back(a);
    return roots;
  }
  UPoly xp = powmod(UPoly::x(fld), mpz_class(p), f);
  UPoly g = gcd(f, xp - UPoly::x(fld));
  std::mt19937_64 rng(0x5eed);
  split_equal_degree(g, rng, roots);
  return roots;
}

}  // namespace

RootSplit split_roots(const UPoly& f) {
  if (f.is_zero()) throw InvalidArgument("the zero polynomial has every element as a root");
  RootSplit out;
  UPoly sf = squarefree_part(f);
  out.roots = f.field().is_prime() ? prime_field_roots(sf) : rational_roots(sf, out.complete);
  std::sort(out.roots.begin(), out.roots.end());
  UPoly rest = sf;
  for (const auto& r : out.roots)
    rest = divmod(rest, UPoly(f.field(), {f.field().neg(r), 1})).quotient;
  out.rest = rest.monic();
  return out;
}

}  // namespace ferrand
