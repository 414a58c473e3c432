#include "ferrand/field.hpp"

#include <regex>

#include "ferrand/errors.hpp"

namespace ferrand {

namespace {

bool is_prime_number(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Field Field::prime(std::uint32_t p) {
  if (!is_prime_number(p) || p >= (1u << 31))
    throw InvalidArgument("field characteristic must be a prime below 2^31, got " + std::to_string(p));
  Field f;
  f.kind_ = Kind::Prime;
  f.p_ = p;
  return f;
}

Field Field::parse(const std::string& text) {
  if (text == "QQ") return rationals();
  static const std::regex re(R"((?:Fp:|Fp\(|GF\()(\d+)\)?)");
  std::smatch m;
  if (std::regex_match(text, m, re)) return prime(static_cast<std::uint32_t>(std::stoul(m[1])));
  throw ParseError("unknown field '" + text + "' (expected QQ or Fp:<p>)");
}

Scalar Field::normalize(Scalar a) const {
  if (kind_ == Kind::Rational) return a;
  mpz_class p(p_);
  mpz_class num = a.get_num() % p;
  mpz_class den = a.get_den() % p;
  if (den == 0) throw InvalidArgument("denominator divisible by the characteristic");
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  mpz_class r = (num * inv) % p;
  if (r < 0) r += p;
  return Scalar(r);
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rational) return a + b;
  mpz_class r = a.get_num() + b.get_num();
  if (r >= p_) r -= p_;
  return Scalar(r);
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rational) return a - b;
  mpz_class r = a.get_num() - b.get_num();
  if (r < 0) r += p_;
  return Scalar(r);
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rational) return a * b;
  mpz_class r = (a.get_num() * b.get_num()) % p_;
  return Scalar(r);
}

Scalar Field::neg(const Scalar& a) const {
  if (kind_ == Kind::Rational) return -a;
  if (a == 0) return a;
  return Scalar(mpz_class(p_) - a.get_num());
}

Scalar Field::inv(const Scalar& a) const {
  if (a == 0) throw InvalidArgument("division by zero");
  if (kind_ == Kind::Rational) return 1 / a;
  mpz_class p(p_);
  mpz_class r;
  mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), p.get_mpz_t());
  return Scalar(r);
}

std::string Field::name() const {
  if (kind_ == Kind::Rational) return "QQ";
  return "Fp:" + std::to_string(p_);
}

std::string Field::format(const Scalar& a) const { return a.get_str(); }

}  // namespace ferrand
