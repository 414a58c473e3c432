#pragma once

#include <string>
#include <vector>

#include "ferrand/mpoly.hpp"

namespace ferrand {

/// Dense univariate polynomial over a Field; coefficient i multiplies x^i and
/// the leading coefficient is nonzero (the zero polynomial is empty).
class UPoly {
 public:
  UPoly() = default;
  UPoly(Field f, std::vector<Scalar> coeffs);
  static UPoly x(Field f);
  static UPoly constant(Field f, const Scalar& c);
  /// p must involve only variable `var`.
  static UPoly from_mpoly(const MPoly& p, std::size_t var);
  MPoly to_mpoly(const Context& ctx, std::size_t var) const;

  const Field& field() const { return field_; }
  const std::vector<Scalar>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Scalar& lead() const { return c_.back(); }
  Scalar eval(const Scalar& a) const;

  UPoly operator+(const UPoly& o) const;
  UPoly operator-(const UPoly& o) const;
  UPoly operator*(const UPoly& o) const;
  bool operator==(const UPoly& o) const { return c_ == o.c_; }
  UPoly monic() const;
  UPoly derivative() const;

 private:
  void trim();
  Field field_;
  std::vector<Scalar> c_;
};

struct UDivision {
  UPoly quotient, remainder;
};
UDivision divmod(const UPoly& a, const UPoly& b);
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly powmod(const UPoly& base, const mpz_class& e, const UPoly& mod);
UPoly squarefree_part(const UPoly& f);

/// Roots in the coefficient field, without multiplicity, sorted, plus the
/// squarefree cofactor that has no roots there. Over QQ the rational root
/// test needs the extreme coefficients factored; `complete` is false when
/// trial division could not finish that.
struct RootSplit {
  std::vector<Scalar> roots;
  UPoly rest;
  bool complete = true;
};
RootSplit split_roots(const UPoly& f);

}  // namespace ferrand
