#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace ferrand {

using Scalar = mpq_class;

/// Coefficient field: the rationals or a prime field F_p with p < 2^31.
/// Prime-field scalars are stored as integers in [0, p).
class Field {
 public:
  enum class Kind { Rational, Prime };

  Field() = default;
  static Field rationals() { return Field{}; }
  static Field prime(std::uint32_t p);
  /// Parses "QQ", "Fp:<p>", "Fp(<p>)" or "GF(<p>)".
  static Field parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::uint32_t characteristic() const { return p_; }
  bool is_prime() const { return kind_ == Kind::Prime; }

  Scalar normalize(Scalar a) const;
  Scalar from_int(long v) const { return normalize(Scalar(v)); }
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  std::string name() const;
  /// Canonical text of a scalar: reduced fraction, or residue in [0, p).
  std::string format(const Scalar& a) const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  Kind kind_ = Kind::Rational;
  std::uint32_t p_ = 0;
};

}  // namespace ferrand
