#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ferrand/field.hpp"

namespace ferrand {

using Exponent = std::vector<int>;

/// Coefficient field plus an ordered list of variable names. Polynomials are
/// only combined when their contexts agree.
class PolyContext {
 public:
  PolyContext(Field field, std::vector<std::string> vars);

  const Field& field() const { return field_; }
  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;

  bool same_as(const PolyContext& other) const {
    return field_ == other.field_ && vars_ == other.vars_;
  }

 private:
  Field field_;
  std::vector<std::string> vars_;
};

using Context = std::shared_ptr<const PolyContext>;

Context make_context(Field field, std::vector<std::string> vars);
/// Throws MixedContext unless a and b describe the same field and variables.
void require_same(const Context& a, const Context& b);

/// Graded reverse lexicographic, lexicographic, or a block order. In a block
/// order each variable carries a block index; blocks are compared in
/// increasing index with grevlex inside a block, so block 0 is eliminated
/// first. Variable precedence follows the context order (x0 > x1 > ...).
class MonomialOrder {
 public:
  enum class Kind { Grevlex, Lex, Block };

  static MonomialOrder grevlex() { return MonomialOrder(Kind::Grevlex, {}); }
  static MonomialOrder lex() { return MonomialOrder(Kind::Lex, {}); }
  static MonomialOrder block(std::vector<int> block_of_var);
  /// Block order placing the listed variables in block 0 and all others in 1.
  static MonomialOrder elimination(std::size_t nvars, const std::vector<std::size_t>& first);

  Kind kind() const { return kind_; }
  const std::vector<int>& blocks() const { return blocks_; }

  /// Returns <0, 0, >0 as a is smaller, equal, larger than b.
  int compare(const Exponent& a, const Exponent& b) const;
  bool less(const Exponent& a, const Exponent& b) const { return compare(a, b) < 0; }
  std::string key() const;

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind_ == b.kind_ && a.blocks_ == b.blocks_;
  }

 private:
  MonomialOrder(Kind kind, std::vector<int> blocks);
  Kind kind_;
  std::vector<int> blocks_;
  std::vector<std::vector<std::size_t>> groups_;
};

struct Term {
  Exponent exp;
  Scalar coeff;
};

int total_degree(const Exponent& e);
bool divides(const Exponent& a, const Exponent& b);
Exponent lcm(const Exponent& a, const Exponent& b);
Exponent operator+(const Exponent& a, const Exponent& b);
Exponent operator-(const Exponent& a, const Exponent& b);

/// Sparse multivariate polynomial in canonical form: no zero coefficients,
/// terms kept in descending lexicographic order of exponent vectors.
class MPoly {
 public:
  explicit MPoly(Context ctx) : ctx_(std::move(ctx)) {}

  static MPoly constant(const Context& ctx, const Scalar& c);
  static MPoly variable(const Context& ctx, std::size_t index);
  static MPoly variable(const Context& ctx, const std::string& name);
  static MPoly monomial(const Context& ctx, Exponent exp, const Scalar& c = 1);
  /// Sorts, merges and drops zero coefficients.
  static MPoly from_terms(const Context& ctx, std::vector<Term> terms);

  const Context& context() const { return ctx_; }
  const Field& field() const { return ctx_->field(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  Scalar coeff(const Exponent& e) const;
  int total_degree() const;
  int degree(std::size_t var) const;
  bool uses_variable(std::size_t var) const;

  const Term& leading_term(const MonomialOrder& order) const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const Scalar& c, const MPoly& a);
  MPoly mul_term(const Exponent& e, const Scalar& c) const;
  MPoly pow(unsigned n) const;
  /// Divides every coefficient by the leading coefficient in `order`.
  MPoly monic(const MonomialOrder& order) const;

  friend bool operator==(const MPoly& a, const MPoly& b);
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  /// Canonical text: terms descending in `order`, coefficients as reduced
  /// fractions, e.g. `3/2*x^2*y - 1`.
  std::string to_string(const MonomialOrder& order = MonomialOrder::grevlex()) const;

 private:
  Context ctx_;
  std::vector<Term> terms_;
};

std::string format_monomial(const Exponent& e, const PolyContext& ctx);

MPoly parse_poly(const std::string& text, const Context& ctx);

/// Evaluates p with variable i replaced by images[i]; all images live in `target`.
MPoly substitute(const MPoly& p, const std::vector<MPoly>& images, const Context& target);

/// Moves p into `target`, sending variable i to variable index_map[i].
MPoly rename(const MPoly& p, const Context& target, const std::vector<std::size_t>& index_map);

/// All exponent vectors of total degree exactly d in n variables, descending lex.
std::vector<Exponent> monomials_of_degree(std::size_t n, int d);

}  // namespace ferrand
