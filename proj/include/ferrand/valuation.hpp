#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ferrand/errors.hpp"
#include "ferrand/field.hpp"

namespace ferrand {

/// Element of ℤ^r, ordered lexicographically with the first coordinate most
/// significant.
using ValueVec = std::vector<long>;
int lex_compare(const ValueVec& a, const ValueVec& b);
std::string value_text(const ValueVec& v);
ValueVec operator+(const ValueVec& a, const ValueVec& b);

class MonomialElement;

/// Monomial valuation ring: named generators with value vectors in ℤ^r, which
/// must be linearly independent so that distinct Laurent monomials have
/// distinct values. The ring is the set of finite monomial combinations of
/// non-negative value.
class LexValuationRing {
 public:
  LexValuationRing(std::size_t rank, std::vector<std::string> names, std::vector<ValueVec> values,
                   Field field = Field::rationals());
  static LexValuationRing dvr(const std::string& name, Field field = Field::rationals());
  static LexValuationRing trivial(Field field = Field::rationals());

  std::size_t rank() const { return data_->rank; }
  const std::vector<std::string>& names() const { return data_->names; }
  const std::vector<ValueVec>& values() const { return data_->values; }
  const Field& field() const { return data_->field; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  const ValueVec& value_of(const std::string& name) const;

  ValueVec monomial_value(const std::vector<long>& exps) const;
  MonomialElement generator(const std::string& name) const;
  MonomialElement constant(const Scalar& c) const;
  /// Parses sums of terms like "3*x^-2*y".
  MonomialElement parse(const std::string& text) const;
  std::string to_string() const;

  bool same_ring(const LexValuationRing& o) const { return data_ == o.data_; }

 private:
  struct Data {
    std::size_t rank;
    std::vector<std::string> names;
    std::vector<ValueVec> values;
    Field field;
  };
  std::shared_ptr<const Data> data_;
  friend class MonomialElement;
};

/// Finite sum of coefficient * Laurent monomial. Its value is the lex minimum
/// of the term values; zero has no value.
class MonomialElement {
 public:
  explicit MonomialElement(LexValuationRing ring) : ring_(std::move(ring)) {}

  const LexValuationRing& ring() const { return ring_; }
  const std::map<std::vector<long>, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<ValueVec> value() const;
  bool in_ring() const;
  /// Value of 1/a for a monomial a; throws InvalidArgument for sums.
  MonomialElement inverse() const;

  MonomialElement operator+(const MonomialElement& o) const;
  MonomialElement operator-(const MonomialElement& o) const;
  MonomialElement operator*(const MonomialElement& o) const;
  bool operator==(const MonomialElement& o) const { return terms_ == o.terms_; }
  std::string to_string() const;

 private:
  friend class LexValuationRing;
  void add_term(const std::vector<long>& e, const Scalar& c);
  LexValuationRing ring_;
  std::map<std::vector<long>, Scalar> terms_;
};

/// Upper block most significant: generators of `upper` get values
/// (v, 0, ..., 0), those of `lower` get (0, ..., 0, v). Throws NameClash.
LexValuationRing compose(const LexValuationRing& lower, const LexValuationRing& upper);

/// Ideal of a LexValuationRing given by its value set {v ≥ 0 : v ≥ inf}, where
/// the infimum may end in unbounded coordinates: {v : (v_1..v_k) ≥ (a_1..a_k)}.
/// Every ideal of these rings has this form; unions are maxima of the
/// resulting cuts. The zero ideal has no infimum.
class ValueIdeal {
 public:
  static ValueIdeal zero(std::size_t rank);
  static ValueIdeal unit(std::size_t rank);
  static ValueIdeal principal(const ValueVec& v);
  /// {v : (v_1..v_k) ≥ prefix}, k = prefix.size() ≤ rank.
  static ValueIdeal cone(std::size_t rank, const ValueVec& prefix);
  /// Height-j prime: {v : (v_1..v_j) > 0}. j = 0 gives the zero ideal.
  static ValueIdeal prime(std::size_t rank, std::size_t j);

  std::size_t rank() const { return rank_; }
  bool is_zero() const { return zero_; }
  bool is_unit() const;
  bool contains(const ValueVec& v) const;
  bool contains(const MonomialElement& a) const;
  bool subset_of(const ValueIdeal& o) const;
  bool operator==(const ValueIdeal& o) const { return subset_of(o) && o.subset_of(*this); }
  ValueIdeal join(const ValueIdeal& o) const;
  ValueIdeal radical() const;
  /// Index j when this equals prime(rank, j).
  std::optional<std::size_t> prime_height() const;
  const ValueVec& bounded_prefix() const { return prefix_; }
  std::string to_string() const;

 private:
  ValueIdeal(std::size_t rank, bool zero, ValueVec prefix) : rank_(rank), zero_(zero), prefix_(std::move(prefix)) {}
  void normalize();
  std::size_t rank_;
  bool zero_;
  ValueVec prefix_;  // unbounded below past its length
};

struct FgReport {
  bool finitely_generated = false;
  std::optional<ValueVec> generator;    // minimal value when finitely generated
  std::vector<ValueVec> chain;          // values of a strictly increasing chain of principal subideals
  std::string chain_pattern;            // e.g. "(1, -n)"
};
FgReport value_ideal_fg_test(const ValueIdeal& i, std::size_t chain_length = 4);

/// Affine monomial Ferrand square: C is Laurent in the unit variables and
/// polynomial in the conductor variables; π kills the conductor variables, so
/// K is Laurent in the units; B ⊂ K contains x and, unless `b_positive`, also
/// 1/x. A is the set of C-monomials whose image in K lies in B or vanishes.
struct MonomialSquare {
  std::vector<std::string> units;
  std::vector<bool> b_positive;
  std::vector<std::string> conductor;

  /// B = k[x] ⊂ K = k[x^{±1}] ← C = k[x^{±1}, y].
  static MonomialSquare laurent_example();
  std::size_t nvars() const { return units.size() + conductor.size(); }
  /// Exponents ordered units first, then conductor variables.
  bool in_a(const std::vector<long>& exps) const;
  bool in_conductor(const std::vector<long>& exps) const;
};

/// Point j of Spec R for a rank-r lex valuation ring is the height-j prime;
/// j = 0 is the generic point and j = r the closed point.
struct LiftReport {
  bool lifts = false;
  std::vector<std::size_t> preimage_of_y;  // heights of points of f^{-1}(Y)
  std::vector<std::size_t> preimage_of_t;  // g^{-1}(T) when a lift exists
  std::map<std::string, std::optional<ValueVec>> lift;  // values of the C-variables
  bool closed_point_configuration = false;  // f^{-1}(Y) = {closed point}, rank ≥ 1
  std::string refutation;
};

/// f is given by values of monomials of C (text like "x^-1*y"); missing
/// entries are solved from the others. A nullopt value stands for f*m = 0.
/// Throws NotAValuation when the data is inconsistent with a monoid
/// homomorphism or gives an element of A negative value.
LiftReport lift_semivaluation(const MonomialSquare& sq, std::size_t rank,
                              const std::vector<std::pair<std::string, std::optional<ValueVec>>>& f);

/// The product form: a lift on each factor of a finite product of lex
/// valuation rings.
std::vector<LiftReport> lift_on_product(
    const MonomialSquare& sq,
    const std::vector<std::pair<std::size_t, std::vector<std::pair<std::string, std::optional<ValueVec>>>>>& factors);

/// Height-two square A ⊂ C = A_x with B = A/yC of DVR type, and the quotients
/// A'_n = A / x^{-n} y A.
struct ChainSuiteReport {
  int n = 0;
  LexValuationRing ring = LexValuationRing::trivial();
  MonomialElement witness = MonomialElement(LexValuationRing::trivial());
  ValueVec witness_value;
  ValueIdeal conductor = ValueIdeal::zero(0);
  ValueIdeal i_n = ValueIdeal::zero(0);
  ValueIdeal i_next = ValueIdeal::zero(0);
  bool chain_strict = false;            // I_n ⊊ I_{n+1}, witness in I_{n+1} \ I_n
  FgReport conductor_fg;
  /// Components of A'_n as quotients of B, C, K by the images of I_n.
  std::vector<std::pair<std::string, std::string>> components;
  bool components_finitely_presented = false;
  bool components_independent_of_n = false;
  std::string pushforward;              // φ_*φ*(A'_n)
  bool unit_injective = true;
  std::string unit_kernel_witness;
  std::string chain_reading;
};
ChainSuiteReport conductor_chain_suite(int n);

}  // namespace ferrand
