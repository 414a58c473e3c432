#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ferrand/rings.hpp"

namespace ferrand {

/// A matched pair (b, c) with β(b) = π(c) in K; an element of A = B ×_K C.
struct FiberElement {
  MPoly b;
  MPoly c;
  MPoly k;  // the common image, reduced in K
};

/// Ferrand diagram B -β-> K <-π- C with π surjective. The pushout ring A is
/// intrinsic: it is the set of matched pairs, whether or not it is finitely
/// generated. Copies share cached Groebner data.
class FerrandData {
 public:
  const PresentedRing& B() const { return beta_.source(); }
  const PresentedRing& C() const { return pi_.source(); }
  const PresentedRing& K() const { return beta_.target(); }
  const RingHom& beta() const { return beta_; }
  const RingHom& pi() const { return pi_; }
  const SurjectivityCertificate& surjectivity() const { return surj_; }
  bool beta_injective() const { return beta_kernel_.generators().empty(); }
  /// Generators of ker β; each (k, 0) lies in A.
  const IdealHandle& beta_kernel() const { return beta_kernel_; }
  const HomGraph& beta_graph() const { return *beta_graph_; }
  const Limits& limits() const { return limits_; }

  /// Validates and reduces a pair; throws InvalidArgument when unmatched.
  FiberElement make(const MPoly& b, const MPoly& c) const;
  bool matched(const MPoly& b, const MPoly& c) const;
  FiberElement add(const FiberElement& x, const FiberElement& y) const;
  FiberElement sub(const FiberElement& x, const FiberElement& y) const;
  FiberElement mul(const FiberElement& x, const FiberElement& y) const;
  FiberElement one() const;
  bool equal(const FiberElement& x, const FiberElement& y) const;

 private:
  friend FerrandData build_square(const RingHom&, const RingHom&, const Limits&);
  FerrandData(RingHom beta, RingHom pi);
  RingHom beta_;
  RingHom pi_;
  SurjectivityCertificate surj_;
  IdealHandle beta_kernel_;
  std::shared_ptr<const HomGraph> beta_graph_;
  Limits limits_;
};

/// Throws NotSurjective when π misses a generator of K.
FerrandData build_square(const RingHom& beta, const RingHom& pi, const Limits& limits = {});

/// The pair (b, c) when π(c) ∈ β(B), else nullopt. Exact.
std::optional<FiberElement> fiber_membership(const FerrandData& sq, const MPoly& c);

// ker(A -> B) and ker π are the same set of pairs (0, c); the view keeps the
// C-side generators, so for the Laurent square it holds y rather than y k[x^±1].
struct ConductorView {
  IdealHandle ideal;                  // ker π, as an ideal of C
  std::vector<FiberElement> elements; // the generators as pairs (0, c)
  int verified_degree = 0;            // degree through which I ≅ ker π was replayed
};
ConductorView conductor(const FerrandData& sq);

/// Incremental basis of A_{≤d}: pairs (b, c) whose C-component is a
/// combination of standard monomials of C of degree ≤ d. Basis elements come
/// out in ascending order of their leading C-monomial, each of the form
/// m - (smaller monomials), so the sequence is deterministic.
class FiberSpace {
 public:
  explicit FiberSpace(const FerrandData& sq);
  /// Extends the basis through degree d and returns the elements added.
  std::vector<FiberElement> extend_to(int d);
  int degree() const { return degree_; }

 private:
  struct Pivot {
    std::vector<std::pair<Exponent, Scalar>> combination;  // C-monomials
    MPoly obstruction;
    MPoly preimage;
  };
  const FerrandData* sq_;
  int degree_ = -1;
  std::map<Exponent, Pivot> pivots_;  // keyed by the lex-largest obstruction monomial
};

struct PushoutPresentation;

struct BicartesianReport {
  bool pass = false;
  char clause = 0;  // 'a', 'b' or 'c' for the first failure
  std::string witness;
  int probe_degree = 0;
  std::size_t probes = 0;
};

/// Candidate presentation of A with its maps to B and C.
struct PushoutPresentation {
  PresentedRing ring;
  RingHom to_b;
  RingHom to_c;
  std::optional<BicartesianReport> certificate;
  int degree_found = 0;
};

PushoutPresentation make_candidate(const FerrandData& sq, const PresentedRing& a, const std::vector<MPoly>& to_b,
                                   const std::vector<MPoly>& to_c);

/// Clauses: (a) B ⊗_A C → K is an isomorphism; (b) generators map to matched
/// pairs and A → B × C is injective; (c) every basis element of A_{≤probe}
/// lies in the image of A.
BicartesianReport check_bicartesian(const FerrandData& sq, const PushoutPresentation& cand, int probe_degree);

struct PresentOptions {
  int degree_bound = 8;
  std::size_t max_generators = 24;
};

/// Searches for a finite presentation of A generated in degree ≤ bound and
/// returns it only after check_bicartesian passes. Throws BoundExceeded
/// otherwise.
PushoutPresentation present_pushout(const FerrandData& sq, const PresentOptions& opts);

/// Builds the map ref → A_pres whose composite to C matches `ref_to_c` and
/// checks it is an isomorphism; fails with a witness otherwise.
struct PresentationMatch {
  bool iso = false;
  std::optional<RingHom> forward;  // ref -> A_pres
  std::optional<RingHom> inverse;  // A_pres -> ref
  std::string witness;
};
PresentationMatch match_presentation(const FerrandData& sq, const PushoutPresentation& pres,
                                     const PresentedRing& ref, const std::vector<MPoly>& ref_to_c);

struct LocalizedSquare {
  std::optional<FerrandData> square;  // absent when B_f, C_f, K_f give no Ferrand data (never for valid f)
  bool in_conductor = false;
  bool b_zero = false;
  bool k_zero = false;
  /// A_f ≅ C_f certified (only meaningful when in_conductor).
  bool open_iso = false;
  std::string open_iso_method;
  std::vector<FiberElement> open_iso_witnesses;  // f * g as pairs (0, f g)
};

LocalizedSquare localize_square(const FerrandData& sq, const FiberElement& f,
                                const std::optional<PushoutPresentation>& pres = std::nullopt);

}  // namespace ferrand
