#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ferrand/conductor.hpp"
#include "ferrand/module_gb.hpp"

namespace ferrand {

/// R^n / (columns of `relations`). Copies share a lazily built module basis.
class PresentedModule {
 public:
  PresentedModule(PresentedRing ring, std::size_t ngens, Matrix relations);
  static PresentedModule free(const PresentedRing& ring, std::size_t n);

  const PresentedRing& ring() const { return ring_; }
  std::size_t ngens() const { return ngens_; }
  const Matrix& relations() const { return relations_; }

  /// Normal form modulo the relations and the ring's ideal.
  Vec reduce(const Vec& v) const;
  bool is_zero(const Vec& v) const;
  bool equal(const Vec& a, const Vec& b) const { return is_zero(a - b); }
  std::string to_string() const;

 private:
  const ModuleBasis& basis() const;
  PresentedRing ring_;
  std::size_t ngens_;
  Matrix relations_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

/// Same generators, relations pushed along h.
PresentedModule base_change(const PresentedModule& m, const RingHom& h);

/// Drops generators that some relation expresses through the others (unit
/// entries). `to_pruned` maps old coordinates to new ones; the kept
/// generators are `kept`, a subsequence of the old ones.
struct PrunedModule {
  PresentedModule module;
  Matrix to_pruned;
  std::vector<std::size_t> kept;
};
PrunedModule prune(const PresentedModule& m);

bool is_well_defined(const PresentedModule& p, const PresentedModule& q, const Matrix& phi);

/// Certifies that phi: P → Q (a Q.ngens × P.ngens matrix) is an isomorphism
/// by building a two-sided inverse, or returns a kernel/cokernel witness.
struct ModuleIsoReport {
  bool iso = false;
  std::optional<Matrix> inverse;
  std::string witness;
};
ModuleIsoReport certify_module_iso(const PresentedModule& p, const PresentedModule& q, const Matrix& phi);

/// (M_T; M_Y, M_Z) with α: M_Y ⊗_B K → M_T and β: M_Z ⊗_C K → M_T, both
/// stored with explicit inverses.
struct PatchedModule {
  PresentedModule my, mz, mt;
  Matrix alpha, alpha_inv, beta, beta_inv;
};

/// Throws InvalidArgument unless the gluings are certified isomorphisms.
PatchedModule make_patched(const FerrandData& sq, PresentedModule my, PresentedModule mz, PresentedModule mt,
                           Matrix alpha, Matrix alpha_inv, Matrix beta, Matrix beta_inv);
PatchedModule free_patched(const FerrandData& sq, std::size_t n);

/// Componentwise base change of an A-module with identity gluings.
PatchedModule pullback(const FerrandData& sq, const PushoutPresentation& pres, const PresentedModule& m);

/// φ_*(M) = M_Y ×_{M_T} M_Z. Generators are matched pairs; the presentation
/// over A is present whenever a presentation of A was supplied.
struct MatchedPairModule {
  PatchedModule source;
  std::vector<std::pair<Vec, Vec>> generators;
  std::optional<PresentedModule> presentation;
  bool contains(const FerrandData& sq, const Vec& m_y, const Vec& m_z) const;
};
MatchedPairModule pushforward(const FerrandData& sq, const PatchedModule& m,
                              const std::optional<PushoutPresentation>& pres = std::nullopt);

struct AdjunctionReport {
  bool iso = false;
  std::string direction;  // "unit" or "counit"
  std::string witness;
  std::vector<ModuleIsoReport> components;
};
/// φ*φ_*(M) → M, checked on the three components.
AdjunctionReport counit_check(const FerrandData& sq, const PushoutPresentation& pres, const PatchedModule& m);
/// M → φ_*φ*(M) for an A-module M.
AdjunctionReport unit_check(const FerrandData& sq, const PushoutPresentation& pres, const PresentedModule& m);

/// Fitting-ideal criterion: projective of constant rank r iff Fitt_{r-1} = 0
/// and Fitt_r = (1).
struct FlatVerdict {
  enum class Kind { Projective, NotFlat, NotConstantRank };
  Kind kind = Kind::NotFlat;
  int rank = -1;
  int failing_index = -1;
  std::string failing_ideal;
  std::string to_string() const;
};
std::vector<MPoly> fitting_ideal(const PresentedModule& m, int j);
FlatVerdict flat_fp_test(const PresentedModule& m);

/// For a rank-one patched module with free components: looks for a matched
/// pair (b, u e) with u a unit monomial of C of degree ≤ d and b a unit of B,
/// i.e. a free generator of φ_*(M).
struct FreeGeneratorSearch {
  bool found = false;
  std::optional<std::pair<MPoly, MPoly>> generator;
  std::size_t candidates = 0;
  std::vector<std::string> units_tried;
};
FreeGeneratorSearch find_free_generator(const FerrandData& sq, const PatchedModule& m, int degree);

}  // namespace ferrand
