#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ferrand/conductor.hpp"

namespace ferrand {

/// Isomorphism of two Ferrand squares, one ring map per corner.
struct SquareIso {
  RingHom b, c, k;
};

/// Overlap of charts i < j: chart i localized at u is identified with chart
/// j localized at v. The localized rings carry their inverse as the last
/// variable.
struct OverlapData {
  std::size_t i = 0, j = 0;
  FiberElement u, v;
  FerrandData left, right;  // localize_square of chart i at u, chart j at v
  SquareIso iso;            // left -> right
  SquareIso inverse;
};

/// Localizes both charts, validates the three corner maps (an empty image
/// list into a zero ring means all zeros) and certifies that they are
/// isomorphisms commuting with β and π. Throws InvalidArgument otherwise.
OverlapData make_overlap(const FerrandData& chart_i, const FerrandData& chart_j, std::size_t i, std::size_t j,
                         const FiberElement& u, const FiberElement& v, const std::vector<std::string>& b_images,
                         const std::vector<std::string>& c_images, const std::vector<std::string>& k_images);

struct ChartedPushoutDatum {
  std::vector<FerrandData> charts;
  std::vector<OverlapData> overlaps;  // at most one per pair, with i < j
};

/// A ring per chart with gluing isomorphisms of localizations; the shape
/// shared by each corner of a datum and by the glued pushout.
struct RingGluingEdge {
  std::size_t i = 0, j = 0;
  MPoly u, v;               // in ring i and ring j
  PresentedRing left, right;  // ring i[1/u], ring j[1/v]; inverse is the last variable
  RingHom phi;              // left -> right
};

struct CocycleRecord {
  std::size_t i = 0, j = 0, k = 0;
  std::string corner;  // "B", "C", "K" or "A"
  bool triple_overlap_empty = false;
};

/// Checks phi_jk ∘ phi_ij = phi_ik on the generators of ring i, inside ring
/// k with u_ki, u_kj and phi_jk(u_ji) inverted. Throws CocycleError.
std::vector<CocycleRecord> check_cocycle(const std::vector<PresentedRing>& rings,
                                         const std::vector<RingGluingEdge>& edges, const std::string& corner,
                                         const Limits& limits = {});

struct GluedChart {
  FerrandData square;
  std::optional<PushoutPresentation> presentation;  // absent: the intrinsic square is kept
  std::string presentation_note;
};

struct GluedPushout {
  std::vector<GluedChart> charts;
  std::vector<RingGluingEdge> gluings;  // between chart presentations, when both exist
  std::vector<CocycleRecord> cocycles;
  /// Per overlap: the localized pushout matches the pushout of the localized square.
  std::vector<bool> overlap_is_pushout;
};

GluedPushout glue_pushout(const ChartedPushoutDatum& datum, const PresentOptions& opts = {});

/// Chart-by-chart comparison after refining chart i by inverting w: the
/// pushout of the localized square against the localization of X_i.
struct RefinementReport {
  bool iso = false;
  std::string witness;
};
RefinementReport refine_and_compare(const GluedPushout& glued, std::size_t i, const FiberElement& w,
                                    const PresentOptions& opts = {});

/// (R[x]/(f))[1/g] with f monic in the new variable x. `ring` has the
/// variables of R, then x, then the inverse of g.
struct StdEtaleAlgebra {
  PresentedRing base;
  PresentedRing ring;
  RingHom structure;        // base -> ring
  MPoly f, g;               // in ring's context, free of the inverse variable
  MPoly derivative_inverse;  // f' * derivative_inverse = 1 in ring
};

/// Throws InvalidArgument when f is not monic in x or f' is not a unit.
StdEtaleAlgebra make_std_etale(const PresentedRing& base, const std::string& var, const std::string& f,
                               const std::string& g, const Limits& limits = {});

MPoly partial_derivative(const MPoly& p, std::size_t var);

/// Inverse of x in r, when x is a unit.
std::optional<MPoly> unit_inverse(const PresentedRing& r, const MPoly& x, const Limits& limits = {});

struct EtaleLift {
  StdEtaleAlgebra algebra;  // over C
  PresentedRing tensor;     // C' ⊗_C K
  RingHom base_change;      // K' -> C' ⊗_C K
  bool base_change_iso = false;
  std::string witness;
};

/// Lifts K' = (K[x]/(f))[1/g] along π: C ↠ K by normal-form preimages of the
/// coefficients and inverts g̃·f̃', which maps to a unit of K'.
EtaleLift lift_etale_affine(const RingHom& pi, const StdEtaleAlgebra& kprime, const Limits& limits = {});

/// Componentwise ring maps base -> over, i.e. a map of data from `over` to
/// `base` on spectra.
struct DatumMorphism {
  FerrandData base, over;
  RingHom b, c, k;
};

/// Validates commutation with β and π; throws InvalidArgument otherwise.
DatumMorphism make_datum_morphism(const FerrandData& base, const FerrandData& over, const RingHom& b,
                                  const RingHom& c, const RingHom& k);
DatumMorphism identity_morphism(const FerrandData& sq);
/// The localization maps into localize_square(sq, f).
DatumMorphism localization_morphism(const FerrandData& sq, const FiberElement& f);
/// `first` then `second`: base -> first.over = second.base -> second.over.
DatumMorphism compose_morphisms(const DatumMorphism& first, const DatumMorphism& second);

struct CartesianVerdict {
  bool y_square = false;  // K ⊗_B B' → K'
  bool z_square = false;  // K ⊗_C C' → K'
  std::string y_witness, z_witness;
  bool cartesian() const { return y_square && z_square; }
};
CartesianVerdict check_datum_morphism(const DatumMorphism& phi);

}  // namespace ferrand
