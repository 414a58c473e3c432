#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ferrand/rings.hpp"

namespace ferrand {

using PointMap = std::vector<std::size_t>;
using PointSet = std::uint32_t;

/// Finite T0 space on at most 32 points. Without an explicit open-set
/// family, the opens are the generization-closed sets of the specialization
/// order (closed sets are closed under specialization).
class SpecPoset {
 public:
  /// Pairs (a, b) mean a ⤳ b: b lies in the closure of a.
  SpecPoset(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& specializations);
  /// Explicit topology; must contain ∅ and the whole set and be closed under
  /// union and intersection. The order is read off from it.
  static SpecPoset with_opens(std::vector<std::string> names, std::vector<PointSet> opens);
  static SpecPoset discrete(std::vector<std::string> names);
  /// h0 ⤳ h1 ⤳ ... ⤳ hr: the spectrum of a rank-r valuation ring.
  static SpecPoset chain(std::size_t r, const std::string& prefix = "h");

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool specializes(std::size_t a, std::size_t b) const { return (down_[a] >> b) & 1u; }
  PointSet closure_of(std::size_t a) const { return down_[a]; }
  PointSet all() const { return size() == 32 ? ~PointSet(0) : (PointSet(1) << size()) - 1; }

  bool is_open(PointSet s) const;
  bool is_closed(PointSet s) const { return is_open(all() & ~s); }
  bool has_explicit_opens() const { return explicit_; }
  /// Every open set, ascending. Enumerates subsets for order topologies, so
  /// only for at most 16 points.
  std::vector<PointSet> open_sets() const;
  /// Subspace topology on s, points renumbered in increasing order.
  SpecPoset subspace(PointSet s) const;
  std::string to_string() const;

 private:
  SpecPoset() = default;
  void close_order();
  std::vector<std::string> names_;
  std::vector<PointSet> down_;  // down_[a]: points in the closure of a
  bool explicit_ = false;
  std::vector<PointSet> opens_;
};

PointSet image_of(const PointMap& f, PointSet s);
PointSet preimage_of(const PointMap& f, PointSet s);
bool is_continuous(const SpecPoset& from, const SpecPoset& to, const PointMap& f);
/// Injective, continuous, and a homeomorphism onto its image.
bool is_embedding(const SpecPoset& from, const SpecPoset& to, const PointMap& f);
bool is_closed_embedding(const SpecPoset& from, const SpecPoset& to, const PointMap& f);
bool is_open_embedding(const SpecPoset& from, const SpecPoset& to, const PointMap& f);
std::optional<PointMap> find_homeomorphism(const SpecPoset& a, const SpecPoset& b);

struct PushoutTopReport {
  SpecPoset space = SpecPoset::discrete({});
  PointMap from_y, from_z;
  bool quotient_enumerated = false;     // false past 16 points: order topology only
  bool order_topology_matches = false;  // quotient opens = opens of the specialization order
  bool partition = false;               // |X| = image(Y) ⊔ image(Z \ T)
  bool y_closed_embedding = false;
  bool u_open_embedding = false;
  bool jointly_surjective = false;
  bool agree_on_t = false;
  std::optional<bool> matches_reference;
  std::optional<PointMap> homeomorphism;
};

/// Glues Y and Z along f: T → Y and the closed embedding g: T → Z, with the
/// quotient topology computed by enumerating subsets.
PushoutTopReport topological_pushout(const SpecPoset& y, const SpecPoset& z, const SpecPoset& t, const PointMap& f,
                                     const PointMap& g, const std::optional<SpecPoset>& reference = std::nullopt);

/// A point of Spec R for zero-dimensional R.
struct ZeroDimPoint {
  std::vector<MPoly> ideal;  // reduced Groebner basis of the maximal ideal
  std::string label;
  std::size_t degree = 1;    // residue field degree (an upper bound when not exact)
  bool exact = true;         // false when a factor of degree > 1 was not split further
};

struct ZeroDimSpec {
  SpecPoset poset = SpecPoset::discrete({});
  std::vector<ZeroDimPoint> points;
  bool factorization_incomplete = false;
};

/// Throws NotZeroDimensional when R is not finite-dimensional over its field.
ZeroDimSpec spec_points_zero_dim(const PresentedRing& r, const Limits& limits = {});
/// Dimension of k[x]/I over k, for zero-dimensional I.
std::size_t quotient_dimension(const IdealHandle& ideal, const Limits& limits = {});

}  // namespace ferrand
