#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ferrand/groebner.hpp"

namespace ferrand {

/// k[x_1..x_n] / I. Copies share the ideal and its Groebner cache.
class PresentedRing {
 public:
  PresentedRing(std::string name, Context ctx, std::vector<MPoly> relations);
  static PresentedRing polynomial(std::string name, const Field& field, std::vector<std::string> vars);

  const std::string& name() const { return name_; }
  const Context& context() const { return ideal_.context(); }
  const Field& field() const { return context()->field(); }
  std::size_t nvars() const { return context()->nvars(); }
  const IdealHandle& ideal() const { return ideal_; }
  const std::vector<MPoly>& relations() const { return ideal_.generators(); }

  MPoly var(std::size_t i) const { return MPoly::variable(context(), i); }
  MPoly var(const std::string& name) const { return MPoly::variable(context(), name); }
  MPoly one() const { return MPoly::constant(context(), 1); }
  MPoly zero() const { return MPoly(context()); }
  MPoly parse(const std::string& text) const { return parse_poly(text, context()); }

  /// Canonical representative (grevlex normal form).
  MPoly reduce(const MPoly& p, const Limits& limits = {}) const;
  bool equal(const MPoly& a, const MPoly& b, const Limits& limits = {}) const;
  bool is_zero(const MPoly& p, const Limits& limits = {}) const;
  bool is_unit(const MPoly& p, const Limits& limits = {}) const;
  bool is_zero_ring(const Limits& limits = {}) const;

  PresentedRing renamed(std::string name) const;
  /// `ring R = QQ[x,y] / (y^2 - x^3 - x^2)`.
  std::string to_string() const;

 private:
  std::string name_;
  IdealHandle ideal_;
};

/// The source relation r together with the normal form of its image (zero).
struct RelationWitness {
  MPoly relation;
  MPoly image_normal_form;
};

/// Ring map determined by images of the source generators. Constructed only
/// through validate_hom, which records the relation certificate.
class RingHom {
 public:
  const PresentedRing& source() const { return source_; }
  const PresentedRing& target() const { return target_; }
  const std::vector<MPoly>& images() const { return images_; }
  const std::vector<RelationWitness>& certificate() const { return certificate_; }

  /// Image of a source polynomial, reduced in the target.
  MPoly apply(const MPoly& p) const;
  /// The composite `after ∘ this`.
  RingHom then(const RingHom& after, const Limits& limits = {}) const;
  std::string to_string(const std::string& name = "h") const;

 private:
  friend RingHom validate_hom(const PresentedRing&, const PresentedRing&, std::vector<MPoly>, const Limits&);
  RingHom(PresentedRing s, PresentedRing t) : source_(std::move(s)), target_(std::move(t)) {}
  PresentedRing source_;
  PresentedRing target_;
  std::vector<MPoly> images_;
  std::vector<RelationWitness> certificate_;
};

/// Throws RelationViolated on the first source relation with nonzero image.
RingHom validate_hom(const PresentedRing& source, const PresentedRing& target, std::vector<MPoly> images,
                     const Limits& limits = {});
RingHom validate_hom(const PresentedRing& source, const PresentedRing& target,
                     const std::vector<std::string>& image_texts, const Limits& limits = {});
RingHom identity_hom(const PresentedRing& r);

/// Ideal in k[target vars, source vars] generated by the target relations and
/// x_i - h(x_i), with an elimination order that puts target variables first.
/// Drives kernels and image membership.
class HomGraph {
 public:
  explicit HomGraph(const RingHom& h, const Limits& limits = {});

  /// Some s with h(s) = t, or nullopt when t is outside the image. Exact.
  std::optional<MPoly> preimage(const MPoly& t) const;
  /// Generators of ker(h), reduced modulo the source relations (zeros dropped).
  IdealHandle kernel() const;

  /// Normal form of t in the graph ideal split into the part still involving
  /// target variables (zero iff t is in the image) and the part expressed in
  /// source variables. Both are linear in t.
  struct Split {
    MPoly obstruction;  // in graph_context()
    MPoly preimage;     // in the source ring
  };
  Split split(const MPoly& t) const;
  const Context& graph_context() const { return graph_; }
  const RingHom& hom() const { return h_; }

 private:
  RingHom h_;
  Context graph_;
  std::vector<std::size_t> to_graph_target_, to_graph_source_, from_graph_;
  GroebnerPtr gb_;
};

IdealHandle kernel(const RingHom& h, const Limits& limits = {});

/// Preimages of the target generators; certifies surjectivity.
struct SurjectivityCertificate {
  std::vector<MPoly> preimages;
};

/// Throws NotSurjective with the first target generator outside the image.
SurjectivityCertificate certify_surjective(const RingHom& h, const Limits& limits = {});

struct IsoCheck {
  bool iso = false;
  std::optional<RingHom> inverse;
  std::string witness;  // why not, when iso is false
};
IsoCheck check_isomorphism(const RingHom& h, const Limits& limits = {});

/// B ⊗_A C on the disjoint union of variables, with both coprojections.
struct TensorProduct {
  PresentedRing ring;
  RingHom from_left;
  RingHom from_right;
};
TensorProduct tensor_over_base(const RingHom& f, const RingHom& g, const Limits& limits = {});
/// Tensor product over the coefficient field.
TensorProduct tensor_over_field(const PresentedRing& b, const PresentedRing& c, const Limits& limits = {});

/// R[s]/(s f - 1) and the canonical map; `s` is the name of the inverse.
struct Localization {
  PresentedRing ring;
  RingHom map;
  MPoly inverse;
};
Localization localize(const PresentedRing& r, const MPoly& f, const std::string& inverse_name = "s",
                      const Limits& limits = {});

/// B × C presented with an idempotent e: an element (b, c) is e*b + (1-e)*c.
struct ProductRing {
  PresentedRing ring;
  RingHom to_left;
  RingHom to_right;
  MPoly idempotent;
  /// Embeds the pair (b, c).
  MPoly pair(const MPoly& b, const MPoly& c) const;
  std::vector<std::size_t> left_vars, right_vars;
};
ProductRing product_ring(const PresentedRing& b, const PresentedRing& c, const Limits& limits = {});

/// R / (extra) with the quotient map.
std::pair<PresentedRing, RingHom> quotient(const PresentedRing& r, const std::vector<MPoly>& extra,
                                           const std::string& name, const Limits& limits = {});

/// A fresh variable name based on `stem` that is not in `taken`.
std::string fresh_variable(const std::string& stem, const std::vector<std::string>& taken);

}  // namespace ferrand
