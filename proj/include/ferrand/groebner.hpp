#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ferrand/errors.hpp"
#include "ferrand/mpoly.hpp"

namespace ferrand {

namespace detail {
struct Reducer;
}

/// A reduced Groebner basis together with the machinery to reduce against it.
/// Elements are sorted ascending by leading monomial.
class GroebnerBasis {
 public:
  GroebnerBasis(Context ctx, MonomialOrder order, std::vector<MPoly> polys);
  ~GroebnerBasis();
  GroebnerBasis(const GroebnerBasis&) = delete;
  GroebnerBasis& operator=(const GroebnerBasis&) = delete;

  const Context& context() const { return ctx_; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<MPoly>& polys() const { return polys_; }

  /// Fully reduced remainder; zero exactly for ideal members.
  MPoly reduce(const MPoly& p) const;
  bool contains(const MPoly& p) const { return reduce(p).is_zero(); }
  bool is_unit_ideal() const;

 private:
  Context ctx_;
  MonomialOrder order_;
  std::vector<MPoly> polys_;
  std::unique_ptr<detail::Reducer> reducer_;
};

using GroebnerPtr = std::shared_ptr<const GroebnerBasis>;

/// Options for the Buchberger engine. `component_vars` marks variables that
/// encode free-module components: a term carries at most one of them, and
/// pairs whose leading terms sit in different components are never formed.
struct GbOptions {
  Limits limits;
  std::vector<bool> component_vars;
};

/// Unique reduced Groebner basis of the ideal generated by `gens`.
std::vector<MPoly> groebner_basis(const std::vector<MPoly>& gens, const MonomialOrder& order,
                                  const Limits& limits = {});
GroebnerPtr compute_groebner(const Context& ctx, const std::vector<MPoly>& gens,
                             const MonomialOrder& order, const GbOptions& opts);

/// Polynomial ideal given by generators, with a thread-safe cache of reduced
/// Groebner bases keyed by monomial order. Copies share the cache.
class IdealHandle {
 public:
  IdealHandle(Context ctx, std::vector<MPoly> gens);

  const Context& context() const { return impl_->ctx; }
  const std::vector<MPoly>& generators() const { return impl_->gens; }

  GroebnerPtr basis(const MonomialOrder& order = MonomialOrder::grevlex(),
                    const Limits& limits = {}) const;
  MPoly normal_form(const MPoly& p, const MonomialOrder& order = MonomialOrder::grevlex(),
                    const Limits& limits = {}) const;
  bool contains(const MPoly& p, const Limits& limits = {}) const;
  bool contains(const IdealHandle& other, const Limits& limits = {}) const;
  bool equals(const IdealHandle& other, const Limits& limits = {}) const;
  bool is_unit(const Limits& limits = {}) const;
  bool is_zero(const Limits& limits = {}) const;

  IdealHandle operator+(const IdealHandle& other) const;
  std::string to_string() const;

 private:
  struct Impl {
    Context ctx;
    std::vector<MPoly> gens;
    mutable std::mutex mu;
    mutable std::map<std::string, GroebnerPtr> cache;
  };
  std::shared_ptr<Impl> impl_;
};

MPoly normal_form(const MPoly& p, const IdealHandle& ideal,
                  const MonomialOrder& order = MonomialOrder::grevlex(), const Limits& limits = {});

/// Generators of ideal ∩ k[remaining variables], computed with a block order
/// that puts `drop_vars` first. The result stays in the original context.
IdealHandle eliminate(const IdealHandle& ideal, const std::vector<std::size_t>& drop_vars,
                      const Limits& limits = {});
IdealHandle eliminate(const IdealHandle& ideal, const std::vector<std::string>& drop_names,
                      const Limits& limits = {});

/// Intersection of two ideals via the t-trick.
IdealHandle intersect(const IdealHandle& a, const IdealHandle& b, const Limits& limits = {});

}  // namespace ferrand
