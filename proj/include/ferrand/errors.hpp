#pragma once

#include <atomic>
#include <stdexcept>
#include <string>

namespace ferrand {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define FERRAND_ERROR(Name)                                    \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

FERRAND_ERROR(MixedContext);
FERRAND_ERROR(ParseError);
FERRAND_ERROR(NotSurjective);
FERRAND_ERROR(NoPresentation);
FERRAND_ERROR(NotConstantRank);
FERRAND_ERROR(NameClash);
FERRAND_ERROR(NotAValuation);
FERRAND_ERROR(NotClosedEmbedding);
FERRAND_ERROR(NotContinuous);
FERRAND_ERROR(NotZeroDimensional);
FERRAND_ERROR(Cancelled);
FERRAND_ERROR(InvalidArgument);

#undef FERRAND_ERROR

/// A source relation whose image is nonzero in the target.
class RelationViolated : public Error {
 public:
  RelationViolated(std::string relation, std::string image)
      : Error("RelationViolated", relation + " maps to " + image + ", not 0"),
        relation_(std::move(relation)), image_(std::move(image)) {}
  const std::string& relation() const noexcept { return relation_; }
  const std::string& image() const noexcept { return image_; }

 private:
  std::string relation_;
  std::string image_;
};

/// Gluing isomorphisms that disagree on the triple overlap of charts i, j, k.
class CocycleError : public Error {
 public:
  CocycleError(std::size_t i, std::size_t j, std::size_t k, std::string witness)
      : Error("CocycleError", "charts (" + std::to_string(i) + ", " + std::to_string(j) + ", " + std::to_string(k) +
                                  "): " + witness),
        i_(i), j_(j), k_(k), witness_(std::move(witness)) {}
  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }
  std::size_t k() const noexcept { return k_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::size_t i_, j_, k_;
  std::string witness_;
};

/// Raised when a computation would exceed a configured degree, probe or size
/// cap. Distinct from a negative answer: the question was left undecided.
class BoundExceeded : public Error {
 public:
  explicit BoundExceeded(const std::string& what) : Error("BoundExceeded", what) {}
};

/// Cooperative cancellation for long searches.
class CancelToken {
 public:
  void cancel() noexcept { flag_.store(true, std::memory_order_relaxed); }
  bool cancelled() const noexcept { return flag_.load(std::memory_order_relaxed); }
  void check() const {
    if (cancelled()) throw Cancelled("operation cancelled");
  }

 private:
  std::atomic<bool> flag_{false};
};

/// Caps shared by every bounded search in the library.
struct Limits {
  int degree_cap = 64;      // Buchberger aborts past this total degree
  int probe_degree = 8;     // monomial probes in bicartesian checks
  std::size_t max_basis = 4000;
  const CancelToken* cancel = nullptr;

  void poll() const {
    if (cancel) cancel->check();
  }
};

}  // namespace ferrand
