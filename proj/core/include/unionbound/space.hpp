#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace unionbound {

// Bit k of a mask is set iff event k+1 belongs to the subset.
using Mask = std::uint64_t;

inline constexpr std::size_t kDefaultMaxAtomEvents = 24;
inline constexpr double kProbTolerance = 1e-12;
inline constexpr double kWeightZeroTolerance = 1e-12;

constexpr Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
constexpr Mask bit(std::size_t k) { return Mask{1} << k; }
constexpr bool contains(Mask m, std::size_t k) { return (m >> k) & 1U; }

// Full atom-level distribution over the nonempty subsets of {1..n}.
// atom(B) is the mass of the outcome lying in exactly the events of B;
// whatever is left of 1 belongs to the complement of the union.
class EventSpace {
 public:
  // `atoms` has 2^n entries indexed by mask; entry 0 is ignored.
  EventSpace(std::size_t n, std::vector<double> atoms,
             std::size_t max_events = kDefaultMaxAtomEvents);

  std::size_t event_count() const { return n_; }
  double atom(Mask m) const { return m == 0 ? 0.0 : atoms_[m]; }
  std::span<const double> atoms() const { return atoms_; }
  std::size_t nonzero_atoms() const;

 private:
  std::size_t n_;
  std::vector<double> atoms_;
};

// Event probabilities and the symmetric matrix of pairwise intersection
// probabilities. Only this is visible to the bounds.
class PartialInfo {
 public:
  // `pairwise` is row-major n x n.
  PartialInfo(std::vector<double> alpha, std::vector<double> pairwise);

  std::size_t event_count() const { return alpha_.size(); }
  double alpha(std::size_t i) const { return alpha_[i]; }
  std::span<const double> alphas() const { return alpha_; }
  double pairwise(std::size_t i, std::size_t j) const { return pairwise_[i * alpha_.size() + j]; }
  std::span<const double> pairwise_row(std::size_t i) const {
    return std::span<const double>(pairwise_).subspan(i * alpha_.size(), alpha_.size());
  }
  std::span<const double> pairwise_matrix() const { return pairwise_; }

 private:
  std::vector<double> alpha_;
  std::vector<double> pairwise_;
};

enum class WeightClass { AllPositive, MixedSignValid, Invalid };

const char* to_string(WeightClass c);

// Weight vector c together with its validity class: every nonempty
// subset sum must be nonzero for the weighted union identity to hold.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> c);

  static WeightVector ones(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }
  static WeightVector constant(std::size_t n, double kappa) {
    return WeightVector(std::vector<double>(n, kappa));
  }

  std::size_t size() const { return c_.size(); }
  double operator[](std::size_t k) const { return c_[k]; }
  std::span<const double> values() const { return c_; }
  WeightClass classification() const { return class_; }
  bool all_positive() const { return class_ == WeightClass::AllPositive; }
  bool valid() const { return class_ != WeightClass::Invalid; }

  double sum() const;
  double min() const;

 private:
  std::vector<double> c_;
  WeightClass class_;
};

// Smallest |sum_{k in B} c_k| over nonempty B, by meet-in-the-middle
// enumeration. n <= 48.
double min_abs_subset_sum(std::span<const double> c);

// P(union) = sum of all atom masses.
double exact_union(const EventSpace& space);

PartialInfo derive_partial_info(const EventSpace& space);

// sum_i sum_{B containing i} c_i p_B / (sum_{k in B} c_k). Equals the
// union probability for every valid c.
double weighted_identity(const EventSpace& space, const WeightVector& w);

// gamma_i(c) = sum_k c_k P(A_i and A_k), the k = i term included.
double gamma(const PartialInfo& info, const WeightVector& w, std::size_t i);
std::vector<double> gammas(const PartialInfo& info, const WeightVector& w);

struct SpaceModel {
  enum class Kind { Dirichlet, Sparse };
  Kind kind = Kind::Dirichlet;
  std::size_t atoms = 0;  // Sparse only

  static SpaceModel dirichlet() { return {}; }
  static SpaceModel sparse(std::size_t k) { return {Kind::Sparse, k}; }
};

// Dirichlet: flat Dirichlet over all 2^n atoms, the empty atom included.
// Sparse(k): k distinct nonempty atoms plus the complement share a flat
// Dirichlet draw. Deterministic in (n, seed, model).
EventSpace generate_random_space(std::size_t n, std::uint64_t seed, SpaceModel model,
                                 std::size_t max_events = kDefaultMaxAtomEvents);

// Subset sums for every mask, looked up as low-half + high-half partial
// sums so no value accumulates more than ~n/2 roundings.
class SubsetSums {
 public:
  explicit SubsetSums(std::span<const double> c);
  double operator()(Mask m) const { return low_[m & low_mask_] + high_[m >> split_]; }

 private:
  std::size_t split_;
  Mask low_mask_;
  std::vector<double> low_;
  std::vector<double> high_;
};

}  // namespace unionbound
