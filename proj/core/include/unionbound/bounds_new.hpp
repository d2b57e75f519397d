#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "unionbound/bounds_classic.hpp"
#include "unionbound/space.hpp"
#include "unionbound/subset_opt.hpp"

namespace unionbound {

// How the all-positive subset selections are solved. Mixed-sign weights
// always go through exhaustive enumeration.
struct SolveMode {
  enum class Kind { Exact, Fptas };
  Kind kind = Kind::Exact;
  double epsilon = 0.0;

  static SolveMode exact() { return {}; }
  static SolveMode fptas(double eps) { return {Kind::Fptas, eps}; }
};

// One event's contribution. Ratios are subset weight sums divided by c_i.
// case_id is 1-4 for the sign cases, 0 when the event contributes nothing.
struct PerEventSolution {
  std::size_t event = 0;
  double b = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  std::optional<std::pair<SubsetSelection, SubsetSelection>> picks;
  double ell = 0.0;
  int case_id = 0;
};

// Minimum of sum_{B containing i} p_B over atom distributions matching
// alpha_i and gamma_i(c): the lower convex envelope of 1/r over the
// achievable ratios, evaluated at b = gamma_i / (c_i alpha_i). In fptas
// mode the result is a guaranteed lower approximation.
PerEventSolution ell_i(const PartialInfo& info, const WeightVector& w, std::size_t i,
                       SolveMode mode = SolveMode::exact());

BoundValue lnew3(const PartialInfo& info, const WeightVector& w, SolveMode mode = SolveMode::exact());

struct Delta {
  double value = 0.0;
  double upper_limit = 0.0;
};

// Certified lower bound on the mass of the atom shared by all events,
// from the smallest and largest proper-subset weight sums.
Delta delta_tilde(const PartialInfo& info, const WeightVector& w);

// Range of x for which every event's residual ratio stays achievable by a
// proper subset containing it: lower from sum - min_{k != i} c_k, upper
// from c_i. Tighter than the global min-c window and never below it.
struct FeasibleWindow {
  double lower = 0.0;
  double upper = 0.0;
};

FeasibleWindow shared_atom_window(const PartialInfo& info, const WeightVector& w);

// Per-event term after setting aside mass x on the full-intersection atom;
// selections range over proper subsets only. Throws InfeasibleX when x is
// outside this event's window.
PerEventSolution ell_i_prime(const PartialInfo& info, const WeightVector& w, std::size_t i, double x,
                             SolveMode mode = SolveMode::exact());

// x + sum_i ell_i_prime(x); non-decreasing in x on the window.
double lnew4_objective(const PartialInfo& info, const WeightVector& w, double x,
                       SolveMode mode = SolveMode::exact());

BoundValue lnew4(const PartialInfo& info, const WeightVector& w, SolveMode mode = SolveMode::exact());

// Closed-form upper bounds; unew5 needs at least two events.
BoundValue unew4(const PartialInfo& info, const WeightVector& w);
BoundValue unew5(const PartialInfo& info, const WeightVector& w);

}  // namespace unionbound
