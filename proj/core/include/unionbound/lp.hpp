#pragma once

#include <cstddef>
#include <vector>

#include "unionbound/linalg.hpp"
#include "unionbound/space.hpp"

namespace unionbound {

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

// optimize objective . x  subject to  eq_matrix x = eq_rhs,  x >= 0.
struct LpProblem {
  std::vector<double> objective;
  DenseMatrix eq_matrix;
  std::vector<double> eq_rhs;
  LpSense sense = LpSense::Minimize;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> primal;
  std::size_t iterations = 0;
};

inline constexpr double kLpFeasibilityTolerance = 1e-9;

// Two-phase revised simplex with Bland's rule. Optimal solutions are
// basic feasible solutions. Throws only on malformed problems.
LpSolution solve_lp(const LpProblem& problem);

enum class BoundSense { Lower, Upper };

// Optimum of sum_B p_B over all atom distributions p >= 0 matching, for
// every event i, both P(A_i) and gamma_i(c). Lower sense minimizes.
// Throws InconsistentInfo when no distribution matches. n <= 20.
double optimal_inclass_bound(const PartialInfo& info, const WeightVector& w, BoundSense sense);

}  // namespace unionbound
