#pragma once

#include <cstddef>
#include <vector>

#include "unionbound/space.hpp"

namespace unionbound {

// Which extreme subset sum to look for among subsets B that contain the
// mandatory index. Thresholds are in weight-sum units.
enum class Direction {
  MaxBelow,     // max sum(B) subject to sum(B) <= t
  MinAbove,     // min sum(B) subject to sum(B) >= t
  MaxAll,       // max sum(B)
  MinAll,       // min sum(B)
  MaxNegative,  // max sum(B) subject to sum(B) < 0
};

const char* to_string(Direction d);

struct SelectionQuery {
  std::vector<double> weights;
  std::size_t mandatory = 0;  // zero-based
  Direction direction = Direction::MaxAll;
  double threshold = 0.0;
  bool exclude_full_set = false;
};

struct SubsetSelection {
  Mask mask = 0;
  double weight_sum = 0.0;
  bool exact = true;
  double epsilon = 0.0;     // FPTAS only
  double resolution = 0.0;  // DP quantum, 0 when unquantized
};

double subset_weight_sum(const std::vector<double>& weights, Mask mask);

// Enumerates all 2^(n-1) subsets containing the mandatory index; ties go
// to the smallest mask. Works for any sign pattern. n <= 24.
SubsetSelection select_exhaustive(const SelectionQuery& q);

// Exact search over weights quantized to multiples of `resolution`,
// keeping only distinct reachable quantized sums (pseudo-polynomial:
// at most min(2^(n-1), budget/resolution) states per item). MinAbove
// runs as MaxBelow on the complement. Positive weights only.
SubsetSelection select_dp(const SelectionQuery& q, double resolution);

// Trimmed-list approximation: MaxBelow returns a sum in [(1-eps) OPT, OPT],
// MinAbove a sum in [OPT, (1+eps) OPT]. Positive weights only.
SubsetSelection select_fptas(const SelectionQuery& q, double epsilon);

}  // namespace unionbound
