#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unionbound/space.hpp"

namespace unionbound {

enum class BoundKind { Lower, Upper };

const char* to_string(BoundKind k);

struct BoundValue {
  std::string name;
  double value = 0.0;
  BoundKind kind = BoundKind::Lower;
  std::optional<WeightVector> weights;
  std::vector<std::string> notes;
};

// de Caen: sum_i alpha_i^2 / sum_j P(A_i A_j).
BoundValue dc_bound(const PartialInfo& info);

// (sum |c_i| alpha_i)^2 / sum_i c_i^2 sum_j P(A_i A_j). Negative weights
// are replaced by their magnitudes.
BoundValue ratio_bound(const PartialInfo& info, const WeightVector& w);

// sum_i c_i alpha_i^2 / gamma_i(c), Cauchy-Schwarz applied per event.
BoundValue cs_percomponent_bound(const PartialInfo& info, const WeightVector& w);

// (c . alpha)^2 / c' Sigma c, Cauchy-Schwarz applied once.
BoundValue cs_aggregate_bound(const PartialInfo& info, const WeightVector& w);

struct GkResult {
  BoundValue bound;
  std::vector<double> weights;  // c~ solving Sigma c~ = alpha (least squares)
  double residual = 0.0;
  bool all_positive = false;
};

// Gallot-Kounias. Reported as the Rayleigh quotient (alpha' c~)^2 / c~' Sigma c~,
// which stays a valid bound for any real c~, including least-squares
// solutions of a singular system and vectors with negative entries.
GkResult gk_bound(const PartialInfo& info);

// KAT bound, evaluated through the new class at c = 1.
BoundValue kat_bound(const PartialInfo& info);

// Per-event floor/ceil form alpha_i (1/floor(b) + 1/ceil(b) - b/(floor(b) ceil(b))),
// b = gamma_i(1)/alpha_i. Independent of the subset machinery.
double kat_closed_form(const PartialInfo& info);

// Analytical YAT-II bound, evaluated through the
// shared-atom class at c = 1.
BoundValue yat2_bound(const PartialInfo& info);

}  // namespace unionbound
