#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "unionbound/bounds_new.hpp"
#include "unionbound/report.hpp"
#include "unionbound/space.hpp"

namespace unionbound {

// max(c_k, eps) componentwise.
WeightVector clip_weights(std::span<const double> c, double eps);

// Gallot-Kounias weights clipped from below at eps.
WeightVector gk_clipped(const PartialInfo& info, double eps);

// Inclusive grid lo, lo + step, ..., hi.
struct KappaGrid {
  double lo = -1.0;
  double hi = 1.0;
  double step = 0.005;

  std::size_t count() const;
  double at(std::size_t j) const { return lo + static_cast<double>(j) * step; }
  // "lo:hi:step"
  static KappaGrid parse(const std::string& spec);
};

enum class BoundFamily { Lnew3, Lnew4, Both };

const char* to_string(BoundFamily f);

struct TraceEntry {
  std::string id;
  std::optional<double> value;  // empty when the weights were skipped
};

struct SearchResult {
  double best_value = -std::numeric_limits<double>::infinity();
  std::optional<WeightVector> best_weights;
  std::string best_id;
  std::vector<TraceEntry> trace;
  std::size_t evaluations = 0;
  std::size_t skipped = 0;
};

// Best lnew3 (or lnew4) over c = base + kappa 1. Points where the weights
// are invalid, or not all positive for lnew4, are skipped. First maximizer wins.
SearchResult kappa_line_search(const PartialInfo& info, std::span<const double> base, const KappaGrid& grid,
                               BoundFamily family = BoundFamily::Lnew3, SolveMode mode = SolveMode::exact());

// Trial t draws c_k ~ U(0,1] from a generator seeded by (seed, t), so the
// result does not depend on the thread count. threads = 0 picks the
// hardware concurrency.
struct RandomSearchOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool keep_trace = false;
  SolveMode mode = SolveMode::exact();
};

WeightVector random_trial_weights(std::size_t n, std::uint64_t seed, std::size_t trial);

SearchResult random_search(const PartialInfo& info, const RandomSearchOptions& opts,
                           BoundFamily family = BoundFamily::Lnew3);

struct RandomSearchOutcome {
  SearchResult lnew3;
  SearchResult lnew4;
  FamilyComparison comparison;
};

// Evaluates both classes on every trial.
RandomSearchOutcome random_search_both(const PartialInfo& info, const RandomSearchOptions& opts);

struct GkExact {};
struct GkClipped {
  double eps = 1e-6;
};
struct KappaLine {
  KappaGrid grid;
};
struct RandomPositive {
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
};
using Strategy = std::variant<GkExact, GkClipped, KappaLine, RandomPositive>;

struct SearchConfig {
  std::vector<Strategy> strategies;
  BoundFamily family = BoundFamily::Both;
  unsigned threads = 0;
  SolveMode mode = SolveMode::exact();
  // The in-class LP has 2^n - 1 columns; above this it is left out.
  std::size_t opt_max_events = 16;
};

// Every bound under every strategy, plus the weight-free ones. With an
// oracle space each entry is checked against the exact union.
BoundReport compare_all(const PartialInfo& info, const SearchConfig& config,
                        const EventSpace* oracle = nullptr);

}  // namespace unionbound
