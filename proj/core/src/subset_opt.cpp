#include "unionbound/subset_opt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>

#include "unionbound/errors.hpp"

namespace unionbound {

const char* to_string(Direction d) {
  switch (d) {
    case Direction::MaxBelow: return "max-below";
    case Direction::MinAbove: return "min-above";
    case Direction::MaxAll: return "max-all";
    case Direction::MinAll: return "min-all";
    case Direction::MaxNegative: return "max-negative";
  }
  return "?";
}

double subset_weight_sum(const std::vector<double>& weights, Mask mask) {
  double s = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (contains(mask, k)) s += weights[k];
  }
  return s;
}

namespace {

void validate(const SelectionQuery& q) {
  if (q.weights.empty()) throw ArgumentError("selection needs at least one weight");
  if (q.weights.size() > 63) throw ArgumentError("selection supports at most 63 weights");
  if (q.mandatory >= q.weights.size()) throw ArgumentError("mandatory index out of range");
  for (double c : q.weights) {
    if (!std::isfinite(c)) throw ArgumentError("weights must be finite");
  }
  if ((q.direction == Direction::MaxBelow || q.direction == Direction::MinAbove) && !std::isfinite(q.threshold)) {
    throw ArgumentError("threshold must be finite");
  }
}

void require_positive_threshold_query(const SelectionQuery& q, const char* who) {
  if (!std::all_of(q.weights.begin(), q.weights.end(), [](double c) { return c > 0.0; })) {
    throw ArgumentError(std::string(who) + " requires all-positive weights");
  }
  if (q.direction != Direction::MaxBelow && q.direction != Direction::MinAbove) {
    throw ArgumentError(std::string(who) + " supports max-below and min-above queries only");
  }
}

[[noreturn]] void no_feasible(const SelectionQuery& q) {
  std::ostringstream os;
  os.precision(17);
  os << "no subset containing index " << q.mandatory + 1 << " satisfies " << to_string(q.direction);
  if (q.direction == Direction::MaxBelow || q.direction == Direction::MinAbove) os << " t=" << q.threshold;
  if (q.exclude_full_set) os << " (full set excluded)";
  throw NoFeasibleSubset(os.str());
}

Mask items_mask(const SelectionQuery& q) { return full_mask(q.weights.size()) & ~bit(q.mandatory); }

// Best proper subset containing the mandatory index: drop the smallest
// other weight, the highest index among ties (smallest resulting mask).
std::optional<Mask> largest_proper_subset(const SelectionQuery& q) {
  const std::size_t n = q.weights.size();
  if (n == 1) return std::nullopt;
  std::size_t drop = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == q.mandatory) continue;
    if (drop == n || q.weights[k] <= q.weights[drop]) drop = k;
  }
  return full_mask(n) & ~bit(drop);
}

struct Entry {
  double sum;
  Mask mask;
};

struct QState {
  std::int64_t sum;
  Mask mask;
};

// Distinct reachable quantized sums of subsets of `items` not exceeding
// `budget`. At equal sums the smaller mask survives unless prefer_large.
std::vector<QState> reachable_sums(const std::vector<std::int64_t>& quanta, Mask items, std::int64_t budget,
                                   bool prefer_large) {
  std::vector<QState> states{{0, 0}};
  std::vector<QState> shifted, merged;
  for (std::size_t k = 0; k < quanta.size(); ++k) {
    if (!contains(items, k)) continue;
    shifted.clear();
    for (const auto& s : states) {
      const std::int64_t v = s.sum + quanta[k];
      if (v > budget) break;
      shifted.push_back({v, s.mask | bit(k)});
    }
    merged.clear();
    merged.reserve(states.size() + shifted.size());
    std::size_t a = 0, b = 0;
    while (a < states.size() || b < shifted.size()) {
      QState next;
      if (b == shifted.size() || (a < states.size() && states[a].sum < shifted[b].sum)) {
        next = states[a++];
      } else if (a == states.size() || shifted[b].sum < states[a].sum) {
        next = shifted[b++];
      } else {
        const QState& x = states[a++];
        const QState& y = shifted[b++];
        next = (x.mask < y.mask) != prefer_large ? x : y;
      }
      if (!merged.empty() && merged.back().sum == next.sum) {
        if ((next.mask < merged.back().mask) != prefer_large) merged.back() = next;
      } else {
        merged.push_back(next);
      }
    }
    states.swap(merged);
  }
  return states;
}

std::int64_t quantize(double v, double resolution) {
  const double q = v / resolution;
  if (!(std::abs(q) < 0x1.0p61)) throw ArgumentError("resolution too fine for the weight magnitudes");
  return std::llround(q);
}

}  // namespace

SubsetSelection select_exhaustive(const SelectionQuery& q) {
  validate(q);
  const std::size_t n = q.weights.size();
  if (n > 24) throw ArgumentError("exhaustive selection is limited to 24 weights");
  const SubsetSums sums(q.weights);
  const Mask full = full_mask(n);
  const std::size_t i = q.mandatory;
  const Mask below = bit(i) - 1;
  const bool maximize = q.direction == Direction::MaxBelow || q.direction == Direction::MaxAll ||
                        q.direction == Direction::MaxNegative;

  bool found = false;
  Mask best_mask = 0;
  double best = 0.0;
  const Mask count = Mask{1} << (n - 1);
  for (Mask sub = 0; sub < count; ++sub) {
    const Mask mask = ((sub & ~below) << 1) | bit(i) | (sub & below);
    if (q.exclude_full_set && mask == full) continue;
    const double s = sums(mask);
    switch (q.direction) {
      case Direction::MaxBelow:
        if (!(s <= q.threshold)) continue;
        break;
      case Direction::MinAbove:
        if (!(s >= q.threshold)) continue;
        break;
      case Direction::MaxNegative:
        if (!(s < 0.0)) continue;
        break;
      case Direction::MaxAll:
      case Direction::MinAll:
        break;
    }
    if (!found || (maximize ? s > best : s < best)) {
      found = true;
      best = s;
      best_mask = mask;
    }
  }
  if (!found) no_feasible(q);
  return {best_mask, subset_weight_sum(q.weights, best_mask), true, 0.0, 0.0};
}

SubsetSelection select_dp(const SelectionQuery& q, double resolution) {
  validate(q);
  require_positive_threshold_query(q, "dynamic-programming selection");
  if (!(resolution > 0.0) || !std::isfinite(resolution)) throw ArgumentError("resolution must be positive");

  const std::size_t n = q.weights.size();
  const std::size_t i = q.mandatory;
  const Mask items = items_mask(q);
  std::vector<std::int64_t> quanta(n);
  std::int64_t items_total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    quanta[k] = quantize(q.weights[k], resolution);
    if (k != i) items_total += quanta[k];
  }
  const std::int64_t t_q = quantize(q.threshold, resolution);
  const double tolerance = static_cast<double>(n + 1) * resolution;

  std::optional<Mask> chosen;
  if (q.direction == Direction::MaxBelow) {
    const std::int64_t budget = t_q - quanta[i];
    if (budget >= 0) {
      const auto states = reachable_sums(quanta, items, budget, false);
      for (auto it = states.rbegin(); it != states.rend(); ++it) {
        if (q.exclude_full_set && it->mask == items) continue;
        chosen = it->mask | bit(i);
        break;
      }
    }
  } else {
    // min sum(B) >= t  <=>  max sum(B') <= total - t  over B' = complement of B.
    const std::int64_t budget = quanta[i] + items_total - t_q;
    if (budget >= 0) {
      const auto states = reachable_sums(quanta, items, budget, true);
      for (auto it = states.rbegin(); it != states.rend(); ++it) {
        if (q.exclude_full_set && it->mask == 0) continue;
        chosen = full_mask(n) & ~it->mask;
        break;
      }
    }
  }

  if (!chosen) {
    // Distinguish a genuinely empty family from a quantization artifact.
    bool feasible = false;
    if (q.direction == Direction::MaxBelow) {
      feasible = q.weights[i] <= q.threshold && !(q.exclude_full_set && n == 1);
    } else {
      double top = 0.0;
      if (q.exclude_full_set) {
        const auto proper = largest_proper_subset(q);
        feasible = proper && subset_weight_sum(q.weights, *proper) >= q.threshold;
      } else {
        top = subset_weight_sum(q.weights, full_mask(n));
        feasible = top >= q.threshold;
      }
    }
    if (feasible) throw ResolutionTooCoarse("quantized weights lost every feasible subset");
    no_feasible(q);
  }

  const double s = subset_weight_sum(q.weights, *chosen);
  if ((q.direction == Direction::MaxBelow && s > q.threshold + tolerance) ||
      (q.direction == Direction::MinAbove && s < q.threshold - tolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << "quantized optimum has true sum " << s << " on the wrong side of threshold " << q.threshold;
    throw ResolutionTooCoarse(os.str());
  }
  return {*chosen, s, true, 0.0, resolution};
}

SubsetSelection select_fptas(const SelectionQuery& q, double epsilon) {
  validate(q);
  require_positive_threshold_query(q, "FPTAS selection");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ArgumentError("epsilon must lie in (0, 1)");

  const std::size_t n = q.weights.size();
  const std::size_t i = q.mandatory;
  const Mask items = items_mask(q);
  const std::size_t item_count = n - 1;
  const double delta = item_count == 0 ? 0.0 : epsilon / (2.0 * static_cast<double>(item_count));
  const double rest = q.threshold - q.weights[i];
  auto result = [&](Mask m) { return SubsetSelection{m, subset_weight_sum(q.weights, m), false, epsilon, 0.0}; };

  if (q.direction == Direction::MaxBelow) {
    if (rest < 0.0 || (q.exclude_full_set && n == 1)) no_feasible(q);
    if (q.exclude_full_set && subset_weight_sum(q.weights, full_mask(n)) <= q.threshold) {
      return result(*largest_proper_subset(q));
    }
    std::vector<Entry> list{{0.0, 0}};
    std::vector<Entry> shifted, merged;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double c = q.weights[k];
      shifted.clear();
      for (const auto& e : list) {
        if (e.sum + c > rest) break;
        shifted.push_back({e.sum + c, e.mask | bit(k)});
      }
      merged.clear();
      std::merge(list.begin(), list.end(), shifted.begin(), shifted.end(), std::back_inserter(merged),
                 [](const Entry& x, const Entry& y) { return x.sum < y.sum || (x.sum == y.sum && x.mask < y.mask); });
      // Each kept entry stands for everything within a (1 + delta) factor above it.
      list.clear();
      for (const auto& e : merged) {
        if (list.empty() || e.sum > list.back().sum * (1.0 + delta)) list.push_back(e);
      }
    }
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
      if (q.exclude_full_set && it->mask == items) continue;
      return result(it->mask | bit(i));
    }
    no_feasible(q);
  }

  // MinAbove.
  if (q.exclude_full_set && n == 1) no_feasible(q);
  if (rest <= 0.0) return result(bit(i));
  std::optional<Entry> best;
  auto offer = [&](const Entry& e) {
    if (q.exclude_full_set && e.mask == items) return;
    if (!best || e.sum < best->sum || (e.sum == best->sum && e.mask < best->mask)) best = e;
  };
  if (q.exclude_full_set) {
    const Mask proper = *largest_proper_subset(q);
    if (subset_weight_sum(q.weights, proper) >= q.threshold) {
      offer({subset_weight_sum(q.weights, proper & ~bit(i)), proper & ~bit(i)});
    }
  }
  std::vector<Entry> open{{0.0, 0}};
  std::vector<Entry> shifted, merged;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    const double c = q.weights[k];
    shifted.clear();
    for (const auto& e : open) {
      const Entry next{e.sum + c, e.mask | bit(k)};
      if (next.sum >= rest) {
        offer(next);
      } else {
        shifted.push_back(next);
      }
    }
    merged.clear();
    std::merge(open.begin(), open.end(), shifted.begin(), shifted.end(), std::back_inserter(merged),
               [](const Entry& x, const Entry& y) { return x.sum < y.sum || (x.sum == y.sum && x.mask < y.mask); });
    // Keep the largest entry of each (1 + delta) cluster so every sum stays
    // dominated from above.
    open.clear();
    std::size_t start = 0;
    while (start < merged.size()) {
      const double limit = merged[start].sum * (1.0 + delta);
      std::size_t end = start;
      while (end + 1 < merged.size() && merged[end + 1].sum <= limit) ++end;
      open.push_back(merged[end]);
      start = end + 1;
    }
  }
  if (!best) no_feasible(q);
  return result(best->mask | bit(i));
}

}  // namespace unionbound
