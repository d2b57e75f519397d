#include "unionbound/bounds_classic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "unionbound/bounds_new.hpp"
#include "unionbound/errors.hpp"
#include "unionbound/linalg.hpp"

namespace unionbound {

const char* to_string(BoundKind k) { return k == BoundKind::Lower ? "lower" : "upper"; }

namespace {

void check_size(const PartialInfo& info, const WeightVector& w) {
  if (w.size() != info.event_count()) throw DimensionMismatch("weight vector length differs from event count");
}

void require_positive(const WeightVector& w, const char* who) {
  if (!w.all_positive()) throw ArgumentError(std::string(who) + " requires all-positive weights");
}

double row_sum(const PartialInfo& info, std::size_t i) {
  double s = 0.0;
  for (double v : info.pairwise_row(i)) s += v;
  return s;
}

double quadratic_form(const PartialInfo& info, std::span<const double> c) {
  double q = 0.0;
  const std::size_t n = info.event_count();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += info.pairwise(i, k) * c[k];
    q += c[i] * acc;
  }
  return q;
}

double dot_alpha(const PartialInfo& info, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i < info.event_count(); ++i) s += c[i] * info.alpha(i);
  return s;
}

}  // namespace

BoundValue dc_bound(const PartialInfo& info) {
  double total = 0.0;
  for (std::size_t i = 0; i < info.event_count(); ++i) {
    const double a = info.alpha(i);
    if (a <= 0.0) continue;
    total += a * a / row_sum(info, i);
  }
  return {"dc", total, BoundKind::Lower, std::nullopt, {}};
}

BoundValue ratio_bound(const PartialInfo& info, const WeightVector& w) {
  check_size(info, w);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < info.event_count(); ++i) {
    num += std::abs(w[i]) * info.alpha(i);
    den += w[i] * w[i] * row_sum(info, i);
  }
  if (!(den > 0.0)) throw DegenerateWeights("ratio bound denominator is not positive");
  return {"ratio", num * num / den, BoundKind::Lower, w, {}};
}

BoundValue cs_percomponent_bound(const PartialInfo& info, const WeightVector& w) {
  check_size(info, w);
  require_positive(w, "per-component Cauchy-Schwarz bound");
  double total = 0.0;
  for (std::size_t i = 0; i < info.event_count(); ++i) {
    const double a = info.alpha(i);
    if (a <= 0.0) continue;
    const double g = gamma(info, w, i);
    if (!(g > 0.0)) {
      std::ostringstream os;
      os << "gamma_" << i + 1 << "(c) is not positive";
      throw DegenerateWeights(os.str());
    }
    total += w[i] * a * a / g;
  }
  return {"cs_percomponent", total, BoundKind::Lower, w, {}};
}

BoundValue cs_aggregate_bound(const PartialInfo& info, const WeightVector& w) {
  check_size(info, w);
  require_positive(w, "aggregate Cauchy-Schwarz bound");
  const double q = quadratic_form(info, w.values());
  if (!(q > 0.0)) throw DegenerateWeights("quadratic form c' Sigma c is not positive");
  const double s = dot_alpha(info, w.values());
  return {"cs_aggregate", s * s / q, BoundKind::Lower, w, {}};
}

GkResult gk_bound(const PartialInfo& info) {
  const std::size_t n = info.event_count();
  const DenseMatrix sigma(n, n, std::vector<double>(info.pairwise_matrix().begin(), info.pairwise_matrix().end()));
  const LinearSolveResult solve = solve_linear_system(sigma, info.alphas());

  GkResult out;
  out.weights = solve.x;
  out.residual = solve.residual;
  out.all_positive = std::all_of(out.weights.begin(), out.weights.end(), [](double v) { return v > 0.0; });

  const double q = quadratic_form(info, out.weights);
  if (!(q > 0.0)) throw DegenerateWeights("quadratic form at the Gallot-Kounias weights is not positive");
  const double s = dot_alpha(info, out.weights);

  BoundValue& b = out.bound;
  b.name = "gk";
  b.value = s * s / q;
  b.kind = BoundKind::Lower;
  std::ostringstream os;
  os.precision(3);
  os << "residual=" << solve.residual;
  b.notes.push_back(os.str());
  if (solve.rank_deficient) b.notes.emplace_back("singular pairwise matrix; least-squares weights");
  if (!out.all_positive) b.notes.emplace_back("weights have non-positive entries");
  try {
    b.weights = WeightVector(out.weights);
  } catch (const ArgumentError&) {
    // Too many mixed-sign entries to classify; the raw vector is still in out.weights.
  }
  return out;
}

BoundValue kat_bound(const PartialInfo& info) {
  BoundValue b = lnew3(info, WeightVector::ones(info.event_count()));
  b.name = "kat";
  return b;
}

double kat_closed_form(const PartialInfo& info) {
  const std::size_t n = info.event_count();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = info.alpha(i);
    if (a <= 0.0) continue;
    const double b = std::clamp(row_sum(info, i) / a, 1.0, static_cast<double>(n));
    const double lo = std::floor(b);
    const double hi = std::ceil(b);
    total += a * (1.0 / lo + 1.0 / hi - b / (lo * hi));
  }
  return total;
}

BoundValue yat2_bound(const PartialInfo& info) {
  BoundValue b = lnew4(info, WeightVector::ones(info.event_count()));
  b.name = "yat2";
  return b;
}

}  // namespace unionbound
