#include "unionbound/bounds_new.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "unionbound/errors.hpp"

namespace unionbound {

namespace {

void check_inputs(const PartialInfo& info, const WeightVector& w) {
  if (w.size() != info.event_count()) throw DimensionMismatch("weight vector length differs from event count");
}

void check_event(const PartialInfo& info, std::size_t i) {
  if (i >= info.event_count()) throw ArgumentError("event index out of range");
}

void check_mode(SolveMode mode) {
  if (mode.kind == SolveMode::Kind::Fptas && !(mode.epsilon > 0.0 && mode.epsilon < 1.0)) {
    throw ArgumentError("FPTAS epsilon must lie in (0, 1)");
  }
}

void require_positive(const WeightVector& w, const char* who) {
  if (!w.all_positive()) throw ArgumentError(std::string(who) + " requires all-positive weights");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Value at b of the chord of 1/r through r = b1 and r = b2.
double chord(double b, double b1, double b2) { return 1.0 / b1 + 1.0 / b2 - b / (b1 * b2); }

std::vector<double> normalized(const WeightVector& w, std::size_t i) {
  std::vector<double> c(w.values().begin(), w.values().end());
  const double ci = c[i];
  for (double& v : c) v /= ci;
  c[i] = 1.0;
  return c;
}

struct Bracket {
  SubsetSelection lo;
  SubsetSelection hi;
  double b1 = 0.0;
  double b2 = 0.0;
};

// Ratios just below and just above b among subsets containing i, for
// positive normalized weights. Thresholds get a small slack so an exact
// tie with b survives rounding; the results are then clamped to b.
Bracket bracket_positive(const std::vector<double>& c, std::size_t i, double b, bool exclude_full,
                         SolveMode mode) {
  double total = 0.0;
  for (double v : c) total += v;
  double slack = 1e-12 * total;
  SelectionQuery below{c, i, Direction::MaxBelow, 0.0, exclude_full};
  SelectionQuery above{c, i, Direction::MinAbove, 0.0, exclude_full};
  Bracket out;
  if (mode.kind == SolveMode::Kind::Exact) {
    const double resolution = 1e-12 * total;
    slack += static_cast<double>(c.size() + 1) * resolution;
    below.threshold = b + slack;
    above.threshold = b - slack;
    out.lo = select_dp(below, resolution);
    out.hi = select_dp(above, resolution);
    out.b1 = std::min(out.lo.weight_sum, b);
    out.b2 = std::max(out.hi.weight_sum, b);
  } else {
    const double eps = mode.epsilon;
    below.threshold = b + slack;
    above.threshold = b - slack;
    out.lo = select_fptas(below, eps);
    out.hi = select_fptas(above, eps);
    // Relax toward the unknown optimum; the chord only decreases.
    out.b1 = std::min(out.lo.weight_sum / (1.0 - eps), b);
    out.b2 = std::max(out.hi.weight_sum / (1.0 + eps), b);
  }
  return out;
}

Bracket bracket_exhaustive(const std::vector<double>& c, std::size_t i, double b) {
  double scale = 0.0;
  for (double v : c) scale += std::abs(v);
  const double slack = 1e-12 * scale;
  Bracket out;
  out.lo = select_exhaustive({c, i, Direction::MaxBelow, b + slack, false});
  out.hi = select_exhaustive({c, i, Direction::MinAbove, b - slack, false});
  out.b1 = std::min(out.lo.weight_sum, b);
  out.b2 = std::max(out.hi.weight_sum, b);
  return out;
}

double weighted_alpha_sum(const PartialInfo& info, const WeightVector& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < info.event_count(); ++i) s += w[i] * info.alpha(i);
  return s;
}

double quadratic_form(const std::vector<double>& g, const WeightVector& w) {
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) q += w[i] * g[i];
  return q;
}

double min_excluding(const WeightVector& w, std::size_t i) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k != i) m = std::min(m, w[k]);
  }
  return m;
}

}  // namespace

PerEventSolution ell_i(const PartialInfo& info, const WeightVector& w, std::size_t i, SolveMode mode) {
  check_inputs(info, w);
  check_event(info, i);
  check_mode(mode);
  if (!w.valid()) throw InvalidWeights("weights violate the nonzero subset-sum condition");

  PerEventSolution out;
  out.event = i;
  const double a = info.alpha(i);
  const std::vector<double> c = normalized(w, i);
  const std::size_t n = c.size();
  // gamma_i / c_i; working in normalized weights keeps tiny c_i harmless.
  double g = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    g += c[k] * info.pairwise(i, k);
    scale += std::abs(c[k]);
  }
  if (a < 1e-15) {
    if (std::abs(g) <= 1e-12 * scale) return out;
    throw InconsistentInfo("event " + std::to_string(i + 1) + " has alpha_i = 0 but gamma_i / c_i = " + fmt(g));
  }

  double rmax = 1.0;
  double rmin = 1.0;
  Mask max_mask = bit(i);
  Mask min_mask = bit(i);
  bool positive = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    if (c[k] > 0.0) {
      rmax += c[k];
      max_mask |= bit(k);
    } else {
      rmin += c[k];
      min_mask |= bit(k);
      positive = false;
    }
  }

  double b = g / a;
  const double tol = 1e-9 * std::max({1.0, std::abs(rmin), std::abs(rmax)});
  if (b < rmin - tol || b > rmax + tol) {
    throw InconsistentInfo("event " + std::to_string(i + 1) + ": ratio b = " + fmt(b) + " lies outside [" +
                           fmt(rmin) + ", " + fmt(rmax) + "]");
  }
  b = std::clamp(b, rmin, rmax);
  out.b = b;

  if (positive) {
    const Bracket br = bracket_positive(c, i, b, false, mode);
    out.case_id = 2;
    out.b1 = br.b1;
    out.b2 = br.b2;
    out.picks.emplace(br.lo, br.hi);
  } else if (rmin > 0.0) {
    const Bracket br = bracket_exhaustive(c, i, b);
    out.case_id = 2;
    out.b1 = br.b1;
    out.b2 = br.b2;
    out.picks.emplace(br.lo, br.hi);
  } else {
    // 1/r is concave on the negative ratios, so the envelope pairs the
    // negative ratio closest to zero with one of the two extremes.
    const SubsetSelection neg = select_exhaustive({c, i, Direction::MaxNegative, 0.0, false});
    const SubsetSelection top{max_mask, rmax, true, 0.0, 0.0};
    const SubsetSelection bottom{min_mask, rmin, true, 0.0, 0.0};
    if (b >= 0.0) {
      out.case_id = 1;
      out.b1 = neg.weight_sum;
      out.b2 = rmax;
      out.picks.emplace(neg, top);
    } else if (b < neg.weight_sum) {
      out.case_id = 3;
      out.b1 = rmin;
      out.b2 = neg.weight_sum;
      out.picks.emplace(bottom, neg);
    } else {
      out.case_id = 4;
      out.b1 = neg.weight_sum;
      out.b2 = rmax;
      out.picks.emplace(neg, top);
    }
  }
  out.ell = a * chord(out.b, out.b1, out.b2);
  return out;
}

BoundValue lnew3(const PartialInfo& info, const WeightVector& w, SolveMode mode) {
  check_inputs(info, w);
  BoundValue out{"lnew3", 0.0, BoundKind::Lower, w, {}};
  for (std::size_t i = 0; i < info.event_count(); ++i) out.value += ell_i(info, w, i, mode).ell;
  if (mode.kind == SolveMode::Kind::Fptas) out.notes.push_back("fptas eps=" + fmt(mode.epsilon));
  return out;
}

Delta delta_tilde(const PartialInfo& info, const WeightVector& w) {
  check_inputs(info, w);
  require_positive(w, "delta_tilde");
  const std::size_t n = info.event_count();
  const double m = w.min();
  const double s = w.sum();
  Delta d;
  if (n == 1) {
    d.value = info.alpha(0);
    d.upper_limit = info.alpha(0);
    return d;
  }
  d.upper_limit = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gamma(info, w, i);
    d.value = std::max(d.value, (g - (s - m) * info.alpha(i)) / m);
    d.upper_limit = std::min(d.upper_limit, (g - m * info.alpha(i)) / (s - m));
  }
  if (d.value > d.upper_limit + 1e-9) {
    throw InconsistentInfo("shared-atom lower bound " + fmt(d.value) + " exceeds its upper limit " +
                           fmt(d.upper_limit));
  }
  return d;
}

FeasibleWindow shared_atom_window(const PartialInfo& info, const WeightVector& w) {
  check_inputs(info, w);
  require_positive(w, "shared_atom_window");
  const std::size_t n = info.event_count();
  if (n == 1) return {info.alpha(0), info.alpha(0)};
  const double s = w.sum();
  FeasibleWindow win{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gamma(info, w, i);
    const double a = info.alpha(i);
    const double mi = min_excluding(w, i);
    win.lower = std::max(win.lower, (g - (s - mi) * a) / mi);
    win.upper = std::min({win.upper, (g - w[i] * a) / (s - w[i]), a});
  }
  return win;
}

PerEventSolution ell_i_prime(const PartialInfo& info, const WeightVector& w, std::size_t i, double x,
                             SolveMode mode) {
  check_inputs(info, w);
  check_event(info, i);
  check_mode(mode);
  require_positive(w, "ell_i_prime");
  if (!std::isfinite(x)) throw ArgumentError("x must be finite");

  PerEventSolution out;
  out.event = i;
  const std::size_t n = info.event_count();
  const double ci = w[i];
  const double s = w.sum();
  const double gi = gamma(info, w, i);
  const double a = info.alpha(i) - x;
  const double residual = gi - s * x;
  if (a < -1e-9 || x < -1e-9) {
    throw InfeasibleX("x = " + fmt(x) + " is outside the window of event " + std::to_string(i + 1));
  }
  if (a <= 1e-12) {
    if (std::abs(residual) <= 1e-9 * std::max(1.0, s)) return out;
    throw InconsistentInfo("event " + std::to_string(i + 1) + " has no residual mass but weighted residual " +
                           fmt(residual));
  }
  if (n == 1) throw InfeasibleX("a single event leaves no proper subset to carry mass below alpha");

  // Residual ratio must be reachable by a proper subset containing i:
  // between {i} (ratio 1) and everything but the smallest other weight.
  const double hi = (s - min_excluding(w, i)) / ci;
  double g = residual / ci;
  const double tol = 1e-9 * s / ci;
  if (g < a - tol || g > hi * a + tol) {
    throw InfeasibleX("x = " + fmt(x) + " is outside the window of event " + std::to_string(i + 1) +
                      " (ratio " + fmt(g / a) + " not in [1, " + fmt(hi) + "])");
  }
  g = std::clamp(g, a, hi * a);
  out.b = g / a;

  const Bracket br = bracket_positive(normalized(w, i), i, out.b, true, mode);
  out.case_id = 2;
  out.b1 = br.b1;
  out.b2 = br.b2;
  out.picks.emplace(br.lo, br.hi);
  out.ell = a * chord(out.b, out.b1, out.b2);
  return out;
}

double lnew4_objective(const PartialInfo& info, const WeightVector& w, double x, SolveMode mode) {
  check_inputs(info, w);
  double total = x;
  for (std::size_t i = 0; i < info.event_count(); ++i) total += ell_i_prime(info, w, i, x, mode).ell;
  return total;
}

BoundValue lnew4(const PartialInfo& info, const WeightVector& w, SolveMode mode) {
  check_inputs(info, w);
  require_positive(w, "lnew4");
  check_mode(mode);
  const Delta d = delta_tilde(info, w);
  const FeasibleWindow win = shared_atom_window(info, w);
  if (win.lower > win.upper + 1e-9) {
    throw InconsistentInfo("shared-atom window is empty: [" + fmt(win.lower) + ", " + fmt(win.upper) + "]");
  }
  const double x = std::max(d.value, win.lower);
  BoundValue out{"lnew4", lnew4_objective(info, w, x, mode), BoundKind::Lower, w, {}};
  if (x > d.value + 1e-12) out.notes.push_back("x raised from " + fmt(d.value) + " to " + fmt(x) + " by per-event window");
  if (mode.kind == SolveMode::Kind::Fptas) out.notes.push_back("fptas eps=" + fmt(mode.epsilon));
  return out;
}

BoundValue unew4(const PartialInfo& info, const WeightVector& w) {
  check_inputs(info, w);
  require_positive(w, "unew4");
  const double m = w.min();
  const double s = w.sum();
  const double lin = weighted_alpha_sum(info, w);
  const double quad = quadratic_form(gammas(info, w), w);
  return {"unew4", (1.0 / m + 1.0 / s) * lin - quad / (m * s), BoundKind::Upper, w, {}};
}

BoundValue unew5(const PartialInfo& info, const WeightVector& w) {
  check_inputs(info, w);
  require_positive(w, "unew5");
  const std::size_t n = info.event_count();
  if (n < 2) throw DegenerateWeights("unew5 needs at least two events");
  const double m = w.min();
  const double rest = w.sum() - m;
  const std::vector<double> g = gammas(info, w);
  double shared = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) shared = std::min(shared, (g[i] - m * info.alpha(i)) / rest);
  const double lin = weighted_alpha_sum(info, w);
  const double quad = quadratic_form(g, w);
  return {"unew5", shared + (1.0 / m + 1.0 / rest) * lin - quad / (m * rest), BoundKind::Upper, w, {}};
}

}  // namespace unionbound
