#pragma once

// Test-side reference implementations. None of these call into the
// library's subset selection or bound code.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "unionbound/space.hpp"

namespace oracle {

using unionbound::Mask;

inline double mask_sum(const std::vector<double>& c, Mask m) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if ((m >> k) & 1U) s += c[k];
  }
  return s;
}

inline std::vector<double> alpha_of(const unionbound::EventSpace& space) {
  const std::size_t n = space.event_count();
  std::vector<double> a(n, 0.0);
  for (Mask m = 1; m < (Mask{1} << n); ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1U) a[i] += space.atom(m);
    }
  }
  return a;
}

// Sum over subsets B containing i of c_i p_B / c(B), straight from atoms.
inline double atom_term(const unionbound::EventSpace& space, const std::vector<double>& c, std::size_t i) {
  double t = 0.0;
  for (Mask m = 1; m < (Mask{1} << space.event_count()); ++m) {
    if ((m >> i) & 1U) t += c[i] * space.atom(m) / mask_sum(c, m);
  }
  return t;
}

// Two-atom reduction: minimum over ratio pairs r1 <= b <= r2 of
// alpha (1/r1 + 1/r2 - b/(r1 r2)), ratios r = c(B)/c_i over B containing i.
// A single ratio equal to b (within tol) counts as a pair with itself.
inline double ell_pairs(double alpha, double gamma, const std::vector<double>& c, std::size_t i,
                        bool exclude_full = false, double tol = 1e-12) {
  const std::size_t n = c.size();
  const Mask full = (Mask{1} << n) - 1;
  std::vector<double> r;
  for (Mask m = 1; m <= full; ++m) {
    if (!((m >> i) & 1U)) continue;
    if (exclude_full && m == full) continue;
    r.push_back(mask_sum(c, m) / c[i]);
  }
  double b = gamma / (c[i] * alpha);
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  b = std::clamp(b, *lo, *hi);
  double best = std::numeric_limits<double>::infinity();
  for (double r1 : r) {
    if (std::abs(r1 - b) <= tol * std::max(1.0, std::abs(b))) best = std::min(best, alpha / r1);
    if (r1 > b) continue;
    for (double r2 : r) {
      if (r2 < b || r2 == r1) continue;
      best = std::min(best, alpha * (1.0 / r1 + 1.0 / r2 - b / (r1 * r2)));
    }
  }
  return best;
}

// Dense Gaussian elimination with partial pivoting; nullopt if singular.
inline std::optional<std::vector<double>> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-12) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

struct VertexResult {
  bool feasible = false;
  double value = 0.0;
};

// min or max of obj.x over {A x = b, x >= 0} by enumerating every basis.
// Assumes full row rank and a bounded optimum when feasible.
inline VertexResult vertex_enumeration(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                       const std::vector<double>& obj, bool maximize) {
  const std::size_t m = a.size();
  const std::size_t n = obj.size();
  VertexResult out;
  for (Mask cols = 0; cols < (Mask{1} << n); ++cols) {
    if (static_cast<std::size_t>(std::popcount(cols)) != m) continue;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j) {
      if ((cols >> j) & 1U) idx.push_back(j);
    }
    std::vector<std::vector<double>> sub(m, std::vector<double>(m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t k = 0; k < m; ++k) sub[r][k] = a[r][idx[k]];
    }
    const auto xb = gauss_solve(sub, b);
    if (!xb) continue;
    if (std::any_of(xb->begin(), xb->end(), [](double v) { return v < -1e-10; })) continue;
    double v = 0.0;
    for (std::size_t k = 0; k < m; ++k) v += obj[idx[k]] * (*xb)[k];
    if (!out.feasible || (maximize ? v > out.value : v < out.value)) out.value = v;
    out.feasible = true;
  }
  return out;
}

inline double min_abs_subset(const std::vector<double>& c) {
  double worst = std::numeric_limits<double>::infinity();
  for (Mask m = 1; m < (Mask{1} << c.size()); ++m) worst = std::min(worst, std::abs(mask_sum(c, m)));
  return worst;
}

// Mixed-sign weights whose nonempty subset sums all stay at least
// `margin` away from zero. Half the draws are plain U(-1, 1) rejection
// samples; the rest have a few negatives outweighed by every positive,
// with all signs flipped half of the time. Needs n >= 2.
inline std::vector<double> mixed_weights(std::size_t n, std::mt19937_64& rng, double margin = 1e-3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    std::vector<double> c(n);
    if (rng() & 1U) {
      for (double& v : c) v = u(rng);
    } else {
      const std::size_t negatives = 1 + rng() % (n - 1);
      double min_pos = std::numeric_limits<double>::infinity();
      for (std::size_t k = negatives; k < n; ++k) {
        c[k] = 0.5 + unit(rng);
        min_pos = std::min(min_pos, c[k]);
      }
      double mag = 0.0;
      for (std::size_t k = 0; k < negatives; ++k) {
        c[k] = -(0.1 + unit(rng));
        mag -= c[k];
      }
      const double scale = (0.1 + 0.8 * unit(rng)) * min_pos / mag;
      for (std::size_t k = 0; k < negatives; ++k) c[k] *= scale;
      if (rng() & 1U) {
        for (double& v : c) v = -v;
      }
      std::shuffle(c.begin(), c.end(), rng);
    }
    if (std::none_of(c.begin(), c.end(), [](double v) { return v < 0.0; })) continue;
    if (min_abs_subset(c) >= margin) return c;
  }
}

// Sparse model with at most k atoms, capped at what n events allow;
// k = 0 selects the Dirichlet model.
inline unionbound::EventSpace random_space(std::size_t n, std::uint64_t seed, std::size_t k) {
  if (k == 0) return unionbound::generate_random_space(n, seed, unionbound::SpaceModel::dirichlet());
  const std::size_t cap = (std::size_t{1} << n) - 1;
  return unionbound::generate_random_space(n, seed, unionbound::SpaceModel::sparse(std::min(k, cap)));
}

inline std::vector<double> positive_weights(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> c(n);
  for (double& v : c) v = u(rng);
  return c;
}

}  // namespace oracle
