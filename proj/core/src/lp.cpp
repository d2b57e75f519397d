#include "unionbound/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unionbound/errors.hpp"

namespace unionbound {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr double kPivotTolerance = 1e-9;
constexpr double kReducedCostTolerance = 1e-11;
constexpr std::size_t kRefactorInterval = 50;
constexpr std::size_t kDegenerateLimit = 30;

// Revised simplex over [A | I] where the identity block holds the phase-one
// artificials. Columns >= cols() are artificial and never re-enter.
class RevisedSimplex {
 public:
  RevisedSimplex(const DenseMatrix& a, std::vector<double> b)
      : m_(a.rows()), n_(a.cols()), a_(a), b_(Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()))) {
    // Flip rows so the artificial start x_B = b is feasible.
    for (std::size_t r = 0; r < m_; ++r) {
      if (b_(static_cast<Eigen::Index>(r)) < 0.0) {
        b_(static_cast<Eigen::Index>(r)) = -b_(static_cast<Eigen::Index>(r));
        for (std::size_t j = 0; j < n_; ++j) a_(r, j) = -a_(r, j);
      }
    }
    basis_.resize(m_);
    is_basic_.assign(n_ + m_, false);
    for (std::size_t r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      is_basic_[n_ + r] = true;
    }
    const auto m = static_cast<Eigen::Index>(m_);
    binv_ = Eigen::MatrixXd::Identity(m, m);
    xb_ = b_;
  }

  std::size_t iterations() const { return iterations_; }

  // Returns false when the phase is unbounded. Dantzig pricing with a
  // Bland fallback while degenerate pivots pile up, so cycling cannot occur.
  bool run(const std::vector<double>& cost) {
    double scale = 1.0;
    for (double c : cost) scale = std::max(scale, std::abs(c));
    const std::size_t limit = 200 * (m_ + n_) + 1000;
    const std::size_t start = iterations_;
    const auto m = static_cast<Eigen::Index>(m_);
    std::vector<double> reduced(n_);
    Eigen::VectorXd cb(m), y(m), u(m);
    std::size_t degenerate_run = 0;
    for (;;) {
      if (iterations_ - start > limit) throw std::runtime_error("simplex iteration limit exceeded");
      for (Eigen::Index r = 0; r < m; ++r) cb(r) = cost[basis_[static_cast<std::size_t>(r)]];
      y.noalias() = binv_.transpose() * cb;

      for (std::size_t j = 0; j < n_; ++j) reduced[j] = cost[j];
      for (std::size_t r = 0; r < m_; ++r) {
        const double yr = y(static_cast<Eigen::Index>(r));
        if (yr == 0.0) continue;
        const auto row = a_.row(r);
        for (std::size_t j = 0; j < n_; ++j) reduced[j] -= yr * row[j];
      }
      const bool bland = degenerate_run >= kDegenerateLimit;
      std::size_t entering = n_;
      double most_negative = -kReducedCostTolerance * scale;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j] || reduced[j] >= most_negative) continue;
        entering = j;
        if (bland) break;
        most_negative = reduced[j];
      }
      if (entering == n_) {
        // Only trust optimality on a fresh factorization.
        if (since_refactor_ == 0) return true;
        refactor();
        continue;
      }

      column(entering, u);
      const double pivot_floor = kPivotTolerance * std::max(1.0, u.cwiseAbs().maxCoeff());
      std::size_t leaving = m_;
      double best_ratio = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double ur = u(static_cast<Eigen::Index>(r));
        if (ur <= pivot_floor) continue;
        const double ratio = std::max(0.0, xb_(static_cast<Eigen::Index>(r))) / ur;
        if (leaving == m_) {
          leaving = r;
          best_ratio = ratio;
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, best_ratio);
        if (ratio < best_ratio - tie) {
          leaving = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie) {
          // Bland keeps the smallest basic index; otherwise take the larger pivot.
          const bool take = bland ? basis_[r] < basis_[leaving] : ur > u(static_cast<Eigen::Index>(leaving));
          if (take) {
            leaving = r;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leaving == m_) {
        if (since_refactor_ == 0) return false;
        refactor();
        continue;
      }
      degenerate_run = best_ratio * u(static_cast<Eigen::Index>(leaving)) <= 1e-12 ? degenerate_run + 1 : 0;
      pivot(leaving, entering, u);
    }
  }

  double artificial_mass() const {
    double total = 0.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) total += std::max(0.0, xb_(static_cast<Eigen::Index>(r)));
    }
    return total;
  }

  // Pivot zero-valued artificials out wherever some original column has a
  // nonzero entry in their row; the rest sit on redundant rows.
  void expel_artificials() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::VectorXd u(m);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      xb_(static_cast<Eigen::Index>(r)) = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        double entry = 0.0;
        for (std::size_t k = 0; k < m_; ++k) entry += binv_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) * a_(k, j);
        if (std::abs(entry) > 1e-9) {
          column(j, u);
          pivot(r, j, u);
          break;
        }
      }
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) x[basis_[r]] = std::max(0.0, xb_(static_cast<Eigen::Index>(r)));
    }
    return x;
  }

 private:
  void column(std::size_t j, Eigen::VectorXd& u) const {
    const auto m = static_cast<Eigen::Index>(m_);
    if (j >= n_) {
      u = binv_.col(static_cast<Eigen::Index>(j - n_));
      return;
    }
    u.setZero(m);
    for (std::size_t k = 0; k < m_; ++k) {
      const double akj = a_(k, j);
      if (akj != 0.0) u += akj * binv_.col(static_cast<Eigen::Index>(k));
    }
  }

  void pivot(std::size_t r, std::size_t j, const Eigen::VectorXd& u) {
    const auto ri = static_cast<Eigen::Index>(r);
    const double p = u(ri);
    binv_.row(ri) /= p;
    xb_(ri) /= p;
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m_); ++k) {
      if (k == ri || u(k) == 0.0) continue;
      binv_.row(k) -= u(k) * binv_.row(ri);
      xb_(k) -= u(k) * xb_(ri);
      if (xb_(k) < 0.0 && xb_(k) > -1e-11) xb_(k) = 0.0;
    }
    is_basic_[basis_[r]] = false;
    is_basic_[j] = true;
    basis_[r] = j;
    ++iterations_;
    if (++since_refactor_ >= kRefactorInterval) refactor();
  }

  void refactor() {
    const auto m = static_cast<Eigen::Index>(m_);
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t j = basis_[r];
      const auto c = static_cast<Eigen::Index>(r);
      if (j >= n_) {
        basis_matrix(static_cast<Eigen::Index>(j - n_), c) = 1.0;
      } else {
        for (std::size_t k = 0; k < m_; ++k) basis_matrix(static_cast<Eigen::Index>(k), c) = a_(k, j);
      }
    }
    since_refactor_ = 0;
    binv_ = basis_matrix.partialPivLu().inverse();
    xb_ = binv_ * b_;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (xb_(k) < 0.0 && xb_(k) > -1e-11) xb_(k) = 0.0;
    }
  }

  std::size_t m_;
  std::size_t n_;
  DenseMatrix a_;
  Eigen::VectorXd b_;
  std::vector<std::size_t> basis_;
  std::vector<bool> is_basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem) {
  const std::size_t m = problem.eq_matrix.rows();
  const std::size_t n = problem.eq_matrix.cols();
  if (problem.objective.size() != n) throw DimensionMismatch("objective length differs from column count");
  if (problem.eq_rhs.size() != m) throw DimensionMismatch("rhs length differs from row count");
  for (double v : problem.objective) {
    if (!std::isfinite(v)) throw ArgumentError("objective coefficients must be finite");
  }
  for (double v : problem.eq_rhs) {
    if (!std::isfinite(v)) throw ArgumentError("rhs entries must be finite");
  }

  LpSolution out;
  if (n == 0) {
    const bool feasible = std::all_of(problem.eq_rhs.begin(), problem.eq_rhs.end(),
                                      [](double v) { return std::abs(v) <= kLpFeasibilityTolerance; });
    out.status = feasible ? LpStatus::Optimal : LpStatus::Infeasible;
    return out;
  }

  RevisedSimplex simplex(problem.eq_matrix, problem.eq_rhs);
  std::vector<double> phase1(n + m, 0.0);
  std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
  simplex.run(phase1);
  double rhs_scale = 1.0;
  for (double v : problem.eq_rhs) rhs_scale = std::max(rhs_scale, std::abs(v));
  if (simplex.artificial_mass() > kLpFeasibilityTolerance * rhs_scale) {
    out.status = LpStatus::Infeasible;
    out.iterations = simplex.iterations();
    return out;
  }
  simplex.expel_artificials();

  std::vector<double> cost(n + m, 0.0);
  const double sign = problem.sense == LpSense::Minimize ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n; ++j) cost[j] = sign * problem.objective[j];
  const bool bounded = simplex.run(cost);
  out.iterations = simplex.iterations();
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.primal = simplex.primal();
  out.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.value += problem.objective[j] * out.primal[j];
  return out;
}

double optimal_inclass_bound(const PartialInfo& info, const WeightVector& w, BoundSense sense) {
  const std::size_t n = info.event_count();
  if (n > 20) throw ArgumentError("in-class optimal bound is limited to 20 events");
  if (w.size() != n) throw DimensionMismatch("weight vector length differs from event count");
  if (!w.valid()) throw InvalidWeights("weights violate the nonzero subset-sum condition");

  const std::size_t vars = (std::size_t{1} << n) - 1;
  const SubsetSums sums(w.values());
  DenseMatrix a(2 * n, vars);
  for (std::size_t col = 0; col < vars; ++col) {
    const Mask m = col + 1;
    const double s = sums(m);
    for (std::size_t i = 0; i < n; ++i) {
      if (!contains(m, i)) continue;
      a(i, col) = 1.0;
      a(n + i, col) = s;
    }
  }
  std::vector<double> rhs(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = info.alpha(i);
    rhs[n + i] = gamma(info, w, i);
  }
  LpProblem problem{std::vector<double>(vars, 1.0), std::move(a), std::move(rhs),
                    sense == BoundSense::Lower ? LpSense::Minimize : LpSense::Maximize};
  const LpSolution sol = solve_lp(problem);
  if (sol.status != LpStatus::Optimal) {
    throw InconsistentInfo(std::string("in-class LP is ") + to_string(sol.status) +
                           "; no atom distribution matches the partial information");
  }
  return sol.value;
}

}  // namespace unionbound
