#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace unionbound {

// Row-major dense matrix with finite entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * cols_, cols_);
  }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

struct LinearSolveResult {
  std::vector<double> x;
  double residual = 0.0;  // ||a x - b||_2
  std::size_t rank = 0;
  bool rank_deficient = false;
};

// Least-squares solution of a x = b for square a. Full-rank systems go
// through fully pivoted LU; rank-deficient ones get the minimum-norm
// least-squares solution.
LinearSolveResult solve_linear_system(const DenseMatrix& a, std::span<const double> b);

}  // namespace unionbound
