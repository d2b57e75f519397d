#include "unionbound/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "unionbound/errors.hpp"

namespace unionbound {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw ArgumentError("matrix entries must be finite");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) throw DimensionMismatch("entry count does not match rows x cols");
  for (double v : entries_) {
    if (!std::isfinite(v)) throw ArgumentError("matrix entries must be finite");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

LinearSolveResult solve_linear_system(const DenseMatrix& a, std::span<const double> b) {
  if (a.rows() != a.cols()) throw DimensionMismatch("linear system matrix must be square");
  if (b.size() != a.rows()) throw DimensionMismatch("right-hand side length differs from matrix size");
  const auto n = static_cast<Eigen::Index>(a.rows());
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> mat(a.entries().data(), n, n);
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);

  LinearSolveResult out;
  Eigen::VectorXd x;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(mat);
  if (lu.isInvertible()) {
    x = lu.solve(rhs);
    out.rank = static_cast<std::size_t>(n);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(mat);
    x = cod.solve(rhs);
    out.rank = static_cast<std::size_t>(cod.rank());
    out.rank_deficient = true;
  }
  out.residual = (mat * x - rhs).norm();
  out.x.assign(x.data(), x.data() + n);
  return out;
}

}  // namespace unionbound
