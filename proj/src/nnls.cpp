#include "gopa/nnls.hpp"

#include <algorithm>
#include <vector>

namespace gopa {

namespace {

Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<bool>& passive) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    if (passive[std::size_t(j)]) idx.push_back(j);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
  if (idx.empty()) return z;
  Eigen::MatrixXd sub(A.rows(), Eigen::Index(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) sub.col(Eigen::Index(k)) = A.col(idx[k]);
  Eigen::VectorXd zs = sub.completeOrthogonalDecomposition().solve(b);
  for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zs(Eigen::Index(k));
  return z;
}

}  // namespace

Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol, int max_iter) {
  const Eigen::Index n = A.cols();
  if (max_iter <= 0) max_iter = 30 * int(n + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(std::size_t(n), false);
  if (n == 0) return x;

  for (int outer = 0; outer < max_iter; ++outer) {
    Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double wmax = tol * (1.0 + A.norm() * b.norm());
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[std::size_t(j)] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[std::size_t(best)] = true;

    for (int inner = 0; inner < max_iter; ++inner) {
      Eigen::VectorXd z = solve_passive(A, b, passive);
      bool positive = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[std::size_t(j)] && z(j) <= 0.0) positive = false;
      if (positive) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[std::size_t(j)] && z(j) <= 0.0) {
          const double denom = x(j) - z(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[std::size_t(j)] && x(j) <= tol) {
          passive[std::size_t(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

}  // namespace gopa
