#pragma once

#include <Eigen/Dense>

namespace gopa {

// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-12, int max_iter = 0);

}  // namespace gopa
