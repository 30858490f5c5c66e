#pragma once

// First-stage elicitation in discrete prospects: the utility vector closest in
// KL divergence to a surrogate target, subject to the cell's ratio, absolute
// difference and lower-bound constraints plus weak order and nonnegativity.

#include <vector>

#include <Eigen/Dense>

#include "gopa/model.hpp"

namespace gopa {

// Constraint system of one cell: A u = b (ratio, absdiff, unit sum) and
// G u >= h (weak order for r = 1..K-1, then u_r >= max(gamma_r, 0)).
struct DiscreteSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
};

DiscreteSystem discrete_system(const CellContext& ctx, int K);

// Minimizes sum_r u_r ln(u_r / v_r). `target` need not be normalized.
// Throws InfeasibleContext or NumericFailure.
std::vector<double> elicit_discrete(const std::vector<double>& target, const CellContext& ctx, int K);

// Maximum-entropy utilities under the same constraints.
std::vector<double> entropy_max_discrete(const CellContext& ctx, int K);

// Max-norm of the Lagrangian stationarity residual at `u` with multipliers
// fitted by least squares (nonnegative on the active inequality rows).
// Coordinates with u_r = 0 are left out.
double kkt_residual_discrete(const std::vector<double>& u, const std::vector<double>& target, const CellContext& ctx);

// sum u ln(u/v) with 0 ln 0 = 0 and v normalized first.
double kl_objective(const std::vector<double>& u, const std::vector<double>& target);

// Largest violation of the cell's constraints at `u` (0 when feasible).
double constraint_violation(const std::vector<double>& u, const CellContext& ctx);

}  // namespace gopa
