#pragma once

// First-stage elicitation in continuous prospects. The elicited density is the
// target scaled by a constant on each segment between consecutive constraint
// breakpoints; the scales come from a low-dimensional dual solve.
//
// Context semantics on the CDF F of the density over [0, K]:
//   ratio (r, alpha):     F(r) = alpha F(r-1)
//   absdiff (r, beta):    F(r) - F(r-1) = beta
//   lowerbound (r, gamma): F(r) = gamma, or F(r) >= gamma in inequality mode

#include <vector>

#include "gopa/model.hpp"
#include "gopa/structures.hpp"

namespace gopa {

enum class BoundMode { Equality, Inequality };
enum class Orientation { Reversed, Literal };

// Sorted distinct jump points of the constraint step functions, with 0 and K.
std::vector<double> breakpoints(const CellContext& ctx, int K);

class PiecewiseDensity {
 public:
  PiecewiseDensity(TargetDensity target, std::vector<double> breaks, std::vector<double> masses);

  const TargetDensity& target() const { return target_; }
  int max_rank() const { return target_.max_rank(); }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& masses() const { return masses_; }
  // kappa_s: u*(x) = kappa_s v(x) on segment s.
  const std::vector<double>& scales() const { return scales_; }
  std::size_t num_segments() const { return masses_.size(); }
  std::size_t segment_of(double x) const;

  double operator()(double x) const;
  double cdf(double x) const;
  // 1 - cdf(x), summed from the right to avoid cancellation.
  double tail(double x) const;

  // Solver diagnostics. `multipliers` follow the textbook sign convention
  // u* = v exp(-1 - lambda0 - sum lambda_e zeta_e), one per constraint in
  // the order ratio, absdiff, lowerbound.
  std::vector<double> multipliers;
  double lambda0 = 0.0;
  double residual = 0.0;
  int iterations = 0;

 private:
  TargetDensity target_;
  std::vector<double> breaks_;
  std::vector<double> masses_;
  std::vector<double> scales_;
};

// Throws InfeasibleContext or NumericFailure.
PiecewiseDensity elicit_continuous(const TargetDensity& target, const CellContext& ctx, int K,
                                   BoundMode mode = BoundMode::Equality);

// eta(x) = -d/dx ln u*(x). Throws BreakpointError at a breakpoint and
// DomainError outside (0, K) or where the density vanishes.
double risk_preference(const PiecewiseDensity& d, double x);

// T_r = integral of u*(K - x) over [0, r], normalized over r = 1..K. Under
// the reversed orientation rank rho receives T_{K - rho + 1}.
std::vector<double> cumulative_utilities(const PiecewiseDensity& d, Orientation orientation = Orientation::Reversed);

// Largest violation of the context on the CDF of `d`.
double continuous_violation(const PiecewiseDensity& d, const CellContext& ctx, BoundMode mode = BoundMode::Equality);

}  // namespace gopa
