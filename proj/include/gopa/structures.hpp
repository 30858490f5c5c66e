#pragma once

// Global utility structures: rank-based surrogate weight vectors for discrete
// prospects and normalized risk-preference densities on [0, K] for continuous
// prospects.

#include <functional>
#include <vector>

#include "gopa/model.hpp"

namespace gopa {

// Surrogate weights v_1..v_K, normalized and nonincreasing in rank.
std::vector<double> surrogate_weights(const DiscreteStructure& s, int K);

// A risk-preference density normalized to unit mass on [0, K].
class TargetDensity {
 public:
  // Throws DomainError when the parameters are invalid over [0, K].
  TargetDensity(ContinuousStructure structure, int K);

  const ContinuousStructure& structure() const { return structure_; }
  int max_rank() const { return K_; }

  // Normalized density v(x).
  double operator()(double x) const;
  // Closed-form integral of v over [a, b].
  double integral(double a, double b) const;
  // The same integral by adaptive Simpson; used as a cross-check.
  double integral_quadrature(double a, double b, double tol = 1e-12) const;
  // Arrow-Pratt coefficient -d/dx ln v(x).
  double eta(double x) const;

 private:
  double raw(double x) const;
  double raw_integral(double a, double b) const;

  ContinuousStructure structure_;
  int K_;
  double mass_ = 1.0;
};

TargetDensity target_density(const ContinuousStructure& structure, int K);

// Adaptive Simpson quadrature with Richardson correction.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int max_depth = 60);

}  // namespace gopa
