#pragma once

// Consensus statistics for a group solution: percentage standard deviation,
// Kendall's W with tie correction, F-approximation confidence levels and the
// global confidence level, plus Spearman correlation.

#include <string>
#include <vector>

#include "gopa/solver.hpp"

namespace gopa {

// (1/W) sqrt(sum_i (W/I - w_i)^2 / (I - 1)) with W = `total`, I = w.size().
// Throws DegenerateError when W = 0 and ShapeError when I < 2.
double psd(const std::vector<double>& contributions, double total);

// Midranks in descending order of value; values within `tie_tol` tie.
std::vector<double> descending_midranks(const std::vector<double>& values, double tie_tol = 1e-12);

// Kendall's coefficient of concordance. `ranks` is raters x items, midranks
// for ties. Ties enter the per-rater correction sum (t^3 - t).
double kendall_w(const std::vector<std::vector<double>>& ranks);

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double incomplete_beta(double x, double a, double b);

// P(F <= x) for F with (v1, v2) degrees of freedom; fractional dof allowed.
double f_cdf(double x, double v1, double v2);

// Confidence level of a concordance rho among `raters` rating `items`:
// F-cdf at x = rho (I-1)/(1-rho) with v1 = n - 1 - 2/I, v2 = (I-1) v1.
// NaN when v1 <= 0.
double local_confidence(double rho, std::size_t raters, std::size_t items);

double gcl(double lcl_attributes, const std::vector<double>& attribute_weights,
           const std::vector<double>& lcl_per_attribute);

std::string sensitivity_label(double level);

double spearman(const std::vector<double>& a, const std::vector<double>& b);

struct ConsensusReport {
  std::vector<double> psd_attribute;
  std::vector<double> psd_alternative;
  std::vector<double> kendall_attribute;  // rho^M_j, experts rating alternatives
  double kendall_attributes = 0.0;        // rho^N, experts rating attributes
  std::vector<double> lcl_attribute;
  double lcl_attributes = 0.0;
  double gcl = 0.0;
  std::vector<std::string> lcl_attribute_labels;
  std::string lcl_attributes_label;
  std::string gcl_label;
};

// NaN entries mark statistics that are undefined for the instance size
// (for example a single expert).
ConsensusReport consensus(const WeightSolution& solution);

}  // namespace gopa
