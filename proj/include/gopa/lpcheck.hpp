#pragma once

// Dense tableau simplex for the small verification LPs, plus builders for the
// OPA/GOPA weight programs and the two-stage efficiency program.

#include <cstddef>
#include <vector>

#include "gopa/model.hpp"

namespace gopa {

enum class Sense { LessEq, Equal, GreaterEq };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearProgram {
  std::vector<double> objective;
  bool maximize = true;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;
  // Empty means every variable is nonnegative.
  std::vector<bool> free_vars;

  std::size_t num_vars() const { return objective.size(); }
  void add_row(std::vector<double> coeffs, Sense sense, double b);
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> x;
  int pivots = 0;
};

// Bland's rule on both phases, equality and >= rows through artificial
// variables carried in a separate (lexicographically dominant) cost row.
// Throws DimensionError on inconsistent sizes or non-finite data.
LpResult solve_lp(const LinearProgram& lp, double pivot_tol = 1e-9);

// Variable layout of the weight programs: w_ijr for every cell in row-major
// (i, j) order and r = 1..K_ij, followed by z.
struct WeightProgram {
  LinearProgram lp;
  std::vector<std::size_t> cell_offset;
  std::size_t z_index = 0;
};

WeightProgram build_opa_lp(const RankingProblem& problem);
// `utilities[i*J + j]` holds U*_ij1..U*_ijK_ij.
WeightProgram build_gopa_lp(const RankingProblem& problem, const std::vector<std::vector<double>>& utilities);

struct EfficiencyResult {
  double value = 0.0;      // optimum of sum delta(w)
  double min_slack = 0.0;  // min over (i,j,r) of delta_ijr(w)
  std::vector<double> w;   // same layout as WeightProgram, without z
  bool slack_matches = false;
};

// Second stage of the max-min efficiency program: maximize sum delta(w)
// subject to delta(w) >= z_star and the weighted normalization. Throws
// InfeasibleStage2 when z_star exceeds the first-stage optimum.
EfficiencyResult verify_efficiency(const RankingProblem& problem, double z_star, double tol = 1e-8);

}  // namespace gopa
