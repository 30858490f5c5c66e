#pragma once

// Closed-form second stage: OPA and GOPA weights, rank-to-alternative mapping,
// marginal aggregation, and the expert-weight decomposition.

#include <string>
#include <vector>

#include "gopa/model.hpp"

namespace gopa {

struct Aggregates {
  std::vector<double> experts;       // W^Q_i
  std::vector<double> attributes;    // W^N_j
  std::vector<double> alternatives;  // W^M_k
};

struct WeightSolution {
  double z_star = 0.0;
  std::size_t I = 0, J = 0, K = 0;
  std::vector<std::string> expert_ids, attribute_ids, alternative_ids;
  // Indexed by cell i*J + j.
  std::vector<std::vector<double>> utilities;     // U*_ijr, r = 1..K_ij
  std::vector<std::vector<double>> rank_weights;  // w_ijr
  std::vector<std::vector<double>> alternative_weights;  // w_ijk, k = 1..K
  Aggregates totals;
  bool gap_free = true;
  // "(expert, attribute, alternative)" triples with no rank.
  std::vector<std::string> excluded;

  double weight(std::size_t i, std::size_t j, std::size_t k) const { return alternative_weights[i * J + j][k]; }
};

WeightSolution solve_opa(const RankingProblem& problem);

// `utilities[i*J + j]` must be normalized and nonincreasing within `tol`;
// otherwise UtilityShapeError names the cell.
WeightSolution solve_gopa(const RankingProblem& problem, const std::vector<std::vector<double>>& utilities,
                          double tol = 1e-8);

// Marginal sums of the alternative-weight tensor.
Aggregates aggregate(const WeightSolution& solution);

struct Decomposition {
  std::vector<double> expert_weights;
  // net[i][r-1] with w_ir = sum_j w_ijr = expert_weights[i] * net[i][r-1].
  std::vector<std::vector<double>> net;
  std::vector<std::vector<double>> rank_weights;
};

// Throws DecompositionUnsupported when any cell has duplicate or missing ranks.
Decomposition decompose(const WeightSolution& solution, const RankingProblem& problem);

}  // namespace gopa
