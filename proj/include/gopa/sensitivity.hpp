#pragma once

// Expert-rank permutation experiments and descriptive statistics of the
// resulting weights.

#include <vector>

#include "gopa/model.hpp"

namespace gopa {

// Every permutation of {1..I} in lexicographic order. Throws TooManyExperts
// for I > 8.
std::vector<std::vector<int>> expert_rank_permutations(std::size_t I);

// One problem per permutation; attribute and alternative ranks untouched.
std::vector<RankingProblem> permute_experts(const RankingProblem& problem);

struct ScenarioStats {
  double mean = 0.0;
  double skewness = 0.0;  // adjusted Fisher-Pearson
  double kurtosis = 0.0;  // sample excess kurtosis
  double cv = 0.0;        // (n-1) standard deviation over mean
  double min = 0.0;
  double max = 0.0;
};

// Needs n >= 4 (SampleSizeError otherwise). Constant samples report zero
// skewness and kurtosis.
ScenarioStats describe(const std::vector<double>& samples);

struct SensitivityResult {
  std::vector<std::vector<int>> scenarios;  // expert ranks per scenario
  // scenario x item
  std::vector<std::vector<double>> expert_weights;
  std::vector<std::vector<double>> attribute_weights;
  std::vector<std::vector<double>> alternative_weights;
  std::vector<ScenarioStats> expert_stats, attribute_stats, alternative_stats;
};

// Re-solves the second stage for every expert-rank permutation with fixed
// per-cell utilities. The parallel and serial paths give identical results.
SensitivityResult run_sensitivity(const RankingProblem& problem, const std::vector<std::vector<double>>& utilities,
                                  bool parallel = true);

}  // namespace gopa
