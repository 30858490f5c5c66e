#include "gopa/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "gopa/errors.hpp"
#include "gopa/solver.hpp"

namespace gopa {

std::vector<std::vector<int>> expert_rank_permutations(std::size_t I) {
  if (I > 8) throw TooManyExperts(std::to_string(I) + " experts give too many permutations (limit 8)");
  std::vector<int> p(I);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<RankingProblem> permute_experts(const RankingProblem& problem) {
  std::vector<RankingProblem> out;
  for (const auto& ranks : expert_rank_permutations(problem.num_experts()))
    out.push_back(problem.with_expert_ranks(ranks));
  return out;
}

ScenarioStats describe(const std::vector<double>& x) {
  const std::size_t count = x.size();
  if (count < 4) throw SampleSizeError("descriptive statistics need at least 4 samples");
  const double n = double(count);
  ScenarioStats st;
  st.min = *std::min_element(x.begin(), x.end());
  st.max = *std::max_element(x.begin(), x.end());
  st.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  if (st.min == st.max) {
    st.mean = st.min;
    return st;
  }
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - st.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double sample_var = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  st.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  st.kurtosis = ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
  st.cv = std::sqrt(sample_var) / st.mean;
  return st;
}

namespace {

std::vector<ScenarioStats> column_stats(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  std::vector<ScenarioStats> out;
  if (rows.size() < 4) return out;
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<double> col;
    col.reserve(rows.size());
    for (const auto& r : rows) col.push_back(r[c]);
    out.push_back(describe(col));
  }
  return out;
}

}  // namespace

SensitivityResult run_sensitivity(const RankingProblem& problem, const std::vector<std::vector<double>>& utilities,
                                  bool parallel) {
  SensitivityResult res;
  res.scenarios = expert_rank_permutations(problem.num_experts());
  const auto n = static_cast<long>(res.scenarios.size());
  res.expert_weights.resize(res.scenarios.size());
  res.attribute_weights.resize(res.scenarios.size());
  res.alternative_weights.resize(res.scenarios.size());
  std::vector<std::exception_ptr> errors(res.scenarios.size());

  auto run = [&](long s) {
    try {
      const auto idx = std::size_t(s);
      WeightSolution sol = solve_gopa(problem.with_expert_ranks(res.scenarios[idx]), utilities);
      res.expert_weights[idx] = sol.totals.experts;
      res.attribute_weights[idx] = sol.totals.attributes;
      res.alternative_weights[idx] = sol.totals.alternatives;
    } catch (...) {
      errors[std::size_t(s)] = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long s = 0; s < n; ++s) run(s);
  } else {
    for (long s = 0; s < n; ++s) run(s);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  res.expert_stats = column_stats(res.expert_weights, problem.num_experts());
  res.attribute_stats = column_stats(res.attribute_weights, problem.num_attributes());
  res.alternative_stats = column_stats(res.alternative_weights, problem.num_alternatives());
  return res;
}

}  // namespace gopa
