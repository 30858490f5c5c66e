#include "gopa/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gopa/errors.hpp"

namespace gopa {

namespace {

WeightSolution skeleton(const RankingProblem& problem) {
  WeightSolution s;
  s.I = problem.num_experts();
  s.J = problem.num_attributes();
  s.K = problem.num_alternatives();
  for (const auto& e : problem.experts()) s.expert_ids.push_back(e.id);
  s.attribute_ids = problem.attributes();
  s.alternative_ids = problem.alternatives();
  s.gap_free = problem.gap_free();
  return s;
}

// Fills alternative weights, exclusions and totals from the rank weights.
void map_alternatives(WeightSolution& s, const RankingProblem& problem) {
  s.alternative_weights.assign(s.I * s.J, std::vector<double>(s.K, 0.0));
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      const auto& ranks = problem.cell_ranks(i, j);
      for (std::size_t k = 0; k < s.K; ++k) {
        if (ranks[k])
          s.alternative_weights[i * s.J + j][k] = s.rank_weights[i * s.J + j][std::size_t(*ranks[k] - 1)];
        else
          s.excluded.push_back("(" + s.expert_ids[i] + ", " + s.attribute_ids[j] + ", " + s.alternative_ids[k] + ")");
      }
    }
  }
  s.totals = aggregate(s);
}

}  // namespace

WeightSolution solve_opa(const RankingProblem& problem) {
  WeightSolution s = skeleton(problem);
  // Tail harmonic sums H(r..K_ij) per cell.
  std::vector<std::vector<double>> tails;
  double denom = 0.0;
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      const auto& cell = problem.cell(i, j);
      const double ts = double(problem.expert_rank(i)) * double(problem.attribute_rank(i, j));
      std::vector<double> h(std::size_t(cell.max_rank));
      double tail = 0.0;
      for (int r = cell.max_rank; r >= 1; --r) {
        tail += 1.0 / r;
        h[std::size_t(r - 1)] = tail;
      }
      for (int r = 1; r <= cell.max_rank; ++r) denom += cell.frequency[std::size_t(r - 1)] * h[std::size_t(r - 1)] / ts;
      tails.push_back(std::move(h));
    }
  }
  s.z_star = 1.0 / denom;
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      const double ts = double(problem.expert_rank(i)) * double(problem.attribute_rank(i, j));
      const auto& h = tails[i * s.J + j];
      const double K = double(h.size());
      std::vector<double> w(h.size()), u(h.size());
      for (std::size_t r = 0; r < h.size(); ++r) {
        w[r] = h[r] * s.z_star / ts;
        u[r] = h[r] / K;
      }
      s.rank_weights.push_back(std::move(w));
      s.utilities.push_back(std::move(u));
    }
  }
  map_alternatives(s, problem);
  return s;
}

WeightSolution solve_gopa(const RankingProblem& problem, const std::vector<std::vector<double>>& utilities,
                          double tol) {
  WeightSolution s = skeleton(problem);
  if (utilities.size() != problem.num_cells()) throw DimensionError("expected one utility vector per cell");
  double denom = 0.0;
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      const auto& cell = problem.cell(i, j);
      const auto& u = utilities[i * s.J + j];
      const std::string label = problem.cell_label(i, j);
      if (u.size() != std::size_t(cell.max_rank))
        throw UtilityShapeError("cell " + label + ": expected " + std::to_string(cell.max_rank) + " utilities");
      double total = 0.0;
      for (std::size_t r = 0; r < u.size(); ++r) {
        if (!std::isfinite(u[r]) || u[r] < -tol) throw UtilityShapeError("cell " + label + ": negative utility");
        if (r + 1 < u.size() && u[r] < u[r + 1] - tol)
          throw UtilityShapeError("cell " + label + ": utilities increase from rank " + std::to_string(r + 1) +
                                  " to " + std::to_string(r + 2));
        total += u[r];
      }
      if (std::abs(total - 1.0) > tol) throw UtilityShapeError("cell " + label + ": utilities do not sum to 1");
      const double ts = double(problem.expert_rank(i)) * double(problem.attribute_rank(i, j));
      for (int r = 1; r <= cell.max_rank; ++r)
        denom += cell.frequency[std::size_t(r - 1)] * cell.max_rank * u[std::size_t(r - 1)] / ts;
    }
  }
  s.z_star = 1.0 / denom;
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      const auto& u = utilities[i * s.J + j];
      const double ts = double(problem.expert_rank(i)) * double(problem.attribute_rank(i, j));
      const double K = double(u.size());
      std::vector<double> w(u.size());
      for (std::size_t r = 0; r < u.size(); ++r) w[r] = K * u[r] * s.z_star / ts;
      s.rank_weights.push_back(std::move(w));
      s.utilities.push_back(u);
    }
  }
  map_alternatives(s, problem);
  return s;
}

Aggregates aggregate(const WeightSolution& s) {
  Aggregates a;
  a.experts.assign(s.I, 0.0);
  a.attributes.assign(s.J, 0.0);
  a.alternatives.assign(s.K, 0.0);
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      for (std::size_t k = 0; k < s.K; ++k) {
        const double w = s.weight(i, j, k);
        a.experts[i] += w;
        a.attributes[j] += w;
        a.alternatives[k] += w;
      }
    }
  }
  return a;
}

Decomposition decompose(const WeightSolution& s, const RankingProblem& problem) {
  if (!problem.gap_free())
    throw DecompositionUnsupported("decomposition needs every cell free of duplicate and missing ranks");
  Decomposition d;
  d.expert_weights = s.totals.experts;
  for (std::size_t i = 0; i < s.I; ++i) {
    std::size_t K = 0;
    for (std::size_t j = 0; j < s.J; ++j) K = std::max(K, s.rank_weights[i * s.J + j].size());
    std::vector<double> w(K, 0.0);
    for (std::size_t j = 0; j < s.J; ++j) {
      const auto& wr = s.rank_weights[i * s.J + j];
      for (std::size_t r = 0; r < wr.size(); ++r) w[r] += wr[r];
    }
    std::vector<double> u(K);
    for (std::size_t r = 0; r < K; ++r) u[r] = w[r] / d.expert_weights[i];
    d.rank_weights.push_back(std::move(w));
    d.net.push_back(std::move(u));
  }
  return d;
}

}  // namespace gopa
