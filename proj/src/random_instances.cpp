#include "gopa/random_instances.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace gopa {

namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Distinct ranks from [lo, hi], at most n of them.
std::vector<int> pick_ranks(std::mt19937_64& rng, int lo, int hi, int n) {
  std::vector<int> all;
  for (int r = lo; r <= hi; ++r) all.push_back(r);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::size_t(std::clamp(n, 0, int(all.size()))));
  return all;
}

std::vector<double> dirichlet(std::mt19937_64& rng, int K) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x(static_cast<std::size_t>(K));
  // Floor keeps the point away from the boundary so ratios stay finite.
  for (auto& v : x) v = e(rng) + 0.05;
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (auto& v : x) v /= s;
  return x;
}

}  // namespace

RankingProblem random_problem(std::mt19937_64& rng, const RandomProblemOptions& opts) {
  const int I = uniform_int(rng, 1, opts.max_experts);
  const int J = uniform_int(rng, 1, opts.max_attributes);
  const int K = uniform_int(rng, opts.min_alternatives, opts.max_alternatives);

  std::vector<Expert> experts;
  for (int i = 0; i < I; ++i) experts.push_back({"E" + std::to_string(i + 1), uniform_int(rng, 1, I)});
  std::vector<std::string> attributes, alternatives;
  for (int j = 0; j < J; ++j) attributes.push_back("C" + std::to_string(j + 1));
  for (int k = 0; k < K; ++k) alternatives.push_back("A" + std::to_string(k + 1));

  const auto nI = static_cast<std::size_t>(I), nJ = static_cast<std::size_t>(J);
  std::vector<std::vector<int>> attr_ranks(nI, std::vector<int>(nJ));
  std::vector<std::vector<std::vector<std::optional<int>>>> alt_ranks(nI,
                                                                      std::vector<std::vector<std::optional<int>>>(nJ));
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      attr_ranks[i][j] = uniform_int(rng, 1, J);
      auto& ranks = alt_ranks[i][j];
      if (!opts.gaps) {
        std::vector<int> perm(static_cast<std::size_t>(K));
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int r : perm) ranks.push_back(r);
      } else {
        for (int k = 0; k < K; ++k) {
          if (uniform(rng, 0.0, 1.0) < 0.2)
            ranks.push_back(std::nullopt);
          else
            ranks.push_back(uniform_int(rng, 1, K));
        }
        if (std::none_of(ranks.begin(), ranks.end(), [](const auto& r) { return r.has_value(); }))
          ranks[std::size_t(uniform_int(rng, 0, K - 1))] = uniform_int(rng, 1, K);
      }
    }
  }
  return RankingProblem::create(std::move(experts), std::move(attributes), std::move(alternatives),
                                std::move(attr_ranks), std::move(alt_ranks));
}

std::vector<double> random_sorted_simplex(std::mt19937_64& rng, int K) {
  auto u = dirichlet(rng, K);
  std::sort(u.begin(), u.end(), std::greater<>());
  return u;
}

CellContext random_discrete_context(std::mt19937_64& rng, int K, int max_constraints) {
  CellContext ctx;
  if (K < 1) return ctx;
  const auto u = random_sorted_simplex(rng, K);
  for (int r : pick_ranks(rng, 1, K - 1, uniform_int(rng, 0, max_constraints)))
    ctx.ratio.push_back({r, u[r - 1] / u[r]});
  for (int r : pick_ranks(rng, 1, K - 1, uniform_int(rng, 0, max_constraints)))
    ctx.absdiff.push_back({r, u[r - 1] - u[r]});
  for (int r : pick_ranks(rng, 1, K, uniform_int(rng, 0, max_constraints)))
    ctx.lowerbound.push_back({r, u[r - 1] * uniform(rng, 0.3, 1.0)});
  return validate_cell_context(std::move(ctx), K);
}

CellContext random_continuous_context(std::mt19937_64& rng, int K, int max_constraints) {
  CellContext ctx;
  if (K < 2) return ctx;
  const auto m = dirichlet(rng, K);
  std::vector<double> F(std::size_t(K) + 1, 0.0);
  for (int r = 1; r <= K; ++r) F[r] = F[r - 1] + m[r - 1];
  // Ratio at rank 1 would force F(1) = 0; keep ranks >= 2.
  for (int r : pick_ranks(rng, 2, K - 1, uniform_int(rng, 0, max_constraints)))
    ctx.ratio.push_back({r, F[r] / F[r - 1]});
  for (int r : pick_ranks(rng, 1, K - 1, uniform_int(rng, 0, max_constraints)))
    ctx.absdiff.push_back({r, F[r] - F[r - 1]});
  for (int r : pick_ranks(rng, 1, K - 1, uniform_int(rng, 0, max_constraints)))
    ctx.lowerbound.push_back({r, F[r]});
  return validate_cell_context(std::move(ctx), K);
}

UtilityStructure random_structure(std::mt19937_64& rng, bool continuous) {
  const int pick = uniform_int(rng, 0, continuous ? 10 : 5);
  switch (pick) {
    case 0: return DiscreteStructure{DiscreteKind::RankSum};
    case 1: return DiscreteStructure{DiscreteKind::RankExponent, uniform(rng, 0.5, 2.0)};
    case 2: return DiscreteStructure{DiscreteKind::RankReciprocal};
    case 3: return DiscreteStructure{DiscreteKind::SumReciprocal};
    case 4: return DiscreteStructure{DiscreteKind::RankOrderCentroid};
    case 5: return DiscreteStructure{DiscreteKind::Uniform};
    case 6: return ContinuousStructure{Neutral{}};
    case 7: return ContinuousStructure{Hara{uniform(rng, 1.0, 3.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)}};
    case 8: return ContinuousStructure{Crra{uniform(rng, 0.5, 2.0), uniform(rng, 0.1, 0.9)}};
    case 9: {
      double a = uniform(rng, 0.2, 1.5);
      return ContinuousStructure{Cara{uniform(rng, 0.0, 1.0) < 0.5 ? a : -a}};
    }
    default: return ContinuousStructure{SShape{uniform(rng, 0.3, 2.0)}};
  }
}

GroupInput random_input(std::mt19937_64& rng, const RandomProblemOptions& opts, bool continuous) {
  RankingProblem p = random_problem(rng, opts);
  const std::size_t I = p.num_experts(), J = p.num_attributes();
  PreferenceContext ctx(I, J);
  StructureAssignment st(I, J);
  for (std::size_t i = 0; i < I; ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      const int K = p.cell(i, j).max_rank;
      st.cell(i, j) = random_structure(rng, continuous);
      ctx.cell(i, j) = is_continuous(st.cell(i, j)) ? random_continuous_context(rng, K)
                                                      : random_discrete_context(rng, K);
    }
  }
  return GroupInput{std::move(p), std::move(ctx), std::move(st)};
}

}  // namespace gopa
