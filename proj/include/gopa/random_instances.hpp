#pragma once

// Seeded random instances for property tests, the `verify` subcommand and the
// benchmark. Contexts are built from a known feasible point, so they are
// always feasible.

#include <random>
#include <vector>

#include "gopa/model.hpp"

namespace gopa {

struct RandomProblemOptions {
  int max_experts = 3;
  int max_attributes = 3;
  int min_alternatives = 1;
  int max_alternatives = 6;
  // Allow duplicate and missing alternative ranks.
  bool gaps = false;
};

RankingProblem random_problem(std::mt19937_64& rng, const RandomProblemOptions& opts = {});

// A random nonincreasing point on the simplex of dimension K.
std::vector<double> random_sorted_simplex(std::mt19937_64& rng, int K);

// Up to `max_constraints` constraints of each kind read off a random
// nonincreasing utility vector (discrete semantics).
CellContext random_discrete_context(std::mt19937_64& rng, int K, int max_constraints = 2);

// Constraints read off the CDF of random per-unit masses (continuous
// semantics). Bounds are equalities on the CDF, so they hold in both modes.
CellContext random_continuous_context(std::mt19937_64& rng, int K, int max_constraints = 2);

// A random structure from all discrete and continuous families.
UtilityStructure random_structure(std::mt19937_64& rng, bool continuous = true);

// Random problem plus feasible contexts and random structures.
GroupInput random_input(std::mt19937_64& rng, const RandomProblemOptions& opts = {}, bool continuous = true);

}  // namespace gopa
