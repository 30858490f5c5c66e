#pragma once

// End-to-end run: per-cell elicitation (discrete or continuous by the cell's
// structure), second-stage solve and consensus statistics.

#include <optional>
#include <vector>

#include "gopa/elicit_continuous.hpp"
#include "gopa/metrics.hpp"
#include "gopa/model.hpp"
#include "gopa/solver.hpp"

namespace gopa {

struct PipelineOptions {
  Orientation orientation = Orientation::Reversed;
  BoundMode bound_mode = BoundMode::Equality;
  double tol = 1e-8;
};

struct CellElicitation {
  std::vector<double> utilities;
  std::optional<PiecewiseDensity> density;  // continuous cells only
};

// Errors from the cell solvers are rethrown with the cell label in the message.
CellElicitation elicit_cell(const GroupInput& input, std::size_t i, std::size_t j, const PipelineOptions& opts = {});

// Utilities for every cell, indexed i*J + j. The OpenMP path and the serial
// reference return identical vectors; on failure both report the first
// failing cell in row-major order.
std::vector<std::vector<double>> elicit_utilities(const GroupInput& input, const PipelineOptions& opts = {});
std::vector<std::vector<double>> elicit_utilities_serial(const GroupInput& input, const PipelineOptions& opts = {});

// Same rankings with ROC structures everywhere and no contexts.
GroupInput as_opa(const GroupInput& input);

struct RunResult {
  std::vector<std::vector<double>> utilities;
  WeightSolution solution;
  ConsensusReport consensus;
};

RunResult run_solve(const GroupInput& input, const PipelineOptions& opts = {});
RunResult run_opa(const GroupInput& input);

}  // namespace gopa
