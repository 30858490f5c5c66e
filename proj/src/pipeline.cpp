#include "gopa/pipeline.hpp"

#include <exception>

#include "gopa/elicit_discrete.hpp"
#include "gopa/errors.hpp"
#include "gopa/structures.hpp"

namespace gopa {

namespace {

template <class E>
[[noreturn]] void retag(const E& e, const std::string& label) {
  E tagged("cell " + label + ": " + e.what());
  tagged.set_cell(label);
  throw tagged;
}

}  // namespace

CellElicitation elicit_cell(const GroupInput& input, std::size_t i, std::size_t j, const PipelineOptions& opts) {
  const RankingProblem& p = input.problem;
  const int K = p.cell(i, j).max_rank;
  const CellContext& ctx = input.contexts.cell(i, j);
  const UtilityStructure& st = input.structures.cell(i, j);
  const std::string label = p.cell_label(i, j);
  CellElicitation out;
  try {
    if (const auto* d = std::get_if<DiscreteStructure>(&st)) {
      out.utilities = elicit_discrete(surrogate_weights(*d, K), ctx, K);
    } else {
      TargetDensity target(std::get<ContinuousStructure>(st), K);
      PiecewiseDensity density = elicit_continuous(target, ctx, K, opts.bound_mode);
      out.utilities = cumulative_utilities(density, opts.orientation);
      out.density = std::move(density);
    }
  } catch (const InfeasibleContext& e) {
    retag(e, label);
  } catch (const NumericFailure& e) {
    retag(e, label);
  } catch (const DomainError& e) {
    throw DomainError("cell " + label + ": " + e.what());
  }
  return out;
}

std::vector<std::vector<double>> elicit_utilities(const GroupInput& input, const PipelineOptions& opts) {
  const std::size_t J = input.problem.num_attributes();
  const auto n = static_cast<long>(input.problem.num_cells());
  std::vector<std::vector<double>> out(input.problem.num_cells());
  std::vector<std::exception_ptr> errors(out.size());
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < n; ++c) {
    const auto idx = std::size_t(c);
    try {
      out[idx] = elicit_cell(input, idx / J, idx % J, opts).utilities;
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<std::vector<double>> elicit_utilities_serial(const GroupInput& input, const PipelineOptions& opts) {
  const std::size_t J = input.problem.num_attributes();
  std::vector<std::vector<double>> out(input.problem.num_cells());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = elicit_cell(input, c / J, c % J, opts).utilities;
  return out;
}

GroupInput as_opa(const GroupInput& input) {
  const std::size_t I = input.problem.num_experts(), J = input.problem.num_attributes();
  return GroupInput{input.problem, PreferenceContext(I, J),
                    StructureAssignment(I, J, DiscreteStructure{DiscreteKind::RankOrderCentroid})};
}

RunResult run_solve(const GroupInput& input, const PipelineOptions& opts) {
  RunResult r;
  r.utilities = elicit_utilities(input, opts);
  r.solution = solve_gopa(input.problem, r.utilities, opts.tol);
  r.consensus = consensus(r.solution);
  return r;
}

RunResult run_opa(const GroupInput& input) {
  RunResult r;
  r.solution = solve_opa(input.problem);
  r.utilities = r.solution.utilities;
  r.consensus = consensus(r.solution);
  return r;
}

}  // namespace gopa
