#pragma once

// Deterministic report output: ordered JSON with numbers rounded to 12
// significant digits, and the CSV tables.

#include <string>

#include <json.hpp>

#include "gopa/pipeline.hpp"
#include "gopa/sensitivity.hpp"

namespace gopa {

using ordered_json = nlohmann::ordered_json;

// x rounded through "%.12g"; NaN and infinities become null.
ordered_json number(double x);
std::string format_number(double x);

struct ReportMeta {
  std::string command = "solve";
  Orientation orientation = Orientation::Reversed;
  BoundMode bound_mode = BoundMode::Equality;
};

ordered_json consensus_to_json(const ConsensusReport& c, const WeightSolution& s);
ordered_json solution_report(const GroupInput& input, const RunResult& run, const ReportMeta& meta);

// Reads the "solution" part of a report back. Aggregates are recomputed.
WeightSolution solution_from_json(const ordered_json& report);

std::string weights_csv(const WeightSolution& s);
std::string utilities_csv(const GroupInput& input, const std::vector<std::vector<double>>& utilities);
std::string metrics_csv(const ConsensusReport& c, const WeightSolution& s);
std::string sensitivity_csv(const SensitivityResult& r, const RankingProblem& p);
std::string sensitivity_raw_csv(const SensitivityResult& r, const RankingProblem& p);

// Writes weights.csv, utilities.csv and metrics.csv under `dir`.
void write_solution_csvs(const std::string& dir, const GroupInput& input, const RunResult& run);

const char* orientation_name(Orientation o);
const char* bound_mode_name(BoundMode m);

}  // namespace gopa
