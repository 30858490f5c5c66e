// Command-line front end: solve, opa, elicit, metrics, sensitivity, verify.
//
// Exit codes: 0 ok, 1 other failure, 2 invalid input, 3 infeasible
// preference context, 4 numeric failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gopa/elicit_discrete.hpp"
#include "gopa/errors.hpp"
#include "gopa/lpcheck.hpp"
#include "gopa/pipeline.hpp"
#include "gopa/random_instances.hpp"
#include "gopa/report.hpp"
#include "gopa/sensitivity.hpp"
#include "gopa/structures.hpp"

namespace {

using namespace gopa;

struct Config {
  std::string input;
  std::string output;
  std::string csv_dir;
  std::string orientation = "reversed";
  std::string bound_mode = "equality";
  double tol = 1e-8;
  // elicit
  std::string cell;
  int samples = 0;
  bool dump_target = false;
  // sensitivity
  std::string raw_output;
  bool serial = false;
  // verify
  int random = 0;
  unsigned long long seed = 1;
};

PipelineOptions pipeline_options(const Config& c) {
  PipelineOptions o;
  o.orientation = c.orientation == "literal" ? Orientation::Literal : Orientation::Reversed;
  o.bound_mode = c.bound_mode == "inequality" ? BoundMode::Inequality : BoundMode::Equality;
  o.tol = c.tol;
  return o;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

int cmd_solve(const Config& c, bool opa) {
  GroupInput input = load_input(c.input);
  ReportMeta meta;
  meta.command = opa ? "opa" : "solve";
  RunResult run;
  if (opa) {
    input = as_opa(input);
    run = run_opa(input);
  } else {
    const auto opts = pipeline_options(c);
    meta.orientation = opts.orientation;
    meta.bound_mode = opts.bound_mode;
    run = run_solve(input, opts);
  }
  emit(c.output, dump(solution_report(input, run, meta)));
  if (!c.csv_dir.empty()) write_solution_csvs(c.csv_dir, input, run);
  return 0;
}

std::pair<std::size_t, std::size_t> parse_cell(const RankingProblem& p, const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw ValidationError("--cell", "expected EXPERT,ATTRIBUTE");
  const std::string a = spec.substr(0, comma), b = spec.substr(comma + 1);
  auto i = p.find_expert(a);
  auto j = p.find_attribute(b);
  // Fall back to 1-based indices.
  auto index = [](const std::string& s, std::size_t n) -> std::optional<std::size_t> {
    try {
      std::size_t used = 0;
      const long v = std::stol(s, &used);
      if (used == s.size() && v >= 1 && std::size_t(v) <= n) return std::size_t(v - 1);
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };
  if (!i) i = index(a, p.num_experts());
  if (!j) j = index(b, p.num_attributes());
  if (!i || !j) throw ValidationError("--cell", "unknown cell '" + spec + "'");
  return {*i, *j};
}

int cmd_elicit(const Config& c) {
  const GroupInput input = load_input(c.input);
  const auto [i, j] = parse_cell(input.problem, c.cell);
  const auto opts = pipeline_options(c);
  const int K = input.problem.cell(i, j).max_rank;
  const UtilityStructure& st = input.structures.cell(i, j);
  std::ostringstream out;

  if (c.dump_target) {
    if (const auto* d = std::get_if<DiscreteStructure>(&st)) {
      const auto v = surrogate_weights(*d, K);
      out << "rank,target\n";
      for (std::size_t r = 0; r < v.size(); ++r) out << r + 1 << "," << format_number(v[r]) << "\n";
    } else {
      TargetDensity t(std::get<ContinuousStructure>(st), K);
      const int n = c.samples > 1 ? c.samples : 101;
      out << "x,target\n";
      for (int s = 0; s < n; ++s) {
        const double x = double(K) * s / (n - 1);
        out << format_number(x) << "," << format_number(t(x)) << "\n";
      }
    }
    emit(c.output, out.str());
    return 0;
  }

  const CellElicitation e = elicit_cell(input, i, j, opts);
  if (c.samples > 0) {
    if (!e.density) throw ValidationError("--samples", "cell " + input.problem.cell_label(i, j) + " is discrete");
    const int n = std::max(c.samples, 2);
    out << "x,density,cdf\n";
    for (int s = 0; s < n; ++s) {
      const double x = double(K) * s / (n - 1);
      out << format_number(x) << "," << format_number((*e.density)(x)) << "," << format_number(e.density->cdf(x))
          << "\n";
    }
  } else {
    out << "rank,utility\n";
    for (std::size_t r = 0; r < e.utilities.size(); ++r) out << r + 1 << "," << format_number(e.utilities[r]) << "\n";
  }
  emit(c.output, out.str());
  return 0;
}

int cmd_metrics(const Config& c) {
  std::ifstream in(c.input);
  if (!in) throw ValidationError(c.input, "cannot open report");
  ordered_json rep;
  try {
    rep = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(c.input, std::string("JSON parse error: ") + e.what());
  }
  const WeightSolution s = solution_from_json(rep);
  const ConsensusReport cr = consensus(s);
  emit(c.output, dump(consensus_to_json(cr, s)));
  if (!c.csv_dir.empty()) {
    std::filesystem::create_directories(c.csv_dir);
    emit((std::filesystem::path(c.csv_dir) / "metrics.csv").string(), metrics_csv(cr, s));
  }
  return 0;
}

int cmd_sensitivity(const Config& c) {
  const GroupInput input = load_input(c.input);
  const auto utilities = elicit_utilities(input, pipeline_options(c));
  const SensitivityResult r = run_sensitivity(input.problem, utilities, !c.serial);
  emit(c.output, sensitivity_csv(r, input.problem));
  if (!c.raw_output.empty()) emit(c.raw_output, sensitivity_raw_csv(r, input.problem));
  if (!c.csv_dir.empty()) {
    std::filesystem::create_directories(c.csv_dir);
    emit((std::filesystem::path(c.csv_dir) / "sensitivity.csv").string(), sensitivity_csv(r, input.problem));
  }
  return 0;
}

struct VerifyTally {
  int instances = 0;
  double max_delta_opa = 0.0;
  double max_delta_gopa = 0.0;
  int efficiency_checked = 0;
  int efficiency_failures = 0;
  std::vector<std::string> failures;
};

void verify_one(const GroupInput& input, const PipelineOptions& opts, double tol, VerifyTally& t, const std::string& tag) {
  ++t.instances;
  const WeightSolution opa = solve_opa(input.problem);
  const LpResult lp_opa = solve_lp(build_opa_lp(input.problem).lp);
  const double d_opa = lp_opa.status == LpStatus::Optimal ? std::abs(lp_opa.value - opa.z_star) : INFINITY;
  t.max_delta_opa = std::max(t.max_delta_opa, d_opa);
  if (!(d_opa <= tol)) t.failures.push_back(tag + ": OPA delta " + format_number(d_opa));

  const auto utilities = elicit_utilities(input, opts);
  const WeightSolution gopa = solve_gopa(input.problem, utilities, opts.tol);
  const LpResult lp_gopa = solve_lp(build_gopa_lp(input.problem, utilities).lp);
  const double d_gopa = lp_gopa.status == LpStatus::Optimal ? std::abs(lp_gopa.value - gopa.z_star) : INFINITY;
  t.max_delta_gopa = std::max(t.max_delta_gopa, d_gopa);
  if (!(d_gopa <= tol)) t.failures.push_back(tag + ": GOPA delta " + format_number(d_gopa));

  if (input.problem.gap_free()) {
    ++t.efficiency_checked;
    bool ok = false;
    try {
      ok = verify_efficiency(input.problem, opa.z_star, tol).slack_matches;
    } catch (const InfeasibleStage2&) {
    }
    if (!ok) {
      ++t.efficiency_failures;
      t.failures.push_back(tag + ": efficiency check failed");
    }
  }
}

int cmd_verify(const Config& c) {
  const auto opts = pipeline_options(c);
  const double tol = 1e-8;
  VerifyTally t;
  if (!c.input.empty()) verify_one(load_input(c.input), opts, tol, t, c.input);
  std::mt19937_64 rng(c.seed);
  for (int n = 0; n < c.random; ++n) {
    RandomProblemOptions ro;
    ro.gaps = (n % 2) == 1;
    verify_one(random_input(rng, ro), opts, tol, t, "random[" + std::to_string(n) + "]");
  }
  ordered_json out;
  out["instances"] = t.instances;
  out["tolerance"] = number(tol);
  out["max_delta_opa"] = number(t.max_delta_opa);
  out["max_delta_gopa"] = number(t.max_delta_gopa);
  out["efficiency_checked"] = t.efficiency_checked;
  out["efficiency_failures"] = t.efficiency_failures;
  out["failures"] = t.failures;
  out["pass"] = t.failures.empty();
  emit(c.output, dump(out));
  return t.failures.empty() ? 0 : 1;
}

void add_pipeline_flags(CLI::App* sub, Config& c) {
  sub->add_option("--orientation", c.orientation, "Rank orientation of continuous utilities")
      ->check(CLI::IsMember({"reversed", "literal"}));
  sub->add_option("--bound-mode", c.bound_mode, "Continuous lower bounds as equalities or inequalities")
      ->check(CLI::IsMember({"equality", "inequality"}));
  sub->add_option("--tol", c.tol, "Tolerance for utility shape checks")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group weights from ordinal rankings and partial preferences"};
  app.require_subcommand(1);
  Config c;

  auto* solve = app.add_subcommand("solve", "Elicit utilities, solve weights and write the report");
  solve->add_option("input", c.input, "Input JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("-o,--output", c.output, "Report path (stdout by default)");
  solve->add_option("--csv", c.csv_dir, "Directory for weights.csv, utilities.csv, metrics.csv");
  add_pipeline_flags(solve, c);

  auto* opa = app.add_subcommand("opa", "Plain ordinal weights (ROC utilities, contexts ignored)");
  opa->add_option("input", c.input, "Input JSON")->required()->check(CLI::ExistingFile);
  opa->add_option("-o,--output", c.output, "Report path (stdout by default)");
  opa->add_option("--csv", c.csv_dir, "Directory for CSV tables");

  auto* elicit = app.add_subcommand("elicit", "Elicited utilities of one cell as CSV");
  elicit->add_option("input", c.input, "Input JSON")->required()->check(CLI::ExistingFile);
  elicit->add_option("--cell", c.cell, "EXPERT,ATTRIBUTE ids or 1-based indices")->required();
  elicit->add_option("--samples", c.samples, "Sample the continuous density at N points")->check(CLI::NonNegativeNumber);
  elicit->add_flag("--dump-target", c.dump_target, "Emit the target structure instead");
  elicit->add_option("-o,--output", c.output, "CSV path (stdout by default)");
  add_pipeline_flags(elicit, c);

  auto* metrics = app.add_subcommand("metrics", "Consensus statistics of a solve report");
  metrics->add_option("report", c.input, "Report JSON written by solve or opa")->required()->check(CLI::ExistingFile);
  metrics->add_option("-o,--output", c.output, "JSON path (stdout by default)");
  metrics->add_option("--csv", c.csv_dir, "Directory for metrics.csv");

  auto* sens = app.add_subcommand("sensitivity", "Expert-rank permutation statistics as CSV");
  sens->add_option("input", c.input, "Input JSON")->required()->check(CLI::ExistingFile);
  sens->add_option("-o,--output", c.output, "CSV path (stdout by default)");
  sens->add_option("--raw", c.raw_output, "Also write per-scenario weights here");
  sens->add_option("--csv", c.csv_dir, "Directory for sensitivity.csv");
  sens->add_flag("--serial", c.serial, "Run scenarios on one thread");
  add_pipeline_flags(sens, c);

  auto* verify = app.add_subcommand("verify", "Compare closed forms with the simplex on random or given inputs");
  verify->add_option("input", c.input, "Optional input JSON")->check(CLI::ExistingFile);
  verify->add_option("--random", c.random, "Number of random instances")->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", c.seed, "Random seed");
  verify->add_option("-o,--output", c.output, "JSON path (stdout by default)");
  add_pipeline_flags(verify, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve) return cmd_solve(c, false);
    if (*opa) return cmd_solve(c, true);
    if (*elicit) return cmd_elicit(c);
    if (*metrics) return cmd_metrics(c);
    if (*sens) return cmd_sensitivity(c);
    if (*verify) return cmd_verify(c);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UtilityShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleContext& e) {
    std::cerr << "error: infeasible preference context: " << e.what() << "\n";
    return 3;
  } catch (const NumericFailure& e) {
    std::cerr << "error: numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
