// Acceptance checks. Each criterion prints one line:
//   criterion N: PASS|FAIL  <measured values>
// and the process exits nonzero if any selected criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gopa/elicit_continuous.hpp"
#include "gopa/elicit_discrete.hpp"
#include "gopa/errors.hpp"
#include "gopa/lpcheck.hpp"
#include "gopa/metrics.hpp"
#include "gopa/pipeline.hpp"
#include "gopa/random_instances.hpp"
#include "gopa/sensitivity.hpp"
#include "gopa/solver.hpp"
#include "gopa/structures.hpp"
#include "support/fixtures.hpp"

using namespace gopa;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failed += failed.empty() ? what : ", " + what;
  }
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

GroupInput fixture(const char* name) { return load_input(std::string(GOPA_DATA_DIR) + "/" + name); }

std::vector<std::vector<double>> per_cell(const RankingProblem& p, const std::function<std::vector<double>(int)>& f) {
  std::vector<std::vector<double>> u;
  for (std::size_t i = 0; i < p.num_experts(); ++i)
    for (std::size_t j = 0; j < p.num_attributes(); ++j) u.push_back(f(p.cell(i, j).max_rank));
  return u;
}

std::vector<double> sv(DiscreteKind k, int K) { return surrogate_weights(DiscreteStructure{k}, K); }

const std::vector<double> kCaseExperts{0.1460, 0.2190, 0.1095, 0.0876, 0.4380};

// 1. Case-study expert weights for the fixture and for random structure and
// context mixes on the same rankings.
void criterion1(Outcome& o) {
  const auto t0 = Clock::now();
  const auto base = fixture("case_study.json");
  const auto run = run_solve(base);
  const double elapsed = ms_since(t0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) worst = std::max(worst, std::abs(run.solution.totals.experts[i] - kCaseExperts[i]));

  std::mt19937_64 rng(101);
  double worst_mix = 0.0;
  int mixes = 0;
  for (int n = 0; n < 20; ++n) {
    GroupInput in = base;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        const int K = in.problem.cell(i, j).max_rank;
        in.structures.cell(i, j) = random_structure(rng, n % 2 == 1);
        in.contexts.cell(i, j) = is_continuous(in.structures.cell(i, j)) ? random_continuous_context(rng, K, 2)
                                                                          : random_discrete_context(rng, K, 2);
      }
    const auto r = run_solve(in);
    ++mixes;
    for (std::size_t i = 0; i < 5; ++i)
      worst_mix = std::max(worst_mix, std::abs(r.solution.totals.experts[i] - kCaseExperts[i]));
  }
  o.detail << "max |W^Q - expected| = " << worst << " (fixture), " << worst_mix << " over " << mixes
           << " mixes; runtime " << elapsed << " ms";
  o.check(worst <= 5e-5, "fixture weights");
  o.check(worst_mix <= 5e-5, "mixed structures");
  o.check(elapsed < 1000.0, "runtime < 1 s");
}

// 2. Expert row of the permutation table.
void criterion2(Outcome& o) {
  const auto t0 = Clock::now();
  const auto in = fixture("case_study.json");
  const auto r = run_sensitivity(in.problem, elicit_utilities(in));
  const double elapsed = ms_since(t0);
  const ScenarioStats want{0.2000, 1.1019, -0.3233, 0.6380, 0.0876, 0.4380};
  double worst = 0.0;
  for (const auto& s : r.expert_stats) {
    for (auto [got, ref] : {std::pair{s.mean, want.mean}, {s.skewness, want.skewness}, {s.kurtosis, want.kurtosis},
                            {s.cv, want.cv}, {s.min, want.min}, {s.max, want.max}})
      worst = std::max(worst, std::abs(got - ref));
  }
  const auto& s = r.expert_stats[0];
  o.detail << r.scenarios.size() << " scenarios; E1 mean " << s.mean << " skew " << s.skewness << " kurt " << s.kurtosis
           << " cv " << s.cv << " min " << s.min << " max " << s.max << "; max deviation " << worst << "; runtime "
           << elapsed << " ms";
  o.check(r.scenarios.size() == 120, "120 scenarios");
  o.check(worst <= 2e-3, "stats within 2e-3");
  o.check(elapsed < 5000.0, "runtime < 5 s");
}

// 3. Confidence levels from the given concordances.
void criterion3(Outcome& o) {
  struct Row {
    double rho;
    std::size_t n;
    double expected;
  };
  for (const Row& row : {Row{0.5154, 6, 0.9951}, Row{0.2960, 10, 0.8658}, Row{0.1893, 10, 0.4941}}) {
    const double lcl = local_confidence(row.rho, 5, row.n);
    o.detail << "rho " << row.rho << " n " << row.n << " -> " << lcl << " (expected " << row.expected << ") ";
    std::ostringstream what;
    what << "LCL for rho " << row.rho;
    o.check(std::abs(lcl - row.expected) <= 2e-3, what.str());
  }
}

// 4. Closed forms against the simplex.
void criterion4(Outcome& o) {
  std::mt19937_64 rng(104);
  double worst_opa = 0.0, worst_gopa = 0.0;
  for (int n = 0; n < 50; ++n) {
    RandomProblemOptions opts;
    opts.gaps = n % 2 == 1;
    const auto p = random_problem(rng, opts);
    const auto a = solve_lp(build_opa_lp(p).lp);
    const auto u = per_cell(p, [&](int K) { return random_sorted_simplex(rng, K); });
    const auto b = solve_lp(build_gopa_lp(p, u).lp);
    if (a.status != LpStatus::Optimal || b.status != LpStatus::Optimal) {
      o.check(false, "simplex status");
      continue;
    }
    worst_opa = std::max(worst_opa, std::abs(a.value - solve_opa(p).z_star));
    worst_gopa = std::max(worst_gopa, std::abs(b.value - solve_gopa(p, u).z_star));
  }
  o.detail << "max |dz| OPA " << worst_opa << ", GOPA " << worst_gopa << " over 50 instances";
  o.check(worst_opa <= 1e-8, "OPA");
  o.check(worst_gopa <= 1e-8, "GOPA");
}

// 5. z* does not depend on the utility structure.
void criterion5(Outcome& o) {
  std::mt19937_64 rng(105);
  double worst = 0.0;
  for (int n = 0; n < 20; ++n) {
    const auto p = random_problem(rng, {3, 3, 1, 6, false});
    double lo = INFINITY, hi = -INFINITY;
    for (auto k : {DiscreteKind::RankSum, DiscreteKind::RankExponent, DiscreteKind::RankReciprocal,
                   DiscreteKind::SumReciprocal, DiscreteKind::RankOrderCentroid, DiscreteKind::Uniform}) {
      const double z = solve_gopa(p, per_cell(p, [&](int K) { return sv(k, K); })).z_star;
      lo = std::min(lo, z);
      hi = std::max(hi, z);
    }
    const double z = solve_gopa(p, per_cell(p, [&](int K) { return random_sorted_simplex(rng, K); })).z_star;
    lo = std::min(lo, z);
    hi = std::max(hi, z);
    worst = std::max(worst, hi - lo);
  }
  o.detail << "max z* spread " << worst << " over 20 problems and 7 structures";
  o.check(worst <= 1e-12, "spread");
}

// 6. Degenerations.
void criterion6(Outcome& o) {
  std::mt19937_64 rng(106);
  double a = 0.0;
  for (int n = 0; n < 30; ++n) {
    const auto p = random_problem(rng, {3, 3, 1, 8, n % 2 == 1});
    const auto opa = solve_opa(p);
    const auto roc = solve_gopa(p, per_cell(p, [](int K) { return sv(DiscreteKind::RankOrderCentroid, K); }));
    for (std::size_t c = 0; c < opa.alternative_weights.size(); ++c)
      a = std::max(a, fx::linf(opa.alternative_weights[c], roc.alternative_weights[c]));
  }

  // Every expert and attribute at rank 1, identical alternative rankings.
  double b = 0.0;
  {
    const std::size_t I = 3, J = 4;
    const int K = 7;
    std::vector<Expert> ex;
    std::vector<std::string> attrs, alts;
    for (std::size_t i = 0; i < I; ++i) ex.push_back({"E" + std::to_string(i + 1), 1});
    for (std::size_t j = 0; j < J; ++j) attrs.push_back("C" + std::to_string(j + 1));
    for (int k = 0; k < K; ++k) alts.push_back("A" + std::to_string(k + 1));
    std::vector<std::optional<int>> cell;
    for (int k = 1; k <= K; ++k) cell.push_back(k);
    const auto p = RankingProblem::create(
        ex, attrs, alts, std::vector<std::vector<int>>(I, std::vector<int>(J, 1)),
        std::vector<std::vector<std::vector<std::optional<int>>>>(I, std::vector<std::vector<std::optional<int>>>(J, cell)));
    const auto s = solve_gopa(p, per_cell(p, [](int k) { return sv(DiscreteKind::RankOrderCentroid, k); }));
    b = fx::linf(s.totals.alternatives, sv(DiscreteKind::RankOrderCentroid, K));
  }

  // Equal expert importance: per-expert attribute weights follow 1/s.
  double c = 0.0;
  {
    const auto p = fx::ordered_problem({1, 1, 1, 1}, 5, 6);
    const auto s = solve_gopa(p, per_cell(p, [&](int K) { return random_sorted_simplex(rng, K); }));
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<double> per(5, 0.0);
      double total = 0.0;
      for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t k = 0; k < 6; ++k) {
          per[j] += s.weight(i, j, k);
          total += s.weight(i, j, k);
        }
      for (auto& x : per) x /= total;
      c = std::max(c, fx::linf(per, sv(DiscreteKind::RankReciprocal, 5)));
    }
  }

  double d = 0.0;
  for (int K : {2, 5, 10, 17}) {
    const auto dens = elicit_continuous(TargetDensity(Neutral{}, K), {}, K);
    d = std::max(d, fx::linf(cumulative_utilities(dens, Orientation::Reversed), sv(DiscreteKind::RankSum, K)));
  }
  o.detail << "(a) " << a << " (b) " << b << " (c) " << c << " (d) " << d;
  o.check(a <= 1e-12, "(a) ROC utilities reproduce OPA");
  o.check(b <= 1e-12, "(b) ROC alternatives");
  o.check(c <= 1e-12, "(c) RR attributes");
  o.check(d <= 1e-10, "(d) neutral density gives RS");
}

// 7. Discrete elicitation against an exhaustive grid.
void criterion7(Outcome& o) {
  std::mt19937_64 rng(107);
  double worst_gap = -INFINITY, worst_kkt = 0.0;
  int compared = 0;
  for (int n = 0; n < 100; ++n) {
    const int K = 2 + n % 3;
    const auto ctx = random_discrete_context(rng, K, 2);
    const auto target = surrogate_weights(std::get<DiscreteStructure>(random_structure(rng, false)), K);
    const auto u = elicit_discrete(target, ctx, K);
    worst_kkt = std::max(worst_kkt, kkt_residual_discrete(u, target, ctx));
    const auto g = fx::grid_oracle(target, ctx, K);
    if (!g.found) continue;
    ++compared;
    // Positive when the grid found a better point than the solver.
    worst_gap = std::max(worst_gap, kl_objective(u, target) - g.best);
  }
  double worst_entropy = 0.0;
  for (int n = 0; n < 200; ++n) {
    const int K = 2 + n % 9;
    const auto ctx = random_discrete_context(rng, K, 3);
    const auto u = elicit_discrete(std::vector<double>(static_cast<std::size_t>(K), 1.0), ctx, K);
    worst_entropy = std::max(worst_entropy, fx::linf(u, entropy_max_discrete(ctx, K)));
  }
  o.detail << "grid advantage " << worst_gap << " over " << compared << " contexts; max KKT " << worst_kkt
           << "; uniform vs entropy max " << worst_entropy;
  o.check(compared >= 50, "enough grid comparisons");
  o.check(worst_gap <= 1e-4, "grid never wins by more than 1e-4");
  o.check(worst_kkt <= 1e-8, "KKT residual");
  o.check(worst_entropy <= 1e-8, "uniform target equals entropy max");
}

// 8. Continuous elicitation properties.
void criterion8(Outcome& o) {
  std::mt19937_64 rng(108);
  double spread = 0.0, eta_gap = 0.0, fd_gap = 0.0, violation = 0.0;
  auto inspect = [&](const TargetDensity& t, const CellContext& ctx, int K) {
    const auto d = elicit_continuous(t, ctx, K);
    violation = std::max(violation, continuous_violation(d, ctx));
    for (std::size_t s = 0; s < d.num_segments(); ++s) {
      const double a = d.breaks()[s], b = d.breaks()[s + 1];
      if (d.masses()[s] == 0.0) continue;
      double lo = INFINITY, hi = -INFINITY;
      for (int q = 1; q < 16; ++q) {
        const double x = a + (b - a) * q / 16.0;
        const double ratio = d(x) / t(x);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        eta_gap = std::max(eta_gap, std::abs(risk_preference(d, x) - t.eta(x)));
      }
      spread = std::max(spread, hi - lo);
      const double x = 0.5 * (a + b), h = 1e-5 * (b - a);
      const double fd = -(std::log(d(x + h)) - std::log(d(x - h))) / (2 * h);
      fd_gap = std::max(fd_gap, std::abs(risk_preference(d, x) - fd));
    }
  };
  bool example_ok = true;
  try {
    CellContext ex;
    ex.lowerbound = {{1, 0.32}};
    ex.ratio = {{3, 1.15}};
    ex.absdiff = {{5, 0.065}};
    inspect(TargetDensity(Hara{2, 1, 1.5}, 7), validate_cell_context(ex, 7), 7);
  } catch (const Error& e) {
    example_ok = false;
    o.detail << "HARA context: " << e.what() << "; ";
  }
  for (int n = 0; n < 100; ++n) {
    const int K = 2 + n % 10;
    UtilityStructure s = random_structure(rng, true);
    while (!is_continuous(s)) s = random_structure(rng, true);
    inspect(TargetDensity(std::get<ContinuousStructure>(s), K), random_continuous_context(rng, K, 3), K);
  }
  o.detail << "ratio spread " << spread << ", |eta - eta_target| " << eta_gap << ", finite difference gap " << fd_gap
           << ", CDF violation " << violation;
  o.check(example_ok, "HARA context feasible");
  o.check(spread <= 1e-9, "piecewise-constant ratio");
  o.check(eta_gap <= 1e-6, "risk preference identity");
  o.check(fd_gap <= 1e-6, "finite difference");
  o.check(violation <= 1e-8, "CDF constraints");
}

// 9. Efficiency of the analytical solution.
void criterion9(Outcome& o) {
  std::vector<RankingProblem> problems{fx::single_cell({1, 2, 3}), fx::ordered_problem({1, 2}, 2, 3),
                                       fx::ordered_problem({2, 1, 3}, 2, 2), fx::single_cell({1, 2, 2, 4})};
  std::mt19937_64 rng(109);
  for (int n = 0; n < 6; ++n) problems.push_back(random_problem(rng, {2, 2, 2, 4, false}));
  double worst = 0.0;
  int refused = 0;
  for (const auto& p : problems) {
    const double z = solve_opa(p).z_star;
    const auto e = verify_efficiency(p, z);
    worst = std::max(worst, std::abs(e.min_slack - z));
    o.check(e.slack_matches, "min slack at z*");
    try {
      verify_efficiency(p, 1.1 * z);
    } catch (const InfeasibleStage2&) {
      ++refused;
    }
  }
  o.detail << problems.size() << " instances; max |min slack - z*| " << worst << "; inflated z* refused " << refused
           << "/" << problems.size();
  o.check(worst <= 1e-8, "min slack equals z*");
  o.check(refused == int(problems.size()), "inflated z* infeasible");
}

// 10. Metric fixtures.
void criterion10(Outcome& o) {
  const double f111 = f_cdf(1, 1, 1);
  double f22 = 0.0;
  for (int q = 0; q < 20; ++q) {
    const double x = 0.1 + 0.5 * q;
    f22 = std::max(f22, std::abs(f_cdf(x, 2, 2) - x / (1 + x)));
  }
  const double w_same = kendall_w({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  const double w_rev = kendall_w({{1, 2, 3, 4}, {4, 3, 2, 1}});
  const double w_mix = kendall_w({{1, 2, 3}, {1, 2, 3}, {3, 2, 1}});
  const double s_same = spearman({1, 2, 3, 4}, {1, 2, 3, 4});
  const double s_rev = spearman({1, 2, 3, 4}, {4, 3, 2, 1});
  const double s_swap = spearman({1, 2, 3, 4}, {1, 2, 4, 3});
  o.detail << "f_cdf(1,1,1) " << f111 << "; max |f_cdf(x,2,2) - x/(1+x)| " << f22 << "; W " << w_same << " / " << w_rev
           << " / " << w_mix << " (expected 1 / 0 / 0.333333); Spearman " << s_same << " / " << s_rev << " / " << s_swap;
  o.check(std::abs(f111 - 0.5) <= 1e-10, "f_cdf(1,1,1)");
  o.check(f22 <= 1e-10, "f_cdf(x,2,2)");
  o.check(std::abs(w_same - 1.0) <= 1e-12, "W identical");
  o.check(std::abs(w_rev) <= 1e-12, "W reversed");
  o.check(std::abs(w_mix - 1.0 / 3.0) <= 1e-12, "W = 1/3 fixture");
  o.check(std::abs(s_same - 1.0) <= 1e-12 && std::abs(s_rev + 1.0) <= 1e-12 && std::abs(s_swap - 0.8) <= 1e-12,
          "Spearman fixtures");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GOPA acceptance checks"};
  std::vector<int> selected;
  app.add_option("--criterion,-c", selected, "criterion number(s); all when omitted")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty())
    for (int c = 1; c <= 10; ++c) selected.push_back(c);

  const std::vector<void (*)(Outcome&)> checks{criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (int c : selected) {
    Outcome o;
    try {
      checks[std::size_t(c - 1)](o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::string line = o.detail.str();
    if (!o.failed.empty()) line += " [failed: " + o.failed + "]";
    std::printf("criterion %d: %s  %s\n", c, o.pass ? "PASS" : "FAIL", line.c_str());
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
