#include "gopa/lpcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gopa/errors.hpp"

namespace gopa {

void LinearProgram::add_row(std::vector<double> coeffs, Sense sense, double b) {
  rows.push_back(std::move(coeffs));
  senses.push_back(sense);
  rhs.push_back(b);
}

namespace {

// Tableau with two reduced-cost rows: `dm` for the artificial (big-M) part and
// `dr` for the real objective. The last column holds the right-hand side;
// d[rhs] is minus the objective value.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), a_(m * (n + 1), 0.0), dm_(n + 1, 0.0), dr_(n + 1, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  std::vector<double>& dm() { return dm_; }
  std::vector<double>& dr() { return dr_; }

  void pivot(std::size_t r, std::size_t e) {
    const double p = at(r, e);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= p;
    at(r, e) = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = at(i, e);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, e) = 0.0;
    }
    for (auto* d : {&dm_, &dr_}) {
      const double f = (*d)[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) (*d)[j] -= f * at(r, j);
      (*d)[e] = 0.0;
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> dm_, dr_;
};

void check_dimensions(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  if (n == 0) throw DimensionError("LP has no variables");
  if (lp.senses.size() != lp.rows.size() || lp.rhs.size() != lp.rows.size())
    throw DimensionError("LP rows, senses and right-hand sides differ in length");
  if (!lp.free_vars.empty() && lp.free_vars.size() != n) throw DimensionError("free_vars length differs from variables");
  for (double c : lp.objective)
    if (!std::isfinite(c)) throw DimensionError("non-finite objective coefficient");
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    if (lp.rows[i].size() != n) throw DimensionError("LP row " + std::to_string(i) + " has the wrong length");
    for (double v : lp.rows[i])
      if (!std::isfinite(v)) throw DimensionError("non-finite entry in LP row " + std::to_string(i));
    if (!std::isfinite(lp.rhs[i])) throw DimensionError("non-finite right-hand side");
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, double tol) {
  check_dimensions(lp);
  const std::size_t n = lp.num_vars();
  const std::size_t m = lp.rows.size();

  // Column map: each original variable owns one column, free ones a second
  // (negative part).
  std::vector<std::size_t> pos(n), neg(n, std::numeric_limits<std::size_t>::max());
  std::size_t cols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos[j] = cols++;
    if (!lp.free_vars.empty() && lp.free_vars[j]) neg[j] = cols++;
  }
  const std::size_t structural = cols;

  std::vector<double> sign(m, 1.0);
  std::vector<Sense> sense(lp.senses);
  for (std::size_t i = 0; i < m; ++i) {
    if (lp.rhs[i] < 0.0) {
      sign[i] = -1.0;
      if (sense[i] == Sense::LessEq)
        sense[i] = Sense::GreaterEq;
      else if (sense[i] == Sense::GreaterEq)
        sense[i] = Sense::LessEq;
    }
  }
  std::size_t slacks = 0, artificials = 0;
  for (Sense s : sense) {
    if (s != Sense::Equal) ++slacks;
    if (s != Sense::LessEq) ++artificials;
  }
  const std::size_t first_art = structural + slacks;
  const std::size_t total = first_art + artificials;

  Tableau t(m, total);
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = structural, next_art = first_art;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = sign[i] * lp.rows[i][j];
      t.at(i, pos[j]) = v;
      if (neg[j] != std::numeric_limits<std::size_t>::max()) t.at(i, neg[j]) = -v;
    }
    t.rhs(i) = sign[i] * lp.rhs[i];
    if (sense[i] == Sense::LessEq) {
      t.at(i, next_slack) = 1.0;
      basis[i] = next_slack++;
    } else {
      if (sense[i] == Sense::GreaterEq) t.at(i, next_slack++) = -1.0;
      t.at(i, next_art) = 1.0;
      basis[i] = next_art++;
    }
  }

  const double dir = lp.maximize ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    t.dr()[pos[j]] = dir * lp.objective[j];
    if (neg[j] != std::numeric_limits<std::size_t>::max()) t.dr()[neg[j]] = -dir * lp.objective[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < first_art) continue;
    for (std::size_t j = 0; j <= total; ++j)
      if (j < first_art || j == total) t.dm()[j] += t.at(i, j);
  }

  LpResult result;
  const int max_pivots = 200000;
  bool phase_one = artificials > 0;
  while (true) {
    std::size_t enter = total;
    if (phase_one) {
      for (std::size_t j = 0; j < first_art; ++j) {
        if (t.dm()[j] > tol) {
          enter = j;
          break;
        }
      }
      if (enter == total) {
        // dm[rhs] is the remaining total of the artificial variables.
        if (t.dm()[total] > tol) {
          result.status = LpStatus::Infeasible;
          return result;
        }
        phase_one = false;
        continue;
      }
    } else {
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::abs(t.dm()[j]) <= tol && t.dr()[j] > tol) {
          enter = j;
          break;
        }
      }
      if (enter == total) break;
    }

    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = t.at(i, enter);
      if (a <= tol) continue;
      const double ratio = t.rhs(i) / a;
      if (leave == m || ratio < best - 1e-12) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + 1e-12 && basis[i] < basis[leave]) {
        leave = i;
      }
    }
    if (leave == m) {
      if (phase_one) throw NumericFailure("simplex: unbounded direction while minimizing artificial variables");
      result.status = LpStatus::Unbounded;
      return result;
    }
    t.pivot(leave, enter);
    basis[leave] = enter;
    if (++result.pivots > max_pivots) throw NumericFailure("simplex: pivot limit reached");
  }

  std::vector<double> col(total, 0.0);
  for (std::size_t i = 0; i < m; ++i) col[basis[i]] = std::max(0.0, t.rhs(i));
  result.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    result.x[j] = col[pos[j]];
    if (neg[j] != std::numeric_limits<std::size_t>::max()) result.x[j] -= col[neg[j]];
  }
  result.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.value += lp.objective[j] * result.x[j];
  result.status = LpStatus::Optimal;
  return result;
}

// ---------------------------------------------------------------------------

namespace {

WeightProgram layout(const RankingProblem& problem) {
  WeightProgram wp;
  std::size_t count = 0;
  for (std::size_t i = 0; i < problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < problem.num_attributes(); ++j) {
      wp.cell_offset.push_back(count);
      count += static_cast<std::size_t>(problem.cell(i, j).max_rank);
    }
  }
  wp.z_index = count;
  wp.lp.objective.assign(count + 1, 0.0);
  wp.lp.objective[count] = 1.0;
  wp.lp.maximize = true;
  return wp;
}

// Rows coef_r * z - t s w_r <= 0 plus the weighted normalization.
WeightProgram build_weight_program(const RankingProblem& problem,
                                   const std::vector<std::vector<double>>& coefficients) {
  WeightProgram wp = layout(problem);
  const std::size_t nv = wp.lp.num_vars();
  const std::size_t J = problem.num_attributes();
  std::vector<double> norm(nv, 0.0);
  for (std::size_t i = 0; i < problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      const auto& cell = problem.cell(i, j);
      const double ts = double(problem.expert_rank(i)) * double(problem.attribute_rank(i, j));
      const std::size_t off = wp.cell_offset[i * J + j];
      for (int r = 1; r <= cell.max_rank; ++r) {
        std::vector<double> row(nv, 0.0);
        row[wp.z_index] = coefficients[i * J + j][std::size_t(r - 1)];
        row[off + std::size_t(r - 1)] = -ts;
        wp.lp.add_row(std::move(row), Sense::LessEq, 0.0);
        norm[off + std::size_t(r - 1)] = double(cell.frequency[std::size_t(r - 1)]);
      }
    }
  }
  wp.lp.add_row(std::move(norm), Sense::Equal, 1.0);
  return wp;
}

}  // namespace

WeightProgram build_opa_lp(const RankingProblem& problem) {
  std::vector<std::vector<double>> coef;
  for (std::size_t i = 0; i < problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < problem.num_attributes(); ++j) {
      const int K = problem.cell(i, j).max_rank;
      std::vector<double> h(static_cast<std::size_t>(K));
      double tail = 0.0;
      for (int r = K; r >= 1; --r) {
        tail += 1.0 / r;
        h[std::size_t(r - 1)] = tail;
      }
      coef.push_back(std::move(h));
    }
  }
  return build_weight_program(problem, coef);
}

WeightProgram build_gopa_lp(const RankingProblem& problem, const std::vector<std::vector<double>>& utilities) {
  if (utilities.size() != problem.num_cells()) throw DimensionError("expected one utility vector per cell");
  std::vector<std::vector<double>> coef;
  for (std::size_t i = 0; i < problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < problem.num_attributes(); ++j) {
      const int K = problem.cell(i, j).max_rank;
      const auto& u = utilities[i * problem.num_attributes() + j];
      if (u.size() != static_cast<std::size_t>(K)) throw DimensionError("utility vector length differs from K_ij");
      std::vector<double> c(u.size());
      for (std::size_t r = 0; r < u.size(); ++r) c[r] = K * u[r];
      coef.push_back(std::move(c));
    }
  }
  return build_weight_program(problem, coef);
}

EfficiencyResult verify_efficiency(const RankingProblem& problem, double z_star, double tol) {
  WeightProgram wp = layout(problem);
  const std::size_t nw = wp.z_index;
  const std::size_t J = problem.num_attributes();

  LinearProgram lp;
  lp.objective.assign(nw, 0.0);
  lp.maximize = true;
  std::vector<double> norm(nw, 0.0);
  // delta rows as (coefficient vector) so min slack can be evaluated later.
  std::vector<std::vector<double>> deltas;
  for (std::size_t i = 0; i < problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < J; ++j) {
      const auto& cell = problem.cell(i, j);
      const double ts = double(problem.expert_rank(i)) * double(problem.attribute_rank(i, j));
      const std::size_t off = wp.cell_offset[i * J + j];
      const int K = cell.max_rank;
      for (int r = 1; r <= K; ++r) {
        std::vector<double> d(nw, 0.0);
        const std::size_t at = off + std::size_t(r - 1);
        if (r < K) {
          d[at] = ts * r;
          d[at + 1] = -ts * r;
        } else {
          d[at] = ts * K;
        }
        for (std::size_t v = 0; v < nw; ++v) lp.objective[v] += d[v];
        deltas.push_back(d);
        lp.add_row(std::move(d), Sense::GreaterEq, z_star);
        norm[at] = double(cell.frequency[std::size_t(r - 1)]);
      }
    }
  }
  lp.add_row(std::move(norm), Sense::Equal, 1.0);

  LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible)
    throw InfeasibleStage2("second-stage program infeasible at z* = " + std::to_string(z_star));
  if (res.status == LpStatus::Unbounded)
    throw InfeasibleStage2("second-stage program unbounded (a cell is missing its first rank)");

  EfficiencyResult out;
  out.value = res.value;
  out.w = res.x;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& d : deltas) {
    double s = 0.0;
    for (std::size_t v = 0; v < nw; ++v) s += d[v] * res.x[v];
    out.min_slack = std::min(out.min_slack, s);
  }
  out.slack_matches = std::abs(out.min_slack - z_star) <= tol;
  return out;
}

}  // namespace gopa
