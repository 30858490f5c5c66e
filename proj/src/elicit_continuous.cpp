#include <cstdio>
#include "gopa/elicit_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "gopa/errors.hpp"
#include "gopa/lpcheck.hpp"

namespace gopa {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<double> breakpoints(const CellContext& ctx, int K) {
  std::set<int> pts{0, K};
  auto add = [&](int r) {
    if (r > 0 && r < K) pts.insert(r);
  };
  for (const auto& c : ctx.ratio) {
    add(c.rank - 1);
    add(c.rank);
  }
  for (const auto& c : ctx.absdiff) {
    add(c.rank - 1);
    add(c.rank);
  }
  for (const auto& c : ctx.lowerbound) add(c.rank);
  return {pts.begin(), pts.end()};
}

// ---------------------------------------------------------------------------

PiecewiseDensity::PiecewiseDensity(TargetDensity target, std::vector<double> breaks, std::vector<double> masses)
    : target_(std::move(target)), breaks_(std::move(breaks)), masses_(std::move(masses)) {
  if (breaks_.size() != masses_.size() + 1) throw DimensionError("expected one mass per segment");
  scales_.resize(masses_.size());
  for (std::size_t s = 0; s < masses_.size(); ++s)
    scales_[s] = masses_[s] / target_.integral(breaks_[s], breaks_[s + 1]);
}

std::size_t PiecewiseDensity::segment_of(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  if (it == breaks_.begin()) return 0;
  const std::size_t s = std::size_t(it - breaks_.begin()) - 1;
  return std::min(s, masses_.size() - 1);
}

double PiecewiseDensity::operator()(double x) const { return scales_[segment_of(x)] * target_(x); }

double PiecewiseDensity::cdf(double x) const {
  if (x <= breaks_.front()) return 0.0;
  if (x >= breaks_.back()) return 1.0;
  const std::size_t s = segment_of(x);
  double acc = 0.0;
  for (std::size_t k = 0; k < s; ++k) acc += masses_[k];
  return acc + scales_[s] * target_.integral(breaks_[s], x);
}

double PiecewiseDensity::tail(double x) const {
  if (x <= breaks_.front()) return 1.0;
  if (x >= breaks_.back()) return 0.0;
  const std::size_t s = segment_of(x);
  double acc = 0.0;
  for (std::size_t k = masses_.size(); k-- > s + 1;) acc += masses_[k];
  return acc + scales_[s] * target_.integral(x, breaks_[s + 1]);
}

// ---------------------------------------------------------------------------

namespace {

struct Rows {
  MatrixXd A;  // constraints x segments
  VectorXd xi;
  std::vector<bool> is_bound;
};

Rows constraint_rows(const CellContext& ctx, const std::vector<double>& br) {
  const Eigen::Index S = Eigen::Index(br.size()) - 1;
  const Eigen::Index E = Eigen::Index(ctx.ratio.size() + ctx.absdiff.size() + ctx.lowerbound.size());
  Rows rows{MatrixXd::Zero(E, S), VectorXd::Zero(E), {}};
  auto upto = [&](Eigen::Index s, int r) { return br[std::size_t(s) + 1] <= double(r) ? 1.0 : 0.0; };
  Eigen::Index e = 0;
  for (const auto& c : ctx.ratio) {
    for (Eigen::Index s = 0; s < S; ++s) rows.A(e, s) = upto(s, c.rank) - c.alpha * upto(s, c.rank - 1);
    rows.is_bound.push_back(false);
    ++e;
  }
  for (const auto& c : ctx.absdiff) {
    for (Eigen::Index s = 0; s < S; ++s) rows.A(e, s) = upto(s, c.rank) - upto(s, c.rank - 1);
    rows.xi(e) = c.beta;
    rows.is_bound.push_back(false);
    ++e;
  }
  for (const auto& c : ctx.lowerbound) {
    for (Eigen::Index s = 0; s < S; ++s) rows.A(e, s) = upto(s, c.rank);
    rows.xi(e) = c.gamma;
    rows.is_bound.push_back(true);
    ++e;
  }
  return rows;
}

LinearProgram mass_lp(const Rows& rows, BoundMode mode) {
  const Eigen::Index S = rows.A.cols();
  LinearProgram lp;
  lp.objective.assign(std::size_t(S), 0.0);
  for (Eigen::Index e = 0; e < rows.A.rows(); ++e) {
    std::vector<double> row(static_cast<std::size_t>(S));
    for (Eigen::Index s = 0; s < S; ++s) row[std::size_t(s)] = rows.A(e, s);
    const bool ineq = mode == BoundMode::Inequality && rows.is_bound[std::size_t(e)];
    lp.add_row(std::move(row), ineq ? Sense::GreaterEq : Sense::Equal, rows.xi(e));
  }
  lp.add_row(std::vector<double>(std::size_t(S), 1.0), Sense::Equal, 1.0);
  return lp;
}

double log_sum_exp(const VectorXd& l) {
  const double m = l.maxCoeff();
  return m + std::log((l.array() - m).exp().sum());
}

struct DualResult {
  VectorXd lambda;
  VectorXd m;
  double lse = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool ok = false;
};

// Minimizes ln sum_s V_s exp(a_s . lambda) - lambda . xi over the given rows
// and live segments.
DualResult solve_dual(const MatrixXd& A, const VectorXd& xi, const VectorXd& logV, double reg) {
  const Eigen::Index E = A.rows();
  DualResult out;
  out.lambda = VectorXd::Zero(E);
  auto eval = [&](const VectorXd& lambda, VectorXd& m, double& lse) {
    VectorXd l = logV + A.transpose() * lambda;
    lse = log_sum_exp(l);
    m = (l.array() - lse).exp().matrix();
    return lse - lambda.dot(xi);
  };
  double phi = eval(out.lambda, out.m, out.lse);
  for (int it = 0; it < 200; ++it) {
    out.iterations = it;
    VectorXd am = A * out.m;
    VectorXd grad = am - xi;
    out.residual = E ? grad.lpNorm<Eigen::Infinity>() : 0.0;
    if (out.residual <= 1e-13) {
      out.ok = true;
      return out;
    }
    MatrixXd H = A * out.m.asDiagonal() * A.transpose() - am * am.transpose();
    if (reg > 0.0) H += reg * MatrixXd::Identity(E, E);
    VectorXd d = H.completeOrthogonalDecomposition().solve(-grad);
    if (!d.allFinite()) return out;
    double slope = grad.dot(d);
    if (slope >= 0.0) {
      d = -grad;
      slope = grad.dot(d);
    }
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls) {
      VectorXd trial = out.lambda + step * d;
      VectorXd m;
      double lse = 0.0;
      const double f = eval(trial, m, lse);
      // A step lost in rounding must not count as progress.
      if ((trial - out.lambda).lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + out.lambda.lpNorm<Eigen::Infinity>()))
        break;
      if (std::isfinite(f) && f <= phi + 1e-4 * step * slope) {
        out.lambda = trial;
        out.m = m;
        out.lse = lse;
        phi = f;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // The objective is flat in floating point here; fall back to judging
      // the full step by the gradient it leaves behind.
      VectorXd trial = out.lambda + H.completeOrthogonalDecomposition().solve(-grad);
      VectorXd m;
      double lse = 0.0;
      const double f = eval(trial, m, lse);
      if (std::isfinite(f) && (A * m - xi).lpNorm<Eigen::Infinity>() < 0.5 * out.residual) {
        out.lambda = trial;
        out.m = m;
        out.lse = lse;
        phi = f;
        continue;
      }
      out.ok = out.residual <= 1e-11;
      return out;
    }
  }
  VectorXd grad = A * out.m - xi;
  out.residual = E ? grad.lpNorm<Eigen::Infinity>() : 0.0;
  out.ok = out.residual <= 1e-11;
  return out;
}

// One multiplier: the constraint value a . m(lambda) is nondecreasing in
// lambda, so bisection on it always converges.
DualResult bisect_dual(const MatrixXd& A, const VectorXd& xi, const VectorXd& logV) {
  DualResult out;
  auto value = [&](double lam, VectorXd& m, double& lse) {
    VectorXd l = logV + A.row(0).transpose() * lam;
    lse = log_sum_exp(l);
    m = (l.array() - lse).exp().matrix();
    return A.row(0).dot(m) - xi(0);
  };
  VectorXd m;
  double lse = 0.0;
  double lo = -1.0, hi = 1.0;
  while (value(lo, m, lse) > 0.0 && lo > -1e6) lo *= 2.0;
  while (value(hi, m, lse) < 0.0 && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (value(mid, m, lse) < 0.0 ? lo : hi) = mid;
    out.iterations = it;
  }
  const double lam = 0.5 * (lo + hi);
  out.residual = std::abs(value(lam, m, lse));
  out.lambda = VectorXd::Constant(1, lam);
  out.m = m;
  out.lse = lse;
  out.ok = out.residual <= 1e-11;
  return out;
}

DualResult solve_with_restarts(const MatrixXd& A, const VectorXd& xi, const VectorXd& logV) {
  DualResult r = solve_dual(A, xi, logV, 0.0);
  if (r.ok) return r;
  if (A.rows() == 1) {
    DualResult b = bisect_dual(A, xi, logV);
    if (b.ok) return b;
  }
  for (double reg : {1e-8, 1e-4}) {
    DualResult q = solve_dual(A, xi, logV, reg);
    if (q.ok) return q;
  }
  return r;
}

}  // namespace

PiecewiseDensity elicit_continuous(const TargetDensity& target, const CellContext& ctx, int K, BoundMode mode) {
  if (K != target.max_rank()) throw DimensionError("target density domain differs from K");
  const std::vector<double> br = breakpoints(ctx, K);
  const Eigen::Index S = Eigen::Index(br.size()) - 1;
  Rows rows = constraint_rows(ctx, br);
  const Eigen::Index E = rows.A.rows();

  VectorXd V(S);
  for (Eigen::Index s = 0; s < S; ++s) V(s) = target.integral(br[std::size_t(s)], br[std::size_t(s) + 1]);

  std::vector<bool> live(std::size_t(S), true);
  if (E > 0) {
    LinearProgram lp = mass_lp(rows, mode);
    if (solve_lp(lp).status != LpStatus::Optimal)
      throw InfeasibleContext("preference context is infeasible: no density satisfies the cumulative constraints");
    // Segments that every feasible density leaves empty.
    for (Eigen::Index s = 0; s < S; ++s) {
      std::fill(lp.objective.begin(), lp.objective.end(), 0.0);
      lp.objective[std::size_t(s)] = 1.0;
      LpResult res = solve_lp(lp);
      if (res.status == LpStatus::Optimal && res.value <= 1e-12) live[std::size_t(s)] = false;
    }
  }
  std::vector<Eigen::Index> idx;
  for (Eigen::Index s = 0; s < S; ++s)
    if (live[std::size_t(s)]) idx.push_back(s);
  if (idx.empty()) throw InfeasibleContext("preference context leaves no segment with positive mass");
  const Eigen::Index L = Eigen::Index(idx.size());
  MatrixXd Al(E, L);
  VectorXd logV(L);
  for (Eigen::Index k = 0; k < L; ++k) {
    Al.col(k) = rows.A.col(idx[std::size_t(k)]);
    logV(k) = std::log(V(idx[std::size_t(k)]));
  }

  // Working set: equality rows always; bound rows too unless in inequality mode.
  std::vector<bool> working(std::size_t(E), true);
  if (mode == BoundMode::Inequality)
    for (Eigen::Index e = 0; e < E; ++e)
      if (rows.is_bound[std::size_t(e)]) working[std::size_t(e)] = false;

  DualResult dual;
  VectorXd lambda_full = VectorXd::Zero(E);
  for (int round = 0; round < 4 * int(E) + 8; ++round) {
    std::vector<Eigen::Index> w;
    for (Eigen::Index e = 0; e < E; ++e)
      if (working[std::size_t(e)]) w.push_back(e);
    MatrixXd Aw(Eigen::Index(w.size()), L);
    VectorXd xw(Eigen::Index(w.size()));
    for (std::size_t k = 0; k < w.size(); ++k) {
      Aw.row(Eigen::Index(k)) = Al.row(w[k]);
      xw(Eigen::Index(k)) = rows.xi(w[k]);
    }
    dual = solve_with_restarts(Aw, xw, logV);
    if (!dual.ok) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", dual.residual);
      throw NumericFailure(std::string("dual Newton iteration did not converge (residual ") + buf + ")");
    }
    lambda_full.setZero();
    for (std::size_t k = 0; k < w.size(); ++k) lambda_full(w[k]) = dual.lambda(Eigen::Index(k));
    if (mode == BoundMode::Equality) break;

    // Inequality bounds need lambda >= 0 on working rows and feasibility
    // on the rest.
    VectorXd values = Al * dual.m;
    Eigen::Index add = -1, drop = -1;
    double worst_violation = 1e-12, worst_multiplier = -1e-12;
    for (Eigen::Index e = 0; e < E; ++e) {
      if (!rows.is_bound[std::size_t(e)]) continue;
      if (!working[std::size_t(e)] && rows.xi(e) - values(e) > worst_violation) {
        worst_violation = rows.xi(e) - values(e);
        add = e;
      }
      if (working[std::size_t(e)] && lambda_full(e) < worst_multiplier) {
        worst_multiplier = lambda_full(e);
        drop = e;
      }
    }
    if (add >= 0)
      working[std::size_t(add)] = true;
    else if (drop >= 0)
      working[std::size_t(drop)] = false;
    else
      break;
    if (round == 4 * int(E) + 7) throw NumericFailure("bound active-set loop did not settle");
  }

  std::vector<double> masses(std::size_t(S), 0.0);
  for (Eigen::Index k = 0; k < L; ++k) masses[std::size_t(idx[std::size_t(k)])] = dual.m(k);
  PiecewiseDensity out(target, br, masses);
  out.multipliers.resize(std::size_t(E));
  for (Eigen::Index e = 0; e < E; ++e) out.multipliers[std::size_t(e)] = -lambda_full(e);
  out.lambda0 = dual.lse - 1.0;
  out.iterations = dual.iterations;
  out.residual = continuous_violation(out, ctx, mode);
  return out;
}

double risk_preference(const PiecewiseDensity& d, double x) {
  const double K = d.max_rank();
  if (!(x > 0.0 && x < K)) throw DomainError("risk preference is defined on the open interval (0, K)");
  for (double b : d.breaks())
    if (std::abs(x - b) <= 1e-12) throw BreakpointError("x = " + std::to_string(x) + " is a breakpoint");
  if (d.scales()[d.segment_of(x)] == 0.0) throw DomainError("density vanishes on this segment");
  // The segment scale is constant, so it drops out of the log-derivative.
  return d.target().eta(x);
}

std::vector<double> cumulative_utilities(const PiecewiseDensity& d, Orientation orientation) {
  const int K = d.max_rank();
  std::vector<double> T(static_cast<std::size_t>(K));
  for (int r = 1; r <= K; ++r) T[std::size_t(r - 1)] = d.tail(double(K - r));
  double total = 0.0;
  for (double t : T) total += t;
  std::vector<double> U(static_cast<std::size_t>(K));
  for (int r = 1; r <= K; ++r) {
    const double t = orientation == Orientation::Literal ? T[std::size_t(r - 1)] : T[std::size_t(K - r)];
    U[std::size_t(r - 1)] = t / total;
  }
  return U;
}

double continuous_violation(const PiecewiseDensity& d, const CellContext& ctx, BoundMode mode) {
  auto F = [&](int r) { return d.cdf(double(r)); };
  double worst = 0.0;
  for (const auto& c : ctx.ratio) worst = std::max(worst, std::abs(F(c.rank) - c.alpha * F(c.rank - 1)));
  for (const auto& c : ctx.absdiff) worst = std::max(worst, std::abs(F(c.rank) - F(c.rank - 1) - c.beta));
  for (const auto& c : ctx.lowerbound) {
    const double gap = F(c.rank) - c.gamma;
    worst = std::max(worst, mode == BoundMode::Equality ? std::abs(gap) : std::max(0.0, -gap));
  }
  return worst;
}

}  // namespace gopa
