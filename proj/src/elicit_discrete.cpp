#include "gopa/elicit_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gopa/errors.hpp"
#include "gopa/lpcheck.hpp"
#include "gopa/nnls.hpp"

namespace gopa {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kImplicitTol = 1e-10;
constexpr double kActiveSlack = 1e-6;

std::vector<double> to_std(const VectorXd& v) { return {v.data(), v.data() + v.size()}; }

VectorXd normalized(const std::vector<double>& target, int K) {
  if (target.size() != std::size_t(K)) throw DimensionError("target length differs from K");
  VectorXd v(K);
  double total = 0.0;
  for (int r = 0; r < K; ++r) {
    if (!(target[std::size_t(r)] > 0.0) || !std::isfinite(target[std::size_t(r)]))
      throw DomainError("target utilities must be positive and finite");
    v(r) = target[std::size_t(r)];
    total += v(r);
  }
  return v / total;
}

MatrixXd null_space(const MatrixXd& E, int n) {
  if (E.rows() == 0) return MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<MatrixXd> svd(E, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

MatrixXd stack(const MatrixXd& top, const MatrixXd& bottom) {
  MatrixXd out(top.rows() + bottom.rows(), std::max(top.cols(), bottom.cols()));
  if (top.rows()) out.topRows(top.rows()) = top;
  if (bottom.rows()) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

VectorXd stack(const VectorXd& top, const VectorXd& bottom) {
  VectorXd out(top.size() + bottom.size());
  out << top, bottom;
  return out;
}

MatrixXd select_rows(const MatrixXd& M, const std::vector<Eigen::Index>& rows) {
  MatrixXd out(Eigen::Index(rows.size()), M.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(Eigen::Index(k)) = M.row(rows[k]);
  return out;
}

VectorXd select(const VectorXd& v, const std::vector<Eigen::Index>& idx) {
  VectorXd out(Eigen::Index(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(Eigen::Index(k)) = v(idx[k]);
  return out;
}

struct FeasiblePoint {
  double margin;
  VectorXd u;
};

// max t s.t. A u = b, G_k u - t >= h_k for k in `rows`, t <= 1.
FeasiblePoint feasibility_lp(const MatrixXd& A, const VectorXd& b, const MatrixXd& G, const VectorXd& h,
                             const std::vector<Eigen::Index>& rows) {
  const Eigen::Index n = A.cols();
  LinearProgram lp;
  lp.objective.assign(std::size_t(n + 1), 0.0);
  lp.objective[std::size_t(n)] = 1.0;
  lp.free_vars.assign(std::size_t(n + 1), true);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    std::vector<double> row(std::size_t(n + 1), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) row[std::size_t(j)] = A(i, j);
    lp.add_row(std::move(row), Sense::Equal, b(i));
  }
  for (Eigen::Index k : rows) {
    std::vector<double> row(std::size_t(n + 1), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) row[std::size_t(j)] = G(k, j);
    row[std::size_t(n)] = -1.0;
    lp.add_row(std::move(row), Sense::GreaterEq, h(k));
  }
  std::vector<double> cap(std::size_t(n + 1), 0.0);
  cap[std::size_t(n)] = 1.0;
  lp.add_row(std::move(cap), Sense::LessEq, 1.0);
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) return {-std::numeric_limits<double>::infinity(), VectorXd()};
  VectorXd u(n);
  for (Eigen::Index j = 0; j < n; ++j) u(j) = res.x[std::size_t(j)];
  return {res.value, u};
}

// max g_k u - h_k over the polytope.
double max_slack(const DiscreteSystem& sys, Eigen::Index k) {
  const Eigen::Index n = sys.A.cols();
  LinearProgram lp;
  lp.objective.assign(std::size_t(n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) lp.objective[std::size_t(j)] = sys.G(k, j);
  lp.free_vars.assign(std::size_t(n), true);
  for (Eigen::Index i = 0; i < sys.A.rows(); ++i) {
    std::vector<double> row(std::size_t(n), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) row[std::size_t(j)] = sys.A(i, j);
    lp.add_row(std::move(row), Sense::Equal, sys.b(i));
  }
  for (Eigen::Index r = 0; r < sys.G.rows(); ++r) {
    std::vector<double> row(std::size_t(n), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) row[std::size_t(j)] = sys.G(r, j);
    lp.add_row(std::move(row), Sense::GreaterEq, sys.h(r));
  }
  LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Unbounded) return std::numeric_limits<double>::infinity();
  if (res.status != LpStatus::Optimal) return -std::numeric_limits<double>::infinity();
  return res.value - sys.h(k);
}

// Objective restricted to the coordinates that can move.
struct Reduced {
  VectorXd v;
  std::vector<Eigen::Index> free;

  double value(const VectorXd& u) const {
    double f = 0.0;
    for (Eigen::Index r : free) f += u(r) * std::log(u(r) / v(r));
    return f;
  }
  VectorXd gradient(const VectorXd& u) const {
    VectorXd g = VectorXd::Zero(u.size());
    for (Eigen::Index r : free) g(r) = std::log(u(r) / v(r)) + 1.0;
    return g;
  }
  VectorXd hessian_diag(const VectorXd& u) const {
    VectorXd d = VectorXd::Zero(u.size());
    for (Eigen::Index r : free) d(r) = 1.0 / u(r);
    return d;
  }
  bool positive(const VectorXd& u) const {
    for (Eigen::Index r : free)
      if (!(u(r) > 0.0)) return false;
    return true;
  }
};

std::vector<Eigen::Index> free_coordinates(const MatrixXd& N) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index r = 0; r < N.rows(); ++r)
    if (N.cols() > 0 && N.row(r).norm() > 1e-12) out.push_back(r);
  return out;
}

// Damped Newton on f(u) - mu sum ln(G_k u - h_k) over u = u0 + N y. With
// mu = 0 and no rows this is the plain equality-constrained problem.
bool newton(const Reduced& obj, const MatrixXd& N, const MatrixXd& G, const VectorXd& h, double mu, VectorXd& u,
            int max_iter = 100) {
  if (N.cols() == 0) return true;
  auto phi = [&](const VectorXd& x, bool& ok) {
    ok = obj.positive(x);
    if (!ok) return 0.0;
    double f = obj.value(x);
    if (mu > 0.0) {
      VectorXd s = G * x - h;
      for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (!(s(k) > 0.0)) {
          ok = false;
          return 0.0;
        }
        f -= mu * std::log(s(k));
      }
    }
    return f;
  };

  for (int it = 0; it < max_iter; ++it) {
    VectorXd g = obj.gradient(u);
    MatrixXd H = obj.hessian_diag(u).asDiagonal();
    if (mu > 0.0 && G.rows() > 0) {
      VectorXd s = G * u - h;
      VectorXd inv = s.cwiseInverse();
      g -= mu * G.transpose() * inv;
      H += mu * G.transpose() * inv.cwiseAbs2().asDiagonal() * G;
    }
    VectorXd gr = N.transpose() * g;
    MatrixXd Hr = N.transpose() * H * N;
    VectorXd dy = Hr.ldlt().solve(-gr);
    if (!dy.allFinite()) return false;
    const double decrement = -gr.dot(dy);
    if (decrement <= 1e-26 || gr.lpNorm<Eigen::Infinity>() <= 1e-15) return true;
    VectorXd d = N * dy;

    bool ok = false;
    const double f0 = phi(u, ok);
    double step = 1.0;
    // Stay strictly inside.
    for (Eigen::Index r : obj.free)
      if (d(r) < 0.0) step = std::min(step, -0.99 * u(r) / d(r));
    if (mu > 0.0 && G.rows() > 0) {
      VectorXd s = G * u - h, ds = G * d;
      for (Eigen::Index k = 0; k < s.size(); ++k)
        if (ds(k) < 0.0) step = std::min(step, -0.99 * s(k) / ds(k));
    }
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      VectorXd trial = u + step * d;
      const double f1 = phi(trial, ok);
      if (ok && f1 <= f0 - 0.25 * step * decrement) {
        // A step lost in rounding means the decrement is noise.
        if ((trial - u).lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + u.lpNorm<Eigen::Infinity>()))
          return decrement <= 1e-14;
        u = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Roundoff floor: f cannot resolve a decrease this small.
      return decrement <= 1e-14;
    }
  }
  return false;
}

VectorXd project_affine(const MatrixXd& E, const VectorXd& e, const VectorXd& u) {
  if (E.rows() == 0) return u;
  VectorXd res = E * u - e;
  return u - E.completeOrthogonalDecomposition().solve(res);
}

// Multiplier fit for min f s.t. E u = e, G_act u >= h_act; returns the residual
// of the stationarity equation restricted to free coordinates.
double stationarity_residual(const VectorXd& grad, const MatrixXd& E, const MatrixXd& Gact,
                             const std::vector<Eigen::Index>& free, VectorXd* multipliers = nullptr) {
  const Eigen::Index nf = Eigen::Index(free.size());
  if (nf == 0) return 0.0;
  MatrixXd Ef(E.rows(), nf), Gf(Gact.rows(), nf);
  VectorXd g(nf);
  for (Eigen::Index c = 0; c < nf; ++c) {
    if (E.rows()) Ef.col(c) = E.col(free[std::size_t(c)]);
    if (Gact.rows()) Gf.col(c) = Gact.col(free[std::size_t(c)]);
    g(c) = grad(free[std::size_t(c)]);
  }
  MatrixXd P = MatrixXd::Identity(nf, nf);
  if (Ef.rows() > 0) {
    Eigen::JacobiSVD<MatrixXd> svd(Ef.transpose(), Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) > cut) ++rank;
    MatrixXd Q = svd.matrixU().leftCols(rank);
    P -= Q * Q.transpose();
  }
  VectorXd r0 = P * g;
  if (Gf.rows() == 0) return r0.lpNorm<Eigen::Infinity>();
  MatrixXd M = P * Gf.transpose();
  VectorXd lambda = nnls(M, r0);
  if (multipliers) *multipliers = lambda;
  return (r0 - M * lambda).lpNorm<Eigen::Infinity>();
}

VectorXd solve_kl(const VectorXd& v, const CellContext& ctx, int K) {
  DiscreteSystem sys = discrete_system(ctx, K);
  const Eigen::Index n = K;

  // Stage 1: feasibility and implicit equalities.
  std::vector<Eigen::Index> rows(std::size_t(sys.G.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  FeasiblePoint fp = feasibility_lp(sys.A, sys.b, sys.G, sys.h, rows);
  if (!std::isfinite(fp.margin) || fp.margin < -kImplicitTol)
    throw InfeasibleContext("preference context is infeasible: no utility vector satisfies all constraints");

  MatrixXd E = sys.A;
  VectorXd e = sys.b;
  if (fp.margin <= kImplicitTol) {
    std::vector<Eigen::Index> implicit, loose;
    for (Eigen::Index k = 0; k < sys.G.rows(); ++k) (max_slack(sys, k) <= kImplicitTol ? implicit : loose).push_back(k);
    E = stack(E, select_rows(sys.G, implicit));
    e = stack(e, select(sys.h, implicit));
    rows = loose;
    fp = feasibility_lp(E, e, sys.G, sys.h, rows);
    if (!std::isfinite(fp.margin) || (!rows.empty() && fp.margin <= kImplicitTol))
      throw NumericFailure("could not find a relative interior point of the preference polytope");
  }

  VectorXd u = fp.u;
  MatrixXd N = null_space(E, int(n));
  Reduced obj{v, free_coordinates(N)};
  {
    std::vector<bool> is_free(std::size_t(n), false);
    for (Eigen::Index r : obj.free) is_free[std::size_t(r)] = true;
    for (Eigen::Index r = 0; r < n; ++r)
      if (!is_free[std::size_t(r)] && std::abs(u(r)) < 1e-13) u(r) = 0.0;
  }

  // Inequalities that can still move.
  std::vector<Eigen::Index> moving;
  for (Eigen::Index k : rows)
    if ((sys.G.row(k) * N).norm() > 1e-12) moving.push_back(k);
  MatrixXd G = select_rows(sys.G, moving);
  VectorXd h = select(sys.h, moving);

  // Stage 2: barrier path.
  for (double mu = 1.0; mu >= 1e-12 * 0.999; mu *= 0.1) {
    if (!newton(obj, N, G, h, moving.empty() ? 0.0 : mu, u))
      throw NumericFailure("barrier Newton iteration did not converge");
    if (moving.empty()) break;
  }
  if (moving.empty()) return u;

  // Stage 3: active-set polish on the barrier point.
  VectorXd best = u;
  std::vector<Eigen::Index> active;
  VectorXd s = G * u - h;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) < kActiveSlack) active.push_back(k);

  for (int round = 0; round < 4 * K + 4; ++round) {
    MatrixXd Ea = stack(E, select_rows(G, active));
    VectorXd ea = stack(e, select(h, active));
    VectorXd x = project_affine(Ea, ea, u);
    MatrixXd Na = null_space(Ea, int(n));
    Reduced red{v, free_coordinates(Na)};
    std::vector<bool> is_free(std::size_t(n), false);
    for (Eigen::Index r : red.free) is_free[std::size_t(r)] = true;
    for (Eigen::Index r = 0; r < n; ++r)
      if (!is_free[std::size_t(r)] && std::abs(x(r)) < 1e-13) x(r) = 0.0;
    if (!red.positive(x) || !newton(red, Na, MatrixXd(), VectorXd(), 0.0, x)) break;

    // Blocking constraints among the inactive rows.
    VectorXd sx = G * x - h;
    double step = 1.0;
    Eigen::Index block = -1;
    for (Eigen::Index k = 0; k < sx.size(); ++k) {
      if (std::find(active.begin(), active.end(), k) != active.end()) continue;
      if (sx(k) < -1e-13) {
        const double su = G.row(k) * u - h(k);
        const double t = su / (su - sx(k));
        if (t < step) {
          step = t;
          block = k;
        }
      }
    }
    if (block >= 0) {
      u = u + step * (x - u);
      active.push_back(block);
      continue;
    }

    const double res = stationarity_residual(red.gradient(x), E, select_rows(G, active), red.free);
    if (res <= 1e-10) return x;

    // Release the row whose least-squares multiplier is most negative.
    const Eigen::Index nf = Eigen::Index(red.free.size());
    MatrixXd C(nf, Ea.rows());
    VectorXd g(nf);
    VectorXd grad = red.gradient(x);
    for (Eigen::Index c = 0; c < nf; ++c) {
      C.row(c) = Ea.col(red.free[std::size_t(c)]).transpose();
      g(c) = grad(red.free[std::size_t(c)]);
    }
    VectorXd mult = C.completeOrthogonalDecomposition().solve(g);
    Eigen::Index worst = -1;
    double most = -1e-12;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const double m = mult(E.rows() + Eigen::Index(a));
      if (m < most) {
        most = m;
        worst = Eigen::Index(a);
      }
    }
    if (worst < 0) break;
    u = x;
    active.erase(active.begin() + worst);
  }
  return best;
}

void finish(VectorXd& u) {
  for (Eigen::Index r = 0; r < u.size(); ++r)
    if (u(r) < 0.0 && u(r) > -1e-13) u(r) = 0.0;
}

}  // namespace

DiscreteSystem discrete_system(const CellContext& ctx, int K) {
  if (K < 1) throw DomainError("K must be >= 1");
  DiscreteSystem sys;
  const Eigen::Index n = K;
  const Eigen::Index neq = Eigen::Index(ctx.ratio.size() + ctx.absdiff.size()) + 1;
  sys.A = MatrixXd::Zero(neq, n);
  sys.b = VectorXd::Zero(neq);
  Eigen::Index row = 0;
  for (const auto& c : ctx.ratio) {
    if (c.rank < 1 || c.rank > K - 1) throw ContextRangeError("ratio", "rank out of range");
    sys.A(row, c.rank - 1) = 1.0;
    sys.A(row, c.rank) = -c.alpha;
    ++row;
  }
  for (const auto& c : ctx.absdiff) {
    if (c.rank < 1 || c.rank > K - 1) throw ContextRangeError("absdiff", "rank out of range");
    sys.A(row, c.rank - 1) = 1.0;
    sys.A(row, c.rank) = -1.0;
    sys.b(row) = c.beta;
    ++row;
  }
  sys.A.row(row).setOnes();
  sys.b(row) = 1.0;

  sys.G = MatrixXd::Zero(2 * n - 1, n);
  sys.h = VectorXd::Zero(2 * n - 1);
  for (Eigen::Index r = 0; r + 1 < n; ++r) {
    sys.G(r, r) = 1.0;
    sys.G(r, r + 1) = -1.0;
  }
  for (Eigen::Index r = 0; r < n; ++r) sys.G(n - 1 + r, r) = 1.0;
  for (const auto& c : ctx.lowerbound) {
    if (c.rank < 1 || c.rank > K) throw ContextRangeError("lowerbound", "rank out of range");
    sys.h(n - 1 + c.rank - 1) = std::max(sys.h(n - 1 + c.rank - 1), std::max(c.gamma, 0.0));
  }
  return sys;
}

std::vector<double> elicit_discrete(const std::vector<double>& target, const CellContext& ctx, int K) {
  VectorXd v = normalized(target, K);
  // The target itself is the unique minimizer whenever it is feasible.
  if (constraint_violation(to_std(v), ctx) <= 1e-14) return to_std(v);
  VectorXd u = solve_kl(v, ctx, K);
  finish(u);
  return to_std(u);
}

std::vector<double> entropy_max_discrete(const CellContext& ctx, int K) {
  if (K < 1) throw DomainError("K must be >= 1");
  // Unnormalized reference v = 1: minimizes sum u ln u directly.
  VectorXd ones = VectorXd::Ones(K);
  VectorXd u = solve_kl(ones, ctx, K);
  finish(u);
  return to_std(u);
}

double kkt_residual_discrete(const std::vector<double>& u, const std::vector<double>& target, const CellContext& ctx) {
  const int K = int(u.size());
  DiscreteSystem sys = discrete_system(ctx, K);
  VectorXd v = normalized(target, K);
  VectorXd x = Eigen::Map<const VectorXd>(u.data(), K);
  std::vector<Eigen::Index> free;
  for (Eigen::Index r = 0; r < K; ++r)
    if (x(r) > 1e-14) free.push_back(r);
  VectorXd grad = VectorXd::Zero(K);
  for (Eigen::Index r : free) grad(r) = std::log(x(r) / v(r)) + 1.0;
  std::vector<Eigen::Index> active;
  VectorXd s = sys.G * x - sys.h;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) <= 1e-9) active.push_back(k);
  return stationarity_residual(grad, sys.A, select_rows(sys.G, active), free);
}

double kl_objective(const std::vector<double>& u, const std::vector<double>& target) {
  VectorXd v = normalized(target, int(target.size()));
  if (u.size() != target.size()) throw DimensionError("utility and target lengths differ");
  double f = 0.0;
  for (std::size_t r = 0; r < u.size(); ++r)
    if (u[r] > 0.0) f += u[r] * std::log(u[r] / v(Eigen::Index(r)));
  return f;
}

double constraint_violation(const std::vector<double>& u, const CellContext& ctx) {
  const int K = int(u.size());
  DiscreteSystem sys = discrete_system(ctx, K);
  VectorXd x = Eigen::Map<const VectorXd>(u.data(), K);
  double worst = 0.0;
  if (sys.A.rows()) worst = (sys.A * x - sys.b).lpNorm<Eigen::Infinity>();
  VectorXd s = sys.G * x - sys.h;
  for (Eigen::Index k = 0; k < s.size(); ++k) worst = std::max(worst, -s(k));
  return worst;
}

}  // namespace gopa
