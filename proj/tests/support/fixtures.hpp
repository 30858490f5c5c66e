#pragma once

// Small builders and brute-force oracles shared by the unit and acceptance
// tests. Nothing here calls the code under test except the constructors.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gopa/model.hpp"

namespace gopa::fx {

inline double harmonic(int n) {
  double h = 0.0;
  for (int k = 1; k <= n; ++k) h += 1.0 / k;
  return h;
}

// Gap-free problem: expert i has rank expert_ranks[i], every expert ranks the
// attributes 1..J in order, and alternative k has rank k+1 in every cell.
inline RankingProblem ordered_problem(const std::vector<int>& expert_ranks, int J, int K) {
  std::vector<Expert> experts;
  for (std::size_t i = 0; i < expert_ranks.size(); ++i) experts.push_back({"E" + std::to_string(i + 1), expert_ranks[i]});
  std::vector<std::string> attrs, alts;
  for (int j = 0; j < J; ++j) attrs.push_back("C" + std::to_string(j + 1));
  for (int k = 0; k < K; ++k) alts.push_back("A" + std::to_string(k + 1));
  std::vector<int> arow(static_cast<std::size_t>(J));
  std::iota(arow.begin(), arow.end(), 1);
  std::vector<std::optional<int>> cell;
  for (int k = 1; k <= K; ++k) cell.push_back(k);
  const std::size_t I = expert_ranks.size();
  std::vector<std::vector<int>> attr_ranks(I, arow);
  std::vector<std::vector<std::vector<std::optional<int>>>> alt_ranks(
      I, std::vector<std::vector<std::optional<int>>>(static_cast<std::size_t>(J), cell));
  return RankingProblem::create(std::move(experts), std::move(attrs), std::move(alts), std::move(attr_ranks),
                                std::move(alt_ranks));
}

// One expert, one attribute, the given alternative ranks.
inline RankingProblem single_cell(const std::vector<std::optional<int>>& ranks) {
  std::vector<std::string> alts;
  for (std::size_t k = 0; k < ranks.size(); ++k) alts.push_back("A" + std::to_string(k + 1));
  return RankingProblem::create({{"E1", 1}}, {"C1"}, std::move(alts), {{1}}, {{ranks}});
}

// Kendall's W straight from the rank-sum definition, no tie correction.
inline double kendall_plain(const std::vector<std::vector<double>>& R) {
  const double m = double(R.size()), n = double(R[0].size());
  std::vector<double> sums(R[0].size(), 0.0);
  for (const auto& row : R)
    for (std::size_t k = 0; k < row.size(); ++k) sums[k] += row[k];
  const double mean = m * (n + 1.0) / 2.0;
  double S = 0.0;
  for (double s : sums) S += (s - mean) * (s - mean);
  return 12.0 * S / (m * m * (n * n * n - n));
}

// Average pairwise Spearman identity: W = ((m-1) rho_avg + 1) / m.
inline double kendall_from_spearman(const std::vector<std::vector<double>>& R) {
  const std::size_t m = R.size();
  const double n = double(R[0].size());
  double total = 0.0;
  int pairs = 0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < R[a].size(); ++k) d2 += (R[a][k] - R[b][k]) * (R[a][k] - R[b][k]);
      total += 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
      ++pairs;
    }
  return ((double(m) - 1.0) * (total / pairs) + 1.0) / double(m);
}

inline double linf(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return a.size() == b.size() ? d : INFINITY;
}

inline double kl(const std::vector<double>& u, const std::vector<double>& target) {
  double total = 0.0;
  for (double v : target) total += v;
  double f = 0.0;
  for (std::size_t r = 0; r < u.size(); ++r)
    if (u[r] > 0.0) f += u[r] * std::log(u[r] / (target[r] / total));
  return f;
}

struct GridResult {
  bool found = false;
  double best = INFINITY;
  std::vector<double> argmin;
  long evaluated = 0;
};

// Exhaustive grid search for min KL(u, target) over the discrete preference
// polytope. Ranks tied to their successor by a ratio or absolute-difference
// equality form a block u_r = m_r t + c_r in the block's bottom value t. One
// block parameter is fixed by the unit sum; every other one runs over the
// grid {0, h, 2h, ...} in weak order, so equalities hold exactly at every
// visited point.
inline GridResult grid_oracle(const std::vector<double>& target, const CellContext& ctx, int K, double h = 1e-3) {
  struct Block {
    int top = 0, bottom = 0;  // 0-based ranks
    std::vector<double> m, c;  // per member, top..bottom
    bool forced = false;
    double value = 0.0;
    bool broken = false;
  };
  auto ratio_at = [&](int r) -> const RatioConstraint* {
    for (const auto& x : ctx.ratio)
      if (x.rank == r + 1) return &x;
    return nullptr;
  };
  auto diff_at = [&](int r) -> const AbsDiffConstraint* {
    for (const auto& x : ctx.absdiff)
      if (x.rank == r + 1) return &x;
    return nullptr;
  };

  std::vector<Block> blocks;
  for (int r = 0; r < K;) {
    Block b;
    b.top = r;
    int s = r;
    while (s < K - 1 && (ratio_at(s) || diff_at(s))) ++s;
    b.bottom = s;
    const int n = s - r + 1;
    b.m.assign(static_cast<std::size_t>(n), 0.0);
    b.c.assign(static_cast<std::size_t>(n), 0.0);
    b.m[n - 1] = 1.0;
    for (int q = s - 1; q >= r; --q) {
      const std::size_t at = std::size_t(q - r);
      const auto* ra = ratio_at(q);
      const auto* di = diff_at(q);
      if (ra && di) {
        // alpha u = u + beta pins the successor.
        if (std::abs(ra->alpha - 1.0) < 1e-15) {
          if (std::abs(di->beta) > 1e-15) b.broken = true;
        } else {
          const double pinned = di->beta / (ra->alpha - 1.0);
          const double t = (pinned - b.c[at + 1]) / b.m[at + 1];
          if (b.forced && std::abs(t - b.value) > 1e-12) b.broken = true;
          b.forced = true;
          b.value = t;
        }
      }
      if (ra) {
        b.m[at] = ra->alpha * b.m[at + 1];
        b.c[at] = ra->alpha * b.c[at + 1];
      } else {
        b.m[at] = b.m[at + 1];
        b.c[at] = b.c[at + 1] + di->beta;
      }
    }
    blocks.push_back(std::move(b));
    r = s + 1;
  }

  GridResult out;
  for (const auto& b : blocks)
    if (b.broken) return out;

  std::size_t det = blocks.size();
  for (std::size_t k = 0; k < blocks.size(); ++k)
    if (!blocks[k].forced) {
      det = k;
      break;
    }

  std::vector<double> t(blocks.size(), 0.0);
  std::vector<double> u(static_cast<std::size_t>(K), 0.0);
  auto block_sum = [&](std::size_t k, double x) {
    double s = 0.0;
    for (std::size_t q = 0; q < blocks[k].m.size(); ++q) s += blocks[k].m[q] * x + blocks[k].c[q];
    return s;
  };
  auto evaluate = [&]() {
    for (std::size_t k = 0; k < blocks.size(); ++k)
      for (std::size_t q = 0; q < blocks[k].m.size(); ++q)
        u[std::size_t(blocks[k].top) + q] = blocks[k].m[q] * t[k] + blocks[k].c[q];
    ++out.evaluated;
    for (int r = 0; r < K; ++r) {
      if (u[r] < -1e-12) return;
      if (r + 1 < K && u[r] < u[r + 1] - 1e-12) return;
    }
    for (const auto& lb : ctx.lowerbound)
      if (u[lb.rank - 1] < std::max(lb.gamma, 0.0) - 1e-12) return;
    const double f = kl(u, target);
    if (f < out.best) {
      out.best = f;
      out.argmin = u;
      out.found = true;
    }
  };

  // Enumerate blocks from the bottom up.
  auto recurse = [&](auto&& self, int k, double used, double floor) -> void {
    if (k < 0) {
      if (det < blocks.size()) {
        double M = 0.0, C = 0.0;
        for (std::size_t q = 0; q < blocks[det].m.size(); ++q) {
          M += blocks[det].m[q];
          C += blocks[det].c[q];
        }
        t[det] = (1.0 - used - C) / M;
      } else if (std::abs(used - 1.0) > 1e-12) {
        return;
      }
      evaluate();
      return;
    }
    const std::size_t kb = std::size_t(k);
    if (kb == det) {
      self(self, k - 1, used, 0.0);
      return;
    }
    if (blocks[kb].forced) {
      t[kb] = blocks[kb].value;
      const double s = block_sum(kb, t[kb]);
      if (used + s <= 1.0 + 1e-12) self(self, k - 1, used + s, blocks[kb].m[0] * t[kb] + blocks[kb].c[0]);
      return;
    }
    for (long step = long(std::ceil(floor / h - 1e-9)); ; ++step) {
      const double x = double(step) * h;
      const double s = block_sum(kb, x);
      if (used + s > 1.0 + 1e-12) break;
      t[kb] = x;
      self(self, k - 1, used + s, blocks[kb].m[0] * x + blocks[kb].c[0]);
    }
  };
  recurse(recurse, int(blocks.size()) - 1, 0.0, 0.0);
  return out;
}

}  // namespace gopa::fx
