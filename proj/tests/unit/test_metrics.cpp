#include <algorithm>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>

#include "gopa/errors.hpp"
#include "gopa/metrics.hpp"
#include "gopa/model.hpp"
#include "gopa/pipeline.hpp"
#include "gopa/random_instances.hpp"
#include "gopa/solver.hpp"
#include "gopa/structures.hpp"
#include "support/fixtures.hpp"

using namespace gopa;

TEST(Psd, HandValues) {
  EXPECT_NEAR(psd({0.2, 0.1}, 0.3), (1.0 / 0.3) * std::sqrt(0.05 * 0.05 * 2), 1e-15);
  EXPECT_NEAR(psd({0.2, 0.1}, 0.3), 0.2357, 5e-5);
  EXPECT_NEAR(psd({0.1, 0.1, 0.1}, 0.3), 0.0, 1e-15);
  EXPECT_THROW(psd({0.0, 0.0}, 0.0), DegenerateError);
  EXPECT_THROW(psd({0.3}, 0.3), ShapeError);
}

TEST(KendallW, PerfectAndReversed) {
  EXPECT_NEAR(kendall_w({{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}}), 1.0, 1e-15);
  EXPECT_NEAR(kendall_w({{1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}}), 0.0, 1e-15);
}

TEST(KendallW, TwoAgreeOneReverses) {
  const std::vector<std::vector<double>> R{{1, 2, 3}, {1, 2, 3}, {3, 2, 1}};
  // Rank sums 5, 6, 7 give S = 2 and W = 12 * 2 / (9 * 24) = 1/9.
  EXPECT_NEAR(kendall_w(R), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(fx::kendall_plain(R), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(fx::kendall_from_spearman(R), 1.0 / 9.0, 1e-15);
}

TEST(KendallW, TieCorrection) {
  // Sums 3.5, 5.5, 9.5, 11.5 -> S = 40; tie terms 6 + 6; W = 480 / (540 - 36).
  EXPECT_NEAR(kendall_w({{1, 2, 3, 4}, {1.5, 1.5, 3, 4}, {1, 2, 3.5, 3.5}}), 20.0 / 21.0, 1e-14);
}

TEST(KendallW, MatchesBruteForceAndIsRelabelInvariant) {
  std::mt19937_64 rng(41);
  for (int n = 0; n < 100; ++n) {
    const std::size_t m = 2 + n % 5, k = 3 + n % 7;
    std::vector<std::vector<double>> R(m);
    for (auto& row : R) {
      std::vector<double> perm(k);
      std::iota(perm.begin(), perm.end(), 1.0);
      std::shuffle(perm.begin(), perm.end(), rng);
      row = perm;
    }
    const double w = kendall_w(R);
    EXPECT_NEAR(w, fx::kendall_plain(R), 1e-13);
    EXPECT_NEAR(w, fx::kendall_from_spearman(R), 1e-13);
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
    // Same item permutation applied to every rater, then raters reordered.
    std::vector<std::size_t> items(k);
    std::iota(items.begin(), items.end(), 0);
    std::shuffle(items.begin(), items.end(), rng);
    auto S = R;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < k; ++b) S[a][b] = R[a][items[b]];
    std::shuffle(S.begin(), S.end(), rng);
    EXPECT_NEAR(kendall_w(S), w, 1e-13);
  }
}

TEST(KendallW, ShapeErrors) {
  EXPECT_THROW(kendall_w({}), ShapeError);
  EXPECT_THROW(kendall_w({{1, 2}, {1}}), ShapeError);
}

TEST(Midranks, DescendingWithTies) {
  EXPECT_EQ(descending_midranks({0.1, 0.5, 0.3}), (std::vector<double>{3, 1, 2}));
  EXPECT_EQ(descending_midranks({0.2, 0.5, 0.2, 0.1}), (std::vector<double>{2.5, 1, 2.5, 4}));
}

TEST(FCdf, ClosedForms) {
  EXPECT_NEAR(f_cdf(1, 1, 1), 0.5, 1e-10);
  EXPECT_NEAR(f_cdf(1, 2, 2), 0.5, 1e-10);
  for (int q = 0; q < 20; ++q) {
    const double x = 0.05 + 0.37 * q;
    EXPECT_NEAR(f_cdf(x, 2, 2), x / (1 + x), 1e-10);
  }
  EXPECT_EQ(f_cdf(0, 3.3, 2.1), 0.0);
  EXPECT_NEAR(f_cdf(1e6, 4.6, 18.4), 1.0, 1e-6);
}

TEST(FCdf, ScipyFixtures) {
  EXPECT_NEAR(f_cdf(0.3, 2.5, 4.6), 0.20524381531493438, 1e-10);
  EXPECT_NEAR(f_cdf(2.0, 4.6, 18.4), 0.8697176076822758, 1e-10);
  EXPECT_NEAR(f_cdf(0.7, 0.5, 0.5), 0.46608247114158374, 1e-10);
  EXPECT_NEAR(f_cdf(5.0, 9.0, 36.0), 0.9997822645223798, 1e-10);
}

TEST(FCdf, MatchesBoostAndIsMonotone) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dof(0.3, 40.0), xs(0.0, 8.0);
  for (int n = 0; n < 300; ++n) {
    const double a = dof(rng), b = dof(rng);
    boost::math::fisher_f_distribution<double> F(a, b);
    std::vector<double> pts(10);
    for (auto& x : pts) x = xs(rng);
    std::sort(pts.begin(), pts.end());
    double prev = 0.0;
    for (double x : pts) {
      const double y = f_cdf(x, a, b);
      EXPECT_NEAR(y, boost::math::cdf(F, x), 1e-10) << a << " " << b << " " << x;
      EXPECT_GE(y, prev - 1e-15);
      prev = y;
    }
  }
}

TEST(IncompleteBeta, MatchesBoost) {
  for (double a : {0.25, 1.0, 2.3, 9.2})
    for (double b : {0.5, 1.7, 18.4})
      for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0})
        EXPECT_NEAR(incomplete_beta(x, a, b), boost::math::ibeta(a, b, x), 1e-12);
  EXPECT_THROW(incomplete_beta(1.2, 1, 1), DomainError);
  EXPECT_THROW(f_cdf(-1, 1, 1), DomainError);
  EXPECT_THROW(f_cdf(1, 0, 1), DomainError);
}

TEST(LocalConfidence, ScipyValues) {
  EXPECT_NEAR(local_confidence(0.5154, 5, 6), 0.989188429992771, 1e-10);
  EXPECT_NEAR(local_confidence(0.2960, 5, 10), 0.8658337492090064, 1e-10);
  EXPECT_NEAR(local_confidence(0.1893, 5, 10), 0.49393009742208105, 1e-10);
  // n - 1 - 2/I <= 0
  EXPECT_TRUE(std::isnan(local_confidence(0.5, 2, 2)));
}

TEST(LocalConfidence, RejectionWiring) {
  // Reject at level alpha iff the upper tail at the transformed statistic is <= alpha.
  const double rho = 0.2960, I = 5, n = 10;
  const double v1 = n - 1 - 2 / I, x = rho * (I - 1) / (1 - rho);
  const double tail = 1.0 - f_cdf(x, v1, (I - 1) * v1);
  EXPECT_NEAR(1.0 - local_confidence(rho, 5, 10), tail, 1e-15);
  EXPECT_FALSE(tail <= 0.05);
  EXPECT_TRUE(tail <= 0.2);
}

TEST(Gcl, Products) {
  EXPECT_DOUBLE_EQ(gcl(1.0, {0.25, 0.75}, {1.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(gcl(0.5, {0.5, 0.5}, {1.0, 0.0}), 0.25);
  EXPECT_THROW(gcl(0.5, {0.5}, {1.0, 0.0}), ShapeError);
  EXPECT_THROW(gcl(0.5, {-0.5, 1.5}, {1.0, 0.0}), DomainError);
}

TEST(Labels, Thresholds) {
  EXPECT_EQ(sensitivity_label(0.8999), "less sensitive");
  EXPECT_EQ(sensitivity_label(0.90), "sensitive");
  EXPECT_EQ(sensitivity_label(0.95), "very sensitive");
  EXPECT_EQ(sensitivity_label(0.99), "high sensitive");
}

TEST(Spearman, Fixtures) {
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {1, 2, 3, 4}), 1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {1, 2, 4, 3}), 0.8, 1e-15);
  EXPECT_THROW(spearman({1, 2}, {1, 2, 3}), ShapeError);
  EXPECT_THROW(spearman({1, 1}, {1, 2}), DegenerateError);
}

TEST(Consensus, AttributePsdIgnoresUtilityStructures) {
  std::mt19937_64 rng(43);
  for (int n = 0; n < 10; ++n) {
    const auto p = random_problem(rng, {4, 3, 3, 6, false});
    std::vector<std::vector<double>> roc, mixed;
    for (std::size_t i = 0; i < p.num_experts(); ++i)
      for (std::size_t j = 0; j < p.num_attributes(); ++j) {
        const int K = p.cell(i, j).max_rank;
        roc.push_back(surrogate_weights(DiscreteStructure{DiscreteKind::RankOrderCentroid}, K));
        mixed.push_back(random_sorted_simplex(rng, K));
      }
    const auto a = consensus(solve_gopa(p, roc));
    const auto b = consensus(solve_gopa(p, mixed));
    if (p.num_experts() < 2) continue;
    EXPECT_LE(fx::linf(a.psd_attribute, b.psd_attribute), 1e-12);
  }
}

TEST(Consensus, CaseStudyStatisticsInRange) {
  const auto r = run_solve(load_input(std::string(GOPA_DATA_DIR) + "/case_study.json"));
  const auto& c = r.consensus;
  ASSERT_EQ(c.kendall_attribute.size(), 6u);
  for (double x : c.kendall_attribute) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
  for (double x : c.lcl_attribute) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
  EXPECT_GE(c.gcl, 0.0);
  EXPECT_LE(c.gcl, 1.0);
  EXPECT_EQ(c.gcl_label, sensitivity_label(c.gcl));
  double expected = 0.0;
  for (std::size_t j = 0; j < 6; ++j) expected += r.solution.totals.attributes[j] * c.lcl_attribute[j];
  EXPECT_NEAR(c.gcl, c.lcl_attributes * expected, 1e-15);
}

TEST(Consensus, SingleExpertMarksUndefined) {
  const auto s = solve_opa(fx::ordered_problem({1}, 3, 4));
  const auto c = consensus(s);
  EXPECT_TRUE(std::isnan(c.kendall_attributes) || std::isnan(c.lcl_attributes));
}
