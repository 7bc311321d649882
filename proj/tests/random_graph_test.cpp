#include "netpool/random_graph.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "netpool/error.hpp"
#include "netpool/graph.hpp"
#include "oracles.hpp"

namespace netpool {
namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(ExponentialIntegralTest, ReferenceValues) {
  const double ei1 = testing::ei_series_naive(1.0, 60);
  EXPECT_NEAR(ei1, 1.8951178163, 1e-9);
  EXPECT_NEAR(exponential_integral(1.0), 1.8951178163, 1e-9);
  EXPECT_LT(rel_err(exponential_integral(1.0), ei1), 1e-12);

  const double ei5 = testing::ei_series_naive(5.0, 60);
  EXPECT_NEAR(ei5, 40.185275, 1e-6);
  EXPECT_LT(rel_err(exponential_integral(5.0), ei5), 1e-12);

  const double two_term = kEulerGamma + std::log(0.01) + 0.01;
  EXPECT_NEAR(two_term, -4.0179, 1e-4);
  EXPECT_NEAR(exponential_integral(0.01), two_term, 1e-4);

  EXPECT_THROW(exponential_integral(0.0), DomainError);
  EXPECT_THROW(exponential_integral(-1.0), DomainError);
}

TEST(ExponentialIntegralTest, AgreesWithBoostAcrossRange) {
  for (double x = 0.05; x < 120.0; x *= 1.17) {
    EXPECT_LT(rel_err(exponential_integral(x), boost::math::expint(x)), 1e-10) << "x=" << x;
  }
}

TEST(ExponentialIntegralTest, BranchesAgreeAtCrossover) {
  // Long-double series oracle vs the implementation, which switches to the
  // asymptotic branch above 40.
  for (double x = 35.0; x <= 45.0; x += 0.25) {
    EXPECT_LT(rel_err(exponential_integral(x), testing::ei_series_naive(x, 400)), 1e-8) << "x=" << x;
  }
  EXPECT_LT(rel_err(exponential_integral(std::nextafter(kEiSeriesCrossover, 100.0)),
                    exponential_integral(kEiSeriesCrossover)),
            1e-8);
}

TEST(ExponentialIntegralTest, ScaledFormStaysFinite) {
  EXPECT_TRUE(std::isfinite(scaled_exponential_integral(2000.0)));
  EXPECT_NEAR(scaled_exponential_integral(2000.0) * 2000.0, 1.0, 1e-3);
  EXPECT_LT(rel_err(scaled_exponential_integral(3.0), std::exp(-3.0) * boost::math::expint(3.0)), 1e-12);
}

TEST(KFactorTest, MatchesPoissonConditionalExpectation) {
  for (double lambda : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
    EXPECT_LT(rel_err(k_factor(lambda), testing::poisson_conditional_recip(lambda)), 1e-8) << lambda;
  }
  for (double lambda : {0.05, 0.2, 39.0, 41.0, 75.0, 200.0}) {
    EXPECT_LT(rel_err(k_factor(lambda), testing::poisson_conditional_recip(lambda)), 1e-8) << lambda;
  }
}

TEST(KFactorTest, ReferenceValues) {
  const double k1 = testing::poisson_conditional_recip(1.0);
  const double k5 = testing::poisson_conditional_recip(5.0);
  const double k50 = testing::poisson_conditional_recip(50.0);
  EXPECT_NEAR(k1, 0.76699, 1e-5);
  EXPECT_NEAR(k5, 0.25777, 1e-5);
  EXPECT_NEAR(k_factor(1.0), k1, 1e-12);
  EXPECT_NEAR(k_factor(5.0), k5, 1e-12);
  // E[1/d | d > 0] sits above 1/<d> (Jensen), so K <d> approaches 1 from above.
  EXPECT_NEAR(k_factor(50.0) * 50.0, k50 * 50.0, 1e-10);
  EXPECT_GT(k_factor(50.0) * 50.0, 1.0);
  EXPECT_LT(k_factor(50.0) * 50.0, 1.03);
  EXPECT_NEAR(k_factor(2000.0) * 2000.0, 1.0, 1e-3);
  EXPECT_THROW(k_factor(0.0), DomainError);
}

TEST(KFactorTest, TimesOnePlusDegree) {
  EXPECT_NEAR(k_times_one_plus_d(1.0), 2.0 * testing::poisson_conditional_recip(1.0), 1e-12);
  EXPECT_NEAR(k_times_one_plus_d(1.0), 1.53397, 1e-5);
  EXPECT_NEAR(k_times_one_plus_d(5.0), 6.0 * testing::poisson_conditional_recip(5.0), 1e-12);
  EXPECT_NEAR(k_times_one_plus_d(5.0), 1.5466, 1e-4);
  EXPECT_NEAR(k_times_one_plus_d(100.0), 1.0, 0.03);
  EXPECT_THROW(k_times_one_plus_d(-1.0), DomainError);
}

TEST(NeighborDegreeTest, ReciprocalExpectations) {
  EXPECT_DOUBLE_EQ(expected_recip_neighbor_degree(5.0), 0.2);
  EXPECT_DOUBLE_EQ(expected_recip_neighbor_degree(1.0), 1.0);
  EXPECT_THROW(expected_recip_neighbor_degree(0.0), DomainError);
  EXPECT_NEAR(expected_recip_neighbor_degree_sq(5.0), testing::poisson_conditional_recip(5.0) / 5.0, 1e-12);
  EXPECT_NEAR(expected_recip_neighbor_degree_sq(5.0), 0.051554, 1e-6);
  EXPECT_NEAR(expected_recip_neighbor_degree_sq(1.0), 0.76699, 1e-5);
}

struct EdgeEndStats {
  double mean_recip = 0.0;
  double se_recip = 0.0;
  double mean_recip_sq = 0.0;
  double se_recip_sq = 0.0;
};

// Samples edges uniformly from Poisson graphs and records 1/d and 1/d^2 of
// a uniformly chosen end, d counted without the self-loop.
EdgeEndStats sample_edge_ends(std::size_t n, double p, int graphs, int edges_per_graph, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<double> recip;
  std::vector<double> recip_sq;
  for (int gi = 0; gi < graphs; ++gi) {
    const Graph g = sample_poisson_graph({n, p}, seed * 1000 + static_cast<std::uint64_t>(gi));
    const auto edges = g.edges();
    if (edges.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
    std::bernoulli_distribution side(0.5);
    for (int k = 0; k < edges_per_graph; ++k) {
      const auto [a, b] = edges[pick(eng)];
      const double d = static_cast<double>(g.degree(side(eng) ? a : b) - 1);
      recip.push_back(1.0 / d);
      recip_sq.push_back(1.0 / (d * d));
    }
  }
  auto moments = [](const std::vector<double>& v, double& mean, double& se) {
    double s = 0, s2 = 0;
    for (double x : v) {
      s += x;
      s2 += x * x;
    }
    const double m = static_cast<double>(v.size());
    mean = s / m;
    se = std::sqrt((s2 / m - mean * mean) / (m - 1));
  };
  EdgeEndStats out;
  moments(recip, out.mean_recip, out.se_recip);
  moments(recip_sq, out.mean_recip_sq, out.se_recip_sq);
  return out;
}

TEST(NeighborDegreeTest, EdgeSamplingMonteCarlo) {
  const std::size_t n = 2000;
  const double p = 5.0 / 1999.0;
  const EdgeEndStats s = sample_edge_ends(n, p, 4, 1000, 17);
  EXPECT_NEAR(s.mean_recip, expected_recip_neighbor_degree(5.0), 3.0 * s.se_recip);
  EXPECT_NEAR(s.mean_recip_sq, expected_recip_neighbor_degree_sq(5.0), 3.0 * s.se_recip_sq);
}

// Every edge end of many independent graphs. Ends within one graph are
// correlated, so the standard error comes from per-graph totals (ratio
// estimator). At this precision the sample resolves the exact size-biased
// binomial value, which differs from 1/<d> by the factor 1 - P(d = 0).
TEST(NeighborDegreeTest, EdgeSamplingResolvesSizeBiasedBinomial) {
  const std::size_t n = 500;
  const double p = 5.0 / 499.0;
  const DegreeParams params{n, p};
  double exact_recip = 0.0;
  double exact_recip_sq = 0.0;
  for (std::size_t d = 1; d < 200; ++d) {
    const double w = neighbor_degree_pmf(params, d);
    exact_recip += w / static_cast<double>(d);
    exact_recip_sq += w / static_cast<double>(d * d);
  }
  const double empty = neighbor_count_pmf(params, 0);
  EXPECT_NEAR(exact_recip, (1.0 - empty) / 5.0, 1e-12);

  const int graphs = 800;
  std::vector<double> ends(graphs), s1(graphs), s2(graphs);
  for (int gi = 0; gi < graphs; ++gi) {
    const Graph g = sample_poisson_graph(params, 900000 + static_cast<std::uint64_t>(gi));
    for (const auto& [a, b] : g.edges()) {
      for (std::size_t v : {a, b}) {
        const double d = static_cast<double>(g.degree(v) - 1);
        ends[gi] += 1.0;
        s1[gi] += 1.0 / d;
        s2[gi] += 1.0 / (d * d);
      }
    }
  }
  auto ratio = [&](const std::vector<double>& s, double& r, double& se) {
    double num = 0.0, den = 0.0;
    for (int gi = 0; gi < graphs; ++gi) {
      num += s[gi];
      den += ends[gi];
    }
    r = num / den;
    double resid = 0.0;
    for (int gi = 0; gi < graphs; ++gi) resid += (s[gi] - r * ends[gi]) * (s[gi] - r * ends[gi]);
    const double mean_ends = den / graphs;
    se = std::sqrt(resid / (graphs * (graphs - 1.0))) / mean_ends;
  };
  double r1, se1, r2, se2;
  ratio(s1, r1, se1);
  ratio(s2, r2, se2);
  EXPECT_NEAR(r1, exact_recip, 3.0 * se1);
  EXPECT_NEAR(r2, exact_recip_sq, 3.0 * se2);
  // The gap to 1/<d> is several standard errors wide here.
  EXPECT_GT(std::abs(r1 - 0.2), 3.0 * se1);
}

TEST(Choose2Test, Values) {
  EXPECT_NEAR(expected_choose2(101, 0.05), 12.375, 1e-12);
  EXPECT_NEAR(expected_choose2_approx(101, 0.05), 12.5, 1e-12);
  EXPECT_EQ(expected_choose2(50, 0.0), 0.0);
  EXPECT_EQ(expected_choose2(3, 1.0), 1.0);

  // Binomial factorial-moment oracle: sum_d C(d,2) P(d).
  const DegreeParams params{41, 0.13};
  double oracle = 0.0;
  for (std::size_t d = 0; d <= 40; ++d) {
    oracle += static_cast<double>(d * (d - (d > 0 ? 1 : 0))) / 2.0 * testing::binomial_pmf_direct(40, 0.13, d);
  }
  EXPECT_NEAR(expected_choose2(41, 0.13), oracle, 1e-12);
}

TEST(Choose2Test, ApproximationErrorBound) {
  for (double mean : {1.0, 5.0, 20.0}) {
    for (std::size_t n = 25; n <= 5000; n += 97) {
      const double p = mean / static_cast<double>(n - 1);
      if (p > 1.0) continue;
      const double exact = expected_choose2(n, p);
      ASSERT_LT(std::abs(expected_choose2_approx(n, p) - exact) / exact, 2.0 / static_cast<double>(n));
    }
  }
}

TEST(PoissonVarianceTest, Values) {
  const double v = expected_bias_variance_poisson({5.0, 1.2, 100});
  EXPECT_NEAR(v, (testing::poisson_conditional_recip(5.0) * 6.0 - 1.0) * 1.2 / 100.0, 1e-14);
  EXPECT_NEAR(v, 0.00656, 1e-5);
  EXPECT_NEAR(expected_bias_variance_poisson({5.0, 1.2, 200}), 0.00328, 1e-5);
  const double v50 = expected_bias_variance_poisson({50.0, 1.0, 100});
  EXPECT_NEAR(v50, (testing::poisson_conditional_recip(50.0) * 51.0 - 1.0) / 100.0, 1e-14);
  // n -> 2n halves the value exactly.
  EXPECT_NEAR(expected_bias_variance_poisson({5.0, 1.2, 1000}) * 1000.0, v * 100.0, 1e-14);
  EXPECT_THROW(expected_bias_variance_poisson({5.0, 1.2, 1}), DomainError);
  EXPECT_THROW(expected_bias_variance_poisson({0.0, 1.2, 10}), DomainError);
}

TEST(PoissonVarianceTest, DecreasingInN) {
  for (double mean : {0.5, 1.0, 5.0, 30.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 2; n < 2000; n += 7) {
      const double v = expected_bias_variance_poisson({mean, 1.2, n});
      ASSERT_LT(v, prev);
      prev = v;
    }
  }
}

}  // namespace
}  // namespace netpool
