#pragma once

#include <cstddef>

namespace netpool {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Mean degree, error variance and size of a Poisson random-graph network.
struct AsymptoticParams {
  double mean_degree = 0.0;
  double sigma2 = 1.0;
  std::size_t n = 0;
};

/// Exponential integral Ei(x) for x > 0. Power series up to x = 40, the
/// divergent asymptotic series truncated at its smallest term beyond.
double exponential_integral(double x);

/// e^{-x} Ei(x); stays finite where Ei itself overflows.
double scaled_exponential_integral(double x);

inline constexpr double kEiSeriesCrossover = 40.0;

/// K(<d>) = e^{-<d>} / (1 - e^{-<d>}) [Ei(<d>) - ln<d> - gamma], which is
/// E[1/d | d > 0] for Poisson(<d>) degrees.
double k_factor(double mean_degree);

/// E[1/d_j] for a neighbor reached along a random edge: 1/<d>.
double expected_recip_neighbor_degree(double mean_degree);

/// E[1/d_j^2] for the same neighbor: K(<d>)/<d>.
double expected_recip_neighbor_degree_sq(double mean_degree);

/// E[C(d, 2)] for d ~ Binomial(n - 1, p), exactly C(n - 1, 2) p^2.
double expected_choose2(std::size_t n, double p);

/// Large-n approximation <d>^2 / 2 of expected_choose2.
double expected_choose2_approx(std::size_t n, double p);

/// K(<d>) (1 + <d>).
double k_times_one_plus_d(double mean_degree);

/// Expected network-bias variance over Poisson graphs:
/// (sigma2/n) (K(<d>) [1 + <d>] - 1).
double expected_bias_variance_poisson(const AsymptoticParams& params);

}  // namespace netpool
