#include "netpool/random_graph.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "netpool/error.hpp"

namespace netpool {
namespace {

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(fmt::format("{}={} must be positive and finite", what, x));
  }
}

// sum_{k>=1} x^k / (k k!), all terms positive for x > 0.
double ei_power_tail(double x) {
  double term = 1.0;  // x^k / k!
  double sum = 0.0;
  for (int k = 1; k < 500; ++k) {
    term *= x / k;
    const double contrib = term / k;
    sum += contrib;
    if (contrib <= sum * 1e-17) break;
  }
  return sum;
}

// e^{-x} Ei(x) ~ (1/x) sum_{m>=0} m! / x^m, stopped before terms grow.
double ei_asymptotic_scaled(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 1000; ++m) {
    const double next = term * m / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term <= sum * 1e-17) break;
  }
  return sum / x;
}

}  // namespace

double exponential_integral(double x) {
  check_positive(x, "x");
  if (x <= kEiSeriesCrossover) {
    return kEulerGamma + std::log(x) + ei_power_tail(x);
  }
  return std::exp(x) * ei_asymptotic_scaled(x);
}

double scaled_exponential_integral(double x) {
  check_positive(x, "x");
  if (x <= kEiSeriesCrossover) return std::exp(-x) * exponential_integral(x);
  return ei_asymptotic_scaled(x);
}

double k_factor(double mean_degree) {
  check_positive(mean_degree, "mean_degree");
  const double lead = 1.0 / -std::expm1(-mean_degree);  // 1 / (1 - e^{-<d>})
  // Below the crossover Ei - ln - gamma is exactly the power tail; summing it
  // directly avoids cancellation for small <d>.
  const double body = mean_degree <= kEiSeriesCrossover
                          ? std::exp(-mean_degree) * ei_power_tail(mean_degree)
                          : ei_asymptotic_scaled(mean_degree) -
                                std::exp(-mean_degree) * (std::log(mean_degree) + kEulerGamma);
  return lead * body;
}

double expected_recip_neighbor_degree(double mean_degree) {
  check_positive(mean_degree, "mean_degree");
  return 1.0 / mean_degree;
}

double expected_recip_neighbor_degree_sq(double mean_degree) {
  return k_factor(mean_degree) / mean_degree;
}

double expected_choose2(std::size_t n, double p) {
  if (n == 0) throw DomainError("binomial size n - 1 requires n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("p={} outside [0, 1]", p));
  const double trials = static_cast<double>(n - 1);
  return trials * (trials - 1.0) / 2.0 * p * p;
}

double expected_choose2_approx(std::size_t n, double p) {
  if (n == 0) throw DomainError("binomial size n - 1 requires n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("p={} outside [0, 1]", p));
  const double mean = static_cast<double>(n - 1) * p;
  return mean * mean / 2.0;
}

double k_times_one_plus_d(double mean_degree) {
  return k_factor(mean_degree) * (1.0 + mean_degree);
}

double expected_bias_variance_poisson(const AsymptoticParams& params) {
  if (params.n < 2) throw DomainError(fmt::format("n={} must be >= 2", params.n));
  check_positive(params.sigma2, "sigma2");
  const double nd = static_cast<double>(params.n);
  return params.sigma2 / nd * (k_times_one_plus_d(params.mean_degree) - 1.0);
}

}  // namespace netpool
