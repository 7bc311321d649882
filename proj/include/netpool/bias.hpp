#pragma once

#include <cstddef>
#include <iosfwd>

#include <Eigen/Dense>

#include "netpool/covariance.hpp"
#include "netpool/graph.hpp"
#include "netpool/pooling.hpp"

namespace netpool {

/// Net attention the network places on each expert's own forecast. The
/// entries always sum to zero.
struct AttentionVector {
  Eigen::VectorXd alphas;

  std::size_t size() const noexcept { return static_cast<std::size_t>(alphas.size()); }
};

/// Decision-maker's pooled value after one round of expert pooling minus
/// the value it would have reached from the raw forecasts.
double network_bias(const Graph& g, const Eigen::VectorXd& x, const CovarianceSpec& spec,
                    const RuleAssignment& r);

/// alpha_i = sum_{j in N_i} 1/d_j - 1, self-inclusive.
AttentionVector attention_centrality(const Graph& g);

/// (1/n) sum_i alpha_i eps_i. Under all-simple rules this equals the network
/// bias for any truth theta with eps = x - theta.
double bias_from_attention(const AttentionVector& alpha, const Eigen::VectorXd& errors);

/// Variance of the network bias given the graph, equicorrelated errors:
/// (sigma2/n) [ (1/n) sum alpha_i^2 + (2 rho/n) sum_{i<j} alpha_i alpha_j ].
double bias_variance_from_alpha(const AttentionVector& alpha, double sigma2, double rho);

/// Same quantity reduced with sum alpha = 0: sigma2 (1 - rho) sum alpha^2 / n^2.
double bias_variance_from_alpha_reduced(const AttentionVector& alpha, double sigma2, double rho);

double star_bias_variance(std::size_t n, double sigma2, double rho);
double line_bias_variance(std::size_t n, double sigma2, double rho);

/// 1' Sigma^-1 1 for equicorrelated errors: n / (sigma2 (1 + (n-1) rho)).
double dm_posterior_precision(std::size_t n, double sigma2, double rho);

inline constexpr double kZeroAttentionTolerance = 1e-12;

/// max |alpha_i| <= 1e-12. Holds for every d-regular graph.
bool is_zero_attention_structure(const Graph& g);

/// CSV with header "node,alpha", 1-based nodes, round-trip precision.
void write_attention_csv(const AttentionVector& alpha, std::ostream& out);

}  // namespace netpool
