#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "netpool/covariance.hpp"
#include "netpool/graph.hpp"

namespace netpool {

enum class Rule : char { Simple = 'S', Bayes = 'B' };

/// Pooling rule of the decision-maker and of each expert.
///
/// Text form is one character per agent, decision-maker first and separated
/// from the experts by '|': "S|SSB" is a simple-average decision-maker over
/// three experts, the third of which pools by Bayes.
struct RuleAssignment {
  Rule dm = Rule::Simple;
  std::vector<Rule> experts;

  static RuleAssignment uniform(Rule dm, Rule expert, std::size_t n) {
    return RuleAssignment{dm, std::vector<Rule>(n, expert)};
  }
  static RuleAssignment all_simple(std::size_t n) { return uniform(Rule::Simple, Rule::Simple, n); }

  /// Parses the exact text form.
  static RuleAssignment parse(std::string_view text);

  /// Parses a pattern for n experts: the expert part is either exactly n
  /// characters or a single character applied to every expert.
  static RuleAssignment parse_pattern(std::string_view pattern, std::size_t n);

  std::string to_string() const;

  friend bool operator==(const RuleAssignment&, const RuleAssignment&) = default;
};

/// Posterior mean and variance returned by the Bayesian rules.
struct PoolResult {
  double mean = 0.0;
  double variance = 0.0;
};

/// sum_j w_j x_j. Weights are unrestricted reals.
double linear_pool(const Eigen::VectorXd& weights, const Eigen::VectorXd& x);

double simple_average_dm(const Eigen::VectorXd& x);

/// Mean of x over the self-inclusive neighborhood of expert i.
double simple_average_expert(const Graph& g, std::size_t i, const Eigen::VectorXd& x);

/// Precision-weighted mean (1' P x) / (1' P 1) with P = Sigma^-1.
PoolResult bayes_pool_dm(const Eigen::VectorXd& x, const CovarianceSpec& spec);
PoolResult bayes_pool_dm(const Eigen::VectorXd& x, const Eigen::MatrixXd& precision);

/// (a' P x(i)) / (a' P a) with a the i-th adjacency column and x(i) = a .* x.
PoolResult bayes_pool_expert(const Graph& g, std::size_t i, const Eigen::VectorXd& x,
                             const CovarianceSpec& spec);
PoolResult bayes_pool_expert(const Graph& g, std::size_t i, const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& precision);

/// One simultaneous update round: every expert pools the original x.
Eigen::VectorXd combined_forecasts(const Graph& g, const Eigen::VectorXd& x, const CovarianceSpec& spec,
                                   const RuleAssignment& r);

/// Decision-maker's rule applied to the combined forecasts, with the
/// original covariance.
double combine_combined(const Graph& g, const Eigen::VectorXd& x, const CovarianceSpec& spec,
                        const RuleAssignment& r);

/// Decision-maker's rule applied directly to x.
double pool_dm(const Eigen::VectorXd& x, const CovarianceSpec& spec, Rule rule);

/// Every rule above is linear in x with weights fixed by (graph, Sigma,
/// rules). The plan materializes those weights once so repeated draws cost
/// a dot product.
class LinearPoolingPlan {
 public:
  LinearPoolingPlan(const Graph& g, const CovarianceSpec& spec, const RuleAssignment& r);

  /// Row i holds expert i's pooling weights.
  const Eigen::MatrixXd& expert_weights() const noexcept { return expert_weights_; }
  const Eigen::VectorXd& dm_weights() const noexcept { return dm_weights_; }

  /// Coefficients c with network bias = c' x.
  const Eigen::VectorXd& bias_coefficients() const noexcept { return bias_coefficients_; }

  Eigen::VectorXd combined(const Eigen::VectorXd& x) const { return expert_weights_ * x; }
  double combine_combined(const Eigen::VectorXd& x) const { return dm_weights_.dot(combined(x)); }
  double network_bias(const Eigen::VectorXd& x) const { return bias_coefficients_.dot(x); }

 private:
  Eigen::MatrixXd expert_weights_;
  Eigen::VectorXd dm_weights_;
  Eigen::VectorXd bias_coefficients_;
};

}  // namespace netpool
