#include "netpool/pooling.hpp"

#include <fmt/core.h>

#include "netpool/error.hpp"

namespace netpool {
namespace {

Rule parse_rule(char c, std::string_view text) {
  switch (c) {
    case 'S':
      return Rule::Simple;
    case 'B':
      return Rule::Bayes;
    default:
      throw InvalidParameter(fmt::format("rule string '{}': unknown rule '{}' (expected S or B)", text, c));
  }
}

void check_length(const Eigen::VectorXd& x, std::size_t n, std::string_view what) {
  if (static_cast<std::size_t>(x.size()) != n) {
    throw ShapeError(fmt::format("{}: expected length {}, got {}", what, n, x.size()));
  }
}

void check_index(const Graph& g, std::size_t i) {
  if (i >= g.size()) {
    throw ShapeError(fmt::format("expert index {} outside 1..{}", i + 1, g.size()));
  }
}

void check_precision(const Eigen::MatrixXd& precision, std::size_t n) {
  if (static_cast<std::size_t>(precision.rows()) != n || precision.rows() != precision.cols()) {
    throw ShapeError(fmt::format("precision matrix is {}x{}, expected {}x{}", precision.rows(),
                                 precision.cols(), n, n));
  }
}

// Expert i's Bayesian weights: w_j = a_j (P a)_j / (a' P a), a = A_{*i}.
Eigen::VectorXd bayes_expert_weights(const Graph& g, std::size_t i, const Eigen::MatrixXd& precision) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd pa = Eigen::VectorXd::Zero(n);
  for (std::size_t j : g.neighbors(i)) pa += precision.col(static_cast<Eigen::Index>(j));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  double quad = 0.0;
  for (std::size_t j : g.neighbors(i)) {
    const auto jj = static_cast<Eigen::Index>(j);
    w[jj] = pa[jj];
    quad += pa[jj];
  }
  if (!(quad > 0.0)) {
    throw NumericError(fmt::format("non-positive quadratic form for expert {}", i + 1));
  }
  return w / quad;
}

Eigen::VectorXd simple_expert_weights(const Graph& g, std::size_t i) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  const double share = 1.0 / static_cast<double>(g.degree(i));
  for (std::size_t j : g.neighbors(i)) w[static_cast<Eigen::Index>(j)] = share;
  return w;
}

}  // namespace

RuleAssignment RuleAssignment::parse(std::string_view text) {
  const auto bar = text.find('|');
  if (bar != 1 || text.size() < 3) {
    throw InvalidParameter(fmt::format("rule string '{}' must look like 'S|SSB'", text));
  }
  RuleAssignment r;
  r.dm = parse_rule(text[0], text);
  for (char c : text.substr(2)) r.experts.push_back(parse_rule(c, text));
  return r;
}

RuleAssignment RuleAssignment::parse_pattern(std::string_view pattern, std::size_t n) {
  RuleAssignment r = parse(pattern);
  if (r.experts.size() == 1) {
    r.experts.assign(n, r.experts.front());
  } else if (r.experts.size() != n) {
    throw ShapeError(fmt::format("rule pattern '{}' names {} experts, expected 1 or {}", pattern,
                                 r.experts.size(), n));
  }
  return r;
}

std::string RuleAssignment::to_string() const {
  std::string out;
  out.push_back(static_cast<char>(dm));
  out.push_back('|');
  for (Rule e : experts) out.push_back(static_cast<char>(e));
  return out;
}

double linear_pool(const Eigen::VectorXd& weights, const Eigen::VectorXd& x) {
  if (weights.size() != x.size()) {
    throw ShapeError(fmt::format("weights length {} does not match forecasts length {}", weights.size(),
                                 x.size()));
  }
  return weights.dot(x);
}

double simple_average_dm(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw ShapeError("cannot average an empty forecast vector");
  return x.mean();
}

double simple_average_expert(const Graph& g, std::size_t i, const Eigen::VectorXd& x) {
  check_index(g, i);
  check_length(x, g.size(), "forecast vector");
  double sum = 0.0;
  for (std::size_t j : g.neighbors(i)) sum += x[static_cast<Eigen::Index>(j)];
  return sum / static_cast<double>(g.degree(i));
}

PoolResult bayes_pool_dm(const Eigen::VectorXd& x, const CovarianceSpec& spec) {
  check_length(x, spec.dimension(), "forecast vector");
  return bayes_pool_dm(x, precision_matrix(spec));
}

PoolResult bayes_pool_dm(const Eigen::VectorXd& x, const Eigen::MatrixXd& precision) {
  if (x.size() == 0) throw ShapeError("cannot pool an empty forecast vector");
  check_precision(precision, static_cast<std::size_t>(x.size()));
  const Eigen::VectorXd row_sums = precision.rowwise().sum();  // P 1
  const double quad = row_sums.sum();
  if (!(quad > 0.0)) throw NumericError("non-positive quadratic form 1' P 1");
  return {row_sums.dot(x) / quad, 1.0 / quad};
}

PoolResult bayes_pool_expert(const Graph& g, std::size_t i, const Eigen::VectorXd& x,
                             const CovarianceSpec& spec) {
  check_length(x, spec.dimension(), "forecast vector");
  return bayes_pool_expert(g, i, x, precision_matrix(spec));
}

PoolResult bayes_pool_expert(const Graph& g, std::size_t i, const Eigen::VectorXd& x,
                             const Eigen::MatrixXd& precision) {
  check_index(g, i);
  check_length(x, g.size(), "forecast vector");
  check_precision(precision, g.size());
  const Eigen::VectorXd a = g.adjacency_matrix().col(static_cast<Eigen::Index>(i));
  const Eigen::VectorXd xi = a.cwiseProduct(x);
  const double quad = a.dot(precision * a);
  if (!(quad > 0.0)) {
    throw NumericError(fmt::format("non-positive quadratic form for expert {}", i + 1));
  }
  return {a.dot(precision * xi) / quad, 1.0 / quad};
}

Eigen::VectorXd combined_forecasts(const Graph& g, const Eigen::VectorXd& x, const CovarianceSpec& spec,
                                   const RuleAssignment& r) {
  const std::size_t n = g.size();
  check_length(x, n, "forecast vector");
  if (spec.dimension() != n) {
    throw ShapeError(fmt::format("covariance dimension {} does not match n={}", spec.dimension(), n));
  }
  if (r.experts.size() != n) {
    throw ShapeError(fmt::format("rule assignment covers {} experts, expected {}", r.experts.size(), n));
  }
  Eigen::MatrixXd precision;
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (r.experts[i] == Rule::Simple) {
      out[static_cast<Eigen::Index>(i)] = simple_average_expert(g, i, x);
    } else {
      if (precision.size() == 0) precision = precision_matrix(spec);
      out[static_cast<Eigen::Index>(i)] = bayes_pool_expert(g, i, x, precision).mean;
    }
  }
  return out;
}

double pool_dm(const Eigen::VectorXd& x, const CovarianceSpec& spec, Rule rule) {
  return rule == Rule::Simple ? simple_average_dm(x) : bayes_pool_dm(x, spec).mean;
}

double combine_combined(const Graph& g, const Eigen::VectorXd& x, const CovarianceSpec& spec,
                        const RuleAssignment& r) {
  return pool_dm(combined_forecasts(g, x, spec, r), spec, r.dm);
}

LinearPoolingPlan::LinearPoolingPlan(const Graph& g, const CovarianceSpec& spec, const RuleAssignment& r) {
  const std::size_t n = g.size();
  if (spec.dimension() != n) {
    throw ShapeError(fmt::format("covariance dimension {} does not match n={}", spec.dimension(), n));
  }
  if (r.experts.size() != n) {
    throw ShapeError(fmt::format("rule assignment covers {} experts, expected {}", r.experts.size(), n));
  }
  const auto nn = static_cast<Eigen::Index>(n);
  bool any_bayes = r.dm == Rule::Bayes;
  for (Rule e : r.experts) any_bayes = any_bayes || e == Rule::Bayes;
  Eigen::MatrixXd precision;
  if (any_bayes) precision = precision_matrix(spec);

  expert_weights_.resize(nn, nn);
  for (std::size_t i = 0; i < n; ++i) {
    expert_weights_.row(static_cast<Eigen::Index>(i)) =
        (r.experts[i] == Rule::Simple ? simple_expert_weights(g, i) : bayes_expert_weights(g, i, precision))
            .transpose();
  }
  if (r.dm == Rule::Simple) {
    dm_weights_ = Eigen::VectorXd::Constant(nn, 1.0 / static_cast<double>(n));
  } else {
    const Eigen::VectorXd row_sums = precision.rowwise().sum();
    dm_weights_ = row_sums / row_sums.sum();
  }
  bias_coefficients_ = expert_weights_.transpose() * dm_weights_ - dm_weights_;
}

}  // namespace netpool
