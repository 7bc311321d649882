#include "netpool/bias.hpp"

#include <cmath>
#include <ostream>

#include <fmt/core.h>

#include "netpool/error.hpp"

namespace netpool {
namespace {

void check_equicorrelated(double sigma2, double rho) {
  if (!(sigma2 > 0.0)) throw DomainError(fmt::format("sigma2={} must be positive", sigma2));
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError(fmt::format("rho={} outside [0, 1]", rho));
}

}  // namespace

double network_bias(const Graph& g, const Eigen::VectorXd& x, const CovarianceSpec& spec,
                    const RuleAssignment& r) {
  return combine_combined(g, x, spec, r) - pool_dm(x, spec, r.dm);
}

AttentionVector attention_centrality(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<double> inv_degree(n);
  for (std::size_t j = 0; j < n; ++j) inv_degree[j] = 1.0 / static_cast<double>(g.degree(j));
  AttentionVector out{Eigen::VectorXd(static_cast<Eigen::Index>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j : g.neighbors(i)) sum += inv_degree[j];
    out.alphas[static_cast<Eigen::Index>(i)] = sum - 1.0;
  }
  return out;
}

double bias_from_attention(const AttentionVector& alpha, const Eigen::VectorXd& errors) {
  if (alpha.alphas.size() != errors.size()) {
    throw ShapeError(fmt::format("attention length {} does not match errors length {}", alpha.alphas.size(),
                                 errors.size()));
  }
  return alpha.alphas.dot(errors) / static_cast<double>(errors.size());
}

double bias_variance_from_alpha(const AttentionVector& alpha, double sigma2, double rho) {
  check_equicorrelated(sigma2, rho);
  const Eigen::Index n = alpha.alphas.size();
  if (n == 0) throw ShapeError("empty attention vector");
  const auto& a = alpha.alphas;
  double squares = 0.0;
  double cross = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    squares += a[i] * a[i];
    for (Eigen::Index j = i + 1; j < n; ++j) cross += a[i] * a[j];
  }
  const double nd = static_cast<double>(n);
  return (sigma2 / nd) * (squares / nd + 2.0 * rho * cross / nd);
}

double bias_variance_from_alpha_reduced(const AttentionVector& alpha, double sigma2, double rho) {
  check_equicorrelated(sigma2, rho);
  const Eigen::Index n = alpha.alphas.size();
  if (n == 0) throw ShapeError("empty attention vector");
  const double nd = static_cast<double>(n);
  return sigma2 * (1.0 - rho) * alpha.alphas.squaredNorm() / (nd * nd);
}

double star_bias_variance(std::size_t n, double sigma2, double rho) {
  if (n < 3) throw DomainError(fmt::format("star variance requires n >= 3, got {}", n));
  check_equicorrelated(sigma2, rho);
  const double nd = static_cast<double>(n);
  return sigma2 / (4.0 * nd * nd * nd) * (nd - 2.0) * (nd - 2.0) * (nd - 1.0) * (1.0 - rho);
}

double line_bias_variance(std::size_t n, double sigma2, double rho) {
  if (n < 4) throw DomainError(fmt::format("line variance requires n >= 4, got {}", n));
  check_equicorrelated(sigma2, rho);
  const double nd = static_cast<double>(n);
  return sigma2 / (9.0 * nd * nd) * (1.0 - rho);
}

double dm_posterior_precision(std::size_t n, double sigma2, double rho) {
  if (n == 0) throw DomainError("decision-maker precision requires n >= 1");
  if (!(sigma2 > 0.0)) throw DomainError(fmt::format("sigma2={} must be positive", sigma2));
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError(fmt::format("rho={} outside [0, 1)", rho));
  const double nd = static_cast<double>(n);
  return nd / (sigma2 * (1.0 + (nd - 1.0) * rho));
}

bool is_zero_attention_structure(const Graph& g) {
  return attention_centrality(g).alphas.cwiseAbs().maxCoeff() <= kZeroAttentionTolerance;
}

void write_attention_csv(const AttentionVector& alpha, std::ostream& out) {
  out << "node,alpha\n";
  for (Eigen::Index i = 0; i < alpha.alphas.size(); ++i) {
    out << fmt::format("{},{}\n", i + 1, alpha.alphas[i]);
  }
}

}  // namespace netpool
