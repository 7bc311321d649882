#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "netpool/rng.hpp"

namespace netpool {

/// Common variance sigma2 and common correlation rho across n experts.
struct Equicorrelated {
  std::size_t n = 0;
  double sigma2 = 1.0;
  double rho = 0.0;
};

/// Expert-specific standard deviations with a common correlation.
struct Heterogeneous {
  std::vector<double> sigmas;
  double rho = 0.0;
};

/// Arbitrary symmetric positive definite covariance.
struct GeneralCovariance {
  Eigen::MatrixXd sigma;
};

/// Covariance of the forecast-error vector. Construct through the factory
/// functions, which validate: rho must lie in [0, 1), variances must be
/// positive, general matrices must be symmetric positive definite.
class CovarianceSpec {
 public:
  using Variant = std::variant<Equicorrelated, Heterogeneous, GeneralCovariance>;

  static CovarianceSpec equicorrelated(std::size_t n, double sigma2, double rho);
  static CovarianceSpec heterogeneous(std::vector<double> sigmas, double rho);
  static CovarianceSpec general(Eigen::MatrixXd sigma);

  std::size_t dimension() const noexcept;
  const Variant& variant() const noexcept { return v_; }

  /// True for the equicorrelated and heterogeneous variants, where the
  /// precision matrix has a closed form.
  bool has_common_correlation() const noexcept {
    return !std::holds_alternative<GeneralCovariance>(v_);
  }

  /// Same structure resized to n experts. Only meaningful for the
  /// equicorrelated variant; others must already have dimension n.
  CovarianceSpec resized(std::size_t n) const;

 private:
  explicit CovarianceSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Sigma: sigma_i^2 on the diagonal, rho sigma_i sigma_j off it.
Eigen::MatrixXd covariance_matrix(const CovarianceSpec& spec);

/// Closed-form inverse of the common-correlation covariance matrix.
Eigen::MatrixXd precision_matrix_closed_form(std::span<const double> sigmas, double rho);

/// Closed form when available, Cholesky-based inverse otherwise.
Eigen::MatrixXd precision_matrix(const CovarianceSpec& spec);

/// Draws zero-mean multivariate normal vectors with covariance Sigma through
/// its lower Cholesky factor. The factorization is computed once.
class ErrorSampler {
 public:
  explicit ErrorSampler(const CovarianceSpec& spec);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(scale_.size()); }

  Eigen::VectorXd sample(std::uint64_t seed) const;
  void sample(rng::CounterStream& stream, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  bool diagonal_ = false;
  Eigen::VectorXd scale_;  // sqrt of the diagonal, used when diagonal_
  Eigen::MatrixXd lower_;
};

Eigen::VectorXd sample_errors(const CovarianceSpec& spec, std::uint64_t seed);

/// Truth, forecast errors, and the forecasts theta + errors they induce.
struct ForecastDraw {
  double theta = 0.0;
  Eigen::VectorXd errors;
  Eigen::VectorXd forecasts;
};

ForecastDraw make_draw(double theta, const CovarianceSpec& spec, std::uint64_t seed);
ForecastDraw make_draw(double theta, Eigen::VectorXd errors);

}  // namespace netpool
