#include "netpool/covariance.hpp"

#include <cmath>

#include <fmt/core.h>

#include "netpool/error.hpp"

namespace netpool {
namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw DomainError(fmt::format("correlation rho={} outside [0, 1)", rho));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

CovarianceSpec CovarianceSpec::equicorrelated(std::size_t n, double sigma2, double rho) {
  if (n == 0) throw ShapeError("covariance dimension must be >= 1");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidParameter(fmt::format("variance sigma2={} must be positive", sigma2));
  }
  check_rho(rho);
  return CovarianceSpec(Equicorrelated{n, sigma2, rho});
}

CovarianceSpec CovarianceSpec::heterogeneous(std::vector<double> sigmas, double rho) {
  if (sigmas.empty()) throw ShapeError("covariance dimension must be >= 1");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i])) {
      throw InvalidParameter(fmt::format("sigma[{}]={} must be positive", i + 1, sigmas[i]));
    }
  }
  check_rho(rho);
  return CovarianceSpec(Heterogeneous{std::move(sigmas), rho});
}

CovarianceSpec CovarianceSpec::general(Eigen::MatrixXd sigma) {
  if (sigma.rows() == 0 || sigma.rows() != sigma.cols()) {
    throw ShapeError(fmt::format("covariance must be square and non-empty, got {}x{}", sigma.rows(),
                                 sigma.cols()));
  }
  const double scale = sigma.cwiseAbs().maxCoeff();
  if (((sigma - sigma.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * std::max(scale, 1.0)) {
    throw NumericError("covariance matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericError("covariance matrix is not positive definite");
  }
  return CovarianceSpec(GeneralCovariance{std::move(sigma)});
}

std::size_t CovarianceSpec::dimension() const noexcept {
  return std::visit(Overloaded{
                        [](const Equicorrelated& e) { return e.n; },
                        [](const Heterogeneous& h) { return h.sigmas.size(); },
                        [](const GeneralCovariance& g) { return static_cast<std::size_t>(g.sigma.rows()); },
                    },
                    v_);
}

CovarianceSpec CovarianceSpec::resized(std::size_t n) const {
  if (const auto* e = std::get_if<Equicorrelated>(&v_)) {
    return equicorrelated(n, e->sigma2, e->rho);
  }
  if (dimension() != n) {
    throw ShapeError(fmt::format("covariance of dimension {} cannot be resized to {}", dimension(), n));
  }
  return *this;
}

Eigen::MatrixXd covariance_matrix(const CovarianceSpec& spec) {
  return std::visit(Overloaded{
                        [](const Equicorrelated& e) -> Eigen::MatrixXd {
                          const auto n = static_cast<Eigen::Index>(e.n);
                          Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n, n, e.rho * e.sigma2);
                          s.diagonal().setConstant(e.sigma2);
                          return s;
                        },
                        [](const Heterogeneous& h) -> Eigen::MatrixXd {
                          const auto n = static_cast<Eigen::Index>(h.sigmas.size());
                          const Eigen::Map<const Eigen::VectorXd> sd(h.sigmas.data(), n);
                          Eigen::MatrixXd s = h.rho * (sd * sd.transpose());
                          s.diagonal() = sd.array().square();
                          return s;
                        },
                        [](const GeneralCovariance& g) -> Eigen::MatrixXd { return g.sigma; },
                    },
                    spec.variant());
}

Eigen::MatrixXd precision_matrix_closed_form(std::span<const double> sigmas, double rho) {
  if (sigmas.empty()) throw ShapeError("precision matrix requires n >= 1");
  check_rho(rho);
  const auto n = static_cast<Eigen::Index>(sigmas.size());
  const double nd = static_cast<double>(n);
  const double denom = (1.0 - rho) * (1.0 + (nd - 1.0) * rho);
  const double diag_num = 1.0 + (nd - 2.0) * rho;
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double si = sigmas[static_cast<std::size_t>(i)];
      const double sj = sigmas[static_cast<std::size_t>(j)];
      out(i, j) = (i == j) ? diag_num / (denom * si * si) : -rho / (denom * si * sj);
    }
  }
  return out;
}

Eigen::MatrixXd precision_matrix(const CovarianceSpec& spec) {
  return std::visit(Overloaded{
                        [](const Equicorrelated& e) {
                          const std::vector<double> sd(e.n, std::sqrt(e.sigma2));
                          return precision_matrix_closed_form(sd, e.rho);
                        },
                        [](const Heterogeneous& h) { return precision_matrix_closed_form(h.sigmas, h.rho); },
                        [](const GeneralCovariance& g) -> Eigen::MatrixXd {
                          Eigen::LLT<Eigen::MatrixXd> llt(g.sigma);
                          if (llt.info() != Eigen::Success) {
                            throw NumericError("covariance matrix is not positive definite");
                          }
                          return llt.solve(Eigen::MatrixXd::Identity(g.sigma.rows(), g.sigma.cols()));
                        },
                    },
                    spec.variant());
}

ErrorSampler::ErrorSampler(const CovarianceSpec& spec) {
  const Eigen::MatrixXd sigma = covariance_matrix(spec);
  Eigen::MatrixXd off = sigma;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() == 0.0) {
    diagonal_ = true;
    scale_ = sigma.diagonal().cwiseSqrt();
    return;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericError("Cholesky factorization of the covariance failed");
  }
  lower_ = llt.matrixL();
  scale_ = lower_.diagonal();
}

void ErrorSampler::sample(rng::CounterStream& stream, Eigen::Ref<Eigen::VectorXd> out) const {
  const Eigen::Index n = scale_.size();
  if (out.size() != n) {
    throw ShapeError(fmt::format("output length {} does not match dimension {}", out.size(), n));
  }
  for (Eigen::Index i = 0; i < n; ++i) out[i] = stream.normal();
  if (diagonal_) {
    out.array() *= scale_.array();
  } else {
    out = lower_.triangularView<Eigen::Lower>() * out;
  }
}

Eigen::VectorXd ErrorSampler::sample(std::uint64_t seed) const {
  rng::CounterStream stream(seed);
  Eigen::VectorXd out(scale_.size());
  sample(stream, out);
  return out;
}

Eigen::VectorXd sample_errors(const CovarianceSpec& spec, std::uint64_t seed) {
  return ErrorSampler(spec).sample(seed);
}

ForecastDraw make_draw(double theta, const CovarianceSpec& spec, std::uint64_t seed) {
  return make_draw(theta, sample_errors(spec, seed));
}

ForecastDraw make_draw(double theta, Eigen::VectorXd errors) {
  ForecastDraw draw;
  draw.theta = theta;
  draw.forecasts = errors.array() + theta;
  draw.errors = std::move(errors);
  return draw;
}

}  // namespace netpool
