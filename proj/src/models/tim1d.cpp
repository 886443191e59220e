#include <cmath>
#include <limits>
#include <numbers>

#include "thermofid/errors.hpp"
#include "thermofid/models.hpp"
#include "thermofid/numerics.hpp"

namespace thermofid::models {

double tim1d_log_z(double beta, const Tim1DParams& params, double lambda,
                   const quadrature::Options& quad) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("tim1d_log_z: beta must be positive and finite");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("tim1d_log_z: lambda must be >= 0");
  }
  const double bj = beta * params.coupling_j;
  auto integrand = [bj, lambda](double k) {
    const double e2 = 1.0 + lambda * lambda - 2.0 * lambda * std::cos(k);
    return numerics::log_cosh(bj * std::sqrt(std::max(0.0, e2)));
  };
  quadrature::Options opt = quad;
  opt.abs_tol = quad.abs_tol * std::numbers::pi;
  const auto res =
      quadrature::adaptive_simpson(integrand, 0.0, std::numbers::pi, opt);
  return params.n_sites * (std::log(2.0) + res.value / std::numbers::pi);
}

Tim1DModel::Tim1DModel(Tim1DParams params, quadrature::Options quad)
    : params_(params), quad_(quad) {
  if (!(params_.coupling_j > 0.0)) throw DomainError("tim1d: coupling_j must be > 0");
  if (!(params_.n_sites > 0.0)) throw DomainError("tim1d: n_sites must be > 0");
}

double Tim1DModel::log_z(double beta, double lambda) const {
  return tim1d_log_z(beta, params_, lambda, quad_);
}

double Tim1DModel::noise_floor() const {
  return std::max(quad_.abs_tol, std::numeric_limits<double>::epsilon());
}

}  // namespace thermofid::models
