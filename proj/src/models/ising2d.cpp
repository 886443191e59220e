#include <cmath>
#include <numbers>
#include <string>

#include "thermofid/errors.hpp"
#include "thermofid/models.hpp"
#include "thermofid/numerics.hpp"

namespace thermofid::models {

double ising2d_k(double beta, double j) {
  const double x = 2.0 * beta * j;
  // 2 sinh x / cosh^2 x = 2 tanh x sech x, finite for large x.
  return 2.0 * std::tanh(x) / std::cosh(x);
}

double ising2d_critical_temperature(double j) {
  return 2.0 * j / std::log(1.0 + std::numbers::sqrt2);
}

double ising2d_log_z(double beta, const Ising2DParams& params,
                     const quadrature::Options& quad) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("ising2d_log_z: beta must be positive and finite");
  }
  if (!(params.coupling_j > 0.0)) {
    throw DomainError("ising2d: coupling_j must be > 0");
  }
  const double k = ising2d_k(beta, params.coupling_j);
  const double k2 = k * k;
  auto integrand = [k2](double phi) {
    const double s = std::sin(phi);
    const double arg = std::max(0.0, 1.0 - k2 * s * s);
    return std::log(0.5 * (1.0 + std::sqrt(arg)));
  };
  // (1/2pi) Int_0^pi = (1/pi) Int_0^{pi/2}; tolerance applies to the average.
  quadrature::Options opt = quad;
  opt.abs_tol = quad.abs_tol * std::numbers::pi;
  const auto res = quadrature::adaptive_simpson(integrand, 0.0,
                                                0.5 * std::numbers::pi, opt);
  const double per_site =
      numerics::log_2cosh(2.0 * beta * params.coupling_j) +
      res.value / std::numbers::pi;
  return params.n_sites * per_site;
}

Ising2DModel::Ising2DModel(Ising2DParams params, quadrature::Options quad)
    : params_(params), quad_(quad) {
  if (!(params_.coupling_j > 0.0)) {
    throw DomainError("ising2d: coupling_j must be > 0");
  }
  if (!(params_.n_sites > 0.0)) {
    throw DomainError("ising2d: n_sites must be > 0");
  }
}

double Ising2DModel::log_z(double beta, double lambda) const {
  if (lambda != 0.0) {
    throw DomainError("ising2d: closed form exists only at lambda = 0, got " +
                      std::to_string(lambda));
  }
  return ising2d_log_z(beta, params_, quad_);
}

double Ising2DModel::noise_floor() const {
  return std::max(quad_.abs_tol, std::numeric_limits<double>::epsilon());
}

}  // namespace thermofid::models
