#include "thermofid/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermofid/errors.hpp"

namespace thermofid {

void validate(const ThermoPoint& p) {
  if (!(p.beta > 0.0) || !std::isfinite(p.beta)) {
    throw DomainError("beta must be positive and finite, got " +
                      std::to_string(p.beta));
  }
  if (!std::isfinite(p.lambda)) {
    throw DomainError("lambda must be finite");
  }
}

namespace {

// A second difference of ln Z with relative step r scales like r^2 |ln Z|;
// below 10x the model's noise floor the estimate is cancellation noise.
void check_step(const ThermoModel& model, double relative_step,
                const char* what) {
  if (relative_step * relative_step < 10.0 * model.noise_floor()) {
    throw StepTooSmall(std::string(what) + ": relative step " +
                       std::to_string(relative_step) +
                       " is below the noise floor of " + model.name());
  }
}

double free_energy_at_t(const ThermoModel& model, double t, double lambda) {
  return -t * model.log_z(1.0 / t, lambda);
}

}  // namespace

double default_delta_t(double t) { return kDefaultRelativeStep * t; }

double default_delta_lambda(double lambda) {
  return kDefaultRelativeStep * std::max(std::abs(lambda), 1.0);
}

double delta_beta(double t, double delta_t) {
  return delta_t / (t * (t + delta_t));
}

std::array<double, 3> lambda_stencil(double lambda, double delta_lambda) {
  const double h = 0.5 * delta_lambda;
  return {lambda - h, lambda, lambda + h};
}

std::array<double, 3> temperature_stencil(double t, double delta_t) {
  const double h = 0.5 * delta_t;
  return {t - h, t, t + h};
}

double free_energy(const ThermoModel& model, const ThermoPoint& p) {
  validate(p);
  return -model.log_z(p.beta, p.lambda) / p.beta;
}

double log_fidelity_beta(const ThermoModel& model, double beta0, double beta1,
                         double lambda) {
  validate({beta0, lambda});
  validate({beta1, lambda});
  if (beta0 == beta1) return 0.0;
  const double mid = 0.5 * (beta0 + beta1);
  // Summed in a fixed order so F(b0, b1) == F(b1, b0) bit for bit.
  const double lo = std::min(beta0, beta1);
  const double hi = std::max(beta0, beta1);
  return model.log_z(mid, lambda) -
         0.5 * (model.log_z(lo, lambda) + model.log_z(hi, lambda));
}

double fidelity_beta(const ThermoModel& model, double beta0, double beta1,
                     double lambda) {
  return std::exp(log_fidelity_beta(model, beta0, beta1, lambda));
}

double specific_heat(const ThermoModel& model, const ThermoPoint& p,
                     double delta_t) {
  validate(p);
  const double t = p.temperature();
  if (!(delta_t > 0.0)) throw DomainError("specific_heat: delta_t must be > 0");
  if (!(t - 0.5 * delta_t > 0.0)) {
    throw DomainError("specific_heat: T - delta_t/2 must be > 0");
  }
  const double h = 0.5 * delta_t;
  check_step(model, h / t, "specific_heat");
  const auto [tm, t0, tp] = temperature_stencil(t, delta_t);
  const double fm = free_energy_at_t(model, tm, p.lambda);
  const double f0 = free_energy_at_t(model, t0, p.lambda);
  const double fp = free_energy_at_t(model, tp, p.lambda);
  return -t * (fp + fm - 2.0 * f0) / (h * h);
}

double fidelity_susceptibility_beta(const ThermoModel& model,
                                    const ThermoPoint& p, double delta_t) {
  validate(p);
  const double t = p.temperature();
  if (!(delta_t > 0.0)) {
    throw DomainError("fidelity_susceptibility_beta: delta_t must be > 0");
  }
  check_step(model, delta_t / t, "fidelity_susceptibility_beta");
  const double db = delta_beta(t, delta_t);
  const double log_f = log_fidelity_beta(model, 1.0 / t, 1.0 / (t + delta_t),
                                         p.lambda);
  return -2.0 * log_f / (db * db);
}

double susceptibility_lambda(const ThermoModel& model, const ThermoPoint& p,
                             double delta_lambda) {
  validate(p);
  if (!(delta_lambda > 0.0)) {
    throw DomainError("susceptibility_lambda: delta_lambda must be > 0");
  }
  const double h = 0.5 * delta_lambda;
  check_step(model, h / std::max(std::abs(p.lambda), 1.0),
             "susceptibility_lambda");
  const auto [lm, l0, lp] = lambda_stencil(p.lambda, delta_lambda);
  const double fm = -model.log_z(p.beta, lm) / p.beta;
  const double f0 = -model.log_z(p.beta, l0) / p.beta;
  const double fp = -model.log_z(p.beta, lp) / p.beta;
  return -(fp + fm - 2.0 * f0) / (h * h);
}

double log_fidelity_lambda_approx(const ThermoModel& model, double beta,
                                  double lambda0, double lambda1) {
  validate({beta, lambda0});
  validate({beta, lambda1});
  if (lambda0 == lambda1) return 0.0;
  const double lo = std::min(lambda0, lambda1);
  const double hi = std::max(lambda0, lambda1);
  const double mid = 0.5 * (lo + hi);
  return model.log_z(beta, mid) -
         0.5 * (model.log_z(beta, lo) + model.log_z(beta, hi));
}

double fidelity_lambda_approx(const ThermoModel& model, double beta,
                              double lambda0, double lambda1) {
  return std::exp(log_fidelity_lambda_approx(model, beta, lambda0, lambda1));
}

double fidelity_susceptibility_lambda(const ThermoModel& model, double beta,
                                      double lambda, double delta_lambda) {
  validate({beta, lambda});
  if (!(delta_lambda > 0.0)) {
    throw DomainError("fidelity_susceptibility_lambda: delta_lambda must be > 0");
  }
  check_step(model, 0.5 * delta_lambda / std::max(std::abs(lambda), 1.0),
             "fidelity_susceptibility_lambda");
  const auto [lm, l0, lp] = lambda_stencil(lambda, delta_lambda);
  const double log_f =
      model.log_z(beta, l0) - 0.5 * (model.log_z(beta, lm) + model.log_z(beta, lp));
  return -2.0 * log_f / (delta_lambda * delta_lambda);
}

double fidelity_from_specific_heat(double cv, double beta, double delta_beta) {
  return std::exp(-delta_beta * delta_beta * cv / (8.0 * beta * beta));
}

double fidelity_from_specific_heat_t(double cv, double t, double delta_t) {
  return std::exp(-delta_t * delta_t * cv / (8.0 * t * t));
}

}  // namespace thermofid
