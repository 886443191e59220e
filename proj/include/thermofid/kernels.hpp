#pragma once

#include <array>

#include "thermofid/thermo_model.hpp"

// Model-agnostic thermodynamics on top of ln Z. Every ratio of partition
// functions is formed as a difference of logs.
namespace thermofid {

/// Temperature and field perturbations. delta_beta is always derived from delta_t.
struct PerturbationSpec {
  double delta_t = 0.0;
  double delta_lambda = 0.0;
};

inline constexpr double kDefaultRelativeStep = 1e-3;

/// 1e-3 * T.
double default_delta_t(double t);
/// 1e-3 * max(|lambda|, 1).
double default_delta_lambda(double lambda);

/// delta_beta = 1/T - 1/(T + delta_t) = delta_t / (T (T + delta_t)).
double delta_beta(double t, double delta_t);

/// {lambda - d/2, lambda, lambda + d/2}. Shared by the kernels and the
/// sweep's spectrum preparation so both request bit-identical field values.
std::array<double, 3> lambda_stencil(double lambda, double delta_lambda);

/// {T - d/2, T, T + d/2}.
std::array<double, 3> temperature_stencil(double t, double delta_t);

/// F = -ln Z / beta.
double free_energy(const ThermoModel& model, const ThermoPoint& p);

/// ln of Z((b0+b1)/2) / sqrt(Z(b0) Z(b1)); exactly 0 when b0 == b1.
double log_fidelity_beta(const ThermoModel& model, double beta0, double beta1,
                         double lambda);

/// Temperature fidelity between two Gibbs states of the same Hamiltonian.
double fidelity_beta(const ThermoModel& model, double beta0, double beta1,
                     double lambda);

/// C_v = -T d2F/dT2 by the symmetric stencil T, T +/- delta_t/2.
double specific_heat(const ThermoModel& model, const ThermoPoint& p,
                     double delta_t);

/// chi_beta = -2 ln F_beta / delta_beta^2 with beta0 = 1/T, beta1 = 1/(T + delta_t).
double fidelity_susceptibility_beta(const ThermoModel& model,
                                    const ThermoPoint& p, double delta_t);

/// chi = -d2F/dlambda2 by the symmetric stencil lambda, lambda +/- delta_lambda/2.
double susceptibility_lambda(const ThermoModel& model, const ThermoPoint& p,
                             double delta_lambda);

/// Commuting approximation Z(beta, mid) / sqrt(Z(beta, l0) Z(beta, l1)).
double log_fidelity_lambda_approx(const ThermoModel& model, double beta,
                                  double lambda0, double lambda1);
double fidelity_lambda_approx(const ThermoModel& model, double beta,
                              double lambda0, double lambda1);

/// chi_lambda = -2 ln F_lambda / delta_lambda^2 with lambda0,1 = lambda -/+ delta_lambda/2.
double fidelity_susceptibility_lambda(const ThermoModel& model, double beta,
                                      double lambda, double delta_lambda);

/// exp(-(delta_beta)^2 C_v / (8 beta^2)).
double fidelity_from_specific_heat(double cv, double beta, double delta_beta);

/// exp(-(delta_t)^2 C_v / (8 T^2)), the temperature-parametrised form.
double fidelity_from_specific_heat_t(double cv, double t, double delta_t);

}  // namespace thermofid
