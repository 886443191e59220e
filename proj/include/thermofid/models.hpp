#pragma once

#include <string>

#include "thermofid/quadrature.hpp"
#include "thermofid/thermo_model.hpp"

namespace thermofid::models {

// ---------------------------------------------------------------------------
// 2D classical Ising model, Onsager solution at zero field.

struct Ising2DParams {
  double coupling_j = 1.0;
  // Extensive prefactor; 1 gives per-site quantities.
  double n_sites = 1.0;
};

/// K = 2 sinh(2 beta J) / cosh^2(2 beta J), in (0, 1].
double ising2d_k(double beta, double j);

/// ln Z = N ln(2 cosh 2bJ) + (N / 2pi) Int_0^pi ln[(1 + sqrt(1 - K^2 sin^2 phi)) / 2].
/// The integrand is symmetric about pi/2 (where it has a kink at K = 1), so
/// the quadrature runs over [0, pi/2] with the kink on the boundary.
double ising2d_log_z(double beta, const Ising2DParams& params,
                     const quadrature::Options& quad = {});

/// Critical temperature 2J / ln(1 + sqrt 2), i.e. sinh(2 J / T_c) = 1.
double ising2d_critical_temperature(double j);

class Ising2DModel final : public ThermoModel {
 public:
  explicit Ising2DModel(Ising2DParams params, quadrature::Options quad = {});
  /// λ must be 0: there is no closed form at finite field.
  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "ising2d"; }
  double size_hint() const override { return params_.n_sites; }
  double noise_floor() const override;
  const Ising2DParams& params() const { return params_; }

 private:
  Ising2DParams params_;
  quadrature::Options quad_;
};

// ---------------------------------------------------------------------------
// Dicke model under the rotating-wave approximation.

struct DickeParams {
  double omega = 1.0;   // bosonic frequency
  double omega0 = 1.0;  // atomic splitting
  int n_atoms = 1;
  double coupling = 0.0;
};

void validate(const DickeParams& p);

/// Radial log-integrand g(r) = ln(2r) - beta r^2 + N ln(2 cosh(a sqrt(1 + b r^2)))
/// with a = beta omega0 / (2 omega), b = 4 lambda^2 omega^2 / (N omega0^2).
double dicke_log_integrand(double r, double beta, const DickeParams& p);

/// r* maximising the radial log-integrand (golden-section search).
double dicke_peak_radius(double beta, const DickeParams& p);

/// ln Z = ln Int_0^inf exp(g(r)) dr, evaluated max-subtracted on [0, r_max]
/// where g(r_max) < g(r*) - 45. Throws CutoffError if no such r_max is found.
double dicke_log_z(double beta, const DickeParams& p,
                   const quadrature::Options& quad = {});

/// Finite-temperature superradiant transition,
/// T_c = omega0 / (2 omega atanh(omega0 / (omega lambda^2))). Requires omega lambda^2 > omega0.
double dicke_critical_temperature(double lambda, double omega, double omega0);

class DickeModel final : public ThermoModel {
 public:
  /// params.coupling is ignored; the control parameter is the coupling.
  explicit DickeModel(DickeParams params, quadrature::Options quad = {});
  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "dicke"; }
  double size_hint() const override { return params_.n_atoms; }
  double noise_floor() const override;
  const DickeParams& params() const { return params_; }

 private:
  DickeParams params_;
  quadrature::Options quad_;
};

// ---------------------------------------------------------------------------
// 1D transverse-field Ising chain, H = -J sum(sz sz + lambda sx), thermodynamic limit.

struct Tim1DParams {
  double coupling_j = 1.0;
  double n_sites = 1.0;
};

/// ln Z = N [ln 2 + (1/pi) Int_0^pi ln cosh(beta J sqrt(1 + l^2 - 2 l cos k)) dk].
double tim1d_log_z(double beta, const Tim1DParams& params, double lambda,
                   const quadrature::Options& quad = {});

class Tim1DModel final : public ThermoModel {
 public:
  explicit Tim1DModel(Tim1DParams params, quadrature::Options quad = {});
  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "tim1d"; }
  double size_hint() const override { return params_.n_sites; }
  double noise_floor() const override;
  const Tim1DParams& params() const { return params_; }

 private:
  Tim1DParams params_;
  quadrature::Options quad_;
};

// ---------------------------------------------------------------------------
// Closed-form reference systems.

/// Free spin in a field: Z = 2 cosh(beta lambda).
class TwoLevelModel final : public ThermoModel {
 public:
  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "two_level"; }
};

/// Ground state plus a g-fold excited level at gap lambda: Z = 1 + g exp(-beta lambda).
/// The C_v peak has a height fixed by g and sits at T proportional to lambda.
class SchottkyModel final : public ThermoModel {
 public:
  explicit SchottkyModel(double degeneracy = 1.0);
  double log_z(double beta, double lambda) const override;
  std::string name() const override { return "schottky"; }
  double degeneracy() const { return degeneracy_; }

 private:
  double degeneracy_;
};

}  // namespace thermofid::models
