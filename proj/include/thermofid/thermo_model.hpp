#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>

namespace thermofid {

/// Inverse temperature and control parameter, k_B = 1.
struct ThermoPoint {
  double beta = 1.0;
  double lambda = 0.0;

  static ThermoPoint at_temperature(double t, double lambda) {
    return ThermoPoint{1.0 / t, lambda};
  }
  double temperature() const { return 1.0 / beta; }
};

/// Throws DomainError unless beta is positive and finite and lambda is finite.
void validate(const ThermoPoint& p);

enum class Execution { Serial, Parallel };

/// Anything with a log partition function ln Z(beta, lambda).
///
/// Implementations are pure: log_z may be called concurrently from many
/// threads on the same object.
class ThermoModel {
 public:
  virtual ~ThermoModel() = default;

  virtual double log_z(double beta, double lambda) const = 0;
  virtual std::string name() const = 0;

  /// System size N for extensive models (1 when there is none).
  virtual double size_hint() const { return 1.0; }

  /// Relative noise level of log_z; quadrature-backed models report their tolerance.
  virtual double noise_floor() const {
    return std::numeric_limits<double>::epsilon();
  }

  /// Optionally returns an equivalent model that evaluates the listed lambda
  /// values faster (spectra precomputed). nullptr means "use this model".
  virtual std::shared_ptr<const ThermoModel> prepared_for(
      std::span<const double> /*lambdas*/, Execution /*exec*/) const {
    return nullptr;
  }
};

}  // namespace thermofid
