#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thermofid/kernels.hpp"
#include "thermofid/thermo_model.hpp"

// Oracle suite: every approximate kernel checked against exact dense-matrix or
// closed-form ground truth.
namespace thermofid::validation {

/// The kernels under test. Defaults are the library implementations; tests
/// swap in broken ones to check that the suite notices.
struct ValidationKernels {
  std::function<double(const ThermoModel&, double, double, double)> fidelity_beta =
      thermofid::fidelity_beta;
  std::function<double(const ThermoModel&, const ThermoPoint&, double)> specific_heat =
      thermofid::specific_heat;
  std::function<double(const ThermoModel&, const ThermoPoint&, double)> chi_beta =
      thermofid::fidelity_susceptibility_beta;
  std::function<double(const ThermoModel&, const ThermoPoint&, double)> chi =
      thermofid::susceptibility_lambda;
  std::function<double(const ThermoModel&, double, double, double)> chi_lambda =
      thermofid::fidelity_susceptibility_lambda;
  std::function<double(const ThermoModel&, double, double, double)> fidelity_lambda =
      thermofid::fidelity_lambda_approx;
};

struct Sample {
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  std::vector<Sample> samples;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::vector<std::string> failed() const;
};

struct ValidationOptions {
  std::uint64_t seed = 20240611;
  int random_hamiltonians = 50;
  int max_dimension = 64;
};

/// fidelity_beta_exact, cv_vs_fidelity, chi_beta_vs_cv, chi_lambda_vs_chi,
/// fidelity_lambda_bound, ground_state_limit.
ValidationReport run_validation(const ValidationKernels& k = {},
                                const ValidationOptions& opt = {});

}  // namespace thermofid::validation
