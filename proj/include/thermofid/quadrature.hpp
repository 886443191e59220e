#pragma once

#include <cstddef>
#include <functional>

namespace thermofid::quadrature {

struct Options {
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = 200000;
  // Starting composite panels; the integrand is never sampled more coarsely.
  std::size_t initial_panels = 8;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t intervals = 0;
};

/// Globally adaptive composite Simpson with Richardson-corrected panels.
///
/// The interval with the largest local error estimate |S2 - S1|/15 is bisected
/// until the summed estimate drops below `abs_tol`. Throws QuadratureError if
/// that needs more than `max_subdivisions` intervals or the integrand is not
/// finite. Deterministic for a given integrand.
Result adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, const Options& opt = {});

}  // namespace thermofid::quadrature
