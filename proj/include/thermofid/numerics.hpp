#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace thermofid::numerics {

/// ln Σ exp(x_i), max-subtracted. Returns -inf for an empty span.
double logsumexp(std::span<const double> x);

/// ln(2 cosh x) without overflow.
double log_2cosh(double x);

/// ln cosh x without overflow.
double log_cosh(double x);

/// Root of f on [lo, hi] by bisection. Throws SolverError when f(lo) and f(hi)
/// have the same sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, std::size_t max_iter = 200);

/// Location of the maximum of a unimodal f on [lo, hi] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-10,
                          std::size_t max_iter = 300);

/// Median of |x_i| over finite entries; 0 when none are finite.
double median_abs(std::span<const double> x);

}  // namespace thermofid::numerics
