#include <cmath>
#include <limits>
#include <string>

#include "thermofid/errors.hpp"
#include "thermofid/models.hpp"
#include "thermofid/numerics.hpp"

namespace thermofid::models {
namespace {

// Integrand must fall this far below its peak (in log units) at the cutoff.
constexpr double kCutoffDrop = 45.0;

struct RadialShape {
  double beta;
  double a;  // beta omega0 / (2 omega)
  double b;  // 4 lambda^2 omega^2 / (N omega0^2)
  double n;

  double operator()(double r) const {
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(2.0 * r) - beta * r * r +
           n * numerics::log_2cosh(a * std::sqrt(1.0 + b * r * r));
  }
};

RadialShape shape_of(double beta, const DickeParams& p) {
  const double n = static_cast<double>(p.n_atoms);
  return RadialShape{beta, beta * p.omega0 / (2.0 * p.omega),
                     4.0 * p.coupling * p.coupling * p.omega * p.omega /
                         (n * p.omega0 * p.omega0),
                     n};
}

// Upper end of the peak search: for large r the cosh term grows at most
// linearly, n a sqrt(b) r, against -beta r^2.
double search_limit(const RadialShape& g) {
  return 2.0 * (g.n * g.a * std::sqrt(g.b) / g.beta + std::sqrt(1.0 / g.beta)) +
         1.0;
}

}  // namespace

void validate(const DickeParams& p) {
  if (!(p.omega > 0.0)) throw DomainError("dicke: omega must be > 0");
  if (!(p.omega0 > 0.0)) throw DomainError("dicke: omega0 must be > 0");
  if (p.n_atoms < 1) throw DomainError("dicke: n_atoms must be >= 1");
  if (!std::isfinite(p.coupling)) throw DomainError("dicke: coupling must be finite");
}

double dicke_log_integrand(double r, double beta, const DickeParams& p) {
  return shape_of(beta, p)(r);
}

double dicke_peak_radius(double beta, const DickeParams& p) {
  const RadialShape g = shape_of(beta, p);
  const double hi = search_limit(g);
  return numerics::golden_section_max(g, 0.0, hi, 1e-12 * hi);
}

double dicke_log_z(double beta, const DickeParams& p,
                   const quadrature::Options& quad) {
  validate(p);
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("dicke_log_z: beta must be positive and finite");
  }
  const RadialShape g = shape_of(beta, p);
  const double r_peak = dicke_peak_radius(beta, p);
  const double g_peak = g(r_peak);
  if (!std::isfinite(g_peak)) {
    throw EvaluationError("dicke_log_z: non-finite log-integrand peak");
  }

  double step = std::max(1.0, r_peak);
  double r_max = r_peak + step;
  int expansions = 0;
  while (g(r_max) > g_peak - kCutoffDrop) {
    step *= 2.0;
    r_max = r_peak + step;
    if (++expansions > 60) {
      throw CutoffError("dicke_log_z: integrand does not decay below its peak");
    }
  }
  if (!(g(r_max) < g_peak - kCutoffDrop)) {
    throw CutoffError("dicke_log_z: cutoff margin not reached");
  }

  auto weight = [&](double r) {
    const double v = g(r) - g_peak;
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  const auto lower = quadrature::adaptive_simpson(weight, 0.0, r_peak, quad);
  const auto upper = quadrature::adaptive_simpson(weight, r_peak, r_max, quad);
  return g_peak + std::log(lower.value + upper.value);
}

double dicke_critical_temperature(double lambda, double omega, double omega0) {
  if (!(omega > 0.0) || !(omega0 > 0.0)) {
    throw DomainError("dicke_critical_temperature: frequencies must be > 0");
  }
  const double x = omega0 / (omega * lambda * lambda);
  if (!(x < 1.0)) {
    throw DomainError(
        "dicke_critical_temperature: requires omega lambda^2 > omega0");
  }
  return omega0 / (2.0 * omega * std::atanh(x));
}

DickeModel::DickeModel(DickeParams params, quadrature::Options quad)
    : params_(params), quad_(quad) {
  validate(params_);
}

double DickeModel::log_z(double beta, double lambda) const {
  DickeParams p = params_;
  p.coupling = lambda;
  return dicke_log_z(beta, p, quad_);
}

double DickeModel::noise_floor() const {
  return std::max(quad_.abs_tol, std::numeric_limits<double>::epsilon());
}

}  // namespace thermofid::models
