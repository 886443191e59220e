#include <cmath>
#include <numbers>

#include "doctest.h"
#include "thermofid/errors.hpp"
#include "thermofid/kernels.hpp"
#include "thermofid/models.hpp"

using namespace thermofid;
using std::numbers::pi;

namespace {

// Plain composite Simpson with n (even) panels, no adaptivity.
template <class F>
double simpson(F f, double a, double b, long n) {
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (long i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double onsager_reference(double beta, double j) {
  const double x = 2.0 * beta * j;
  const double k = 2.0 * std::sinh(x) / (std::cosh(x) * std::cosh(x));
  const double integral = simpson(
      [k](double phi) {
        const double s = std::sin(phi);
        return std::log(0.5 * (1.0 + std::sqrt(1.0 - k * k * s * s)));
      },
      0.0, pi, 1000000);
  return std::log(2.0 * std::cosh(x)) + integral / (2.0 * pi);
}

// Per-site C_v of the transverse chain from the analytic second beta-derivative.
double tim_cv_reference(double beta, double j, double l) {
  return simpson(
             [=](double k) {
               const double e = j * std::sqrt(1.0 + l * l - 2.0 * l * std::cos(k));
               const double c = std::cosh(beta * e);
               return beta * beta * e * e / (c * c);
             },
             0.0, pi, 1000000) /
         pi;
}

quadrature::Options tol(double t) {
  quadrature::Options q;
  q.abs_tol = t;
  return q;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("Onsager ln Z at beta J = 0.3 matches a 10^6-panel Simpson reference") {
  const double ref = onsager_reference(0.3, 1.0);
  CHECK(std::abs(models::ising2d_log_z(0.3, {1.0, 1.0}) - ref) < 1e-10);
  const double ref2 = onsager_reference(1.2, 0.5);
  CHECK(std::abs(models::ising2d_log_z(1.2, {0.5, 1.0}) - ref2) < 1e-10);
}

TEST_CASE("Onsager critical temperature solves sinh(2J/T) = 1") {
  const double tc = models::ising2d_critical_temperature(1.0);
  CHECK(tc == doctest::Approx(2.269185314213022).epsilon(1e-14));
  CHECK(std::sinh(2.0 / tc) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(models::ising2d_k(1.0 / tc, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Ising model is extensive and defined at lambda = 0 only") {
  const models::Ising2DModel one({1.0, 1.0});
  const models::Ising2DModel many({1.0, 100.0});
  CHECK(many.log_z(0.4, 0.0) == doctest::Approx(100.0 * one.log_z(0.4, 0.0)).epsilon(1e-14));
  CHECK_THROWS_AS(one.log_z(0.4, 0.1), DomainError);
  CHECK_THROWS_AS(models::Ising2DModel({-1.0, 1.0}), DomainError);
}

TEST_CASE("Ising high-temperature limit") {
  // ln Z -> ln 2 + ... as beta -> 0.
  CHECK(models::ising2d_log_z(1e-4, {1.0, 1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("Dicke at zero coupling: ln Z = ln(1/(beta omega)) + N ln 2cosh(beta omega0 / 2)") {
  for (int n : {1, 10, 200}) {
    for (double beta : {0.3, 1.0, 4.0}) {
      const models::DickeParams p{1.0, 1.0, n, 0.0};
      const double expect = std::log(1.0 / beta) + n * std::log(2.0 * std::cosh(beta / 2.0));
      CHECK(models::dicke_log_z(beta, p) == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("Dicke N=1, lambda=0.5, beta=1 against a brute-force 2D quadrature") {
  const double beta = 1.0, a = 0.5, b = 1.0;  // b = 4 lambda^2 / N
  const double l = 8.0;
  auto row = [&](double x) {
    return simpson(
        [&](double y) {
          const double r2 = x * x + y * y;
          return std::exp(-beta * r2) * 2.0 * std::cosh(a * std::sqrt(1.0 + b * r2)) / pi;
        },
        -l, l, 2000);
  };
  const double z = simpson(row, -l, l, 2000);
  const models::DickeParams p{1.0, 1.0, 1, 0.5};
  CHECK(std::abs(models::dicke_log_z(beta, p) - std::log(z)) < 1e-8);
}

TEST_CASE("Dicke critical temperature") {
  const double tc = models::dicke_critical_temperature(1.5, 1.0, 1.0);
  CHECK(tc == doctest::Approx(1.0 / (2.0 * std::atanh(4.0 / 9.0))).epsilon(1e-14));
  CHECK_THROWS_AS(models::dicke_critical_temperature(0.9, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(models::DickeModel({1.0, 1.0, 0, 0.0}), DomainError);
}

TEST_CASE("Dicke radial peak leaves the origin in the superradiant phase") {
  const models::DickeParams normal{1.0, 1.0, 100, 0.5};
  const models::DickeParams super{1.0, 1.0, 100, 1.5};
  CHECK(models::dicke_peak_radius(4.0, normal) < 0.5);
  CHECK(models::dicke_peak_radius(4.0, super) > 3.0);
  // The log-integrand must be maximal at the reported peak.
  const double r = models::dicke_peak_radius(4.0, super);
  CHECK(models::dicke_log_integrand(r, 4.0, super) >= models::dicke_log_integrand(0.99 * r, 4.0, super));
  CHECK(models::dicke_log_integrand(r, 4.0, super) >= models::dicke_log_integrand(1.01 * r, 4.0, super));
}

TEST_CASE("transverse chain at lambda = 0 is the classical Ising chain") {
  const models::Tim1DModel m({1.0, 1.0}, tol(1e-13));
  for (double beta : {0.2, 1.0, 5.0}) {
    CHECK(m.log_z(beta, 0.0) == doctest::Approx(std::log(2.0 * std::cosh(beta))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(m.log_z(1.0, -0.1), DomainError);
}

TEST_CASE("transverse chain C_v at lambda = 1, T = 0.5 against a 10^6-panel reference") {
  const models::Tim1DModel m({1.0, 1.0}, tol(1e-13));
  const double t = 0.5;
  const double cv = specific_heat(m, ThermoPoint::at_temperature(t, 1.0), default_delta_t(t));
  const double ref = tim_cv_reference(1.0 / t, 1.0, 1.0);
  CHECK(std::abs(cv - ref) / ref < 1e-6);
}

TEST_CASE("transverse chain per-site quantities do not depend on N") {
  const models::Tim1DModel one({1.0, 1.0});
  const models::Tim1DModel big({1.0, 64.0});
  const double t = 0.4;
  const auto p = ThermoPoint::at_temperature(t, 0.9);
  CHECK(specific_heat(big, p, default_delta_t(t)) / 64.0 ==
        doctest::Approx(specific_heat(one, p, default_delta_t(t))).epsilon(1e-6));
}

TEST_CASE("quadrature models report their tolerance as noise floor") {
  CHECK(models::Tim1DModel({1.0, 1.0}, tol(1e-9)).noise_floor() == 1e-9);
  CHECK(models::DickeModel({1.0, 1.0, 4, 0.0}, tol(1e-11)).noise_floor() == 1e-11);
}

}
