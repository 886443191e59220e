#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "thermofid/errors.hpp"
#include "thermofid/numerics.hpp"
#include "thermofid/quadrature.hpp"

using namespace thermofid;

TEST_SUITE("numerics") {

TEST_CASE("logsumexp is max-subtracted") {
  const std::vector<double> x{1000.0, 1000.0};
  CHECK(numerics::logsumexp(x) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-15));
  const std::vector<double> y{-1000.0, -1001.0};
  CHECK(numerics::logsumexp(y) == doctest::Approx(-1000.0 + std::log1p(std::exp(-1.0))));
  CHECK(std::isinf(numerics::logsumexp(std::vector<double>{})));
}

TEST_CASE("log_2cosh and log_cosh survive large arguments") {
  CHECK(numerics::log_2cosh(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(numerics::log_2cosh(800.0) == doctest::Approx(800.0));
  CHECK(numerics::log_2cosh(-800.0) == doctest::Approx(800.0));
  CHECK(numerics::log_cosh(0.3) == doctest::Approx(std::log(std::cosh(0.3))).epsilon(1e-15));
  CHECK(numerics::log_cosh(1e4) == doctest::Approx(1e4 - std::log(2.0)));
}

TEST_CASE("bisect finds the root and rejects brackets without a sign change") {
  const double r = numerics::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(numerics::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                  SolverError);
}

TEST_CASE("golden section locates a smooth maximum") {
  const double x = numerics::golden_section_max([](double t) { return -(t - 0.3) * (t - 0.3); },
                                                -1.0, 2.0);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("median_abs ignores non-finite entries") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(numerics::median_abs(std::vector<double>{-3.0, 1.0, nan, 2.0}) == 2.0);
  CHECK(numerics::median_abs(std::vector<double>{-4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(numerics::median_abs(std::vector<double>{nan}) == 0.0);
}

TEST_CASE("adaptive Simpson is exact on cubics and accurate on oscillatory integrands") {
  const auto cubic = quadrature::adaptive_simpson([](double x) { return x * x * x - x; }, 0.0, 2.0);
  CHECK(cubic.value == doctest::Approx(2.0).epsilon(1e-14));
  const auto s = quadrature::adaptive_simpson([](double x) { return std::sin(10 * x); }, 0.0, 3.0);
  CHECK(std::abs(s.value - (1.0 - std::cos(30.0)) / 10.0) < 1e-10);
}

TEST_CASE("adaptive Simpson reports exhaustion") {
  quadrature::Options o;
  o.abs_tol = 1e-300;
  o.max_subdivisions = 50;
  CHECK_THROWS_AS(quadrature::adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, o),
                  QuadratureError);
}

}
