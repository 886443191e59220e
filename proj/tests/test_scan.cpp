#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "doctest.h"
#include "thermofid/errors.hpp"
#include "thermofid/kernels.hpp"
#include "thermofid/lmg.hpp"
#include "thermofid/models.hpp"
#include "thermofid/scan.hpp"

using namespace thermofid;
using namespace thermofid::scan;

namespace {

// ln Z fails on a band of lambda values.
class PatchyModel final : public ThermoModel {
 public:
  explicit PatchyModel(bool hard) : hard_(hard) {}
  double log_z(double beta, double lambda) const override {
    if (lambda > 0.45 && lambda < 0.55) {
      if (hard_) throw std::logic_error("broken");
      throw EvaluationError("no value here");
    }
    return models::TwoLevelModel().log_z(beta, lambda);
  }
  std::string name() const override { return "patchy"; }

 private:
  bool hard_;
};

ScanField make_field(std::vector<double> t, std::vector<double> row) {
  ScanField f(FieldKind::Cv, {0.0}, std::move(t));
  f.values = std::move(row);
  return f;
}

bool bit_equal(const std::vector<ScanField>& a, const std::vector<ScanField>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].values.size() != b[k].values.size()) return false;
    if (std::memcmp(a[k].values.data(), b[k].values.data(),
                    a[k].values.size() * sizeof(double)) != 0)
      return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("scan") {

TEST_CASE("uniform axes are built from the start point without drift") {
  const auto a = uniform_axis(0.1, 1.0, 0.1);
  REQUIRE(a.size() == 10);
  CHECK(a[7] == 0.1 + 7 * 0.1);
  CHECK(uniform_axis(2.0, 2.0, 0.5).size() == 1);
  CHECK_THROWS_AS(uniform_axis(1.0, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(uniform_axis(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("grid validation") {
  ScanGrid g{{0.0}, {0.5, 1.0}, 0.01, std::nullopt};
  CHECK_NOTHROW(validate(g));
  g.t_axis = {1.0, 0.5};
  CHECK_THROWS_AS(validate(g), DomainError);
  g.t_axis = {-0.5, 1.0};
  CHECK_THROWS_AS(validate(g), DomainError);
  g.t_axis = {0.5, 1.0};
  g.delta_t = 0.0;
  CHECK_THROWS_AS(validate(g), DomainError);
  g.delta_t = 0.01;
  g.lambda_axis = {};
  CHECK_THROWS_AS(validate(g), DomainError);
}

TEST_CASE("field names round-trip") {
  for (auto k : {FieldKind::F_beta, FieldKind::Cv, FieldKind::chi, FieldKind::chi_beta,
                 FieldKind::chi_lambda})
    CHECK(parse_field_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_field_kind("entropy"), DomainError);
  CHECK(parse_jump_direction("falling") == JumpDirection::Falling);
  CHECK(parse_jump_location("run_centre") == JumpLocation::RunCentre);
  CHECK(parse_classification(to_string(Classification::TypeB)) == Classification::TypeB);
}

TEST_CASE("a 1x1 sweep reproduces the kernels") {
  const models::TwoLevelModel m;
  const ScanGrid g{{0.7}, {1.3}, 0.01, 0.002};
  const FieldKind kinds[] = {FieldKind::F_beta, FieldKind::Cv, FieldKind::chi,
                             FieldKind::chi_beta, FieldKind::chi_lambda};
  const auto out = sweep(m, g, kinds);
  REQUIRE(out.size() == 5);
  const auto p = ThermoPoint::at_temperature(1.3, 0.7);
  CHECK(out[0].at(0, 0) == fidelity_beta(m, 1 / 1.3, 1 / 1.31, 0.7));
  CHECK(out[1].at(0, 0) == specific_heat(m, p, default_delta_t(1.3)));
  CHECK(out[2].at(0, 0) == susceptibility_lambda(m, p, 0.002));
  CHECK(out[3].at(0, 0) == fidelity_susceptibility_beta(m, p, default_delta_t(1.3)));
  CHECK(out[4].at(0, 0) == fidelity_susceptibility_lambda(m, 1 / 1.3, 0.7, 0.002));
  CHECK(evaluate_cell(m, g, FieldKind::Cv, 0.7, 1.3) == out[1].at(0, 0));
}

TEST_CASE("serial and parallel sweeps are bit-identical") {
  const FieldKind kinds[] = {FieldKind::F_beta, FieldKind::Cv, FieldKind::chi};
  SUBCASE("chain") {
    const models::Tim1DModel m({1.0, 1.0});
    const ScanGrid g{uniform_axis(0.2, 1.4, 0.3), uniform_axis(0.2, 2.0, 0.2), 1e-3, std::nullopt};
    CHECK(bit_equal(sweep_serial(m, g, kinds), sweep(m, g, kinds, Execution::Parallel)));
  }
  SUBCASE("collective spins") {
    const lmg::LmgModel m(40, 0.2, lmg::Sectors::All);
    const ScanGrid g{uniform_axis(0.2, 0.8, 0.2), uniform_axis(0.1, 1.2, 0.1), 1e-3, std::nullopt};
    const auto a = sweep_serial(m, g, kinds);
    CHECK(bit_equal(a, sweep(m, g, kinds, Execution::Parallel)));
    CHECK(a[1].missing() == 0);
  }
}

TEST_CASE("evaluation errors become missing cells, other errors propagate") {
  const FieldKind kinds[] = {FieldKind::Cv};
  const ScanGrid g{uniform_axis(0.0, 1.0, 0.5), {0.5, 1.0}, 1e-3, std::nullopt};
  const auto out = sweep(PatchyModel(false), g, kinds);
  CHECK(out[0].missing() == 2);
  CHECK(std::isnan(out[0].at(1, 0)));
  CHECK(std::isfinite(out[0].at(2, 1)));
  CHECK_THROWS_AS(sweep(PatchyModel(true), g, kinds), std::logic_error);
  CHECK_THROWS_AS(sweep_serial(PatchyModel(true), g, kinds), std::logic_error);
}

TEST_CASE("chi_beta field equals T^2 C_v / 4 to first order") {
  const models::Tim1DModel m({1.0, 1.0}, {1e-13});
  const ScanGrid g{{1.0}, uniform_axis(0.3, 1.5, 0.3), 1e-3, std::nullopt};
  const FieldKind kinds[] = {FieldKind::Cv, FieldKind::chi_beta};
  const auto out = sweep(m, g, kinds);
  for (std::size_t j = 0; j < g.t_axis.size(); ++j) {
    const double t = g.t_axis[j];
    CHECK(out[1].at(0, j) == doctest::Approx(t * t * out[0].at(0, j) / 4).epsilon(1e-2));
  }
}

TEST_CASE("locate_minima") {
  SUBCASE("exact parabola is recovered between grid points") {
    std::vector<double> t, v;
    for (int i = 0; i < 11; ++i) {
      t.push_back(1.0 + 0.1 * i);
      v.push_back(1.0 + std::pow(t.back() - 1.437, 2));
    }
    const auto line = locate_minima(make_field(t, v));
    REQUIRE(line.points.size() == 1);
    CHECK(line.points[0].t_c == doctest::Approx(1.437).epsilon(1e-12));
    CHECK(line.points[0].uncertainty == doctest::Approx(0.1));
    CHECK(line.detection == Detection::Minimum);
  }
  SUBCASE("boundary minima are skipped") {
    ScanField f(FieldKind::F_beta, {0.0, 1.0}, {1.0, 2.0, 3.0, 4.0});
    f.values = {1.0, 0.9, 0.95, 1.0,   // interior
                0.5, 0.6, 0.7, 0.8};  // monotone
    const auto line = locate_minima(f);
    REQUIRE(line.points.size() == 1);
    CHECK(line.points[0].lambda == 0.0);
  }
  SUBCASE("no interior minimum") {
    CHECK_THROWS_AS(locate_minima(make_field({1, 2, 3}, {3, 2, 1})), EmptyLine);
  }
  SUBCASE("a neighbour of the minimum is missing") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(locate_minima(make_field({1, 2, 3, 4}, {3, 1, nan, 4})), EmptyLine);
  }
}

TEST_CASE("locate_jumps") {
  std::vector<double> t;
  for (int i = 0; i < 40; ++i) t.push_back(0.1 + 0.05 * i);
  SUBCASE("smooth rows give nothing") {
    std::vector<double> v;
    for (double x : t) v.push_back(x * x);
    CHECK(locate_jumps(make_field(t, v)).points.empty());
  }
  SUBCASE("a step is placed at the midpoint of its steepest T-step") {
    std::vector<double> v;
    for (std::size_t i = 0; i < t.size(); ++i) v.push_back(0.01 * t[i] + (i >= 20 ? -1.0 : 0.0));
    const auto line = locate_jumps(make_field(t, v));
    REQUIRE(line.points.size() == 1);
    CHECK(line.points[0].t_c == doctest::Approx((t[19] + t[20]) / 2));
    CHECK(line.detection == Detection::Jump);
    JumpOptions rising;
    rising.direction = JumpDirection::Rising;
    CHECK(locate_jumps(make_field(t, v), rising).points.empty());
    JumpOptions falling;
    falling.direction = JumpDirection::Falling;
    CHECK(locate_jumps(make_field(t, v), falling).points.size() == 1);
  }
  SUBCASE("run centre of a two-step drop") {
    std::vector<double> v;
    for (std::size_t i = 0; i < t.size(); ++i)
      v.push_back(0.01 * t[i] - (i >= 20 ? 0.5 : 0.0) - (i >= 21 ? 0.5 : 0.0));
    JumpOptions o;
    o.location = JumpLocation::RunCentre;
    const auto line = locate_jumps(make_field(t, v), o);
    REQUIRE(line.points.size() == 1);
    CHECK(line.points[0].t_c == doctest::Approx(t[20]));
  }
  SUBCASE("non-uniform temperatures are rejected") {
    CHECK_THROWS_AS(locate_jumps(make_field({1.0, 2.0, 4.0}, {0, 0, 0})), DomainError);
  }
}

TEST_CASE("F_beta minimum tracks the C_v maximum within one cell") {
  const models::Ising2DModel m({1.0, 1.0}, {1e-13});
  const ScanGrid g{{0.0}, uniform_axis(2.0, 2.6, 0.01), 0.01, std::nullopt};
  const FieldKind kinds[] = {FieldKind::F_beta, FieldKind::Cv};
  const auto out = sweep(m, g, kinds);
  const auto line = locate_minima(out[0]);
  REQUIRE(line.points.size() == 1);
  const auto r = out[1].row(0);
  std::size_t arg = 0;
  for (std::size_t j = 1; j < r.size(); ++j)
    if (r[j] > r[arg]) arg = j;
  CHECK(std::abs(line.points[0].t_c - g.t_axis[arg]) <= 0.01);
}

TEST_CASE("jump statistic") {
  const std::vector<double> t = {0, 1, 2, 3, 4};
  const std::vector<double> v = {0, 1, 2, 12, 13};
  CHECK(jump_statistic(v, t) == doctest::Approx(10.0));
}

TEST_CASE("classification needs three sizes") {
  ModelFamily fam{[](int n) { return std::make_shared<models::Tim1DModel>(models::Tim1DParams{1.0, double(n)}); }, false};
  ClassifyOptions opt;
  opt.t_axis = uniform_axis(0.1, 2.0, 0.05);
  const int two[] = {10, 20};
  CHECK_THROWS_AS(classify_transition(fam, 0.9, two, opt), InsufficientSizes);
  const int three[] = {10, 20, 40};
  const auto rep = classify_transition(fam, 0.9, three, opt);
  CHECK(rep.verdict == Classification::Crossover);
  CHECK(rep.peak_cv.size() == 3);
  CHECK(rep.peak_cv[2] == doctest::Approx(rep.peak_cv[0]).epsilon(1e-6));
}

}
