#include "thermofid/scan.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "thermofid/errors.hpp"
#include "thermofid/kernels.hpp"
#include "thermofid/numerics.hpp"

namespace thermofid::scan {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

bool needs_lambda_stencil(std::span<const FieldKind> fields) {
  return std::any_of(fields.begin(), fields.end(), [](FieldKind k) {
    return k == FieldKind::chi || k == FieldKind::chi_lambda;
  });
}

double field_step(const ScanGrid& g, double lambda) {
  return g.delta_lambda ? *g.delta_lambda : default_delta_lambda(lambda);
}

std::vector<ScanField> run_sweep(const ThermoModel& model, const ScanGrid& grid,
                                 std::span<const FieldKind> fields,
                                 Execution exec) {
  validate(grid);
  std::vector<double> lambdas;
  for (double l : grid.lambda_axis) {
    if (needs_lambda_stencil(fields)) {
      for (double s : lambda_stencil(l, field_step(grid, l))) lambdas.push_back(s);
    } else {
      lambdas.push_back(l);
    }
  }
  const auto prepared = model.prepared_for(lambdas, exec);
  const ThermoModel& m = prepared ? *prepared : model;

  std::vector<ScanField> out;
  for (FieldKind k : fields) out.emplace_back(k, grid.lambda_axis, grid.t_axis);

  const std::size_t nt = grid.t_axis.size();
  const std::size_t cells = grid.lambda_axis.size() * nt;
  std::exception_ptr failure;
  std::size_t failure_cell = cells;

  auto cell = [&](std::size_t c) {
    const double l = grid.lambda_axis[c / nt];
    const double t = grid.t_axis[c % nt];
    for (std::size_t f = 0; f < fields.size(); ++f) {
      out[f].values[c] = evaluate_cell(m, grid, fields[f], l, t);
    }
  };

  if (exec == Execution::Serial) {
    for (std::size_t c = 0; c < cells; ++c) cell(c);
    return out;
  }

  const long n = static_cast<long>(cells);
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < n; ++c) {
    try {
      cell(static_cast<std::size_t>(c));
    } catch (...) {
#pragma omp critical(thermofid_sweep_failure)
      {
        // Keep the lowest failing cell so the reported error does not depend on scheduling.
        if (static_cast<std::size_t>(c) < failure_cell) {
          failure_cell = static_cast<std::size_t>(c);
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

double parabola_vertex(double x0, double x1, double x2, double y0, double y1,
                       double y2) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (!(curv > 0.0)) return x1;
  const double x = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
  return std::clamp(x, x0, x2);
}

bool flagged_sign_ok(double d, JumpDirection dir) {
  switch (dir) {
    case JumpDirection::Falling: return d < 0.0;
    case JumpDirection::Rising: return d > 0.0;
    case JumpDirection::Any: return d != 0.0;
  }
  return false;
}

bool monotone_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::size_t finite_argmax(std::span<const double> v) {
  std::size_t best = v.size();
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (std::isfinite(v[j]) && (best == v.size() || v[j] > v[best])) best = j;
  }
  return best;
}

}  // namespace

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::F_beta: return "F_beta";
    case FieldKind::Cv: return "Cv";
    case FieldKind::chi: return "chi";
    case FieldKind::chi_beta: return "chi_beta";
    case FieldKind::chi_lambda: return "chi_lambda";
  }
  return "?";
}

FieldKind parse_field_kind(const std::string& s) {
  for (FieldKind k : {FieldKind::F_beta, FieldKind::Cv, FieldKind::chi,
                      FieldKind::chi_beta, FieldKind::chi_lambda}) {
    if (to_string(k) == s) return k;
  }
  throw DomainError("unknown field '" + s + "'");
}

void validate(const ScanGrid& g) {
  if (g.lambda_axis.empty() || g.t_axis.empty()) {
    throw DomainError("grid: axes must be non-empty");
  }
  for (const auto* axis : {&g.lambda_axis, &g.t_axis}) {
    for (double x : *axis) {
      if (!std::isfinite(x)) throw DomainError("grid: axis values must be finite");
    }
  }
  if (!strictly_increasing(g.lambda_axis)) {
    throw DomainError("grid: lambda axis must be strictly increasing");
  }
  if (!strictly_increasing(g.t_axis)) {
    throw DomainError("grid: T axis must be strictly increasing");
  }
  if (!(g.delta_t > 0.0) || !std::isfinite(g.delta_t)) {
    throw DomainError("grid: delta_t must be > 0");
  }
  if (!(g.t_axis.front() > 0.5 * g.delta_t)) {
    throw DomainError("grid: every T must exceed delta_t / 2 > 0");
  }
  if (g.delta_lambda && !(*g.delta_lambda > 0.0 && std::isfinite(*g.delta_lambda))) {
    throw DomainError("grid: delta_lambda must be > 0");
  }
}

std::vector<double> uniform_axis(double min, double max, double step) {
  if (!std::isfinite(min) || !std::isfinite(max) || !(step > 0.0) || max < min) {
    throw DomainError("uniform_axis: need finite min <= max and step > 0");
  }
  const double n = std::floor((max - min) / step + 1e-6);
  if (n > 1e8) throw DomainError("uniform_axis: too many points");
  std::vector<double> out;
  for (long i = 0; i <= static_cast<long>(n); ++i) out.push_back(min + i * step);
  return out;
}

ScanField::ScanField(FieldKind k, std::vector<double> lambdas, std::vector<double> ts)
    : kind(k), lambda_axis(std::move(lambdas)), t_axis(std::move(ts)),
      values(lambda_axis.size() * t_axis.size(), kNaN) {}

std::size_t ScanField::missing() const {
  return static_cast<std::size_t>(std::count_if(
      values.begin(), values.end(), [](double v) { return !std::isfinite(v); }));
}

double evaluate_cell(const ThermoModel& model, const ScanGrid& grid,
                     FieldKind kind, double lambda, double t) {
  const ThermoPoint p = ThermoPoint::at_temperature(t, lambda);
  try {
    switch (kind) {
      case FieldKind::F_beta:
        return fidelity_beta(model, 1.0 / t, 1.0 / (t + grid.delta_t), lambda);
      case FieldKind::Cv:
        return specific_heat(model, p, default_delta_t(t));
      case FieldKind::chi_beta:
        return fidelity_susceptibility_beta(model, p, default_delta_t(t));
      case FieldKind::chi:
        return susceptibility_lambda(model, p, field_step(grid, lambda));
      case FieldKind::chi_lambda:
        return fidelity_susceptibility_lambda(model, p.beta, lambda,
                                              field_step(grid, lambda));
    }
  } catch (const EvaluationError&) {
    return kNaN;
  }
  return kNaN;
}

std::vector<ScanField> sweep(const ThermoModel& model, const ScanGrid& grid,
                             std::span<const FieldKind> fields, Execution exec) {
  return run_sweep(model, grid, fields, exec);
}

std::vector<ScanField> sweep_serial(const ThermoModel& model, const ScanGrid& grid,
                                    std::span<const FieldKind> fields) {
  return run_sweep(model, grid, fields, Execution::Serial);
}

// ---------------------------------------------------------------------------

std::string to_string(Detection d) {
  return d == Detection::Minimum ? "minimum" : "jump";
}

Detection parse_detection(const std::string& s) {
  if (s == "minimum") return Detection::Minimum;
  if (s == "jump") return Detection::Jump;
  throw DomainError("unknown detection '" + s + "'");
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::TypeA: return "TypeA";
    case Classification::TypeB: return "TypeB";
    case Classification::Crossover: return "Crossover";
    case Classification::Undetermined: return "Undetermined";
  }
  return "?";
}

Classification parse_classification(const std::string& s) {
  for (Classification c : {Classification::TypeA, Classification::TypeB,
                           Classification::Crossover, Classification::Undetermined}) {
    if (to_string(c) == s) return c;
  }
  throw DomainError("unknown classification '" + s + "'");
}

std::string to_string(JumpDirection d) {
  switch (d) {
    case JumpDirection::Any: return "any";
    case JumpDirection::Falling: return "falling";
    case JumpDirection::Rising: return "rising";
  }
  return "?";
}

JumpDirection parse_jump_direction(const std::string& s) {
  for (JumpDirection d : {JumpDirection::Any, JumpDirection::Falling, JumpDirection::Rising}) {
    if (to_string(d) == s) return d;
  }
  throw DomainError("unknown jump direction '" + s + "'");
}

std::string to_string(JumpLocation l) {
  return l == JumpLocation::Steepest ? "steepest" : "run_centre";
}

JumpLocation parse_jump_location(const std::string& s) {
  if (s == "steepest") return JumpLocation::Steepest;
  if (s == "run_centre") return JumpLocation::RunCentre;
  throw DomainError("unknown jump location '" + s + "'");
}

CriticalLine locate_minima(const ScanField& field) {
  CriticalLine line;
  line.detection = Detection::Minimum;
  const auto& t = field.t_axis;
  const std::size_t n = field.cols();
  for (std::size_t i = 0; i < field.rows(); ++i) {
    const auto row = field.row(i);
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isfinite(row[j]) && (best == n || row[j] < row[best])) best = j;
    }
    if (best == n || best == 0 || best + 1 >= n) continue;
    if (!std::isfinite(row[best - 1]) || !std::isfinite(row[best + 1])) continue;
    // Flat rows (ties with a neighbour) carry no minimum.
    if (!(row[best - 1] > row[best]) || !(row[best + 1] > row[best])) continue;
    const double tc = parabola_vertex(t[best - 1], t[best], t[best + 1],
                                      row[best - 1], row[best], row[best + 1]);
    const double step = 0.5 * (t[best + 1] - t[best - 1]);
    line.points.push_back({field.lambda_axis[i], tc, step});
  }
  if (line.points.empty()) {
    throw EmptyLine("locate_minima: no interior minimum in field " +
                    to_string(field.kind));
  }
  return line;
}

CriticalLine locate_jumps(const ScanField& field, const JumpOptions& opt) {
  CriticalLine line;
  line.detection = Detection::Jump;
  const auto& t = field.t_axis;
  const std::size_t n = field.cols();
  if (n < 3) return line;
  const double h = (t.back() - t.front()) / static_cast<double>(n - 1);
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs((t[j] - t[j - 1]) - h) > 1e-6 * h) {
      throw DomainError("locate_jumps: T axis must be uniformly spaced");
    }
  }

  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i < field.rows(); ++i) {
    const auto row = field.row(i);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      d[j] = (std::isfinite(row[j]) && std::isfinite(row[j + 1]))
                 ? (row[j + 1] - row[j]) / h
                 : kNaN;
    }
    const double med = numerics::median_abs(d);
    const double cut = opt.threshold * med;

    auto flagged = [&](std::size_t k) {
      return std::isfinite(d[k]) && std::abs(d[k]) > cut && flagged_sign_ok(d[k], opt.direction);
    };
    double best_change = 0.0;
    double best_centre = 0.0;
    if (opt.location == JumpLocation::Steepest) {
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (flagged(k) && std::abs(d[k]) * h > best_change) {
          best_change = std::abs(d[k]) * h;
          best_centre = 0.5 * (t[k] + t[k + 1]);
        }
      }
    }
    std::size_t j = 0;
    while (opt.location == JumpLocation::RunCentre && j < d.size()) {
      if (!flagged(j)) {
        ++j;
        continue;
      }
      const bool positive = d[j] > 0.0;
      const std::size_t a = j;
      double change = 0.0;
      while (j < d.size() && flagged(j) && (d[j] > 0.0) == positive) {
        change += std::abs(d[j]) * h;
        ++j;
      }
      // Steps a .. j-1 span t[a] .. t[j].
      if (change > best_change) {
        best_change = change;
        best_centre = 0.5 * (t[a] + t[j]);
      }
    }
    if (best_change > 0.0) line.points.push_back({field.lambda_axis[i], best_centre, h});
  }
  return line;
}

// ---------------------------------------------------------------------------

double jump_statistic(std::span<const double> line, std::span<const double> t) {
  std::vector<double> d;
  double max_abs = 0.0;
  for (std::size_t j = 0; j + 1 < line.size(); ++j) {
    const double v = (line[j + 1] - line[j]) / (t[j + 1] - t[j]);
    d.push_back(v);
    if (std::isfinite(v)) max_abs = std::max(max_abs, std::abs(v));
  }
  const double med = numerics::median_abs(d);
  if (med == 0.0) return max_abs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return max_abs / med;
}

ClassificationReport classify_transition(const ModelFamily& family, double lambda,
                                         std::span<const int> sizes,
                                         const ClassifyOptions& opt) {
  if (opt.t_axis.size() < 3) throw DomainError("classify_transition: T axis too short");
  ScanGrid grid;
  grid.lambda_axis = {lambda};
  grid.t_axis = opt.t_axis;
  grid.delta_t = default_delta_t(opt.t_axis.front());
  const FieldKind cv[] = {FieldKind::Cv};

  ClassificationReport rep;
  if (family.size_free) {
    if (opt.refinement_steps.size() < 3) {
      throw InsufficientSizes("classify_transition: need at least 3 refinement steps");
    }
    const auto model = family.make(1);
    const ScanField f = sweep(*model, grid, cv, opt.exec).front();
    const std::size_t k = finite_argmax(f.row(0));
    if (k == f.cols()) return rep;
    const double stat = jump_statistic(f.row(0), opt.t_axis);
    const double lo = opt.t_axis[k == 0 ? 0 : k - 1];
    const double hi = opt.t_axis[std::min(k + 1, f.cols() - 1)];
    const double per_site = 1.0 / model->size_hint();
    for (double rel : opt.refinement_steps) {
      double peak = kNaN;
      double where = kNaN;
      try {
        auto cv_at = [&](double t) {
          return specific_heat(*model, ThermoPoint::at_temperature(t, lambda), rel * t);
        };
        where = numerics::golden_section_max(cv_at, lo, hi,
                                             std::min(1e-10, 1e-2 * rel * lo));
        peak = cv_at(where) * per_site;
      } catch (const EvaluationError&) {
      }
      rep.sizes.push_back(rel);
      rep.peak_cv.push_back(peak);
      rep.peak_t.push_back(where);
      rep.jump_statistic.push_back(stat);
    }
    if (!all_finite(rep.peak_cv)) return rep;
    const auto& p = rep.peak_cv;
    const double first_inc = p[1] - p[0];
    const double last_inc = p.back() - p[p.size() - 2];
    const bool growing = monotone_increasing(p);
    if (growing && (p.back() / p.front() > opt.growth_factor ||
                    last_inc >= opt.divergence_persistence * first_inc)) {
      rep.verdict = Classification::TypeA;
    } else if (stat < opt.jump_threshold) {
      rep.verdict = Classification::Crossover;
    }
    return rep;
  }

  if (sizes.size() < 3) {
    throw InsufficientSizes("classify_transition: need at least 3 sizes, got " +
                            std::to_string(sizes.size()));
  }
  for (int n : sizes) {
    const auto model = family.make(n);
    const ScanField f = sweep(*model, grid, cv, opt.exec).front();
    std::vector<double> line(f.row(0).begin(), f.row(0).end());
    for (double& v : line) v /= model->size_hint();
    const std::size_t k = finite_argmax(line);
    rep.sizes.push_back(n);
    rep.peak_cv.push_back(k == line.size() ? kNaN : line[k]);
    rep.peak_t.push_back(k == line.size() ? kNaN : opt.t_axis[k]);
    rep.jump_statistic.push_back(jump_statistic(line, opt.t_axis));
  }
  if (!all_finite(rep.peak_cv) || !all_finite(rep.jump_statistic)) return rep;

  const auto& p = rep.peak_cv;
  const auto& s = rep.jump_statistic;
  if (monotone_increasing(p) && p.back() / p.front() > opt.growth_factor) {
    rep.verdict = Classification::TypeA;
  } else if (monotone_increasing(s) && s.back() / s.front() > opt.jump_growth) {
    rep.verdict = Classification::TypeB;
  } else if (std::abs(s.back() / s.front() - 1.0) <= opt.crossover_tolerance) {
    rep.verdict = Classification::Crossover;
  }
  return rep;
}

}  // namespace thermofid::scan
