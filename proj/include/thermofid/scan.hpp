#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermofid/thermo_model.hpp"

// Sweeps over the lambda-T plane and detection of critical lines on the result.
namespace thermofid::scan {

enum class FieldKind { F_beta, Cv, chi, chi_beta, chi_lambda };

std::string to_string(FieldKind k);
/// Throws DomainError for an unknown name.
FieldKind parse_field_kind(const std::string& s);

struct ScanGrid {
  std::vector<double> lambda_axis;
  std::vector<double> t_axis;
  /// Temperature step of F_beta (beta1 = 1 / (T + delta_t)).
  double delta_t = 0.0;
  /// Field step of chi and chi_lambda; default_delta_lambda(lambda) when unset.
  std::optional<double> delta_lambda;
};

/// Axes non-empty, finite and strictly increasing; T_min > delta_t / 2 > 0.
void validate(const ScanGrid& g);

/// min, min + step, ... up to max (inclusive within step / 1e6). Each point is
/// min + i * step so the axis does not accumulate rounding.
std::vector<double> uniform_axis(double min, double max, double step);

/// Values indexed (lambda index, T index), row-major with lambda outer.
/// Missing cells hold NaN.
struct ScanField {
  FieldKind kind = FieldKind::F_beta;
  std::vector<double> lambda_axis;
  std::vector<double> t_axis;
  std::vector<double> values;

  ScanField() = default;
  ScanField(FieldKind k, std::vector<double> lambdas, std::vector<double> ts);

  std::size_t rows() const { return lambda_axis.size(); }
  std::size_t cols() const { return t_axis.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
  /// The T-line at lambda index i.
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols(), cols()};
  }
  std::size_t missing() const;
};

/// Every requested field at every cell. EvaluationErrors become NaN cells; any
/// other exception is rethrown after the sweep. Serial and parallel results are
/// bit-identical.
std::vector<ScanField> sweep(const ThermoModel& model, const ScanGrid& grid,
                             std::span<const FieldKind> fields,
                             Execution exec = Execution::Parallel);

/// Single-threaded reference for sweep.
std::vector<ScanField> sweep_serial(const ThermoModel& model, const ScanGrid& grid,
                                    std::span<const FieldKind> fields);

/// One cell's value of `kind`, as computed by sweep.
double evaluate_cell(const ThermoModel& model, const ScanGrid& grid,
                     FieldKind kind, double lambda, double t);

// ---------------------------------------------------------------------------
// Detection.

enum class Detection { Minimum, Jump };
enum class Classification { TypeA, TypeB, Crossover, Undetermined };

std::string to_string(Detection d);
std::string to_string(Classification c);
Classification parse_classification(const std::string& s);
Detection parse_detection(const std::string& s);

struct CriticalPoint {
  double lambda = 0.0;
  double t_c = 0.0;
  double uncertainty = 0.0;  // one grid step
};

struct CriticalLine {
  std::vector<CriticalPoint> points;
  Detection detection = Detection::Minimum;
  Classification classification = Classification::Undetermined;
};

/// Interior argmin over T for each lambda with 3-point parabolic refinement.
/// Rows whose minimum is on the boundary (or next to a missing cell) are
/// skipped. Throws EmptyLine when no row has an interior minimum.
CriticalLine locate_minima(const ScanField& field);

enum class JumpDirection { Any, Falling, Rising };
std::string to_string(JumpDirection d);
JumpDirection parse_jump_direction(const std::string& s);

/// Where a flagged jump is placed: the midpoint of its steepest step, or the
/// centre of the run of adjacent flagged steps with the largest total change.
enum class JumpLocation { Steepest, RunCentre };
std::string to_string(JumpLocation l);
JumpLocation parse_jump_location(const std::string& s);

struct JumpOptions {
  double threshold = 20.0;
  JumpDirection direction = JumpDirection::Any;
  JumpLocation location = JumpLocation::Steepest;
};

/// Flags T-steps whose discrete derivative exceeds threshold x the row's median
/// |derivative| and reports one location per row (see JumpLocation). Requires a
/// uniform t_axis (DomainError otherwise). Rows without a flagged step are
/// skipped; the result may be empty.
CriticalLine locate_jumps(const ScanField& field, const JumpOptions& opt = {});

// ---------------------------------------------------------------------------
// Classification.

struct ModelFamily {
  /// Model at system size N.
  std::function<std::shared_ptr<const ThermoModel>(int)> make;
  /// The formula is already the thermodynamic limit; sizes are ignored and the
  /// temperature step is refined instead.
  bool size_free = false;
};

struct ClassifyOptions {
  /// T-line searched for the C_v peak.
  std::vector<double> t_axis;
  /// TypeA: monotone peak growth with last / first above this.
  double growth_factor = 3.0;
  /// TypeB: monotone growth of the jump statistic with last / first above this.
  double jump_growth = 1.5;
  /// Crossover: jump statistic ratio within 1 +/- this.
  double crossover_tolerance = 0.1;
  /// Size-free families: relative temperature steps, decreasing by a fixed factor.
  std::vector<double> refinement_steps = {1e-2, 1e-3, 1e-4, 1e-5};
  /// Size-free families: the increments per refinement must stay above this
  /// fraction of the first one (no decay, so no finite limit).
  double divergence_persistence = 0.5;
  /// Size-free families: jump statistic above which a bounded peak is not a crossover.
  double jump_threshold = 20.0;
  Execution exec = Execution::Parallel;
};

struct ClassificationReport {
  Classification verdict = Classification::Undetermined;
  /// Sizes, or for size-free families the relative steps.
  std::vector<double> sizes;
  /// Per-site C_v maximum over T for each size or step.
  std::vector<double> peak_cv;
  std::vector<double> peak_t;
  /// max |dC/dT| / median |dC/dT| along the T-line.
  std::vector<double> jump_statistic;
};

/// max |d| / median |d| of the finite discrete derivative of `line`.
double jump_statistic(std::span<const double> line, std::span<const double> t);

/// Throws InsufficientSizes with fewer than 3 sizes (or refinement steps).
ClassificationReport classify_transition(const ModelFamily& family, double lambda,
                                         std::span<const int> sizes,
                                         const ClassifyOptions& opt);

}  // namespace thermofid::scan
