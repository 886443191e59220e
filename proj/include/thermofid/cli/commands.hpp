#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "thermofid/scan.hpp"
#include "thermofid/validation.hpp"

namespace thermofid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEvaluation = 3;
inline constexpr int kExitValidation = 4;

/// Overrides output.dir of every config when set.
inline constexpr const char* kOutputDirEnv = "THERMOFID_OUTPUT_DIR";

/// `lambda,T,value`, lambda-outer rows, 17 significant digits.
void write_field_csv(const scan::ScanField& f, std::ostream& out);
/// Inverse of write_field_csv. Throws DomainError on a malformed table.
scan::ScanField read_field_csv(std::istream& in, scan::FieldKind kind);

struct LabelledPoint {
  scan::CriticalPoint point;
  scan::Detection detection;
  scan::Classification classification;
};
/// `lambda,T_c,detection,classification`.
void write_critical_csv(const std::vector<LabelledPoint>& points, std::ostream& out);

/// Sweep, detection, optional classification; writes one CSV per field,
/// critical_lines.csv and report.json.
int cmd_scan(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Oracle suite; JSON report on `out`.
int cmd_validate(std::ostream& out, std::ostream& err,
                 const validation::ValidationKernels& kernels = {});

/// `lambda,T_c,T,m_x` for each lambda on T = t_step, 2 t_step, .. t_max.
int cmd_meanfield(const std::vector<double>& lambdas, double gamma, double t_step,
                  double t_max, std::ostream& out, std::ostream& err);

/// Minima / jump extraction on a field CSV named by a small JSON config.
int cmd_boundary(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Full command-line front end.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace thermofid::cli
