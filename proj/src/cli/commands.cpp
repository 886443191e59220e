#include "thermofid/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <omp.h>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "thermofid/cli/config.hpp"
#include "thermofid/errors.hpp"
#include "thermofid/lmg.hpp"

namespace thermofid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

fs::path output_dir(const std::string& configured) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return fs::path(env);
  return fs::path(configured);
}

json line_points(const scan::CriticalLine& line) {
  json a = json::array();
  for (const auto& p : line.points) {
    a.push_back({{"lambda", p.lambda}, {"T_c", p.t_c}, {"uncertainty", p.uncertainty}});
  }
  return a;
}

scan::Classification verdict_at(const std::map<double, scan::Classification>& verdicts,
                                double lambda) {
  for (const auto& [l, v] : verdicts) {
    if (std::abs(l - lambda) <= 1e-9 * std::max(1.0, std::abs(l))) return v;
  }
  return scan::Classification::Undetermined;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

void write_field_csv(const scan::ScanField& f, std::ostream& out) {
  out << "lambda,T,value\n";
  for (std::size_t i = 0; i < f.rows(); ++i) {
    for (std::size_t j = 0; j < f.cols(); ++j) {
      out << num(f.lambda_axis[i]) << ',' << num(f.t_axis[j]) << ',' << num(f.at(i, j)) << '\n';
    }
  }
}

scan::ScanField read_field_csv(std::istream& in, scan::FieldKind kind) {
  std::string line;
  if (!std::getline(in, line) || line != "lambda,T,value") {
    throw DomainError("field csv: expected header 'lambda,T,value'");
  }
  std::vector<double> ls, ts, vs;
  std::vector<std::array<double, 3>> rows;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::array<double, 3> r{};
    std::stringstream ss(line);
    std::string cell;
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(ss, cell, ',')) {
        throw DomainError("field csv: line " + std::to_string(n) + " has fewer than 3 columns");
      }
      try {
        r[k] = cell == "nan" ? std::nan("") : std::stod(cell);
      } catch (const std::exception&) {
        throw DomainError("field csv: bad number '" + cell + "' on line " + std::to_string(n));
      }
    }
    rows.push_back(r);
  }
  for (const auto& r : rows) {
    if (ls.empty() || r[0] != ls.back()) ls.push_back(r[0]);
    if (ls.size() == 1) ts.push_back(r[1]);
  }
  if (rows.empty() || rows.size() != ls.size() * ts.size()) {
    throw DomainError("field csv: rows do not form a rectangular lambda-outer grid");
  }
  scan::ScanField f(kind, ls, ts);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][1] != ts[k % ts.size()] || rows[k][0] != ls[k / ts.size()]) {
      throw DomainError("field csv: row " + std::to_string(k + 2) + " is out of grid order");
    }
    f.values[k] = rows[k][2];
  }
  return f;
}

void write_critical_csv(const std::vector<LabelledPoint>& points, std::ostream& out) {
  out << "lambda,T_c,detection,classification\n";
  for (const auto& p : points) {
    out << num(p.point.lambda) << ',' << num(p.point.t_c) << ','
        << scan::to_string(p.detection) << ',' << scan::to_string(p.classification) << '\n';
  }
}

int cmd_scan(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }

  const auto model = make_model(cfg.model);
  const scan::ScanGrid grid = cfg.grid();
  std::vector<scan::ScanField> fields;
  try {
    fields = scan::sweep(*model, grid, cfg.fields);
  } catch (const std::exception& e) {
    err << "evaluation failed: " << e.what() << '\n';
    return kExitEvaluation;
  }

  std::size_t missing = 0;
  json failures = json::object();
  for (const auto& f : fields) {
    missing += f.missing();
    failures[scan::to_string(f.kind)] = f.missing();
  }
  const std::size_t cells = fields.size() * grid.lambda_axis.size() * grid.t_axis.size();
  const double failed_fraction = static_cast<double>(missing) / static_cast<double>(cells);
  if (failed_fraction > cfg.failure_budget) {
    err << "evaluation failed: " << missing << " of " << cells
        << " cells missing, above the budget of " << cfg.failure_budget << '\n';
    return kExitEvaluation;
  }

  std::map<double, scan::Classification> verdicts;
  json classifications = json::array();
  if (cfg.classify) {
    const auto& c = *cfg.classify;
    scan::ModelFamily family{[&](int n) { return make_model(cfg.model, n); },
                             is_size_free(cfg.model)};
    scan::ClassifyOptions opt;
    opt.t_axis = c.t.expand();
    opt.growth_factor = c.growth_factor;
    opt.jump_growth = c.jump_growth;
    opt.crossover_tolerance = c.crossover_tolerance;
    for (double l : c.lambdas) {
      try {
        const auto rep = scan::classify_transition(family, l, c.sizes, opt);
        verdicts[l] = rep.verdict;
        classifications.push_back({{"lambda", l},
                                   {"verdict", scan::to_string(rep.verdict)},
                                   {"sizes", rep.sizes},
                                   {"peak_cv", rep.peak_cv},
                                   {"peak_t", rep.peak_t},
                                   {"jump_statistic", rep.jump_statistic}});
      } catch (const std::exception& e) {
        err << "classification failed at lambda=" << l << ": " << e.what() << '\n';
        return kExitEvaluation;
      }
    }
  }

  auto field_of = [&](scan::FieldKind k) -> const scan::ScanField& {
    for (const auto& f : fields) {
      if (f.kind == k) return f;
    }
    throw std::logic_error("field not swept");
  };
  std::vector<LabelledPoint> labelled;
  json lines = json::array();
  auto add_line = [&](scan::FieldKind k, const scan::CriticalLine& line) {
    for (const auto& p : line.points) {
      labelled.push_back({p, line.detection, verdict_at(verdicts, p.lambda)});
    }
    lines.push_back({{"field", scan::to_string(k)},
                     {"detection", scan::to_string(line.detection)},
                     {"points", line_points(line)}});
  };
  for (auto k : cfg.detection.minima) {
    try {
      add_line(k, scan::locate_minima(field_of(k)));
    } catch (const EmptyLine&) {
      add_line(k, scan::CriticalLine{{}, scan::Detection::Minimum, scan::Classification::Undetermined});
    }
  }
  for (auto k : cfg.detection.jumps) {
    try {
      add_line(k, scan::locate_jumps(field_of(k), cfg.detection.jump));
    } catch (const DomainError& e) {
      err << "jump detection on " << scan::to_string(k) << " skipped: " << e.what() << '\n';
      add_line(k, scan::CriticalLine{{}, scan::Detection::Jump, scan::Classification::Undetermined});
    }
  }

  const fs::path dir = output_dir(cfg.output_dir);
  json outputs = json::array();
  try {
    fs::create_directories(dir);
    for (const auto& f : fields) {
      const fs::path p = dir / (cfg.output_prefix + scan::to_string(f.kind) + ".csv");
      std::ostringstream s;
      write_field_csv(f, s);
      write_file(p, s.str());
      outputs.push_back(p.string());
    }
    const fs::path cl = dir / (cfg.output_prefix + "critical_lines.csv");
    std::ostringstream s;
    write_critical_csv(labelled, s);
    write_file(cl, s.str());
    outputs.push_back(cl.string());

    const fs::path rp = dir / (cfg.output_prefix + "report.json");
    outputs.push_back(rp.string());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json report = {{"config", to_json(cfg)},
                   {"outputs", outputs},
                   {"critical_lines", lines},
                   {"classifications", classifications},
                   {"timing_seconds", seconds},
                   {"cell_failures", {{"total", missing}, {"cells", cells}, {"per_field", failures}}},
                   {"coverage", 1.0 - failed_fraction}};
    write_file(rp, report.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitEvaluation;
  }
  for (const auto& o : outputs) out << o.get<std::string>() << '\n';
  return kExitOk;
}

int cmd_validate(std::ostream& out, std::ostream& err,
                 const validation::ValidationKernels& kernels) {
  const auto rep = validation::run_validation(kernels);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json samples = json::array();
    for (const auto& s : c.samples) {
      samples.push_back({{"label", s.label}, {"measured", s.measured}, {"bound", s.bound}});
    }
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"samples", samples}});
  }
  out << json{{"checks", checks}, {"all_passed", rep.all_passed()}}.dump(2) << '\n';
  if (rep.all_passed()) return kExitOk;
  err << "failed checks:";
  for (const auto& n : rep.failed()) err << ' ' << n;
  err << '\n';
  return kExitValidation;
}

int cmd_meanfield(const std::vector<double>& lambdas, double gamma, double t_step,
                  double t_max, std::ostream& out, std::ostream& err) {
  if (lambdas.empty()) {
    err << "meanfield: --lambda needs at least one value\n";
    return kExitConfig;
  }
  if (!(t_step > 0.0) || !(t_max >= t_step)) {
    err << "meanfield: need 0 < t-step <= t-max\n";
    return kExitConfig;
  }
  std::ostringstream s;
  try {
    s << "lambda,T_c,T,m_x\n";
    const long n = static_cast<long>(std::floor(t_max / t_step + 1e-9));
    for (double l : lambdas) {
      const double tc = lmg::lmg_meanfield_critical_temperature(l);
      for (long i = 1; i <= n; ++i) {
        const double t = i * t_step;
        const auto sol = lmg::lmg_meanfield_solve(1.0 / t, l, gamma);
        s << num(l) << ',' << num(tc) << ',' << num(t) << ',' << num(sol.m_x) << '\n';
      }
    }
  } catch (const DomainError& e) {
    err << "meanfield: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "meanfield: " << e.what() << '\n';
    return kExitEvaluation;
  }
  out << s.str();
  return kExitOk;
}

int cmd_boundary(const std::string& config_path, std::ostream& out, std::ostream& err) {
  json cfg;
  std::string text;
  {
    std::ifstream in(config_path);
    if (!in) {
      err << "config:0: <file>: cannot read " << config_path << '\n';
      return kExitConfig;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto fail = [&](const std::string& key, const std::string& msg) {
    const auto hit = text.find("\"" + key + "\"");
    const int line = hit == std::string::npos
                         ? 1
                         : 1 + static_cast<int>(std::count(text.begin(), text.begin() + hit, '\n'));
    err << ConfigError(key, line, msg).what() << '\n';
    return kExitConfig;
  };
  try {
    cfg = json::parse(text);
  } catch (const json::parse_error& e) {
    err << "config: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!cfg.is_object() || !cfg.contains("input") || !cfg["input"].is_string()) {
    return fail("input", "missing or not a string");
  }
  scan::FieldKind kind = scan::FieldKind::F_beta;
  scan::Detection detection = scan::Detection::Minimum;
  scan::JumpOptions jopt;
  try {
    if (cfg.contains("field")) kind = scan::parse_field_kind(cfg.at("field").get<std::string>());
  } catch (const std::exception& e) {
    return fail("field", e.what());
  }
  try {
    if (cfg.contains("detection")) detection = scan::parse_detection(cfg.at("detection").get<std::string>());
  } catch (const std::exception& e) {
    return fail("detection", e.what());
  }
  try {
    if (cfg.contains("jump_threshold")) jopt.threshold = cfg.at("jump_threshold").get<double>();
    if (!(jopt.threshold > 0.0)) return fail("jump_threshold", "must be > 0");
  } catch (const std::exception& e) {
    return fail("jump_threshold", e.what());
  }
  try {
    if (cfg.contains("direction")) jopt.direction = scan::parse_jump_direction(cfg.at("direction").get<std::string>());
  } catch (const std::exception& e) {
    return fail("direction", e.what());
  }
  try {
    if (cfg.contains("location")) jopt.location = scan::parse_jump_location(cfg.at("location").get<std::string>());
  } catch (const std::exception& e) {
    return fail("location", e.what());
  }
  std::string dir_cfg = ".";
  std::string prefix;
  if (cfg.contains("output") && cfg["output"].is_object()) {
    dir_cfg = cfg["output"].value("dir", dir_cfg);
    prefix = cfg["output"].value("prefix", prefix);
  }

  fs::path input(cfg["input"].get<std::string>());
  if (input.is_relative()) input = fs::path(config_path).parent_path() / input;
  scan::ScanField field;
  try {
    std::ifstream in(input);
    if (!in) return fail("input", "cannot read " + input.string());
    field = read_field_csv(in, kind);
  } catch (const DomainError& e) {
    return fail("input", e.what());
  }

  scan::CriticalLine line{{}, detection, scan::Classification::Undetermined};
  try {
    if (detection == scan::Detection::Minimum) {
      line = scan::locate_minima(field);
    } else {
      line = scan::locate_jumps(field, jopt);
    }
  } catch (const EmptyLine&) {
  } catch (const DomainError& e) {
    return fail("input", e.what());
  }
  std::vector<LabelledPoint> pts;
  for (const auto& p : line.points) pts.push_back({p, line.detection, line.classification});
  std::ostringstream s;
  write_critical_csv(pts, s);
  try {
    const fs::path dir = output_dir(dir_cfg);
    fs::create_directories(dir);
    write_file(dir / (prefix + "critical_lines.csv"), s.str());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kExitEvaluation;
  }
  out << s.str();
  return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"thermal fidelity and phase-transition scans"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: available parallelism)")
      ->check(CLI::NonNegativeNumber);

  std::string scan_cfg;
  auto* scan_cmd = app.add_subcommand("scan", "sweep a lambda-T grid from a config");
  scan_cmd->add_option("config", scan_cfg, "run config (JSON)")->required();

  auto* validate_cmd = app.add_subcommand("validate", "run the oracle suite");

  std::vector<double> lambdas;
  double gamma = 0.0;
  double t_step = 0.01;
  double t_max = 1.2;
  auto* mf_cmd = app.add_subcommand("meanfield", "LMG mean-field T_c and m_x(T)");
  mf_cmd->add_option("--lambda", lambdas, "comma-separated lambda values")
      ->required()
      ->delimiter(',');
  mf_cmd->add_option("--gamma", gamma, "anisotropy, in [0, 1)");
  mf_cmd->add_option("--t-step", t_step, "temperature spacing");
  mf_cmd->add_option("--t-max", t_max, "largest temperature");

  std::string boundary_cfg;
  auto* boundary_cmd = app.add_subcommand("boundary", "minima / jumps of a field CSV");
  boundary_cmd->add_option("config", boundary_cfg, "boundary config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  if (threads > 0) omp_set_num_threads(threads);

  if (*scan_cmd) return cmd_scan(scan_cfg, out, err);
  if (*validate_cmd) return cmd_validate(out, err);
  if (*mf_cmd) return cmd_meanfield(lambdas, gamma, t_step, t_max, out, err);
  if (*boundary_cmd) return cmd_boundary(boundary_cfg, out, err);
  return kExitConfig;
}

}  // namespace thermofid::cli
