#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>
#include <sys/wait.h>

#include "doctest.h"
#include "thermofid/cli/commands.hpp"
#include "thermofid/cli/config.hpp"
#include "thermofid/errors.hpp"

using namespace thermofid;
using namespace thermofid::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("thermofid_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string minimal_config(const fs::path& out) {
  return R"({
  "model": {"name": "two_level"},
  "grid": {
    "lambda": [0.5, 1.0, 1.5, 2.0],
    "t": {"min": 0.25, "max": 1.0, "step": 0.25}
  },
  "output": {"dir": ")" + out.string() + R"("}
}
)";
}

int run(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  args.insert(args.begin(), "thermofid");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing fills defaults and round-trips") {
  const auto cfg = parse_config(minimal_config("out"));
  CHECK(cfg.model.name == "two_level");
  CHECK(cfg.lambda.expand().size() == 4);
  CHECK(cfg.t.expand().size() == 4);
  CHECK(cfg.delta_t == doctest::Approx(0.25e-3));
  CHECK(cfg.fields.size() == 3);
  CHECK(cfg.detection.minima.size() == 1);
  CHECK(cfg.detection.jumps.size() == 1);
  const auto again = parse_config(to_json(cfg).dump());
  CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("config errors name the key and its line") {
  const std::string text = R"({
  "model": {"name": "two_level"},
  "grid": {
    "lambda": [0.5],
    "t": {"min": -0.5, "max": 1.0, "step": 0.25}
  }
})";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.t.min");
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("config:5: grid.t.min") == 0);
  }
  CHECK_THROWS_AS(parse_config(R"({"model": {"name": "two_level"}, "grid": {"lambda": [0], "t": [1]}, "colour": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"name": "potts"}, "grid": {"lambda": [0], "t": [1]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"name": "ising2d"}, "grid": {"lambda": [0.5], "t": [1]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
}

TEST_CASE("scan with a bad temperature exits 2 and reports the key") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "bad.json", R"({
  "model": {"name": "two_level"},
  "grid": {"lambda": [1.0], "t": {"min": -1, "max": 1, "step": 0.5}}
})");
  std::string err;
  CHECK(run({"scan", cfg.string()}, nullptr, &err) == kExitConfig);
  CHECK(err.find("grid.t.min") != std::string::npos);
  CHECK(err.find("config:3:") != std::string::npos);
  CHECK(run({"scan", (tmp.path / "nope.json").string()}) == kExitConfig);
}

TEST_CASE("minimal scan writes the field tables, the critical line and the report") {
  TempDir tmp;
  const auto out = tmp.path / "out";
  const auto cfg = write(tmp.path / "c.json", minimal_config(out));
  std::string text;
  REQUIRE(run({"scan", cfg.string()}, &text) == kExitOk);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(out)) n += e.is_regular_file();
  CHECK(n == 5);
  for (const char* f : {"F_beta.csv", "Cv.csv", "chi_beta.csv", "critical_lines.csv", "report.json"})
    CHECK(fs::exists(out / f));
  const auto table = slurp(out / "Cv.csv");
  CHECK(table.rfind("lambda,T,value\n0.5,0.25,", 0) == 0);
  std::size_t rows = 0;
  for (char c : table) rows += c == '\n';
  CHECK(rows == 17);
  const auto lines = slurp(out / "critical_lines.csv");
  CHECK(lines.rfind("lambda,T_c,detection,classification\n", 0) == 0);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  CHECK(report.at("coverage") == 1.0);
  CHECK(report.at("outputs").size() == 5);
  CHECK(report.contains("timing_seconds"));
}

TEST_CASE("field tables use 17 significant digits and read back exactly") {
  scan::ScanField f(scan::FieldKind::Cv, {0.1, 0.2}, {1.0 / 3.0});
  f.values = {0.1 + 0.2, std::numeric_limits<double>::quiet_NaN()};
  std::ostringstream s;
  write_field_csv(f, s);
  CHECK(s.str() == "lambda,T,value\n0.10000000000000001,0.33333333333333331,0.30000000000000004\n"
                   "0.20000000000000001,0.33333333333333331,nan\n");
  std::istringstream in(s.str());
  const auto g = read_field_csv(in, scan::FieldKind::Cv);
  CHECK(g.values[0] == f.values[0]);
  CHECK(std::isnan(g.values[1]));
  CHECK(g.t_axis == f.t_axis);
  std::istringstream bad("lambda,T,value\n0,1\n");
  CHECK_THROWS_AS(read_field_csv(bad, scan::FieldKind::Cv), DomainError);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  TempDir tmp;
  const std::string cfg_text = R"({
  "model": {"name": "tim1d"},
  "grid": {"lambda": {"min": 0.2, "max": 1.4, "step": 0.2}, "t": {"min": 0.2, "max": 2.0, "step": 0.1}},
  "fields": ["F_beta", "Cv", "chi", "chi_beta", "chi_lambda"]
})";
  const auto cfg = write(tmp.path / "c.json", cfg_text);
  std::vector<std::string> tables;
  for (const char* threads : {"1", "4", "1"}) {
    const auto dir = tmp.path / (std::string("t") + threads + std::to_string(tables.size()));
    setenv(kOutputDirEnv, dir.c_str(), 1);
    REQUIRE(run({"--threads", threads, "scan", cfg.string()}) == kExitOk);
    std::string all;
    for (const char* f : {"F_beta.csv", "Cv.csv", "chi.csv", "chi_beta.csv", "chi_lambda.csv",
                          "critical_lines.csv"})
      all += slurp(dir / f);
    tables.push_back(all);
  }
  unsetenv(kOutputDirEnv);
  omp_set_num_threads(1);
  CHECK(tables[0] == tables[1]);
  CHECK(tables[0] == tables[2]);
}

TEST_CASE("the output directory variable overrides the config") {
  TempDir tmp;
  const auto cfg = write(tmp.path / "c.json", minimal_config(tmp.path / "configured"));
  const auto env_dir = tmp.path / "from_env";
  setenv(kOutputDirEnv, env_dir.c_str(), 1);
  const int rc = run({"scan", cfg.string()});
  unsetenv(kOutputDirEnv);
  CHECK(rc == kExitOk);
  CHECK(fs::exists(env_dir / "Cv.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "configured"));
}

TEST_CASE("cell failures above the budget exit 3") {
  TempDir tmp;
  // A loose quadrature tolerance puts every C_v stencil under the noise floor.
  const auto cfg = write(tmp.path / "c.json", R"({
  "model": {"name": "tim1d", "params": {"quad_tol": 1e-4}},
  "grid": {"lambda": [0.5, 1.0], "t": [0.5, 1.0, 1.5]},
  "fields": ["Cv"],
  "output": {"dir": ")" + (tmp.path / "out").string() + R"("}
})");
  std::string err;
  CHECK(run({"scan", cfg.string()}, nullptr, &err) == kExitEvaluation);
  CHECK(err.find("cells missing") != std::string::npos);
}

TEST_CASE("meanfield prints the critical temperature and magnetisation") {
  std::string out;
  REQUIRE(run({"meanfield", "--lambda", "0,0.8,1"}, &out) == kExitOk);
  std::istringstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda,T_c,T,m_x");
  std::getline(in, line);
  CHECK(line.rfind("0,1,0.01,", 0) == 0);
  CHECK(out.find("\n0.80000000000000004,0.72819") != std::string::npos);
  CHECK(out.find("\n1,0,") != std::string::npos);
  CHECK(run({"meanfield", "--lambda", "1.2"}) == kExitConfig);
  CHECK(run({"meanfield"}) == kExitConfig);
}

TEST_CASE("boundary re-extracts a critical line from a saved field") {
  TempDir tmp;
  const auto out = tmp.path / "scan";
  const auto cfg = write(tmp.path / "c.json", R"({
  "model": {"name": "schottky"},
  "grid": {"lambda": [1.0, 2.0], "t": {"min": 0.1, "max": 1.5, "step": 0.01}},
  "fields": ["F_beta"],
  "output": {"dir": ")" + out.string() + R"("}
})");
  REQUIRE(run({"scan", cfg.string()}) == kExitOk);
  const auto bcfg = write(tmp.path / "b.json", R"({
  "input": "scan/F_beta.csv",
  "field": "F_beta",
  "detection": "minimum",
  "output": {"dir": ")" + (tmp.path / "b").string() + R"("}
})");
  std::string text;
  REQUIRE(run({"boundary", bcfg.string()}, &text) == kExitOk);
  const auto lines = slurp(tmp.path / "b" / "critical_lines.csv");
  CHECK(lines == text);
  std::size_t rows = 0;
  for (char c : lines) rows += c == '\n';
  CHECK(rows == 3);
  // Same points as the scan's own detection.
  const auto from_scan = slurp(out / "critical_lines.csv");
  CHECK(from_scan.find(lines.substr(lines.find('\n') + 1, 20)) != std::string::npos);
  const auto missing = write(tmp.path / "m.json", R"({"input": "nowhere.csv"})");
  CHECK(run({"boundary", missing.string()}) == kExitConfig);
}

TEST_CASE("validate exits 4 when a kernel is broken") {
  validation::ValidationKernels k;
  k.chi_beta = [](const ThermoModel& m, const ThermoPoint& p, double dt) {
    return 2.0 * fidelity_susceptibility_beta(m, p, dt);
  };
  std::ostringstream out, err;
  CHECK(cmd_validate(out, err, k) == kExitValidation);
  CHECK(err.str().find("chi_beta_vs_cv") != std::string::npos);
  const auto rep = nlohmann::json::parse(out.str());
  CHECK(rep.at("all_passed") == false);
}

TEST_CASE("unknown subcommands and options are usage errors") {
  CHECK(run({"frobnicate"}) == kExitConfig);
  CHECK(run({"scan"}) == kExitConfig);
  CHECK(run({"--help"}) == kExitOk);
}

}

TEST_SUITE("cli") {

TEST_CASE("shipped example configs parse") {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(THERMOFID_CONFIG_DIR)) {
    if (e.path().extension() != ".json" || e.path().stem() == "boundary") continue;
    INFO(e.path().string());
    CHECK_NOTHROW(load_config(e.path().string()));
    ++n;
  }
  CHECK(n >= 4);
}

TEST_CASE("the installed binary reports exit codes to the shell") {
  const std::string bin = THERMOFID_CLI_PATH;
  const int bad = std::system((bin + " frobnicate >/dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == kExitConfig);
  const int ok = std::system((bin + " meanfield --lambda 0.5 >/dev/null").c_str());
  CHECK(WEXITSTATUS(ok) == kExitOk);
}

}
