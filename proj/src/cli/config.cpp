#include "thermofid/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "thermofid/errors.hpp"
#include "thermofid/kernels.hpp"
#include "thermofid/lmg.hpp"
#include "thermofid/models.hpp"
#include "thermofid/oracle.hpp"

namespace thermofid::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error("config:" + std::to_string(line) + ": " + key + ": " + message),
      key_(std::move(key)),
      line_(line) {}

namespace {

// Line of the first occurrence of each path component in order, e.g. grid -> t -> min.
// json keeps no source positions, so this follows the quoted keys textually.
int line_of(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& k : path) {
    if (k.empty() || k.front() == '[') continue;
    const auto hit = text.find("\"" + k + "\"", pos);
    if (hit == std::string::npos) break;
    pos = hit + 1;
  }
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(pos, text.size()), '\n'));
}

std::string dotted(const std::vector<std::string>& path) {
  std::string s;
  for (const auto& k : path) {
    if (!s.empty() && k.front() != '[') s += '.';
    s += k;
  }
  return s.empty() ? "<root>" : s;
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    throw ConfigError(dotted(path), line_of(text_, path), msg);
  }

  const json& require(const json& obj, const std::vector<std::string>& path) const {
    const auto it = obj.find(path.back());
    if (it == obj.end()) fail(path, "missing required key");
    return *it;
  }

  double number(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number()) fail(path, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
  }

  double number_or(const json& obj, const std::vector<std::string>& path, double def) const {
    const auto it = obj.find(path.back());
    return it == obj.end() ? def : number(*it, path);
  }

  int integer(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number_integer()) fail(path, "must be an integer");
    return v.get<int>();
  }

  std::string string(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_string()) fail(path, "must be a string");
    return v.get<std::string>();
  }

  const json& object(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_object()) fail(path, "must be an object");
    return v;
  }

  void only_keys(const json& obj, std::vector<std::string> path,
                 std::initializer_list<const char*> allowed) const {
    for (const auto& [k, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) {
        path.push_back(k);
        fail(path, "unknown key");
      }
    }
  }

  AxisSpec axis(const json& v, const std::vector<std::string>& path, bool positive) const {
    AxisSpec a;
    if (v.is_array()) {
      if (v.empty()) fail(path, "must not be empty");
      for (std::size_t i = 0; i < v.size(); ++i) {
        auto p = path;
        p.push_back("[" + std::to_string(i) + "]");
        const double x = number(v[i], p);
        if (positive && !(x > 0.0)) fail(p, "temperature must be > 0");
        if (!a.values.empty() && !(x > a.values.back())) fail(p, "values must be strictly increasing");
        a.values.push_back(x);
      }
      return a;
    }
    object(v, path);
    only_keys(v, path, {"min", "max", "step"});
    auto key = [&](const char* k) {
      auto p = path;
      p.push_back(k);
      return p;
    };
    a.min = number(require(v, key("min")), key("min"));
    a.max = number(require(v, key("max")), key("max"));
    a.step = number(require(v, key("step")), key("step"));
    if (positive && !(*a.min > 0.0)) fail(key("min"), "temperature must be > 0");
    if (!(*a.max >= *a.min)) fail(key("max"), "must be >= min");
    if (!(*a.step > 0.0)) fail(key("step"), "must be > 0");
    if ((*a.max - *a.min) / *a.step > 1e7) fail(key("step"), "too many grid points");
    return a;
  }

  std::vector<scan::FieldKind> field_list(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_array()) fail(path, "must be a list of field names");
    std::vector<scan::FieldKind> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto p = path;
      p.push_back("[" + std::to_string(i) + "]");
      try {
        out.push_back(scan::parse_field_kind(string(v[i], p)));
      } catch (const DomainError& e) {
        fail(p, e.what());
      }
    }
    return out;
  }

 private:
  const std::string& text_;
};

// Parameter tables: name -> default. Integers are marked so they round-trip as integers.
struct Param {
  const char* name;
  double def;
  bool integer;
};

const std::vector<Param>& params_of(const std::string& model) {
  static const std::vector<Param> none;
  static const std::vector<Param> schottky{{"degeneracy", 1.0, false}};
  static const std::vector<Param> ising{{"coupling_j", 1.0, false},
                                        {"n_sites", 1.0, false},
                                        {"quad_tol", 1e-10, false}};
  static const std::vector<Param> dicke{{"omega", 1.0, false},
                                        {"omega0", 1.0, false},
                                        {"n_atoms", 1.0, true},
                                        {"quad_tol", 1e-10, false}};
  static const std::vector<Param> tim{{"coupling_j", 1.0, false},
                                      {"n_sites", 1.0, false},
                                      {"quad_tol", 1e-10, false}};
  static const std::vector<Param> lmg{{"n_spins", 2.0, true}, {"gamma", 0.0, false}};
  static const std::vector<Param> chain{{"n_sites", 3.0, true},
                                        {"coupling_j", 1.0, false},
                                        {"longitudinal", 0.0, false}};
  if (model == "two_level") return none;
  if (model == "schottky") return schottky;
  if (model == "ising2d") return ising;
  if (model == "dicke") return dicke;
  if (model == "tim1d") return tim;
  if (model == "lmg") return lmg;
  if (model == "chain") return chain;
  throw DomainError("unknown model '" + model + "'");
}

quadrature::Options quad_of(const json& p) {
  quadrature::Options q;
  q.abs_tol = p.at("quad_tol").get<double>();
  return q;
}

ModelSpec read_model(const Reader& r, const json& root) {
  const json& m = r.object(r.require(root, {"model"}), {"model"});
  r.only_keys(m, {"model"}, {"name", "params"});
  ModelSpec spec;
  spec.name = r.string(r.require(m, {"model", "name"}), {"model", "name"});
  const std::vector<Param>* table = nullptr;
  try {
    table = &params_of(spec.name);
  } catch (const DomainError& e) {
    r.fail({"model", "name"}, e.what());
  }
  json given = json::object();
  if (m.contains("params")) given = r.object(m.at("params"), {"model", "params"});
  for (const auto& [k, v] : given.items()) {
    const std::vector<std::string> path{"model", "params", k};
    if (spec.name == "lmg" && k == "sectors") {
      try {
        lmg::parse_sectors(r.string(v, path));
      } catch (const DomainError& e) {
        r.fail(path, e.what());
      }
      continue;
    }
    bool known = false;
    for (const Param& p : *table) known = known || k == p.name;
    if (!known) r.fail(path, "unknown parameter for model " + spec.name);
  }
  for (const Param& p : *table) {
    const std::vector<std::string> path{"model", "params", p.name};
    if (p.integer) {
      spec.params[p.name] = given.contains(p.name) ? r.integer(given.at(p.name), path)
                                                   : static_cast<int>(p.def);
    } else {
      spec.params[p.name] = given.contains(p.name) ? r.number(given.at(p.name), path) : p.def;
    }
  }
  if (spec.name == "lmg") {
    spec.params["sectors"] = given.value("sectors", std::string("maximal"));
  }
  try {
    make_model(spec);
  } catch (const DomainError& e) {
    r.fail({"model", "params"}, e.what());
  }
  return spec;
}

json axis_json(const AxisSpec& a) { return a.to_json(); }

}  // namespace

std::vector<double> AxisSpec::expand() const {
  if (step) return scan::uniform_axis(*min, *max, *step);
  return values;
}

json AxisSpec::to_json() const {
  if (step) return json{{"min", *min}, {"max", *max}, {"step", *step}};
  return json(values);
}

scan::ScanGrid RunConfig::grid() const {
  scan::ScanGrid g;
  g.lambda_axis = lambda.expand();
  g.t_axis = t.expand();
  g.delta_t = delta_t;
  g.delta_lambda = delta_lambda;
  return g;
}

std::shared_ptr<const ThermoModel> make_model(const ModelSpec& m, int size) {
  const json& p = m.params;
  if (m.name == "two_level") return std::make_shared<models::TwoLevelModel>();
  if (m.name == "schottky") {
    return std::make_shared<models::SchottkyModel>(p.at("degeneracy").get<double>());
  }
  if (m.name == "ising2d") {
    models::Ising2DParams ip{p.at("coupling_j").get<double>(), p.at("n_sites").get<double>()};
    if (size > 0) ip.n_sites = size;
    if (!(ip.coupling_j > 0.0)) throw DomainError("ising2d: coupling_j must be > 0");
    if (!(ip.n_sites > 0.0)) throw DomainError("ising2d: n_sites must be > 0");
    return std::make_shared<models::Ising2DModel>(ip, quad_of(p));
  }
  if (m.name == "dicke") {
    models::DickeParams dp;
    dp.omega = p.at("omega").get<double>();
    dp.omega0 = p.at("omega0").get<double>();
    dp.n_atoms = size > 0 ? size : p.at("n_atoms").get<int>();
    models::validate(dp);
    return std::make_shared<models::DickeModel>(dp, quad_of(p));
  }
  if (m.name == "tim1d") {
    models::Tim1DParams tp{p.at("coupling_j").get<double>(), p.at("n_sites").get<double>()};
    if (size > 0) tp.n_sites = size;
    if (!(tp.coupling_j > 0.0)) throw DomainError("tim1d: coupling_j must be > 0");
    if (!(tp.n_sites > 0.0)) throw DomainError("tim1d: n_sites must be > 0");
    return std::make_shared<models::Tim1DModel>(tp, quad_of(p));
  }
  if (m.name == "lmg") {
    const int n = size > 0 ? size : p.at("n_spins").get<int>();
    const double gamma = p.at("gamma").get<double>();
    lmg::validate(lmg::LmgParams{n, gamma, 0.0});
    return std::make_shared<lmg::LmgModel>(n, gamma,
                                           lmg::parse_sectors(p.at("sectors").get<std::string>()));
  }
  if (m.name == "chain") {
    const int n = size > 0 ? size : p.at("n_sites").get<int>();
    if (n < 1 || n > 8) throw DomainError("chain: n_sites must be in [1, 8]");
    const double j = p.at("coupling_j").get<double>();
    const oracle::Matrix h0 =
        oracle::transverse_ising_chain(n, j, 0.0, p.at("longitudinal").get<double>()).matrix();
    oracle::Matrix v = oracle::Matrix::Zero(h0.rows(), h0.cols());
    for (int i = 0; i < n; ++i) v -= oracle::site_operator('x', i, n);
    return std::make_shared<oracle::DenseModel>(h0, v);
  }
  throw DomainError("unknown model '" + m.name + "'");
}

bool is_size_free(const ModelSpec& m) { return m.name == "ising2d"; }

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + at, '\n'));
    throw ConfigError("<syntax>", line, e.what());
  }
  const Reader r(text);
  r.object(root, {});
  r.only_keys(root, {}, {"model", "grid", "perturbation", "fields", "detection",
                         "classify", "output", "failure_budget"});

  RunConfig c;
  c.model = read_model(r, root);

  const json& grid = r.object(r.require(root, {"grid"}), {"grid"});
  r.only_keys(grid, {"grid"}, {"lambda", "t"});
  c.lambda = r.axis(r.require(grid, {"grid", "lambda"}), {"grid", "lambda"}, false);
  c.t = r.axis(r.require(grid, {"grid", "t"}), {"grid", "t"}, true);

  const std::vector<double> ts = c.t.expand();
  const std::vector<double> ls = c.lambda.expand();
  if (root.contains("perturbation")) {
    const json& p = r.object(root.at("perturbation"), {"perturbation"});
    r.only_keys(p, {"perturbation"}, {"delta_t", "delta_lambda"});
    if (p.contains("delta_t")) {
      c.delta_t = r.number(p.at("delta_t"), {"perturbation", "delta_t"});
    }
    if (p.contains("delta_lambda")) {
      c.delta_lambda = r.number(p.at("delta_lambda"), {"perturbation", "delta_lambda"});
      if (!(*c.delta_lambda > 0.0)) r.fail({"perturbation", "delta_lambda"}, "must be > 0");
    }
  }
  if (c.delta_t == 0.0) c.delta_t = default_delta_t(ts.front());
  if (!(c.delta_t > 0.0)) r.fail({"perturbation", "delta_t"}, "must be > 0");
  if (!(ts.front() > 0.5 * c.delta_t)) {
    r.fail({"perturbation", "delta_t"}, "every T must exceed delta_t / 2");
  }

  c.fields = {scan::FieldKind::F_beta, scan::FieldKind::Cv, scan::FieldKind::chi_beta};
  if (root.contains("fields")) {
    c.fields = r.field_list(root.at("fields"), {"fields"});
    if (c.fields.empty()) r.fail({"fields"}, "must request at least one field");
  }
  auto requested = [&](scan::FieldKind k) {
    return std::find(c.fields.begin(), c.fields.end(), k) != c.fields.end();
  };

  if (c.model.name == "ising2d") {
    for (double l : ls) {
      if (l != 0.0) r.fail({"grid", "lambda"}, "ising2d is solved at lambda = 0 only");
    }
    if (requested(scan::FieldKind::chi) || requested(scan::FieldKind::chi_lambda)) {
      r.fail({"fields"}, "ising2d has no field derivative");
    }
  }
  if (c.model.name == "tim1d" || c.model.name == "lmg") {
    for (double l : ls) {
      if (l < 0.0) r.fail({"grid", "lambda"}, "lambda must be >= 0 for " + c.model.name);
    }
  }

  if (requested(scan::FieldKind::F_beta)) c.detection.minima = {scan::FieldKind::F_beta};
  if (requested(scan::FieldKind::Cv)) c.detection.jumps = {scan::FieldKind::Cv};
  if (root.contains("detection")) {
    const json& d = r.object(root.at("detection"), {"detection"});
    r.only_keys(d, {"detection"}, {"minima", "jumps", "jump_threshold", "direction", "location"});
    if (d.contains("minima")) c.detection.minima = r.field_list(d.at("minima"), {"detection", "minima"});
    if (d.contains("jumps")) c.detection.jumps = r.field_list(d.at("jumps"), {"detection", "jumps"});
    c.detection.jump.threshold =
        r.number_or(d, {"detection", "jump_threshold"}, c.detection.jump.threshold);
    if (!(c.detection.jump.threshold > 0.0)) r.fail({"detection", "jump_threshold"}, "must be > 0");
    if (d.contains("direction")) {
      try {
        c.detection.jump.direction =
            scan::parse_jump_direction(r.string(d.at("direction"), {"detection", "direction"}));
      } catch (const DomainError& e) {
        r.fail({"detection", "direction"}, e.what());
      }
    }
    if (d.contains("location")) {
      try {
        c.detection.jump.location =
            scan::parse_jump_location(r.string(d.at("location"), {"detection", "location"}));
      } catch (const DomainError& e) {
        r.fail({"detection", "location"}, e.what());
      }
    }
    for (const auto* list : {&c.detection.minima, &c.detection.jumps}) {
      for (scan::FieldKind k : *list) {
        if (!requested(k)) r.fail({"detection"}, "field " + scan::to_string(k) + " is not requested");
      }
    }
  }

  if (root.contains("classify")) {
    const std::vector<std::string> base{"classify"};
    const json& k = r.object(root.at("classify"), base);
    r.only_keys(k, base, {"lambda", "sizes", "t", "growth_factor", "jump_growth",
                          "crossover_tolerance"});
    ClassifySpec s;
    const json& lam = r.require(k, {"classify", "lambda"});
    if (!lam.is_array() || lam.empty()) r.fail({"classify", "lambda"}, "must be a non-empty list");
    for (std::size_t i = 0; i < lam.size(); ++i) {
      s.lambdas.push_back(r.number(lam[i], {"classify", "lambda", "[" + std::to_string(i) + "]"}));
    }
    if (k.contains("sizes")) {
      const json& sz = k.at("sizes");
      if (!sz.is_array()) r.fail({"classify", "sizes"}, "must be a list of integers");
      for (std::size_t i = 0; i < sz.size(); ++i) {
        const std::vector<std::string> p{"classify", "sizes", "[" + std::to_string(i) + "]"};
        const int n = r.integer(sz[i], p);
        if (n < 1) r.fail(p, "sizes must be >= 1");
        s.sizes.push_back(n);
      }
    }
    if (!is_size_free(c.model) && s.sizes.size() < 3) {
      r.fail({"classify", "sizes"}, "at least 3 sizes are required");
    }
    s.t = k.contains("t") ? r.axis(k.at("t"), {"classify", "t"}, true) : c.t;
    if (s.t.expand().size() < 3) r.fail({"classify", "t"}, "needs at least 3 temperatures");
    s.growth_factor = r.number_or(k, {"classify", "growth_factor"}, s.growth_factor);
    s.jump_growth = r.number_or(k, {"classify", "jump_growth"}, s.jump_growth);
    s.crossover_tolerance =
        r.number_or(k, {"classify", "crossover_tolerance"}, s.crossover_tolerance);
    c.classify = s;
  }

  if (root.contains("output")) {
    const json& o = r.object(root.at("output"), {"output"});
    r.only_keys(o, {"output"}, {"dir", "prefix"});
    if (o.contains("dir")) c.output_dir = r.string(o.at("dir"), {"output", "dir"});
    if (o.contains("prefix")) c.output_prefix = r.string(o.at("prefix"), {"output", "prefix"});
  }
  c.failure_budget = r.number_or(root, {"failure_budget"}, c.failure_budget);
  if (c.failure_budget < 0.0 || c.failure_budget > 1.0) {
    r.fail({"failure_budget"}, "must be in [0, 1]");
  }

  try {
    scan::validate(c.grid());
  } catch (const DomainError& e) {
    r.fail({"grid"}, e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", 0, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json to_json(const RunConfig& c) {
  auto names = [](const std::vector<scan::FieldKind>& v) {
    json a = json::array();
    for (auto k : v) a.push_back(scan::to_string(k));
    return a;
  };
  json j;
  j["model"] = {{"name", c.model.name}, {"params", c.model.params}};
  j["grid"] = {{"lambda", axis_json(c.lambda)}, {"t", axis_json(c.t)}};
  j["perturbation"] = {{"delta_t", c.delta_t}};
  if (c.delta_lambda) j["perturbation"]["delta_lambda"] = *c.delta_lambda;
  j["fields"] = names(c.fields);
  j["detection"] = {{"minima", names(c.detection.minima)},
                    {"jumps", names(c.detection.jumps)},
                    {"jump_threshold", c.detection.jump.threshold},
                    {"direction", scan::to_string(c.detection.jump.direction)},
                    {"location", scan::to_string(c.detection.jump.location)}};
  if (c.classify) {
    const auto& s = *c.classify;
    j["classify"] = {{"lambda", s.lambdas},
                     {"sizes", s.sizes},
                     {"t", axis_json(s.t)},
                     {"growth_factor", s.growth_factor},
                     {"jump_growth", s.jump_growth},
                     {"crossover_tolerance", s.crossover_tolerance}};
  }
  j["output"] = {{"dir", c.output_dir}, {"prefix", c.output_prefix}};
  j["failure_budget"] = c.failure_budget;
  return j;
}

}  // namespace thermofid::cli
