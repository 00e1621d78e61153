#include "nvodmr/workbench/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "nvodmr/errors.hpp"

namespace nvodmr::workbench {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    const YAML::Mark m = node.Mark();
    std::ostringstream msg;
    msg << source_;
    if (m.line >= 0) msg << ':' << m.line + 1 << ':' << m.column + 1;
    msg << ": " << what;
    throw ConfigError(msg.str());
  }

  void expect_map(const YAML::Node& node, const std::string& name,
                  const std::set<std::string>& allowed) const {
    if (!node.IsMap()) fail(node, "'" + name + "' must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(kv.first, "unknown key '" + key + "' in " + name + " (allowed: " + list + ")");
      }
    }
  }

  template <typename T>
  T get(const YAML::Node& node, const std::string& name) const {
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "'" + name + "' has the wrong type");
    }
  }

  double number(const YAML::Node& node, const std::string& name) const {
    const double v = get<double>(node, name);
    if (!std::isfinite(v)) fail(node, "'" + name + "' must be finite");
    return v;
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& name) const {
    if (!node.IsSequence()) fail(node, "'" + name + "' must be a list of numbers");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(number(item, name));
    return out;
  }

  Eigen::Vector3d vec3(const YAML::Node& node, const std::string& name) const {
    const auto v = numbers(node, name);
    if (v.size() != 3) fail(node, "'" + name + "' must have 3 components");
    return {v[0], v[1], v[2]};
  }

  template <typename F>
  void checked(const YAML::Node& node, F&& check) const {
    try {
      check();
    } catch (const InvalidArgument& e) {
      fail(node, e.what());
    } catch (const RegimeError& e) {
      fail(node, e.what());
    }
  }

 private:
  std::string source_;
};

void read(const Reader& r, const YAML::Node& root, ExperimentConfig& c) {
  r.expect_map(root, "config",
               {"nv", "relaxation", "drive", "sweep", "backend", "seed", "noise", "lorentzian",
                "oracle", "analysis", "sensitivity", "validate", "output_dir"});

  if (const auto n = root["nv"]) {
    r.expect_map(n, "nv", {"d_hz", "ex_hz", "ey_hz", "gamma_e_hz_per_t"});
    if (n["d_hz"]) c.nv.d_hz = r.number(n["d_hz"], "nv.d_hz");
    if (n["ex_hz"]) c.nv.ex_hz = r.number(n["ex_hz"], "nv.ex_hz");
    if (n["ey_hz"]) c.nv.ey_hz = r.number(n["ey_hz"], "nv.ey_hz");
    if (n["gamma_e_hz_per_t"]) c.nv.gamma_e_hz_per_t = r.number(n["gamma_e_hz_per_t"], "nv.gamma_e_hz_per_t");
    r.checked(n, [&] { c.nv.validate(); });
  }
  if (const auto n = root["relaxation"]) {
    r.expect_map(n, "relaxation",
                 {"gamma_pump_hz", "gamma_1_hz", "gamma_2_hz", "contrast", "baseline"});
    auto& x = c.relaxation;
    if (n["gamma_pump_hz"]) x.gamma_pump_hz = r.number(n["gamma_pump_hz"], "relaxation.gamma_pump_hz");
    if (n["gamma_1_hz"]) x.gamma_1_hz = r.number(n["gamma_1_hz"], "relaxation.gamma_1_hz");
    if (n["gamma_2_hz"]) x.gamma_2_hz = r.number(n["gamma_2_hz"], "relaxation.gamma_2_hz");
    if (n["contrast"]) x.contrast = r.number(n["contrast"], "relaxation.contrast");
    if (n["baseline"]) x.baseline = r.number(n["baseline"], "relaxation.baseline");
    r.checked(n, [&] { x.validate(); });
  }
  if (const auto n = root["drive"]) {
    r.expect_map(n, "drive", {"b_mw_t", "b_ac_t", "f_ac_hz", "f_mw_hz"});
    if (n["b_mw_t"]) c.drive.b_mw_t = r.vec3(n["b_mw_t"], "drive.b_mw_t");
    if (n["b_ac_t"]) c.drive.b_ac_t = r.vec3(n["b_ac_t"], "drive.b_ac_t");
    if (n["f_ac_hz"]) c.drive.f_ac_hz = r.number(n["f_ac_hz"], "drive.f_ac_hz");
    if (n["f_mw_hz"]) c.drive.f_mw_hz = r.number(n["f_mw_hz"], "drive.f_mw_hz");
    r.checked(n, [&] { c.drive.validate(); });
  }
  if (const auto n = root["sweep"]) {
    r.expect_map(n, "sweep", {"f_start_hz", "f_stop_hz", "n_points", "b_ac_t", "dwell_s"});
    auto& s = c.sweep;
    if (n["f_start_hz"]) s.f_start_hz = r.number(n["f_start_hz"], "sweep.f_start_hz");
    if (n["f_stop_hz"]) s.f_stop_hz = r.number(n["f_stop_hz"], "sweep.f_stop_hz");
    if (n["n_points"]) s.n_points = r.get<int>(n["n_points"], "sweep.n_points");
    if (n["b_ac_t"]) s.b_ac_t = r.numbers(n["b_ac_t"], "sweep.b_ac_t");
    if (n["dwell_s"]) s.dwell_s = r.number(n["dwell_s"], "sweep.dwell_s");
    r.checked(n, [&] { s.validate(); });
  }
  if (const auto n = root["backend"]) {
    r.checked(n, [&] { c.backend = parse_backend(r.get<std::string>(n, "backend")); });
  }
  if (const auto n = root["seed"]) c.seed = r.get<std::uint64_t>(n, "seed");
  if (const auto n = root["noise"]) {
    r.expect_map(n, "noise", {"enabled", "scale"});
    if (n["enabled"]) c.noise.enabled = r.get<bool>(n["enabled"], "noise.enabled");
    if (n["scale"]) c.noise.scale = r.number(n["scale"], "noise.scale");
    if (c.noise.scale < 0.0) r.fail(n, "noise.scale must be non-negative");
  }
  if (const auto n = root["lorentzian"]) {
    r.expect_map(n, "lorentzian", {"gamma_hz", "depth", "lines"});
    LorentzianShape shape = default_lorentzian_shape(c.nv, c.relaxation, c.drive);
    if (n["gamma_hz"]) shape.gamma_hz = r.number(n["gamma_hz"], "lorentzian.gamma_hz");
    if (n["depth"]) shape.depth = r.number(n["depth"], "lorentzian.depth");
    if (n["lines"]) {
      const auto lines = r.get<std::string>(n["lines"], "lorentzian.lines");
      if (lines == "two") shape.lines = LineSet::TwoLine;
      else if (lines == "four") shape.lines = LineSet::FourLine;
      else r.fail(n["lines"], "lorentzian.lines must be 'two' or 'four'");
    }
    if (!(shape.gamma_hz > 0.0)) r.fail(n, "lorentzian.gamma_hz must be positive");
    c.lorentzian = shape;
  }
  if (const auto n = root["oracle"]) {
    r.expect_map(n, "oracle", {"settle_s", "steps_per_mw_cycle", "average_ac_periods"});
    if (n["settle_s"]) c.oracle.settle_s = r.number(n["settle_s"], "oracle.settle_s");
    if (n["steps_per_mw_cycle"]) c.oracle.steps_per_mw_cycle = r.get<int>(n["steps_per_mw_cycle"], "oracle.steps_per_mw_cycle");
    if (n["average_ac_periods"]) c.oracle.average_ac_periods = r.get<int>(n["average_ac_periods"], "oracle.average_ac_periods");
    if (c.oracle.settle_s < 0.0 || c.oracle.steps_per_mw_cycle < 20 || c.oracle.average_ac_periods < 1) {
      r.fail(n, "oracle: need settle_s >= 0, steps_per_mw_cycle >= 20, average_ac_periods >= 1");
    }
  }
  if (const auto n = root["analysis"]) {
    r.expect_map(n, "analysis", {"max_dips"});
    if (n["max_dips"]) c.analysis.max_dips = r.get<int>(n["max_dips"], "analysis.max_dips");
    if (c.analysis.max_dips < 1 || c.analysis.max_dips > 4) r.fail(n, "analysis.max_dips must be in 1..4");
  }
  if (const auto n = root["sensitivity"]) {
    r.expect_map(n, "sensitivity",
                 {"mode", "f_mw_hz", "amplitudes_t", "operating_b_ac_t", "durations_s", "repeats"});
    auto& s = c.sensitivity;
    if (n["mode"]) {
      s.mode = r.get<std::string>(n["mode"], "sensitivity.mode");
      if (s.mode != "fixed-frequency" && s.mode != "splitting") {
        r.fail(n["mode"], "sensitivity.mode must be 'fixed-frequency' or 'splitting'");
      }
    }
    if (n["f_mw_hz"]) s.f_mw_hz = r.number(n["f_mw_hz"], "sensitivity.f_mw_hz");
    if (n["amplitudes_t"]) s.amplitudes_t = r.numbers(n["amplitudes_t"], "sensitivity.amplitudes_t");
    if (n["operating_b_ac_t"]) s.operating_b_ac_t = r.number(n["operating_b_ac_t"], "sensitivity.operating_b_ac_t");
    if (n["durations_s"]) s.durations_s = r.numbers(n["durations_s"], "sensitivity.durations_s");
    if (n["repeats"]) s.repeats = r.get<int>(n["repeats"], "sensitivity.repeats");
    if (s.repeats < 2) r.fail(n, "sensitivity.repeats must be at least 2");
    for (double t : s.durations_s) {
      if (!(t > 0.0)) r.fail(n, "sensitivity.durations_s must be positive");
    }
  }
  if (const auto n = root["validate"]) {
    r.expect_map(n, "validate",
                 {"checks", "rwa_grid_points", "frame_samples", "conservation_scenarios"});
    auto& v = c.validate_checks;
    if (n["checks"]) {
      if (!n["checks"].IsSequence()) r.fail(n["checks"], "validate.checks must be a list");
      v.checks.clear();
      const std::set<std::string> known = {"frame-identity", "resonances", "rwa-oracle",
                                           "conservation"};
      for (const auto& item : n["checks"]) {
        const auto name = r.get<std::string>(item, "validate.checks");
        if (!known.count(name)) r.fail(item, "unknown check '" + name + "'");
        v.checks.push_back(name);
      }
    }
    if (n["rwa_grid_points"]) v.rwa_grid_points = r.get<int>(n["rwa_grid_points"], "validate.rwa_grid_points");
    if (n["frame_samples"]) v.frame_samples = r.get<int>(n["frame_samples"], "validate.frame_samples");
    if (n["conservation_scenarios"]) v.conservation_scenarios = r.get<int>(n["conservation_scenarios"], "validate.conservation_scenarios");
    if (v.rwa_grid_points < 1 || v.frame_samples < 1 || v.conservation_scenarios < 1) {
      r.fail(n, "validate: counts must be positive");
    }
  }
  if (const auto n = root["output_dir"]) c.output_dir = r.get<std::string>(n, "output_dir");

  if (c.noise.enabled && !c.seed) r.fail(root, "noise is enabled but no seed is given");
  try {
    c.validate();
  } catch (const std::exception& e) {
    r.fail(root, e.what());
  }
}

std::string flow(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_double(v[k]);
  return out + "]";
}

std::string flow(const Eigen::Vector3d& v) { return flow(std::vector<double>{v.x(), v.y(), v.z()}); }

std::string flow(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k];
  return out + "]";
}

}  // namespace

void ExperimentConfig::validate() const {
  nv.validate();
  relaxation.validate();
  drive.validate();
  sweep.validate();
  if (noise.enabled && !seed) throw InvalidArgument("noise is enabled but no seed is given");
}

SimulationOptions ExperimentConfig::simulation_options() const {
  SimulationOptions o;
  o.oracle = oracle;
  o.shape = lorentzian;
  return o;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  ExperimentConfig c;
  c.sweep = SweepPlan{c.nv.d_hz - 3e6, c.nv.d_hz + 3e6, 241, {}, 1.0};
  if (root.IsNull()) return c;
  read(Reader(source), root, c);
  return c;
}

std::string preset_path(const std::string& name) {
  return std::string(NVODMR_PRESET_DIR) + "/" + name + ".yaml";
}

ExperimentConfig load_config(const std::string& name_or_path) {
  std::string path = name_or_path;
  if (!std::filesystem::exists(path)) {
    const std::string preset = preset_path(name_or_path);
    if (!std::filesystem::exists(preset)) {
      throw ConfigError(name_or_path + ": no such file or bundled preset");
    }
    path = preset;
  }
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::vector<std::pair<std::string, std::string>> flatten(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> kv;
  auto add = [&kv](const std::string& k, const std::string& v) { kv.emplace_back("config." + k, v); };
  add("nv.d_hz", format_double(c.nv.d_hz));
  add("nv.ex_hz", format_double(c.nv.ex_hz));
  add("nv.ey_hz", format_double(c.nv.ey_hz));
  add("nv.gamma_e_hz_per_t", format_double(c.nv.gamma_e_hz_per_t));
  add("relaxation.gamma_pump_hz", format_double(c.relaxation.gamma_pump_hz));
  add("relaxation.gamma_1_hz", format_double(c.relaxation.gamma_1_hz));
  add("relaxation.gamma_2_hz", format_double(c.relaxation.gamma_2_hz));
  add("relaxation.contrast", format_double(c.relaxation.contrast));
  add("relaxation.baseline", format_double(c.relaxation.baseline));
  add("drive.b_mw_t", flow(c.drive.b_mw_t));
  add("drive.b_ac_t", flow(c.drive.b_ac_t));
  add("drive.f_ac_hz", format_double(c.drive.f_ac_hz));
  add("drive.f_mw_hz", format_double(c.drive.f_mw_hz));
  add("sweep.f_start_hz", format_double(c.sweep.f_start_hz));
  add("sweep.f_stop_hz", format_double(c.sweep.f_stop_hz));
  add("sweep.n_points", std::to_string(c.sweep.n_points));
  add("sweep.b_ac_t", flow(c.sweep.b_ac_t));
  add("sweep.dwell_s", format_double(c.sweep.dwell_s));
  add("backend", to_string(c.backend));
  if (c.seed) add("seed", std::to_string(*c.seed));
  add("noise.enabled", c.noise.enabled ? "true" : "false");
  add("noise.scale", format_double(c.noise.scale));
  if (c.lorentzian) {
    add("lorentzian.gamma_hz", format_double(c.lorentzian->gamma_hz));
    add("lorentzian.depth", format_double(c.lorentzian->depth));
    add("lorentzian.lines", c.lorentzian->lines == LineSet::TwoLine ? "two" : "four");
  }
  add("oracle.settle_s", format_double(c.oracle.settle_s));
  add("oracle.steps_per_mw_cycle", std::to_string(c.oracle.steps_per_mw_cycle));
  add("oracle.average_ac_periods", std::to_string(c.oracle.average_ac_periods));
  add("analysis.max_dips", std::to_string(c.analysis.max_dips));
  add("sensitivity.mode", c.sensitivity.mode);
  if (c.sensitivity.f_mw_hz) add("sensitivity.f_mw_hz", format_double(*c.sensitivity.f_mw_hz));
  add("sensitivity.amplitudes_t", flow(c.sensitivity.amplitudes_t));
  add("sensitivity.operating_b_ac_t", format_double(c.sensitivity.operating_b_ac_t));
  add("sensitivity.durations_s", flow(c.sensitivity.durations_s));
  add("sensitivity.repeats", std::to_string(c.sensitivity.repeats));
  add("validate.checks", flow(c.validate_checks.checks));
  add("validate.rwa_grid_points", std::to_string(c.validate_checks.rwa_grid_points));
  add("validate.frame_samples", std::to_string(c.validate_checks.frame_samples));
  add("validate.conservation_scenarios",
      std::to_string(c.validate_checks.conservation_scenarios));
  add("output_dir", c.output_dir);
  return kv;
}

ExperimentConfig config_from_entries(const std::vector<std::pair<std::string, std::string>>& kv) {
  YAML::Node root(YAML::NodeType::Map);
  for (const auto& [key, value] : kv) {
    if (key.rfind("config.", 0) != 0) continue;
    const std::string path = key.substr(7);
    YAML::Node parsed;
    try {
      parsed = YAML::Load(value);
    } catch (const YAML::Exception&) {
      throw ConfigError(key + ": cannot parse embedded value '" + value + "'");
    }
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
      root[path] = parsed;
    } else {
      root[path.substr(0, dot)][path.substr(dot + 1)] = parsed;
    }
  }
  YAML::Emitter out;
  out << root;
  return parse_config(out.c_str(), "<embedded config>");
}

}  // namespace nvodmr::workbench
