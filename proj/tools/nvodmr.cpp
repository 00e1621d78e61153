// nvodmr: CW-ODMR spectrum simulation and analysis from the command line.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nvodmr/errors.hpp"
#include "nvodmr/workbench/commands.hpp"

namespace wb = nvodmr::workbench;

namespace {

struct CommonFlags {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string backend;

  void attach(CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", config, "config file or preset name (paper-fig2, ...)");
    if (config_required) opt->required();
    cmd->add_option("--out-dir", out_dir, "output directory (overrides output_dir)");
    cmd->add_option("--seed", seed, "random seed (overrides seed)");
    cmd->add_option("--backend", backend, "full-oracle | rwa-steady-state | lorentzian-model");
  }

  wb::ExperimentConfig load(const std::string& fallback) const {
    wb::ExperimentConfig c = wb::load_config(config.empty() ? fallback : config);
    wb::Overrides o;
    if (!out_dir.empty()) o.out_dir = out_dir;
    o.seed = seed;
    if (!backend.empty()) o.backend = backend;
    wb::apply_overrides(c, o);
    return c;
  }
};

void print(const nvodmr::Report& r, const std::string& path) {
  std::cout << r.str() << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CW-ODMR magnetometry workbench"};
  app.require_subcommand(1);

  CommonFlags spectrum_flags, sweep_flags, sensitivity_flags, validate_flags, fit_flags;
  auto* spectrum = app.add_subcommand("spectrum", "simulate one spectrum, detect and fit dips");
  spectrum_flags.attach(spectrum, true);
  auto* sweep = app.add_subcommand("sweep", "spectra over AC amplitudes: heat map and splitting");
  sweep_flags.attach(sweep, true);
  auto* sensitivity = app.add_subcommand("sensitivity", "quadratic response, noise scaling, delta B");
  sensitivity_flags.attach(sensitivity, true);

  auto* validate = app.add_subcommand("validate", "RWA-vs-oracle, frame and resonance checks");
  validate_flags.attach(validate, false);
  std::optional<std::string> checks;
  std::optional<int> grid_points;
  validate->add_option("--checks", checks,
                       "comma-separated subset of frame-identity,resonances,rwa-oracle,conservation"
                       " (empty selects none)");
  validate->add_option("--grid-points", grid_points, "frequency points for the rwa-oracle check");

  auto* fit = app.add_subcommand("fit", "fit Lorentzian dips to a spectrum CSV");
  std::string csv_path;
  int n_dips = 4;
  fit->add_option("csv", csv_path, "spectrum CSV (f_mw_hz,signal,sigma)")->required();
  fit->add_option("--n-dips", n_dips, "number of dips to fit (1-4)")->check(CLI::Range(1, 4));
  fit_flags.attach(fit, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? wb::kExitOk : wb::kExitUsage;
  }

  try {
    if (spectrum->parsed()) {
      const auto out = wb::cmd_spectrum(spectrum_flags.load(""));
      print(out.report, out.csv_path);
    } else if (sweep->parsed()) {
      const auto out = wb::cmd_sweep(sweep_flags.load(""));
      print(out.report, out.heatmap_path);
    } else if (sensitivity->parsed()) {
      const auto out = wb::cmd_sensitivity(sensitivity_flags.load(""));
      print(out.report, out.report_path);
    } else if (validate->parsed()) {
      wb::ExperimentConfig c = validate_flags.load("paper-fig2");
      if (checks) {
        c.validate_checks.checks.clear();
        std::stringstream list(*checks);
        std::string name;
        while (std::getline(list, name, ',')) {
          if (!name.empty()) c.validate_checks.checks.push_back(name);
        }
      }
      if (grid_points) c.validate_checks.rwa_grid_points = *grid_points;
      const auto out = wb::cmd_validate(c);
      print(out.report, out.report_path);
      if (!out.passed) return wb::kExitValidationFailed;
    } else if (fit->parsed()) {
      std::optional<nvodmr::NvParams> nv;
      std::string out_dir = ".";
      if (!fit_flags.config.empty()) {
        const auto c = fit_flags.load("");
        nv = c.nv;
        out_dir = c.output_dir;
      }
      if (!fit_flags.out_dir.empty()) out_dir = fit_flags.out_dir;
      const auto out = wb::cmd_fit(csv_path, n_dips, nv, out_dir);
      print(out.report, out.report_path);
      if (!out.fit.converged) {
        std::cerr << "error: fit did not converge\n";
        return wb::kExitNumerical;
      }
    }
  } catch (const wb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return wb::kExitUsage;
  } catch (const nvodmr::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return wb::kExitUsage;
  } catch (const nvodmr::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return wb::kExitUsage;
  } catch (const nvodmr::RegimeError& e) {
    std::cerr << "regime error: " << e.what() << "\n";
    return wb::kExitUsage;
  } catch (const nvodmr::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return wb::kExitNumerical;
  } catch (const nvodmr::NoDipsFound& e) {
    std::cerr << "no dips: " << e.what() << "\n";
    return wb::kExitNumerical;
  } catch (const nvodmr::UnpairableDips& e) {
    std::cerr << "unpairable dips: " << e.what() << "\n";
    return wb::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return wb::kExitNumerical;
  }
  return wb::kExitOk;
}
