#include "nvodmr/workbench/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "nvodmr/errors.hpp"
#include "nvodmr/workbench/atomic_file.hpp"

namespace nvodmr::workbench {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void add_config(Report& r, const ExperimentConfig& c) {
  for (const auto& [k, v] : flatten(c)) r.add(k, v);
}

std::string comment_block(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += "#" + k + "=" + v + "\n";
  return out;
}

Spectrum simulate(const ExperimentConfig& c, const DriveParams& d, std::uint64_t noise_index) {
  Spectrum s = simulate_spectrum(c.nv, c.relaxation, d, c.sweep, c.backend, c.simulation_options());
  if (c.noise.enabled) s = add_shot_noise(s, derive_seed(*c.seed, noise_index), c.noise.scale);
  if (c.seed) s.meta.seed = *c.seed;
  return s;
}

double pair_splitting(const FitResult& fit) {
  return 0.5 * ((fit.dips[1].center_hz - fit.dips[0].center_hz) +
                (fit.dips[3].center_hz - fit.dips[2].center_hz));
}

}  // namespace

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
  if (o.out_dir) c.output_dir = *o.out_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.backend) {
    try {
      c.backend = parse_backend(*o.backend);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("--backend: ") + e.what());
    }
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

SpectrumOutcome cmd_spectrum(const ExperimentConfig& c) {
  SpectrumOutcome out;
  out.spectrum = simulate(c, c.drive, 0);
  out.spectrum.meta.extra = flatten(c);
  out.spectrum.meta.extra.emplace_back("command", "spectrum");

  Report& r = out.report;
  r.add("command", std::string("spectrum"));
  r.add("backend", to_string(c.backend));
  r.add("b_ac_tesla", c.drive.b_ac_t.z());
  try {
    out.dips = detect_dips(out.spectrum, c.analysis.max_dips);
  } catch (const NoDipsFound&) {
    out.dips.clear();
  }
  r.add("dip_count", static_cast<long long>(out.dips.size()));
  if (!out.dips.empty()) {
    out.fit = fit_lorentzians(out.spectrum, static_cast<int>(out.dips.size()));
    r.add_fit("fit.", *out.fit);
    if (out.fit->dips.size() == 4) {
      try {
        out.estimate = infer_b_ac_from_splitting(*out.fit, c.nv);
        r.add("inferred_b_ac_tesla", out.estimate->b_ac_t);
        r.add("inferred_b_ac_sigma_tesla", out.estimate->sigma_t);
      } catch (const UnpairableDips& e) {
        r.add("inference_error", std::string(e.what()));
      }
    }
  }
  add_config(r, c);

  out.csv_path = join(c.output_dir, "spectrum.csv");
  out.report_path = join(c.output_dir, "spectrum_report.txt");
  write_file_atomic(out.csv_path, spectrum_csv(out.spectrum));
  write_file_atomic(out.report_path, r.str());
  return out;
}

SweepOutcome cmd_sweep(const ExperimentConfig& c) {
  if (c.sweep.b_ac_t.empty()) throw ConfigError("sweep.b_ac_t must list at least one amplitude");
  SweepOutcome out;
  std::vector<double> amplitudes = c.sweep.b_ac_t;
  std::sort(amplitudes.begin(), amplitudes.end());

  std::string heat = comment_block(flatten(c));
  heat += "#command=sweep\n";
  heat += "b_ac_tesla,f_mw_hz,signal\n";
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    const double b = amplitudes[k];
    Spectrum s = simulate(c, c.drive.with_b_ac_z(b), k);
    for (const auto& pt : s.points) {
      heat += format_double(b) + "," + format_double(pt.f_mw_hz) + "," + format_double(pt.signal) + "\n";
    }
    SweepRow row{b, 0, std::numeric_limits<double>::quiet_NaN()};
    try {
      row.n_dips = static_cast<int>(detect_dips(s, c.analysis.max_dips).size());
    } catch (const NoDipsFound&) {
      row.n_dips = 0;
    }
    if (row.n_dips == 4) {
      const FitResult fit = fit_lorentzians(s, 4);
      if (fit.converged) row.splitting_hz = pair_splitting(fit);
    }
    out.rows.push_back(row);
    out.spectra.push_back({b, std::move(s)});
  }

  std::vector<double> xs, ys;
  for (const auto& row : out.rows) {
    if (std::isfinite(row.splitting_hz)) {
      xs.push_back(row.b_ac_t);
      ys.push_back(row.splitting_hz);
    }
  }
  Report& r = out.report;
  r.add("command", std::string("sweep"));
  r.add("backend", to_string(c.backend));
  r.add("amplitude_count", static_cast<long long>(out.rows.size()));
  for (std::size_t k = 0; k < out.rows.size(); ++k) {
    const std::string p = "amplitude." + std::to_string(k + 1) + ".";
    r.add(p + "b_ac_tesla", out.rows[k].b_ac_t);
    r.add(p + "dip_count", static_cast<long long>(out.rows[k].n_dips));
    r.add(p + "splitting_hz", out.rows[k].splitting_hz);
  }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / n;
      my += ys[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0.0) {
      out.slope_hz_per_tesla = sxy / sxx;
      r.add("splitting_slope_hz_per_tesla", *out.slope_hz_per_tesla);
      r.add("splitting_slope_over_gamma_e", *out.slope_hz_per_tesla / c.nv.gamma_e_hz_per_t);
    }
  }
  r.add("splitting_points", static_cast<long long>(xs.size()));
  add_config(r, c);

  out.heatmap_path = join(c.output_dir, "sweep_heatmap.csv");
  out.report_path = join(c.output_dir, "sweep_report.txt");
  write_file_atomic(out.heatmap_path, heat);
  write_file_atomic(out.report_path, r.str());
  return out;
}

SensitivityOutcome cmd_sensitivity(const ExperimentConfig& c) {
  if (!c.noise.enabled || !(c.noise.scale > 0.0)) {
    throw ConfigError(
        "sensitivity is undefined without noise: enable noise with a positive scale");
  }
  const auto& sc = c.sensitivity;
  if (sc.durations_s.size() < 3) throw ConfigError("sensitivity.durations_s needs 3 or more values");
  SensitivityOutcome out;
  SensitivityReport& res = out.result;
  res.mode = sc.mode;
  res.b_ac_t = sc.operating_b_ac_t;
  const std::uint64_t seed = *c.seed;

  if (sc.mode == "fixed-frequency") {
    if (sc.amplitudes_t.size() < 3) throw ConfigError("sensitivity.amplitudes_t needs 3 or more values");
    res.f_mw_hz = sc.f_mw_hz.value_or(c.nv.d_hz - c.nv.ex_hz);
    const SimulationOptions options = c.simulation_options();
    auto signal_at = [&](double b) {
      return simulate_signal(c.nv, c.relaxation, c.drive.with_b_ac_z(b).with_f_mw(res.f_mw_hz),
                             c.backend, options);
    };
    for (double b : sc.amplitudes_t) out.response.emplace_back(b, signal_at(b));
    res.quadratic = quadratic_response_fit(out.response);
    res.slope = 2.0 * std::abs(res.quadratic.a) * std::abs(sc.operating_b_ac_t);

    const double s_op = signal_at(sc.operating_b_ac_t);
    for (std::size_t k = 0; k < sc.durations_s.size(); ++k) {
      const double t = sc.durations_s[k];
      const auto readings =
          repeated_readings(s_op, t, sc.repeats, derive_seed(seed, k), c.noise.scale);
      out.noise.emplace_back(t, sample_std(readings));
    }
    res.noise = noise_vs_time_fit(out.noise);
    res.c = res.noise.c;
    res.delta_b = estimate_sensitivity(res.slope, res.c);
    const double rel_a = std::sqrt(std::max(res.quadratic.covariance(0, 0), 0.0)) /
                         std::abs(res.quadratic.a);
    res.delta_b_sigma = res.delta_b * std::hypot(rel_a, res.noise.log_c_sigma);
  } else {
    // Splitting mode: spread of the inferred field over repeated noisy spectra, with
    // T the total acquisition time of one spectrum.
    const DriveParams d = c.drive.with_b_ac_z(sc.operating_b_ac_t);
    const Spectrum clean = simulate_spectrum(c.nv, c.relaxation, d, c.sweep, c.backend,
                                             c.simulation_options());
    for (std::size_t k = 0; k < sc.durations_s.size(); ++k) {
      const double t = sc.durations_s[k];
      Spectrum s = clean;
      s.meta.dwell_s = t / static_cast<double>(clean.points.size());
      std::vector<double> estimates;
      for (int rep = 0; rep < sc.repeats; ++rep) {
        const Spectrum noisy =
            add_shot_noise(s, derive_seed(derive_seed(seed, k), static_cast<std::uint64_t>(rep)),
                           c.noise.scale);
        try {
          const FitResult fit = fit_lorentzians(noisy, 4);
          estimates.push_back(infer_b_ac_from_splitting(fit, c.nv).splitting_hz);
        } catch (const UnpairableDips&) {
        } catch (const NoDipsFound&) {
        } catch (const NumericalError&) {
        }
      }
      if (estimates.size() < 2) {
        throw NumericalError("splitting mode: fewer than two successful fits at T = " +
                             format_double(t) + " s");
      }
      out.noise.emplace_back(t, sample_std(estimates));
    }
    res.f_mw_hz = 0.0;
    res.noise = noise_vs_time_fit(out.noise);
    res.c = res.noise.c;
    res.slope = c.nv.gamma_e_hz_per_t;
    res.delta_b = estimate_sensitivity(res.slope, res.c);
    res.delta_b_sigma = res.delta_b * res.noise.log_c_sigma;
  }

  Report& r = out.report;
  r.add("command", std::string("sensitivity"));
  r.add("backend", to_string(c.backend));
  r.add_sensitivity("", res);
  for (std::size_t k = 0; k < out.response.size(); ++k) {
    r.add("response." + std::to_string(k + 1) + ".b_ac_tesla", out.response[k].first);
    r.add("response." + std::to_string(k + 1) + ".signal", out.response[k].second);
  }
  for (std::size_t k = 0; k < out.noise.size(); ++k) {
    r.add("noise." + std::to_string(k + 1) + ".duration_s", out.noise[k].first);
    r.add("noise." + std::to_string(k + 1) + ".delta_s", out.noise[k].second);
  }
  add_config(r, c);
  out.report_path = join(c.output_dir, "sensitivity_report.txt");
  write_file_atomic(out.report_path, r.str());
  return out;
}

ValidateOutcome cmd_validate(const ExperimentConfig& c) {
  ValidateOutcome out;
  out.checks = run_validation(c);
  Report& r = out.report;
  r.add("command", std::string("validate"));
  r.add("check_count", static_cast<long long>(out.checks.size()));
  for (const auto& ch : out.checks) {
    out.passed = out.passed && ch.passed;
    r.add("check." + ch.name + ".passed", ch.passed);
    r.add("check." + ch.name + ".metric", ch.metric);
    r.add("check." + ch.name + ".tolerance", ch.tolerance);
    r.add("check." + ch.name + ".detail", ch.detail);
  }
  r.add("passed", out.passed);
  add_config(r, c);
  out.report_path = join(c.output_dir, "validate_report.txt");
  write_file_atomic(out.report_path, r.str());
  return out;
}

FitOutcome cmd_fit(const std::string& csv_path, int n_dips, const std::optional<NvParams>& nv,
                   const std::string& out_dir) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError(csv_path + ": cannot open");
  FitOutcome out;
  out.spectrum = read_spectrum_csv(in);
  out.fit = fit_lorentzians(out.spectrum, n_dips);

  Report& r = out.report;
  r.add("command", std::string("fit"));
  r.add("source", csv_path);
  r.add_fit("fit.", out.fit);
  if (n_dips == 4) {
    NvParams p;
    if (nv) {
      p = *nv;
    } else {
      p.d_hz = out.spectrum.meta.d_hz;
      p.ex_hz = out.spectrum.meta.ex_hz;
    }
    try {
      out.estimate = infer_b_ac_from_splitting(out.fit, p);
      r.add("inferred_b_ac_tesla", out.estimate->b_ac_t);
      r.add("inferred_b_ac_sigma_tesla", out.estimate->sigma_t);
    } catch (const std::exception& e) {
      out.inference_error = e.what();
      r.add("inference_error", out.inference_error);
    }
  }
  // Carry the acquisition record of the input along.
  const auto& m = out.spectrum.meta;
  r.add("input.b_ac_tesla", m.b_ac_tesla);
  r.add("input.f_ac_hz", m.f_ac_hz);
  r.add("input.dwell_s", m.dwell_s);
  r.add("input.seed", std::to_string(m.seed));
  r.add("input.backend", m.backend);
  r.add("input.d_hz", m.d_hz);
  r.add("input.ex_hz", m.ex_hz);
  for (const auto& [k, v] : m.extra) r.add("input." + k, v);
  out.report_path = join(out_dir, "fit_report.txt");
  write_file_atomic(out.report_path, r.str());
  return out;
}

}  // namespace nvodmr::workbench
