#include "nvodmr/workbench/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nvodmr/analysis.hpp"
#include "nvodmr/errors.hpp"
#include "nvodmr/frame.hpp"
#include "nvodmr/hamiltonian.hpp"
#include "nvodmr/resonance.hpp"

namespace nvodmr::workbench {

double ScenarioGenerator::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Operator ScenarioGenerator::hermitian(double scale_hz) {
  Operator a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
  return 0.5 * scale_hz * (a + a.adjoint());
}

Ket ScenarioGenerator::ket() {
  Ket k;
  for (int i = 0; i < 3; ++i) k(i) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
  if (k.norm() < 1e-3) k(1) = 1.0;
  return k.normalized();
}

DensityMatrix ScenarioGenerator::density_matrix() {
  // Mixture of up to three random pure states.
  const int n = 1 + static_cast<int>(uniform(0.0, 3.0));
  Operator m = Operator::Zero();
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = uniform(0.05, 1.0);
    m += w * projector(ket());
    total += w;
  }
  return DensityMatrix::from_operator(m / total);
}

RelaxationModel ScenarioGenerator::relaxation() {
  RelaxationModel r;
  auto rate = [this](double hi) { return uniform(0.0, 1.0) < 0.1 ? 0.0 : hi * std::pow(10.0, uniform(-3.0, 0.0)); };
  r.gamma_pump_hz = rate(3e6);
  r.gamma_1_hz = rate(1e4);
  r.gamma_2_hz = rate(1e6);
  r.contrast = uniform(0.01, 1.0);
  return r;
}

TimeDependentOperator ScenarioGenerator::time_dependent(double static_scale_hz,
                                                        double max_freq_hz, int harmonics) {
  std::vector<HarmonicTerm> terms;
  for (int k = 0; k < harmonics; ++k) {
    Operator a;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    terms.push_back({0.25 * static_scale_hz * a, uniform(-max_freq_hz, max_freq_hz),
                     uniform(0.0, 6.283185307179586)});
  }
  return TimeDependentOperator(hermitian(static_scale_hz), std::move(terms));
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double frame_error(const RotatingFrame& frame, const TimeDependentOperator& h, double t) {
  const Operator numeric = frame.transform_numerical(h, t);
  const Operator analytic = frame.transform(h).at(t);
  const Operator u = frame.unitary(t);
  const double scale = std::max({max_abs(u * h.at(t) * u.adjoint()), max_abs(frame.generator()), 1.0});
  return max_abs(numeric - analytic) / scale;
}

}  // namespace

CheckResult check_frame_identity(const ExperimentConfig& c, int samples, std::uint64_t seed,
                                 double tolerance) {
  CheckResult r{"frame-identity", false, 0.0, tolerance, ""};
  const TimeDependentOperator lab = lab_hamiltonian(c.nv, c.drive);
  const TimeDependentOperator first = rwa_first(c.nv, c.drive);
  const RotatingFrame mw = RotatingFrame::microwave(c.drive.f_mw_hz);
  const RotatingFrame split = RotatingFrame::strain_split(c.drive.f_ac_hz);
  ScenarioGenerator gen(seed);
  for (int k = 0; k < samples; ++k) {
    const double t = gen.uniform(0.0, 1e-5);
    r.metric = std::max({r.metric, frame_error(mw, lab, t), frame_error(split, first, t)});
  }
  r.passed = r.metric <= tolerance;
  r.detail = std::to_string(samples) + " times, worst relative error " + fmt(r.metric);
  return r;
}

CheckResult check_resonances(const ExperimentConfig& c, double tolerance_hz) {
  CheckResult r{"resonances", false, 0.0, tolerance_hz, ""};
  const ResonanceSet predicted = predict_resonances(c.nv, c.drive.b_ac_t.z());
  const std::vector<double> lines = predicted.frequencies();
  const Spectrum s = simulate_spectrum(c.nv, c.relaxation, c.drive, c.sweep,
                                       Backend::RwaSteadyState, c.simulation_options());
  const FitResult fit = fit_lorentzians(s, static_cast<int>(lines.size()));
  for (std::size_t k = 0; k < lines.size(); ++k) {
    r.metric = std::max(r.metric, std::abs(fit.dips[k].center_hz - lines[k]));
  }
  r.passed = fit.converged && r.metric <= tolerance_hz;
  r.detail = std::to_string(lines.size()) + " lines, worst center error " + fmt(r.metric) + " Hz" +
             (fit.converged ? "" : ", fit did not converge");
  return r;
}

CheckResult check_rwa_oracle(const ExperimentConfig& c, int grid_points, double tolerance) {
  CheckResult r{"rwa-oracle", false, 0.0, tolerance, ""};
  SweepPlan plan = c.sweep;
  plan.n_points = std::max(grid_points, 2);
  std::vector<double> grid = plan.grid();
  if (grid_points == 1) grid = {0.5 * (plan.f_start_hz + plan.f_stop_hz)};
  double worst_f = 0.0;
  for (double f : grid) {
    const DriveParams d = c.drive.with_f_mw(f);
    const Populations a = populations(rwa_steady_state(c.nv, c.relaxation, d));
    const Populations b = populations(oracle_average_state(c.nv, c.relaxation, d, c.oracle));
    const double diff = std::max({std::abs(a.zero - b.zero), std::abs(a.bright - b.bright),
                                  std::abs(a.dark - b.dark)});
    if (diff > r.metric) {
      r.metric = diff;
      worst_f = f;
    }
  }
  r.passed = r.metric <= tolerance;
  r.detail = std::to_string(grid.size()) + " points, worst population difference " +
             fmt(r.metric) + " at f_mw = " + fmt(worst_f) + " Hz";
  return r;
}

CheckResult check_conservation(int scenarios, std::uint64_t seed) {
  CheckResult r{"conservation", false, 0.0, 0.0, ""};
  ScenarioGenerator gen(seed);
  int failures = 0;
  std::string first_failure;
  auto ok = [](const DensityMatrix& rho) {
    const auto d = DensityMatrix::diagnose(rho.matrix());
    return d.hermiticity_error <= DensityMatrix::kTolerance &&
           d.trace_error <= DensityMatrix::kTolerance &&
           d.min_eigenvalue >= -DensityMatrix::kTolerance;
  };
  for (int k = 0; k < scenarios; ++k) {
    try {
      const RelaxationModel relax = gen.relaxation();
      if (k % 2 == 0) {
        const Operator h = gen.hermitian(gen.uniform(0.0, 5e6));
        const auto jumps_frame = k % 4 == 0 ? DissipatorFrame::Lab : DissipatorFrame::BrightDarkSecular;
        if (!ok(steady_state(liouvillian(h, relax, jumps_frame)).rho)) throw NumericalError("steady state out of tolerance");
      } else {
        const OpenSystem system{gen.time_dependent(gen.uniform(1e5, 5e6), 1e7, 1 + k % 3), relax,
                                DissipatorFrame::Lab};
        const double dt = max_step(system.hamiltonian) * gen.uniform(0.3, 1.0);
        const double t_final = gen.uniform(0.0, 400.0) * dt;
        bool all_ok = true;
        PropagateOptions options;
        int step = 0;
        // Spot-check the raw integrator state along the way as well.
        options.observer = [&](double, const Operator& rho) {
          if (++step % 50 != 0) return;
          const auto d = DensityMatrix::diagnose(rho);
          if (d.hermiticity_error > 1e-8 || d.trace_error > 1e-8 || d.min_eigenvalue < -1e-8) {
            all_ok = false;
          }
        };
        const DensityMatrix out = propagate(system, gen.density_matrix(), t_final, dt, options);
        if (!all_ok || !ok(out)) throw NumericalError("propagated state out of tolerance");
      }
    } catch (const std::exception& e) {
      if (failures == 0) first_failure = "scenario " + std::to_string(k) + ": " + e.what();
      ++failures;
    }
  }
  r.metric = failures;
  r.passed = failures == 0;
  r.detail = std::to_string(scenarios) + " scenarios, " + std::to_string(failures) + " failed" +
             (first_failure.empty() ? "" : " (" + first_failure + ")");
  return r;
}

std::vector<CheckResult> run_validation(const ExperimentConfig& c) {
  std::vector<CheckResult> out;
  const std::uint64_t seed = c.seed.value_or(1);
  for (const auto& name : c.validate_checks.checks) {
    if (name == "frame-identity") {
      out.push_back(check_frame_identity(c, c.validate_checks.frame_samples, seed));
    } else if (name == "resonances") {
      out.push_back(check_resonances(c));
    } else if (name == "rwa-oracle") {
      out.push_back(check_rwa_oracle(c, c.validate_checks.rwa_grid_points));
    } else if (name == "conservation") {
      out.push_back(check_conservation(c.validate_checks.conservation_scenarios, seed));
    } else {
      throw InvalidArgument("unknown check '" + name + "'");
    }
  }
  return out;
}

}  // namespace nvodmr::workbench
