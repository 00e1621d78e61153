#include <cmath>

#include "nvodmr/errors.hpp"
#include "nvodmr/frame.hpp"
#include "nvodmr/hamiltonian.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr {

Populations populations(const DensityMatrix& rho) {
  return {rho.population(basis::zero()), rho.population(basis::bright()),
          rho.population(basis::dark())};
}

DensityMatrix rwa_steady_state(const NvParams& p, const RelaxationModel& r,
                               const DriveParams& d) {
  const TimeDependentOperator h = rwa_second(p, d);
  if (auto frame = find_static_frame(h, basis::bright_dark_zero())) {
    // The frame is diagonal in {B, 0, D}, which leaves every jump operator of the
    // secular dissipator unchanged up to a phase.
    return steady_state(liouvillian(frame->hamiltonian, r, DissipatorFrame::BrightDarkSecular)).rho;
  }
  if (!(d.f_ac_hz > 0.0)) throw NumericalError("rwa_steady_state: no static frame at f_ac = 0");
  const OpenSystem system{h, r, DissipatorFrame::BrightDarkSecular};
  return periodic_steady_state(system, 2.0 / d.f_ac_hz).mean;
}

DensityMatrix oracle_average_state(const NvParams& p, const RelaxationModel& r,
                                   const DriveParams& d, const OracleOptions& options) {
  if (!(options.settle_s >= 0.0) || options.steps_per_mw_cycle < 20 ||
      options.average_ac_periods < 1) {
    throw InvalidArgument("oracle options: need settle >= 0, >= 20 steps per cycle, >= 1 period");
  }
  const OpenSystem system{lab_hamiltonian(p, d), r, DissipatorFrame::Lab};
  const double dt =
      std::min(1.0 / (options.steps_per_mw_cycle * d.f_mw_hz), max_step(system.hamiltonian));
  const double window = d.f_ac_hz > 0.0 ? options.average_ac_periods / d.f_ac_hz
                                        : options.average_ac_periods * 1e-6;

  const DensityMatrix settled = propagate(system, DensityMatrix(), options.settle_s, dt);

  Operator sum = Operator::Zero();
  Operator previous = Operator::Zero();
  long samples = 0;
  PropagateOptions po;
  po.t_start_s = options.settle_s;
  po.observer = [&](double, const Operator& rho) {
    if (samples > 0) sum += 0.5 * (previous + rho);
    previous = rho;
    ++samples;
  };
  propagate(system, settled, window, dt, po);
  const Operator mean = sum / static_cast<double>(samples - 1);
  return DensityMatrix::from_operator(mean / mean.trace(), 1e-8);
}

double simulate_signal(const NvParams& p, const RelaxationModel& r, const DriveParams& d,
                       Backend backend, const SimulationOptions& options) {
  switch (backend) {
    case Backend::RwaSteadyState:
      return pl_signal(rwa_steady_state(p, r, d), r);
    case Backend::FullOracle:
      d.check_regime();
      return pl_signal(oracle_average_state(p, r, d, options.oracle), r);
    case Backend::LorentzianModel: {
      p.validate();
      d.validate();
      const LorentzianShape shape = options.shape.value_or(default_lorentzian_shape(p, r, d));
      return lorentzian_sum_model(d.f_mw_hz, p, d.b_ac_t.z(), shape.gamma_hz, shape.depth,
                                  r.baseline, shape.lines);
    }
  }
  throw InvalidArgument("simulate_signal: unknown backend");
}

Spectrum simulate_spectrum(const NvParams& p, const RelaxationModel& r, const DriveParams& d,
                           const SweepPlan& plan, Backend backend,
                           const SimulationOptions& options) {
  Spectrum s;
  s.meta.b_ac_tesla = d.b_ac_t.z();
  s.meta.f_ac_hz = d.f_ac_hz;
  s.meta.dwell_s = plan.dwell_s;
  s.meta.backend = to_string(backend);
  s.meta.d_hz = p.d_hz;
  s.meta.ex_hz = p.ex_hz;
  for (double f : plan.grid()) {
    s.points.push_back({f, simulate_signal(p, r, d.with_f_mw(f), backend, options), 0.0});
  }
  s.validate();
  return s;
}

std::vector<AmplitudeSpectrum> amplitude_sweep(const NvParams& p, const RelaxationModel& r,
                                               const DriveParams& d, const SweepPlan& plan,
                                               Backend backend,
                                               const SimulationOptions& options) {
  if (plan.b_ac_t.empty()) throw InvalidArgument("amplitude_sweep: no AC amplitudes");
  std::vector<AmplitudeSpectrum> out;
  for (double b : plan.b_ac_t) {
    out.push_back({b, simulate_spectrum(p, r, d.with_b_ac_z(b), plan, backend, options)});
  }
  return out;
}

}  // namespace nvodmr
