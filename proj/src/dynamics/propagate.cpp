#include <cmath>
#include <numbers>
#include <sstream>

#include "nvodmr/dynamics.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

constexpr double kTraceDriftLimit = 1e-8;

class LindbladRhs {
 public:
  explicit LindbladRhs(const OpenSystem& system)
      : h_(system.hamiltonian),
        dissipator_(dissipator(jump_operators(system.relaxation, system.frame))) {}

  Operator operator()(const Operator& h, const Operator& rho) const {
    const Complex factor(0.0, -2.0 * std::numbers::pi);
    Operator out = factor * (h * rho - rho * h);
    Eigen::Map<VectorizedOperator>(out.data()) +=
        dissipator_ * Eigen::Map<const VectorizedOperator>(rho.data());
    return out;
  }

  Operator hamiltonian(double t) const { return h_.at(t); }

 private:
  const TimeDependentOperator& h_;
  Superoperator dissipator_;
};

int step_count(double duration, double dt) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("propagate: duration must be finite and non-negative");
  }
  if (!(dt > 0.0)) throw InvalidArgument("propagate: dt must be positive");
  return static_cast<int>(std::ceil(duration / dt - 1e-9));
}

}  // namespace

double max_step(const TimeDependentOperator& h) {
  const double f = h.max_frequency();
  return f > 0.0 ? 1.0 / (20.0 * f) : std::numeric_limits<double>::infinity();
}

DensityMatrix propagate(const OpenSystem& system, const DensityMatrix& rho0, double t_final_s,
                        double dt_s, const PropagateOptions& options) {
  system.relaxation.validate();
  const double limit = max_step(system.hamiltonian);
  if (dt_s > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "propagate: dt = " << dt_s << " s exceeds 1/(20 f_max) = " << limit << " s";
    throw InvalidArgument(msg.str());
  }
  const int n = step_count(t_final_s, dt_s);
  const double h = n > 0 ? t_final_s / n : 0.0;

  const LindbladRhs rhs(system);
  Operator rho = rho0.matrix();
  double t = options.t_start_s;
  if (options.observer) options.observer(t, rho);

  Operator h_now = rhs.hamiltonian(t);
  for (int k = 0; k < n; ++k) {
    const Operator h_mid = rhs.hamiltonian(t + 0.5 * h);
    const Operator h_end = rhs.hamiltonian(t + h);
    const Operator k1 = rhs(h_now, rho);
    const Operator k2 = rhs(h_mid, rho + (0.5 * h) * k1);
    const Operator k3 = rhs(h_mid, rho + (0.5 * h) * k2);
    const Operator k4 = rhs(h_end, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = options.t_start_s + (k + 1) * h;
    h_now = h_end;
    if (options.observer) options.observer(t, rho);
  }

  const Complex trace = rho.trace();
  if (std::abs(trace - Complex(1.0)) > kTraceDriftLimit) {
    std::ostringstream msg;
    msg << "propagate: trace drifted to " << trace << " before renormalization";
    throw NumericalError(msg.str());
  }
  rho /= trace;
  return DensityMatrix::from_operator(0.5 * (rho + rho.adjoint()));
}

DensityMatrix propagate(const TimeDependentOperator& h, const RelaxationModel& r,
                        const DensityMatrix& rho0, double t_final_s, double dt_s) {
  return propagate(OpenSystem{h, r, DissipatorFrame::Lab}, rho0, t_final_s, dt_s);
}

}  // namespace nvodmr
