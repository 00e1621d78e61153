#include <algorithm>
#include <cmath>
#include <numbers>

#include "nvodmr/dynamics.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

constexpr double kNullTolerance = 1e-10;

VectorizedOperator trace_functional() { return vectorize(Operator::Identity()); }

struct Stationary {
  VectorizedOperator v;
  int null_dimension;
};

// Trace-one null vector of a trace-annihilated 9x9 matrix (a Lindblad generator,
// or a one-period map minus the identity).
Stationary stationary_vector(const Superoperator& a) {
  Eigen::JacobiSVD<Superoperator> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = kNullTolerance * std::max(sigma(0), 1.0);
  int nullity = 0;
  for (int k = 0; k < 9; ++k)
    if (sigma(k) <= cutoff) ++nullity;

  const VectorizedOperator t = trace_functional();
  if (nullity <= 1) {
    Superoperator m = a;
    m.row(0) = t.transpose();
    VectorizedOperator rhs = VectorizedOperator::Zero();
    rhs(0) = 1.0;
    const Eigen::FullPivLU<Superoperator> lu(m);
    if (!lu.isInvertible()) throw NumericalError("steady_state: no trace-one solution");
    const VectorizedOperator v = lu.solve(rhs);
    const double residual = (a * v).norm();
    if (!(residual <= 1e-8 * std::max(sigma(0), 1.0) * std::max(v.norm(), 1.0))) {
      throw NumericalError("steady_state: no trace-one solution (residual too large)");
    }
    return {v, 1};
  }

  // Closest trace-one point of the null space to the maximally mixed state.
  const Eigen::Matrix<Complex, 9, Eigen::Dynamic> n = svd.matrixV().rightCols(nullity);
  const VectorizedOperator mixed = t / 3.0;
  const Eigen::Matrix<Complex, Eigen::Dynamic, 1> u = n.adjoint() * t;
  const double u2 = u.squaredNorm();
  if (u2 < 1e-20) throw NumericalError("steady_state: no trace-one solution in the null space");
  const Eigen::Matrix<Complex, Eigen::Dynamic, 1> proj = n.adjoint() * mixed;
  const Complex mu = (Complex(1.0) - u.dot(proj)) / u2;
  const VectorizedOperator v = n * (proj + mu * u);
  return {v, nullity};
}

DensityMatrix to_density(const VectorizedOperator& v) {
  Operator m = unvectorize(v);
  m = 0.5 * (m + m.adjoint()).eval();
  m /= m.trace();
  return DensityMatrix::from_operator(m);
}

}  // namespace

SteadyState steady_state(const Superoperator& l) {
  const double trace_leak = (trace_functional().transpose() * l).norm();
  if (trace_leak > 1e-9 * std::max(l.norm(), 1.0)) {
    throw InvalidArgument("steady_state: generator is not trace preserving");
  }
  const Stationary s = stationary_vector(l);
  return {to_density(s.v), s.null_dimension > 1, s.null_dimension};
}

PeriodicSteadyState periodic_steady_state(const OpenSystem& system, double period_s,
                                          int min_steps) {
  if (!(period_s > 0.0) || !std::isfinite(period_s)) {
    throw InvalidArgument("periodic_steady_state: period must be positive");
  }
  const double limit = max_step(system.hamiltonian);
  const int n = std::max(min_steps, static_cast<int>(std::ceil(period_s / limit)));
  const double h = period_s / n;

  const Superoperator diss = dissipator(jump_operators(system.relaxation, system.frame));
  auto generator = [&](double t) {
    return Superoperator(hamiltonian_superoperator(system.hamiltonian.at(t)) + diss);
  };

  Superoperator map = Superoperator::Identity();
  Superoperator g_now = generator(0.0);
  for (int k = 0; k < n; ++k) {
    const double t = k * h;
    const Superoperator g_mid = generator(t + 0.5 * h);
    const Superoperator g_end = generator(t + h);
    const Superoperator k1 = g_now * map;
    const Superoperator k2 = g_mid * (map + (0.5 * h) * k1);
    const Superoperator k3 = g_mid * (map + (0.5 * h) * k2);
    const Superoperator k4 = g_end * (map + h * k3);
    map += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    g_now = g_end;
  }

  const Stationary s = stationary_vector(Superoperator(map - Superoperator::Identity()));
  const DensityMatrix start = to_density(s.v);

  // Trapezoidal average over one period, restarting from the fixed point.
  Operator sum = Operator::Zero();
  int samples = 0;
  Operator previous;
  PropagateOptions options;
  options.observer = [&](double, const Operator& rho) {
    if (samples > 0) sum += 0.5 * (previous + rho);
    previous = rho;
    ++samples;
  };
  propagate(system, start, period_s, h * (1.0 + 1e-12), options);
  const Operator mean = sum / static_cast<double>(samples - 1);
  return {to_density(vectorize(mean)), start, s.null_dimension > 1};
}

}  // namespace nvodmr
