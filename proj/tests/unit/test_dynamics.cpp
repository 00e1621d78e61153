#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nvodmr/dynamics.hpp"
#include "nvodmr/errors.hpp"
#include "nvodmr/frame.hpp"
#include "nvodmr/hamiltonian.hpp"

using namespace nvodmr;

namespace {

RelaxationModel no_rates() {
  RelaxationModel r;
  r.gamma_pump_hz = 0.0;
  r.gamma_1_hz = 0.0;
  r.gamma_2_hz = 0.0;
  return r;
}

RelaxationModel pump_only() {
  RelaxationModel r = no_rates();
  r.gamma_pump_hz = 1e6;
  return r;
}

Operator random_hermitian(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Operator a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

DensityMatrix random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Operator a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex(g(rng), g(rng));
  Operator m = a * a.adjoint();
  m /= m.trace().real();
  return DensityMatrix::from_operator(m);
}

void check_invariants(const DensityMatrix& rho) {
  const auto d = DensityMatrix::diagnose(rho.matrix());
  CHECK(d.hermiticity_error <= 1e-10);
  CHECK(d.trace_error <= 1e-10);
  CHECK(d.min_eigenvalue >= -1e-10);
}

// Resonant microwave on the |0> <-> |D> line at f_mw = D - Ex, no AC field.
TimeDependentOperator resonant_drive(double b_mw_x_t) {
  NvParams p;
  p.ex_hz = 2e6;
  DriveParams d;
  d.b_mw_t = Eigen::Vector3d(0.0, b_mw_x_t, 0.0);
  d.f_ac_hz = 4e6;
  d.f_mw_hz = p.d_hz - p.ex_hz;
  return rwa_first(p, d);
}

}  // namespace

TEST_CASE("density matrix factories enforce the invariants") {
  check_invariants(DensityMatrix());
  CHECK(DensityMatrix().population(basis::zero()) == doctest::Approx(1.0));
  CHECK(DensityMatrix::maximally_mixed().population(basis::bright()) == doctest::Approx(1.0 / 3.0));
  Operator bad = Operator::Identity();
  CHECK_THROWS_AS(DensityMatrix::from_operator(bad), NumericalError);
  bad = Operator::Zero();
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_operator(bad), NumericalError);
  bad = projector(basis::zero());
  bad(0, 1) = 1e-6;
  CHECK_THROWS_AS(DensityMatrix::from_operator(bad), NumericalError);
  const DensityMatrix a = DensityMatrix::pure(basis::bright());
  const DensityMatrix b = DensityMatrix::pure(basis::dark());
  CHECK(a.trace_distance(b) == doctest::Approx(1.0));
  CHECK(a.trace_distance(a) == doctest::Approx(0.0));
}

TEST_CASE("relaxation model validation") {
  RelaxationModel r;
  r.contrast = 0.0;
  CHECK_THROWS_AS(r.validate(), InvalidArgument);
  r = RelaxationModel();
  r.gamma_2_hz = -1.0;
  CHECK_THROWS_AS(r.validate(), InvalidArgument);
}

TEST_CASE("zero Hamiltonian and zero rates give the zero generator") {
  CHECK(liouvillian(Operator::Zero(), no_rates()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-Hermitian Hamiltonian is rejected") {
  Operator h = Operator::Zero();
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(liouvillian(h, RelaxationModel()), InvalidArgument);
}

TEST_CASE("trace functional is a left null vector of the generator") {
  std::mt19937_64 rng(21);
  const VectorizedOperator tr = vectorize(Operator::Identity());
  for (auto frame : {DissipatorFrame::Lab, DissipatorFrame::BrightDarkSecular}) {
    for (int k = 0; k < 20; ++k) {
      const Superoperator l = liouvillian(random_hermitian(rng, 3e6), RelaxationModel(), frame);
      const double scale = l.cwiseAbs().maxCoeff();
      CHECK((tr.transpose() * l).cwiseAbs().maxCoeff() < 1e-12 * scale);
    }
  }
}

TEST_CASE("vectorization is column stacked") {
  Operator m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Complex(i, j);
  const VectorizedOperator v = vectorize(m);
  CHECK(v(1 + 3 * 2) == m(1, 2));
  CHECK(max_abs(unvectorize(v) - m) == 0.0);
}

TEST_CASE("generator matches the Lindblad equation written out directly") {
  std::mt19937_64 rng(22);
  const Operator h = random_hermitian(rng, 1e6);
  const RelaxationModel r;
  const DensityMatrix rho = random_state(rng);
  const Operator& m = rho.matrix();
  Operator expected = Complex(0.0, -2.0 * std::numbers::pi) * (h * m - m * h);
  for (const auto& j : jump_operators(r, DissipatorFrame::Lab)) {
    const Operator ldl = j.op.adjoint() * j.op;
    expected += j.rate_hz * (j.op * m * j.op.adjoint() - 0.5 * (ldl * m + m * ldl));
  }
  const Operator got = unvectorize(liouvillian(h, r) * vectorize(m));
  CHECK(max_abs(got - expected) < 1e-12 * max_abs(expected));
}

TEST_CASE("property: generator is linear") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Superoperator l = liouvillian(random_hermitian(rng, 1e6), RelaxationModel());
    const Operator a = random_state(rng).matrix(), b = random_state(rng).matrix();
    const double alpha = g(rng), beta = g(rng);
    const VectorizedOperator lhs = l * vectorize(alpha * a + beta * b);
    const VectorizedOperator rhs = alpha * (l * vectorize(a)) + beta * (l * vectorize(b));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9 * l.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("pumping polarizes into |0>") {
  const SteadyState ss = steady_state(liouvillian(Operator::Zero(), pump_only()));
  CHECK_FALSE(ss.degenerate);
  CHECK(ss.rho.population(basis::zero()) == doctest::Approx(1.0).epsilon(1e-12));

  const OpenSystem sys{TimeDependentOperator(Operator::Zero()), pump_only()};
  const DensityMatrix end = propagate(sys, DensityMatrix::pure(basis::plus_one()), 30e-6, 1e-8);
  CHECK(end.trace_distance(ss.rho) < 1e-9);
}

TEST_CASE("degenerate generator returns the state closest to maximally mixed") {
  const SteadyState all = steady_state(liouvillian(Operator::Zero(), no_rates()));
  CHECK(all.degenerate);
  CHECK(all.null_dimension == 9);
  CHECK(all.rho.trace_distance(DensityMatrix::maximally_mixed()) < 1e-12);

  RelaxationModel deph = no_rates();
  deph.gamma_2_hz = 1e5;
  const SteadyState d = steady_state(liouvillian(Operator::Zero(), deph));
  CHECK(d.degenerate);
  CHECK(d.null_dimension == 3);
  CHECK(d.rho.trace_distance(DensityMatrix::maximally_mixed()) < 1e-12);
}

TEST_CASE("driven steady state agrees with long propagation") {
  const TimeDependentOperator h = resonant_drive(2.52e-6);
  REQUIRE(h.is_static());
  const RelaxationModel r;
  const SteadyState ss = steady_state(liouvillian(h.static_part(), r));
  CHECK_FALSE(ss.degenerate);
  check_invariants(ss.rho);
  // Ground population stays close to one but is visibly depleted on resonance.
  const double p0 = ss.rho.population(basis::zero());
  CHECK(p0 < 0.99);
  CHECK(p0 > 0.5);
  const DensityMatrix end =
      propagate(h, r, DensityMatrix(), 100.0 / r.gamma_pump_hz, 1e-8);
  CHECK(end.trace_distance(ss.rho) < 1e-6);
}

TEST_CASE("property: steady state is reached from random initial states") {
  std::mt19937_64 rng(24);
  RelaxationModel r;
  r.gamma_1_hz = 2e4;
  const double t_end = 50.0 / r.gamma_1_hz * 0.05;  // 50 / min rate with pump dominating the slow rate
  for (int k = 0; k < 5; ++k) {
    const Operator h = random_hermitian(rng, 2e5);
    const SteadyState ss = steady_state(liouvillian(h, r));
    const OpenSystem sys{TimeDependentOperator(h), r};
    const DensityMatrix end = propagate(sys, random_state(rng), t_end, 1e-8);
    CHECK(end.trace_distance(ss.rho) < 1e-6);
  }
}

TEST_CASE("propagation without Hamiltonian or rates leaves the state unchanged") {
  std::mt19937_64 rng(25);
  const DensityMatrix rho0 = random_state(rng);
  const DensityMatrix end = propagate(TimeDependentOperator(Operator::Zero()), no_rates(), rho0, 1e-5, 1e-7);
  CHECK(max_abs(end.matrix() - rho0.matrix()) < 1e-15);
}

TEST_CASE("closed-system Rabi oscillation has period 1 / Omega") {
  const double omega = 1e6;
  const Operator h = 0.5 * omega * (outer(basis::bright(), basis::zero()) + outer(basis::zero(), basis::bright()));
  const OpenSystem sys{TimeDependentOperator(h), no_rates()};
  std::vector<std::pair<double, double>> trace;
  PropagateOptions opt;
  opt.observer = [&](double t, const Operator& rho) { trace.emplace_back(t, rho(1, 1).real()); };
  propagate(sys, DensityMatrix(), 1.5 / omega, 1e-10, opt);
  // Analytic: P0 = cos^2(pi Omega t). Locate the second maximum after t = 0.
  double best_t = 0.0, best_p = -1.0;
  for (const auto& [t, p] : trace)
    if (t > 0.5 / omega && p > best_p) {
      best_p = p;
      best_t = t;
    }
  CHECK(std::abs(best_t * omega - 1.0) < 1e-3);
  for (const auto& [t, p] : trace) {
    const double c = std::cos(std::numbers::pi * omega * t);
    CHECK(std::abs(p - c * c) < 1e-8);
  }
}

TEST_CASE("step size above 1 / (20 f_max) is rejected") {
  const TimeDependentOperator h = resonant_drive(2.52e-6);
  const double limit = max_step(h);
  CHECK(limit > 0.0);
  CHECK_THROWS_AS(propagate(h, RelaxationModel(), DensityMatrix(), 1e-6, 1.01 * limit), InvalidArgument);
  CHECK_NOTHROW(propagate(h, RelaxationModel(), DensityMatrix(), 1e-6, limit));
}

TEST_CASE("halving the step changes the final state by less than 1e-9") {
  // Four-dip preset drive in the microwave frame, AC term kept time dependent.
  NvParams p;
  p.ex_hz = 2e6;
  DriveParams d;
  d.b_mw_t = Eigen::Vector3d(2.52e-6, 2.52e-6, 0.0);
  d.b_ac_t = Eigen::Vector3d(0.0, 0.0, 7.7e-6);
  d.f_ac_hz = 4e6;
  d.f_mw_hz = p.d_hz - p.ex_hz;
  const TimeDependentOperator h = rwa_first(p, d);
  const double dt = max_step(h);
  const auto run = [&](double step) {
    return propagate(h, RelaxationModel(), DensityMatrix(), 5e-6, step);
  };
  const DensityMatrix a = run(dt / 8), b = run(dt / 16), c = run(dt / 32);
  CHECK(b.trace_distance(c) < 1e-9);
  // Fourth order: the change shrinks by about 2^4 per halving.
  CHECK(a.trace_distance(b) / b.trace_distance(c) > 12.0);
}

TEST_CASE("property: propagation preserves the invariants at every step") {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    RelaxationModel r;
    r.gamma_pump_hz = 2e6 * u(rng);
    r.gamma_1_hz = 1e4 * u(rng);
    r.gamma_2_hz = 1e6 * u(rng);
    const Operator a = random_hermitian(rng, 1e6);
    const TimeDependentOperator h(random_hermitian(rng, 1e6), {{a, 3e6 * u(rng), 0.0}});
    const OpenSystem sys{h, r};
    PropagateOptions opt;
    int calls = 0;
    opt.observer = [&](double, const Operator& rho) {
      ++calls;
      const auto diag = DensityMatrix::diagnose(rho);
      CHECK(diag.hermiticity_error <= 1e-10);
      CHECK(diag.trace_error <= 1e-8);
      CHECK(diag.min_eigenvalue >= -1e-10);
    };
    check_invariants(propagate(sys, random_state(rng), 2e-6, 0.5 * max_step(h), opt));
    CHECK(calls > 1);
  }
}

TEST_CASE("periodic steady state matches the static-frame steady state") {
  NvParams p;
  p.ex_hz = 2e6;
  DriveParams d;
  d.b_mw_t = Eigen::Vector3d(2.52e-6, 0.0, 0.0);
  d.b_ac_t = Eigen::Vector3d(0.0, 0.0, 7.7e-6);
  d.f_ac_hz = 4e6;
  d.f_mw_hz = p.d_hz - p.ex_hz - 0.5 * p.gamma_e_hz_per_t * 7.7e-6;
  const TimeDependentOperator h = rwa_second(p, d);
  const RelaxationModel r;
  const auto sf = find_static_frame(h, basis::bright_dark_zero());
  REQUIRE(sf.has_value());
  const SteadyState ss =
      steady_state(liouvillian(sf->hamiltonian, r, DissipatorFrame::BrightDarkSecular));
  const PeriodicSteadyState ps =
      periodic_steady_state(OpenSystem{h, r, DissipatorFrame::BrightDarkSecular}, 2.0 / d.f_ac_hz, 256);
  check_invariants(ps.mean);
  for (const Ket& k : {basis::zero(), basis::bright(), basis::dark()})
    CHECK(std::abs(ps.mean.population(k) - ss.rho.population(k)) < 1e-6);
}

TEST_CASE("PL signal examples") {
  RelaxationModel r;
  r.contrast = 0.03;
  r.baseline = 1e6;
  CHECK(pl_signal(DensityMatrix(), r) == doctest::Approx(1e6));
  CHECK(pl_signal(DensityMatrix::pure(basis::bright()), r) == doctest::Approx(9.7e5));
  CHECK(pl_signal(DensityMatrix::maximally_mixed(), r) == doctest::Approx(1e6 * (1.0 - 2.0 / 3.0 * 0.03)));
}
