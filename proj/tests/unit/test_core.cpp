#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nvodmr/errors.hpp"
#include "nvodmr/frame.hpp"
#include "nvodmr/hamiltonian.hpp"
#include "nvodmr/resonance.hpp"

using namespace nvodmr;

namespace {

constexpr Complex kI{0.0, 1.0};

NvParams strained() {
  NvParams p;
  p.ex_hz = 2e6;
  return p;
}

DriveParams fig2_drive(double f_mw = 2.868e9) {
  DriveParams d;
  d.b_mw_t = Eigen::Vector3d(2.52e-6, 1.3e-6, 0.0);
  d.b_ac_t = Eigen::Vector3d(0.0, 0.0, 7.7e-6);
  d.f_ac_hz = 4e6;
  d.f_mw_hz = f_mw;
  return d;
}

// exp(i 2 pi t H) for Hermitian H, via its eigenbasis.
Operator expi(const Operator& h, double t) {
  Eigen::SelfAdjointEigenSolver<Operator> es(h);
  Eigen::Vector3cd ph;
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * es.eigenvalues()(k) * t;
    ph(k) = Complex(std::cos(a), std::sin(a));
  }
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("spin-1 operators satisfy the angular momentum algebra") {
  const auto s = spin1_operators();
  CHECK(max_abs(s.x * s.y - s.y * s.x - kI * s.z) < 1e-15);
  CHECK(max_abs(s.y * s.z - s.z * s.y - kI * s.x) < 1e-15);
  CHECK(max_abs(s.x * s.x + s.y * s.y + s.z * s.z - 2.0 * Operator::Identity()) < 1e-15);
}

TEST_CASE("bright/dark decomposition of the strain and field operators") {
  const auto s = spin1_operators();
  const Ket b = basis::bright(), d = basis::dark(), z = basis::zero();
  CHECK(max_abs(s.x * s.x - s.y * s.y - (projector(b) - projector(d))) < 1e-15);
  CHECK(max_abs(s.z - (outer(b, d) + outer(d, b))) < 1e-15);
  CHECK(max_abs(s.x - (outer(b, z) + outer(z, b))) < 1e-15);
  CHECK(max_abs(s.y - (-kI) * (outer(d, z) - outer(z, d))) < 1e-15);
}

TEST_CASE("NV Hamiltonian eigenstructure: |0>, |D>, |B> at 0, D - Ex, D + Ex") {
  const NvParams p = strained();
  const Operator h = nv_hamiltonian(p);
  CHECK(std::abs((basis::zero().adjoint() * h * basis::zero())(0)) < 1e-6);
  CHECK((h * basis::bright() - (p.d_hz + p.ex_hz) * basis::bright()).norm() < 1e-6);
  CHECK((h * basis::dark() - (p.d_hz - p.ex_hz) * basis::dark()).norm() < 1e-6);
}

TEST_CASE("parameter validation") {
  NvParams p;
  p.d_hz = std::nan("");
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  DriveParams d = fig2_drive();
  d.f_ac_hz = 0.5e9;
  CHECK_THROWS_AS(d.check_regime(), RegimeError);
  CHECK_THROWS_AS(rwa_first(strained(), d), RegimeError);
  d.f_ac_hz = -1.0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
}

TEST_CASE("lab Hamiltonian as harmonic terms matches the direct cosine formula") {
  const NvParams p = strained();
  const DriveParams d = fig2_drive();
  const TimeDependentOperator h = lab_hamiltonian(p, d);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(0.0, 1e-5);
  for (int k = 0; k < 50; ++k) {
    const double tk = t(rng);
    const Operator direct = nv_hamiltonian(p) + drive_hamiltonian(p, d, tk);
    CHECK(max_abs(h.at(tk) - direct) < 1e-6);
    CHECK(is_hermitian(h.at(tk)));
  }
}

TEST_CASE("first RWA equals the one-period average of the numerically transformed lab Hamiltonian") {
  // Without the AC field the first-frame Hamiltonian has only 0 and 2 f_mw components,
  // so averaging over one microwave period isolates the RWA result.
  const NvParams p = strained();
  DriveParams d = fig2_drive(2.8683e9);
  d.b_ac_t.setZero();
  const RotatingFrame frame = RotatingFrame::microwave(d.f_mw_hz);
  const TimeDependentOperator lab = lab_hamiltonian(p, d);
  const int n = 64;
  const double t0 = 3.7e-7;
  Operator avg = Operator::Zero();
  for (int k = 0; k < n; ++k) avg += frame.transform_numerical(lab, t0 + k / (n * d.f_mw_hz)) / n;
  const TimeDependentOperator rwa = rwa_first(p, d);
  REQUIRE(rwa.is_static());
  // The finite-difference derivative limits the agreement to a few 1e-9 of f_mw.
  CHECK(max_abs(avg - rwa.static_part()) < 1e-8 * d.f_mw_hz);
  // And the closed-form transform followed by dropping fast terms gives the same.
  const TimeDependentOperator closed =
      frame.transform(lab).dropping_terms_at_or_above(0.5 * d.f_mw_hz).canonical();
  CHECK(closed.is_static());
  CHECK(max_abs(closed.static_part() - rwa.static_part()) < 1e-3);
}

TEST_CASE("first RWA keeps the AC coupling as a cosine between |B> and |D>") {
  const NvParams p = strained();
  const DriveParams d = fig2_drive();
  const TimeDependentOperator closed = RotatingFrame::microwave(d.f_mw_hz)
                                           .transform(lab_hamiltonian(p, d))
                                           .dropping_terms_at_or_above(0.5 * d.f_mw_hz);
  const TimeDependentOperator rwa = rwa_first(p, d);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> t(0.0, 1e-5);
  for (int k = 0; k < 20; ++k) {
    const double tk = t(rng);
    CHECK(max_abs(closed.at(tk) - rwa.at(tk)) < 1e-3);
  }
  const double g = p.gamma_e_hz_per_t * d.b_ac_t.z();
  const double tq = 0.25 / d.f_ac_hz * 0.5;  // cos = cos(pi/4)
  const Complex bd = (basis::bright().adjoint() * rwa.at(tq) * basis::dark())(0);
  CHECK(std::abs(bd - g * std::cos(2.0 * std::numbers::pi * d.f_ac_hz * tq)) < 1e-6);
}

TEST_CASE("second RWA equals the strain-split transform of the first with 2 f_ac dropped") {
  const NvParams p = strained();
  const DriveParams d = fig2_drive();
  const TimeDependentOperator closed = RotatingFrame::strain_split(d.f_ac_hz)
                                           .transform(rwa_first(p, d))
                                           .dropping_terms_at_or_above(d.f_ac_hz);
  const TimeDependentOperator rwa = rwa_second(p, d);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> t(0.0, 1e-5);
  for (int k = 0; k < 20; ++k) {
    const double tk = t(rng);
    CHECK(max_abs(closed.at(tk) - rwa.at(tk)) < 1e-6);
  }
  // Residual microwave phases at +-f_ac/2, AC coupling halved and static.
  CHECK(rwa.harmonics().size() == 2);
  for (const auto& term : rwa.harmonics()) CHECK(std::abs(std::abs(term.freq_hz) - 2e6) < 1e-9);
  const double half = 0.5 * p.gamma_e_hz_per_t * d.b_ac_t.z();
  CHECK(std::abs((basis::bright().adjoint() * rwa.static_part() * basis::dark())(0) - half) < 1e-9);
}

TEST_CASE("interaction picture of the second RWA at f_ac = 2 Ex") {
  const NvParams p = strained();
  const DriveParams d = fig2_drive(2.8681e9);
  const TimeDependentOperator h2 = rwa_second(p, d);
  const Operator h0 = h2.static_part();
  const TimeDependentOperator hi = interaction_hamiltonian(p, d);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0.0, 1e-5);
  for (int k = 0; k < 30; ++k) {
    const double tk = t(rng);
    const Operator u = expi(h0, tk);
    const Operator oracle = u * (h2.at(tk) - h0) * u.adjoint();
    CHECK(max_abs(hi.at(tk) - oracle) < 1e-6);
  }
  DriveParams off = d;
  off.f_ac_hz = 3e6;
  CHECK_THROWS_AS(interaction_hamiltonian(p, off), RegimeError);
  NvParams unstrained;
  CHECK_THROWS_AS(interaction_hamiltonian(unstrained, d), RegimeError);
}

TEST_CASE("numerical and closed-form frame transforms agree at random times") {
  const NvParams p = strained();
  const DriveParams d = fig2_drive();
  const TimeDependentOperator lab = lab_hamiltonian(p, d);
  const TimeDependentOperator first = rwa_first(p, d);
  const RotatingFrame mw = RotatingFrame::microwave(d.f_mw_hz);
  const RotatingFrame split = RotatingFrame::strain_split(d.f_ac_hz);
  const TimeDependentOperator lab_rot = mw.transform(lab);
  const TimeDependentOperator first_rot = split.transform(first);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> t(0.0, 1e-5);
  for (int k = 0; k < 100; ++k) {
    const double tk = t(rng);
    const double scale1 = std::max(max_abs(nv_hamiltonian(p)), max_abs(mw.generator()));
    CHECK(max_abs(mw.transform_numerical(lab, tk) - lab_rot.at(tk)) <= 1e-6 * scale1);
    const double scale2 = std::max(max_abs(first.at(tk)), max_abs(split.generator()));
    CHECK(max_abs(split.transform_numerical(first, tk) - first_rot.at(tk)) <= 1e-6 * scale2);
  }
}

TEST_CASE("time-dependent operator bookkeeping") {
  const auto s = spin1_operators();
  const Operator a = outer(basis::plus_one(), basis::zero());
  const TimeDependentOperator h(s.z, {{a, 5.0, 0.3}, {a.adjoint(), -5.0, -0.3}, {s.x, 0.0, 0.0}});
  const TimeDependentOperator c = h.canonical();
  REQUIRE(c.harmonics().size() == 1);
  CHECK(c.harmonics()[0].freq_hz == doctest::Approx(5.0));
  for (double t : {0.0, 0.013, 0.4}) CHECK(max_abs(c.at(t) - h.at(t)) < 1e-14);
  CHECK(h.dropping_terms_at_or_above(1.0).harmonics().size() == 1);
  CHECK(h.max_frequency() >= 5.0);
  Operator bad = Operator::Zero();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(TimeDependentOperator{bad}, InvalidArgument);
}

TEST_CASE("static frame exists for a single in-plane microwave component only") {
  const NvParams p = strained();
  DriveParams d = fig2_drive();
  d.b_mw_t = Eigen::Vector3d(2.52e-6, 0.0, 0.0);
  const TimeDependentOperator h = rwa_second(p, d);
  const auto sf = find_static_frame(h, basis::bright_dark_zero());
  REQUIRE(sf.has_value());
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> t(0.0, 1e-5);
  for (int k = 0; k < 10; ++k) {
    const double tk = t(rng);
    CHECK(max_abs(sf->frame.transform_numerical(h, tk, 1e-10) - sf->hamiltonian) < 1e-4);
  }
  d.b_mw_t = Eigen::Vector3d(2.52e-6, 2.52e-6, 0.0);
  CHECK_FALSE(find_static_frame(rwa_second(p, d), basis::bright_dark_zero()).has_value());
}

TEST_CASE("resonance positions D +- gamma_e b / 2 +- Ex") {
  const NvParams p = strained();
  const ResonanceSet r = predict_resonances(p, 7.7e-6);
  REQUIRE(r.lines.size() == 4);
  const double g = 0.5 * p.gamma_e_hz_per_t * 7.7e-6;
  const std::vector<double> expected = {p.d_hz - g - p.ex_hz, p.d_hz + g - p.ex_hz,
                                        p.d_hz - g + p.ex_hz, p.d_hz + g + p.ex_hz};
  for (int k = 0; k < 4; ++k) CHECK(r.lines[k].freq_hz == doctest::Approx(expected[k]).epsilon(1e-15));
  const ResonanceSet zero = predict_resonances(p, 0.0);
  REQUIRE(zero.lines.size() == 2);
  CHECK(zero.lines[0].labels.size() == 2);
  CHECK(predict_resonances(p, -7.7e-6).frequencies() == r.frequencies());
}

TEST_CASE("Stark band") {
  const StarkBand b = stark_band(17.0, 1e7, 2e5);
  CHECK(b.f_min_hz == 2e5);
  CHECK(b.f_max_hz == 340e6);
  CHECK(stark_band(17.0, 0.0, 2e5).f_max_hz == 0.0);
  CHECK_THROWS_AS(stark_band(-1.0, 1e7, 2e5), InvalidArgument);
  CHECK_THROWS_AS(stark_band(17.0, 1e7, 0.0), InvalidArgument);
}
