#include "nvodmr/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

constexpr Complex kI{0.0, 1.0};

Operator field_coupling(const NvParams& p, const Eigen::Vector3d& b) {
  const auto s = spin1_operators();
  return p.gamma_e_hz_per_t * (b.x() * s.x + b.y() * s.y + b.z() * s.z);
}

void check_drive(const NvParams& p, const DriveParams& d) {
  p.validate();
  d.validate();
  d.check_regime();
}

}  // namespace

Operator nv_hamiltonian(const NvParams& p) {
  p.validate();
  const auto s = spin1_operators();
  return p.d_hz * s.z * s.z + p.ex_hz * (s.x * s.x - s.y * s.y) +
         p.ey_hz * (s.x * s.y - s.y * s.x);
}

Operator drive_hamiltonian(const NvParams& p, const DriveParams& d, double t) {
  d.validate();
  const double c_mw = std::cos(2.0 * std::numbers::pi * d.f_mw_hz * t);
  const double c_ac = std::cos(2.0 * std::numbers::pi * d.f_ac_hz * t);
  return field_coupling(p, d.b_mw_t * c_mw + d.b_ac_t * c_ac);
}

TimeDependentOperator lab_hamiltonian(const NvParams& p, const DriveParams& d) {
  d.validate();
  std::vector<HarmonicTerm> terms;
  if (!d.b_mw_t.isZero(0.0)) terms.push_back({0.5 * field_coupling(p, d.b_mw_t), d.f_mw_hz, 0.0});
  if (!d.b_ac_t.isZero(0.0)) terms.push_back({0.5 * field_coupling(p, d.b_ac_t), d.f_ac_hz, 0.0});
  return TimeDependentOperator(nv_hamiltonian(p), std::move(terms));
}

TimeDependentOperator rwa_first(const NvParams& p, const DriveParams& d) {
  check_drive(p, d);
  const Ket b = basis::bright();
  const Ket dk = basis::dark();
  const Ket z = basis::zero();
  const double g = p.gamma_e_hz_per_t;

  Operator h = (p.d_hz + p.ex_hz - d.f_mw_hz) * projector(b) +
               (p.d_hz - p.ex_hz - d.f_mw_hz) * projector(dk);
  h += 0.5 * g * d.b_mw_t.x() * (outer(b, z) + outer(z, b));
  h += -kI * 0.5 * g * d.b_mw_t.y() * (outer(dk, z) - outer(z, dk));

  std::vector<HarmonicTerm> terms;
  if (d.b_ac_t.z() != 0.0) {
    // A e^{i w t} + h.c. with Hermitian A gives 2 A cos(w t).
    terms.push_back({0.5 * g * d.b_ac_t.z() * (outer(b, dk) + outer(dk, b)), d.f_ac_hz, 0.0});
  }
  return TimeDependentOperator(h, std::move(terms));
}

TimeDependentOperator rwa_second(const NvParams& p, const DriveParams& d) {
  check_drive(p, d);
  const Ket b = basis::bright();
  const Ket dk = basis::dark();
  const Ket z = basis::zero();
  const double g = p.gamma_e_hz_per_t;
  const double half_ac = 0.5 * d.f_ac_hz;

  Operator h = (p.d_hz + p.ex_hz - d.f_mw_hz - half_ac) * projector(b) +
               (p.d_hz - p.ex_hz - d.f_mw_hz + half_ac) * projector(dk);
  h += 0.5 * g * d.b_ac_t.z() * (outer(b, dk) + outer(dk, b));

  std::vector<HarmonicTerm> terms;
  if (d.b_mw_t.x() != 0.0) {
    terms.push_back({0.5 * g * d.b_mw_t.x() * outer(b, z), half_ac, 0.0});
  }
  if (d.b_mw_t.y() != 0.0) {
    terms.push_back({-kI * 0.5 * g * d.b_mw_t.y() * outer(dk, z), -half_ac, 0.0});
  }
  return TimeDependentOperator(h, std::move(terms));
}

TimeDependentOperator interaction_hamiltonian(const NvParams& p, const DriveParams& d,
                                              double rel_tolerance) {
  check_drive(p, d);
  const double target = 2.0 * p.ex_hz;
  if (target <= 0.0 || std::abs(d.f_ac_hz - target) > rel_tolerance * target) {
    throw RegimeError("interaction picture needs f_ac = 2 Ex within " +
                      std::to_string(rel_tolerance * 100.0) + "% (f_ac = " +
                      std::to_string(d.f_ac_hz) + " Hz, 2 Ex = " + std::to_string(target) +
                      " Hz)");
  }
  const Ket up = basis::plus_one();
  const Ket down = basis::minus_one();
  const Ket z = basis::zero();
  const double detuning = p.d_hz - d.f_mw_hz;
  const double half_split = 0.5 * p.gamma_e_hz_per_t * d.b_ac_t.z();
  const double a = p.gamma_e_hz_per_t * d.b_mw_t.x() / (2.0 * std::numbers::sqrt2);
  const double c = p.gamma_e_hz_per_t * d.b_mw_t.y() / (2.0 * std::numbers::sqrt2);

  std::vector<HarmonicTerm> terms = {
      {a * outer(up, z), detuning + half_split + p.ex_hz, 0.0},
      {a * outer(down, z), detuning - half_split + p.ex_hz, 0.0},
      {-kI * c * outer(up, z), detuning + half_split - p.ex_hz, 0.0},
      {kI * c * outer(down, z), detuning - half_split - p.ex_hz, 0.0},
  };
  return TimeDependentOperator(Operator::Zero(), std::move(terms));
}

}  // namespace nvodmr
