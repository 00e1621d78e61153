#include <cmath>
#include <numbers>

#include "nvodmr/dynamics.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

Superoperator kron(const Operator& a, const Operator& b) {
  Superoperator out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
  return out;
}

}  // namespace

void RelaxationModel::validate() const {
  const bool finite = std::isfinite(gamma_pump_hz) && std::isfinite(gamma_1_hz) &&
                      std::isfinite(gamma_2_hz) && std::isfinite(contrast) &&
                      std::isfinite(baseline);
  if (!finite || gamma_pump_hz < 0.0 || gamma_1_hz < 0.0 || gamma_2_hz < 0.0) {
    throw InvalidArgument("RelaxationModel: rates must be finite and non-negative");
  }
  if (!(contrast > 0.0 && contrast <= 1.0)) {
    throw InvalidArgument("RelaxationModel: contrast must lie in (0, 1]");
  }
}

std::vector<JumpOperator> jump_operators(const RelaxationModel& r, DissipatorFrame frame) {
  r.validate();
  const Ket z = basis::zero();
  const bool lab = frame == DissipatorFrame::Lab;
  const Ket a = lab ? basis::plus_one() : basis::bright();
  const Ket b = lab ? basis::minus_one() : basis::dark();

  std::vector<JumpOperator> jumps;
  auto add = [&jumps](const Operator& op, double rate) {
    if (rate > 0.0) jumps.push_back({op, rate});
  };
  add(outer(z, a), r.gamma_pump_hz);
  add(outer(z, b), r.gamma_pump_hz);
  add(outer(z, a), r.gamma_1_hz);
  add(outer(z, b), r.gamma_1_hz);
  add(outer(a, z), r.gamma_1_hz);
  add(outer(b, z), r.gamma_1_hz);
  if (lab) {
    add(spin1_operators().z, r.gamma_2_hz);
  } else {
    add(outer(basis::bright(), basis::dark()), r.gamma_2_hz);
    add(outer(basis::dark(), basis::bright()), r.gamma_2_hz);
  }
  return jumps;
}

VectorizedOperator vectorize(const Operator& m) {
  return Eigen::Map<const VectorizedOperator>(m.data());
}

Operator unvectorize(const VectorizedOperator& v) { return Eigen::Map<const Operator>(v.data()); }

Superoperator hamiltonian_superoperator(const Operator& h) {
  const Operator id = Operator::Identity();
  const Complex factor(0.0, -2.0 * std::numbers::pi);
  return factor * (kron(id, h) - kron(h.transpose(), id));
}

Superoperator dissipator(const std::vector<JumpOperator>& jumps) {
  const Operator id = Operator::Identity();
  Superoperator out = Superoperator::Zero();
  for (const auto& j : jumps) {
    const Operator n = j.op.adjoint() * j.op;
    out += j.rate_hz * (kron(j.op.conjugate(), j.op) - 0.5 * kron(id, n) -
                        0.5 * kron(n.transpose(), id));
  }
  return out;
}

Superoperator liouvillian(const Operator& h, const RelaxationModel& r, DissipatorFrame frame) {
  if (!all_finite(h) || !is_hermitian(h, 1e-12)) {
    throw InvalidArgument("liouvillian: Hamiltonian must be finite and Hermitian");
  }
  return hamiltonian_superoperator(h) + dissipator(jump_operators(r, frame));
}

}  // namespace nvodmr
