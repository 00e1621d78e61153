#include "nvodmr/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "nvodmr/errors.hpp"

namespace nvodmr {

DensityMatrix::DensityMatrix() : m_(projector(basis::zero())) {}

DensityMatrix DensityMatrix::pure(const Ket& ket) {
  const double norm = ket.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("DensityMatrix::pure: zero ket");
  return DensityMatrix(projector(ket / norm));
}

DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(Operator::Identity() / 3.0); }

DensityMatrix::Diagnostics DensityMatrix::diagnose(const Operator& m) {
  Diagnostics d;
  d.hermiticity_error = max_abs(m - m.adjoint());
  d.trace_error = std::abs(m.trace() - Complex(1.0));
  const Operator hermitian = 0.5 * (m + m.adjoint());
  d.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Operator>(hermitian, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return d;
}

DensityMatrix DensityMatrix::from_operator(const Operator& m, double tol) {
  if (!all_finite(m)) throw NumericalError("density matrix has non-finite entries");
  const Diagnostics d = diagnose(m);
  if (d.hermiticity_error > tol || d.trace_error > tol || d.min_eigenvalue < -tol) {
    std::ostringstream msg;
    msg << "density matrix invariant violated: |rho - rho^+| = " << d.hermiticity_error
        << ", |tr - 1| = " << d.trace_error << ", min eigenvalue = " << d.min_eigenvalue;
    throw NumericalError(msg.str());
  }
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

double DensityMatrix::population(const Ket& ket) const {
  return (ket.adjoint() * m_ * ket)(0).real();
}

double DensityMatrix::trace_distance(const DensityMatrix& other) const {
  const Operator diff = m_ - other.m_;
  const auto eig =
      Eigen::SelfAdjointEigenSolver<Operator>(diff, Eigen::EigenvaluesOnly).eigenvalues();
  return 0.5 * eig.cwiseAbs().sum();
}

double pl_signal(const DensityMatrix& rho, const RelaxationModel& r) {
  return r.baseline * (1.0 - r.contrast * (1.0 - rho.population(basis::zero())));
}

}  // namespace nvodmr
