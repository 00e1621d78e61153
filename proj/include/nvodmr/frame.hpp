#pragma once

#include <optional>

#include "nvodmr/time_dependent_operator.hpp"

namespace nvodmr {

// U(t) = exp(i 2 pi t G) for a static Hermitian generator G (Hz).
// The rotating-frame Hamiltonian is H' = U H U^dagger - (i / 2 pi) U dU^dagger/dt = U H U^dagger - G.
class RotatingFrame {
 public:
  explicit RotatingFrame(const Operator& generator_hz);

  // U = exp(i 2 pi f_mw t Sz^2)
  static RotatingFrame microwave(double f_mw_hz);
  // U' = exp(i pi f_ac t (Sx^2 - Sy^2))
  static RotatingFrame strain_split(double f_ac_hz);

  const Operator& generator() const { return generator_; }
  Operator unitary(double t) const;

  // Closed-form transform: in the eigenbasis of G the (i,j) element of every term
  // picks up the frequency g_i - g_j, so the result is again static + harmonics.
  // No term is dropped here; combine with dropping_terms_at_or_above for the RWA.
  TimeDependentOperator transform(const TimeDependentOperator& h) const;

  // U H(t) U^dagger - (i / 2 pi) U dU^dagger/dt with the derivative taken by a
  // fourth-order central difference of step `step_s`.
  Operator transform_numerical(const TimeDependentOperator& h, double t,
                               double step_s = 1e-12) const;

 private:
  Operator generator_;
  Operator eigenvectors_;
  Eigen::Vector3d eigenvalues_;
};

struct StaticFrame {
  RotatingFrame frame;
  Operator hamiltonian;
};

// Looks for a frame diagonal in `basis` (columns orthonormal) in which h becomes
// time independent. Exists when the coupling graph of h carries consistent
// frequency differences, e.g. rwa_second with only one in-plane microwave component.
std::optional<StaticFrame> find_static_frame(const TimeDependentOperator& h,
                                             const Operator& basis);

}  // namespace nvodmr
