#pragma once

#include <vector>

#include "nvodmr/spin.hpp"

namespace nvodmr {

// One oscillating contribution op * exp(i(2 pi f t + phase)) + h.c.
// A Hermitian op with f > 0 gives 2 op cos(2 pi f t + phase).
struct HarmonicTerm {
  Operator op = Operator::Zero();
  double freq_hz = 0.0;
  double phase_rad = 0.0;

  Operator at(double t) const;
};

// H(t) = static + sum_k (A_k e^{i(2 pi f_k t + phi_k)} + h.c.).
// Every evaluation is Hermitian by construction; the static part is checked on entry.
class TimeDependentOperator {
 public:
  TimeDependentOperator();
  explicit TimeDependentOperator(const Operator& static_part,
                                 std::vector<HarmonicTerm> harmonics = {});

  const Operator& static_part() const { return static_part_; }
  const std::vector<HarmonicTerm>& harmonics() const { return harmonics_; }

  Operator at(double t) const;

  // RWA as a list operation: keep only the terms with |f| < cutoff_hz.
  TimeDependentOperator dropping_terms_at_or_above(double cutoff_hz) const;

  // Folds phases into the operators, flips negative frequencies to positive ones,
  // moves f = 0 terms into the static part and sums terms whose frequencies agree
  // within freq_tol_hz. Terms whose operator is below op_tol (absolute) are removed.
  TimeDependentOperator canonical(double freq_tol_hz = 1e-6, double op_tol = 0.0) const;

  // Largest |f_k| plus the spectral radius of the static part and the harmonic
  // amplitudes: an upper bound on any rate at which H(t) rotates the state.
  double max_frequency() const;

  bool is_static() const { return harmonics_.empty(); }

  TimeDependentOperator operator+(const TimeDependentOperator& other) const;

 private:
  Operator static_part_;
  std::vector<HarmonicTerm> harmonics_;
};

}  // namespace nvodmr
