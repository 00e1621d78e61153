#include "nvodmr/time_dependent_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nvodmr/errors.hpp"

namespace nvodmr {

Operator HarmonicTerm::at(double t) const {
  const double angle = 2.0 * std::numbers::pi * freq_hz * t + phase_rad;
  const Operator rotated = op * Complex(std::cos(angle), std::sin(angle));
  return rotated + rotated.adjoint();
}

TimeDependentOperator::TimeDependentOperator() : static_part_(Operator::Zero()) {}

TimeDependentOperator::TimeDependentOperator(const Operator& static_part,
                                             std::vector<HarmonicTerm> harmonics)
    : static_part_(static_part), harmonics_(std::move(harmonics)) {
  if (!all_finite(static_part_) || !is_hermitian(static_part_, 1e-12)) {
    throw InvalidArgument("TimeDependentOperator: static part must be finite and Hermitian");
  }
  for (const auto& term : harmonics_) {
    if (!all_finite(term.op) || !std::isfinite(term.freq_hz) || !std::isfinite(term.phase_rad)) {
      throw InvalidArgument("TimeDependentOperator: non-finite harmonic term");
    }
  }
  // Symmetrize away round-off so evaluations are Hermitian to the last bit.
  static_part_ = 0.5 * (static_part_ + static_part_.adjoint()).eval();
}

Operator TimeDependentOperator::at(double t) const {
  Operator h = static_part_;
  for (const auto& term : harmonics_) h += term.at(t);
  return h;
}

TimeDependentOperator TimeDependentOperator::dropping_terms_at_or_above(double cutoff_hz) const {
  std::vector<HarmonicTerm> kept;
  std::copy_if(harmonics_.begin(), harmonics_.end(), std::back_inserter(kept),
               [cutoff_hz](const HarmonicTerm& t) { return std::abs(t.freq_hz) < cutoff_hz; });
  return TimeDependentOperator(static_part_, std::move(kept));
}

TimeDependentOperator TimeDependentOperator::canonical(double freq_tol_hz, double op_tol) const {
  Operator stat = static_part_;
  std::vector<HarmonicTerm> folded;
  for (const auto& term : harmonics_) {
    Operator b = term.op * Complex(std::cos(term.phase_rad), std::sin(term.phase_rad));
    double f = term.freq_hz;
    if (f < 0.0) {
      b = b.adjoint().eval();
      f = -f;
    }
    if (f <= freq_tol_hz) {
      stat += b + b.adjoint();
    } else {
      folded.push_back({b, f, 0.0});
    }
  }
  std::sort(folded.begin(), folded.end(),
            [](const HarmonicTerm& a, const HarmonicTerm& b) { return a.freq_hz < b.freq_hz; });

  std::vector<HarmonicTerm> merged;
  for (const auto& term : folded) {
    if (!merged.empty() && term.freq_hz - merged.back().freq_hz <= freq_tol_hz) {
      merged.back().op += term.op;
    } else {
      merged.push_back(term);
    }
  }
  std::erase_if(merged, [op_tol](const HarmonicTerm& t) { return max_abs(t.op) <= op_tol; });
  return TimeDependentOperator(stat, std::move(merged));
}

double TimeDependentOperator::max_frequency() const {
  double f = Eigen::SelfAdjointEigenSolver<Operator>(static_part_, Eigen::EigenvaluesOnly)
                 .eigenvalues()
                 .cwiseAbs()
                 .maxCoeff();
  double fastest = 0.0;
  for (const auto& term : harmonics_) {
    fastest = std::max(fastest, std::abs(term.freq_hz));
    f += 2.0 * Eigen::JacobiSVD<Operator>(term.op).singularValues()(0);
  }
  return f + fastest;
}

TimeDependentOperator TimeDependentOperator::operator+(const TimeDependentOperator& other) const {
  std::vector<HarmonicTerm> terms = harmonics_;
  terms.insert(terms.end(), other.harmonics_.begin(), other.harmonics_.end());
  return TimeDependentOperator(static_part_ + other.static_part_, std::move(terms));
}

}  // namespace nvodmr
