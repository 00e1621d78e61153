#include "nvodmr/frame.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>

#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

constexpr Complex kI{0.0, 1.0};

double frequency_scale(const TimeDependentOperator& h, const Eigen::Vector3d& g) {
  double scale = g.cwiseAbs().maxCoeff();
  scale = std::max(scale, max_abs(h.static_part()));
  for (const auto& t : h.harmonics()) scale = std::max({scale, std::abs(t.freq_hz), max_abs(t.op)});
  return scale;
}

}  // namespace

RotatingFrame::RotatingFrame(const Operator& generator_hz) : generator_(generator_hz) {
  if (!all_finite(generator_) || !is_hermitian(generator_, 1e-12)) {
    throw InvalidArgument("RotatingFrame: generator must be finite and Hermitian");
  }
  generator_ = 0.5 * (generator_ + generator_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Operator> solver(generator_);
  eigenvectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
}

RotatingFrame RotatingFrame::microwave(double f_mw_hz) {
  const auto s = spin1_operators();
  return RotatingFrame(f_mw_hz * s.z * s.z);
}

RotatingFrame RotatingFrame::strain_split(double f_ac_hz) {
  const auto s = spin1_operators();
  return RotatingFrame(0.5 * f_ac_hz * (s.x * s.x - s.y * s.y));
}

Operator RotatingFrame::unitary(double t) const {
  Eigen::Vector3cd phases;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * std::numbers::pi * eigenvalues_(k) * t;
    phases(k) = Complex(std::cos(angle), std::sin(angle));
  }
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

TimeDependentOperator RotatingFrame::transform(const TimeDependentOperator& h) const {
  const Operator& v = eigenvectors_;
  std::vector<HarmonicTerm> components;

  auto split = [&](const Operator& a, double f) {
    const Operator in_eigenbasis = v.adjoint() * a * v;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const Complex c = in_eigenbasis(i, j);
        if (c == Complex(0.0)) continue;
        components.push_back(
            {c * v.col(i) * v.col(j).adjoint(), f + eigenvalues_(i) - eigenvalues_(j), 0.0});
      }
    }
  };

  // The static part S enters as S/2 + h.c.
  split(0.5 * h.static_part(), 0.0);
  for (const auto& term : h.harmonics()) {
    split(term.op * Complex(std::cos(term.phase_rad), std::sin(term.phase_rad)), term.freq_hz);
  }

  const double tol = std::max(1e-6, 1e-12 * frequency_scale(h, eigenvalues_));
  return TimeDependentOperator(-generator_, std::move(components)).canonical(tol, 0.0);
}

Operator RotatingFrame::transform_numerical(const TimeDependentOperator& h, double t,
                                            double step_s) const {
  auto u_dag = [this](double tau) -> Operator { return unitary(tau).adjoint(); };
  const Operator derivative = (-u_dag(t + 2.0 * step_s) + 8.0 * u_dag(t + step_s) -
                               8.0 * u_dag(t - step_s) + u_dag(t - 2.0 * step_s)) /
                              (12.0 * step_s);
  const Operator u = unitary(t);
  return u * h.at(t) * u.adjoint() - (kI / (2.0 * std::numbers::pi)) * u * derivative;
}

std::optional<StaticFrame> find_static_frame(const TimeDependentOperator& h,
                                             const Operator& basis) {
  const double scale = frequency_scale(h, Eigen::Vector3d::Zero());
  const double op_tol = 1e-12 * std::max(scale, 1.0);
  const double freq_tol = std::max(1e-6, 1e-12 * scale);

  // Edge (i, j, w): the frame must satisfy nu_i - nu_j = w.
  struct Edge {
    int i, j;
    double w;
  };
  std::vector<Edge> edges;
  const Operator s = basis.adjoint() * h.static_part() * basis;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(s(i, j)) > op_tol) edges.push_back({i, j, 0.0});
  for (const auto& term : h.harmonics()) {
    const Operator a = basis.adjoint() * term.op * basis;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (std::abs(a(i, j)) <= op_tol) continue;
        if (i == j) {
          if (std::abs(term.freq_hz) > freq_tol) return std::nullopt;
          continue;
        }
        edges.push_back({i, j, -term.freq_hz});
      }
    }
  }

  std::array<double, 3> nu{};
  std::array<bool, 3> seen{};
  for (int root = 0; root < 3; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    nu[root] = 0.0;
    std::queue<int> pending;
    pending.push(root);
    while (!pending.empty()) {
      const int k = pending.front();
      pending.pop();
      for (const auto& e : edges) {
        int other;
        double value;
        if (e.i == k) {
          other = e.j;
          value = nu[k] - e.w;
        } else if (e.j == k) {
          other = e.i;
          value = nu[k] + e.w;
        } else {
          continue;
        }
        if (!seen[other]) {
          seen[other] = true;
          nu[other] = value;
          pending.push(other);
        } else if (std::abs(nu[other] - value) > freq_tol) {
          return std::nullopt;
        }
      }
    }
  }

  const Eigen::Vector3cd diag(nu[0], nu[1], nu[2]);
  RotatingFrame frame(basis * diag.asDiagonal() * basis.adjoint());
  const TimeDependentOperator transformed = frame.transform(h).canonical(freq_tol, op_tol);
  if (!transformed.is_static()) return std::nullopt;
  return StaticFrame{frame, transformed.static_part()};
}

}  // namespace nvodmr
