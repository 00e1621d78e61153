#include "nvodmr/spin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nvodmr {

SpinOperators spin1_operators() {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  SpinOperators s;
  s.x << 0, r, 0,
         r, 0, r,
         0, r, 0;
  s.y << 0, -i * r, 0,
         i * r, 0, -i * r,
         0, i * r, 0;
  s.z << 1, 0, 0,
         0, 0, 0,
         0, 0, -1;
  return s;
}

namespace basis {

Ket plus_one() { return Ket::Unit(kPlusOne); }
Ket zero() { return Ket::Unit(kZero); }
Ket minus_one() { return Ket::Unit(kMinusOne); }
Ket bright() { return (plus_one() + minus_one()) / std::sqrt(2.0); }
Ket dark() { return (plus_one() - minus_one()) / std::sqrt(2.0); }

Operator bright_dark_zero() {
  Operator w;
  w.col(0) = bright();
  w.col(1) = zero();
  w.col(2) = dark();
  return w;
}

}  // namespace basis

Operator outer(const Ket& ket, const Ket& bra) { return ket * bra.adjoint(); }

Operator projector(const Ket& ket) { return outer(ket, ket); }

double max_abs(const Operator& op) { return op.cwiseAbs().maxCoeff(); }

bool is_hermitian(const Operator& op, double rel_tol) {
  const double scale = std::max(max_abs(op), std::numeric_limits<double>::min());
  return max_abs(op - op.adjoint()) <= rel_tol * scale;
}

bool all_finite(const Operator& op) {
  return std::all_of(op.data(), op.data() + op.size(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

}  // namespace nvodmr
