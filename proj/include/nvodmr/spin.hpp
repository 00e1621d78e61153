#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nvodmr {

using Complex = std::complex<double>;

// 3x3 complex matrix in the {|+1>, |0>, |-1>} basis. Hamiltonians are stored in
// ordinary frequency units (Hz) with hbar = 1; phases are always 2*pi*f*t.
using Operator = Eigen::Matrix3cd;
using Ket = Eigen::Vector3cd;

inline constexpr int kPlusOne = 0;
inline constexpr int kZero = 1;
inline constexpr int kMinusOne = 2;

// CODATA electron gyromagnetic ratio divided by 2*pi.
inline constexpr double kGammaElectronHzPerTesla = 2.8024951e10;

struct SpinOperators {
  Operator x;
  Operator y;
  Operator z;
};

SpinOperators spin1_operators();

namespace basis {
Ket plus_one();
Ket zero();
Ket minus_one();
// (|1> + |-1>)/sqrt(2), energy D + E_x at zero field.
Ket bright();
// (|1> - |-1>)/sqrt(2), energy D - E_x at zero field.
Ket dark();
// Columns {|B>, |0>, |D>}: the basis the rotating-frame Hamiltonians are written in.
Operator bright_dark_zero();
}  // namespace basis

Operator outer(const Ket& ket, const Ket& bra);
Operator projector(const Ket& ket);

double max_abs(const Operator& op);
// max |H - H^dagger| <= rel_tol * max(max|H|, tiny)
bool is_hermitian(const Operator& op, double rel_tol = 1e-12);
bool all_finite(const Operator& op);

}  // namespace nvodmr
