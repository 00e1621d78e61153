#pragma once

#include "nvodmr/params.hpp"
#include "nvodmr/time_dependent_operator.hpp"

namespace nvodmr {

// D Sz^2 + Ex (Sx^2 - Sy^2) + Ey (Sx Sy - Sy Sx), as written for the NV ground state.
// With Ey = 0 the eigenvalues are {0, D - Ex, D + Ex} with eigenvectors |0>, |D>, |B>.
Operator nv_hamiltonian(const NvParams& p);

// Instantaneous lab-frame drive sum_j gamma_e (B_mw^j cos(2 pi f_mw t) + B_ac^j cos(2 pi f_ac t)) S_j.
Operator drive_hamiltonian(const NvParams& p, const DriveParams& d, double t);

// nv_hamiltonian + drive as a static part plus two harmonic terms (f_mw, f_ac).
TimeDependentOperator lab_hamiltonian(const NvParams& p, const DriveParams& d);

// First rotating frame U = exp(i 2 pi f_mw t Sz^2) followed by the RWA:
//   (D+Ex-f_mw)|B><B| + (D-Ex-f_mw)|D><D| + (g_x/2)(|B><0| + h.c.)
//   - i (g_y/2)(|D><0| - |0><D|) + g_z^ac (|B><D| + |D><B|) cos(2 pi f_ac t)
// with g = gamma_e B. Ey is ignored.
TimeDependentOperator rwa_first(const NvParams& p, const DriveParams& d);

// Second frame U' = exp(i pi f_ac t (Sx^2 - Sy^2)) applied to rwa_first, then RWA again.
// The microwave couplings keep residual phases exp(+-i pi f_ac t); the AC coupling
// becomes static with half its amplitude.
TimeDependentOperator rwa_second(const NvParams& p, const DriveParams& d);

// Interaction picture of rwa_second at f_ac = 2 Ex, in the {|+1>,|0>,|-1>} basis.
// Exponent frequencies are D - f_mw +- gamma_e B_ac^z / 2 +- Ex. Throws RegimeError
// when |f_ac - 2 Ex| > rel_tolerance * 2 Ex.
TimeDependentOperator interaction_hamiltonian(const NvParams& p, const DriveParams& d,
                                              double rel_tolerance = 0.1);

}  // namespace nvodmr
