#pragma once

#include <functional>
#include <vector>

#include "nvodmr/time_dependent_operator.hpp"

namespace nvodmr {

// Hermitian, unit-trace, positive semidefinite 3x3 state. Instances are only
// created through the factories, which enforce the invariants.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  struct Diagnostics {
    double hermiticity_error = 0.0;  // max |rho - rho^dagger|
    double trace_error = 0.0;        // |tr rho - 1|
    double min_eigenvalue = 0.0;
  };

  // |0><0|
  DensityMatrix();

  static DensityMatrix pure(const Ket& ket);
  static DensityMatrix maximally_mixed();
  // Throws NumericalError when any invariant is violated by more than `tol`.
  static DensityMatrix from_operator(const Operator& m, double tol = kTolerance);
  static Diagnostics diagnose(const Operator& m);

  const Operator& matrix() const { return m_; }
  double population(const Ket& ket) const;
  // (1/2) || rho - sigma ||_1
  double trace_distance(const DensityMatrix& other) const;

 private:
  explicit DensityMatrix(const Operator& m) : m_(m) {}
  Operator m_;
};

// Effective CW-ODMR photophysics on the ground-state triplet.
// Rates are in 1/s; the Hamiltonian part of the generator carries the 2 pi.
struct RelaxationModel {
  double gamma_pump_hz = 1e6;  // optical repolarization |+-1> -> |0>
  double gamma_1_hz = 1e2;     // longitudinal relaxation, both directions
  double gamma_2_hz = 4e5;     // pure dephasing with jump operator Sz
  double contrast = 0.03;      // fractional PL drop of |+-1> relative to |0>
  double baseline = 1e6;       // PL rate when fully polarized in |0>

  void validate() const;
};

// Lab keeps the Sz dephasing jump. BrightDarkSecular is the same model seen from the
// frame exp(i pi f_ac t (Sx^2 - Sy^2)): the pumping and relaxation sums are invariant
// and Sz = |B><D| + |D><B| is replaced by its secular part D[|B><D|] + D[|D><B|].
enum class DissipatorFrame { Lab, BrightDarkSecular };

struct JumpOperator {
  Operator op;
  double rate_hz;
};

std::vector<JumpOperator> jump_operators(const RelaxationModel& r, DissipatorFrame frame);

// Acts on column-stacked vec(rho): index = row + 3 * column.
using Superoperator = Eigen::Matrix<Complex, 9, 9>;
using VectorizedOperator = Eigen::Matrix<Complex, 9, 1>;

VectorizedOperator vectorize(const Operator& m);
Operator unvectorize(const VectorizedOperator& v);

// rho -> -i 2 pi [H, rho]
Superoperator hamiltonian_superoperator(const Operator& h);
Superoperator dissipator(const std::vector<JumpOperator>& jumps);
Superoperator liouvillian(const Operator& h, const RelaxationModel& r,
                          DissipatorFrame frame = DissipatorFrame::Lab);

struct OpenSystem {
  TimeDependentOperator hamiltonian;
  RelaxationModel relaxation;
  DissipatorFrame frame = DissipatorFrame::Lab;
};

struct SteadyState {
  DensityMatrix rho;
  bool degenerate = false;
  int null_dimension = 1;
};

// Solves L rho = 0 with tr rho = 1 by replacing one row of L with the trace
// functional. A null space of dimension > 1 yields the trace-one element closest
// to the maximally mixed state and sets `degenerate`.
SteadyState steady_state(const Superoperator& l);

using Observer = std::function<void(double t, const Operator& rho)>;

struct PropagateOptions {
  double t_start_s = 0.0;
  // Called at t_start and after every step with the raw integrator state.
  Observer observer;
};

// Largest step accepted by propagate: 1 / (20 f_max).
double max_step(const TimeDependentOperator& h);

// Classical fourth-order Runge-Kutta over [t_start, t_start + t_final] with a
// fixed step no larger than dt (the interval is split evenly).
DensityMatrix propagate(const OpenSystem& system, const DensityMatrix& rho0, double t_final_s,
                        double dt_s, const PropagateOptions& options = {});
DensityMatrix propagate(const TimeDependentOperator& h, const RelaxationModel& r,
                        const DensityMatrix& rho0, double t_final_s, double dt_s);

struct PeriodicSteadyState {
  DensityMatrix mean;        // time average over one period
  DensityMatrix at_start;    // state at t = 0 (mod period)
  bool degenerate = false;
};

// Periodic steady state of a generator with period `period_s`: builds the one-period
// propagator map with RK4 (at least `min_steps` steps, more if max_step demands),
// solves for its trace-one fixed point and averages the state over the period.
PeriodicSteadyState periodic_steady_state(const OpenSystem& system, double period_s,
                                          int min_steps = 64);

// baseline * (1 - contrast * (1 - rho_00))
double pl_signal(const DensityMatrix& rho, const RelaxationModel& r);

}  // namespace nvodmr
