#pragma once

#include <utility>
#include <vector>

#include "nvodmr/params.hpp"

namespace nvodmr {

struct ResonanceLine {
  double freq_hz = 0.0;
  // (field sign, strain sign) pairs that landed on this line.
  std::vector<std::pair<int, int>> labels;
};

// Sorted ascending; lines closer than merge_tol_hz are merged.
struct ResonanceSet {
  std::vector<ResonanceLine> lines;

  std::vector<double> frequencies() const;
};

inline constexpr double kResonanceMergeToleranceHz = 1e-6;

// {D + s1 gamma_e b / 2 + s2 Ex : s1, s2 = +-1}
ResonanceSet predict_resonances(const NvParams& p, double b_ac_z_t,
                                double merge_tol_hz = kResonanceMergeToleranceHz);

struct StarkBand {
  double f_min_hz = 0.0;
  double f_max_hz = 0.0;
};

// Detectable AC band. Upper edge is the Stark splitting 2 R E; lower edge is the
// ODMR linewidth. R in Hz cm / V and E in V/cm: a breakdown field of 10 MV/cm
// (1e7 V/cm) with R = 17 Hz cm/V gives 340 MHz.
StarkBand stark_band(double stark_hz_cm_per_v, double e_field_v_per_cm, double linewidth_hz);

}  // namespace nvodmr
