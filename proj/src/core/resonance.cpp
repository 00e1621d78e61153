#include "nvodmr/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "nvodmr/errors.hpp"

namespace nvodmr {

std::vector<double> ResonanceSet::frequencies() const {
  std::vector<double> out;
  out.reserve(lines.size());
  for (const auto& line : lines) out.push_back(line.freq_hz);
  return out;
}

ResonanceSet predict_resonances(const NvParams& p, double b_ac_z_t, double merge_tol_hz) {
  p.validate();
  if (!std::isfinite(b_ac_z_t)) throw InvalidArgument("predict_resonances: non-finite field");
  const double half_split = 0.5 * p.gamma_e_hz_per_t * b_ac_z_t;

  std::vector<ResonanceLine> raw;
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      raw.push_back({p.d_hz + s1 * half_split + s2 * p.ex_hz, {{s1, s2}}});
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const ResonanceLine& a, const ResonanceLine& b) { return a.freq_hz < b.freq_hz; });

  ResonanceSet set;
  for (auto& line : raw) {
    if (!set.lines.empty() && line.freq_hz - set.lines.back().freq_hz < merge_tol_hz) {
      auto& back = set.lines.back();
      back.labels.insert(back.labels.end(), line.labels.begin(), line.labels.end());
    } else {
      set.lines.push_back(std::move(line));
    }
  }
  return set;
}

StarkBand stark_band(double stark_hz_cm_per_v, double e_field_v_per_cm, double linewidth_hz) {
  if (!std::isfinite(stark_hz_cm_per_v) || !std::isfinite(e_field_v_per_cm) ||
      !std::isfinite(linewidth_hz) || stark_hz_cm_per_v <= 0.0 || e_field_v_per_cm < 0.0 ||
      linewidth_hz <= 0.0) {
    throw InvalidArgument("stark_band: need R > 0, E >= 0, linewidth > 0");
  }
  return {linewidth_hz, 2.0 * stark_hz_cm_per_v * e_field_v_per_cm};
}

}  // namespace nvodmr
