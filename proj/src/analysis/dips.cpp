#include <algorithm>
#include <cmath>

#include "nvodmr/analysis.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> moving_average(const std::vector<double>& y, int half) {
  const int n = static_cast<int>(y.size());
  std::vector<double> out(y.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += y[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
  }
  return out;
}

}  // namespace

std::vector<Dip> detect_dips(const Spectrum& s, int max_dips) {
  if (s.points.size() < 5) throw InvalidArgument("detect_dips: need at least 5 points");
  if (max_dips < 1) throw InvalidArgument("detect_dips: max_dips must be positive");
  s.validate();

  const std::vector<double> f = s.frequencies();
  const std::vector<double> raw = s.signals();
  const double sigma = quantile(s.sigmas(), 0.5);
  const bool noisy = sigma > 0.0;
  const std::vector<double> y = noisy ? moving_average(raw, 2) : raw;
  const double baseline = quantile(y, 0.9);
  const double threshold = noisy ? 3.0 * sigma : 0.01 * std::abs(baseline);
  const double rise = noisy ? 2.0 * sigma / std::sqrt(5.0) : 0.0;

  struct Candidate {
    std::size_t index;
    Dip dip;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] < y[i - 1] && y[i] < y[i + 1])) continue;
    // Vertex of the parabola through the minimum and its neighbours.
    const double h = f[i + 1] - f[i];
    const double hl = f[i] - f[i - 1];
    const double d1 = (y[i + 1] - y[i]) / h;
    const double d0 = (y[i] - y[i - 1]) / hl;
    const double curvature = 2.0 * (d1 - d0) / (h + hl);
    double center = f[i];
    double value = y[i];
    if (curvature > 0.0) {
      const double slope_at_i = (d0 * h + d1 * hl) / (h + hl);
      const double shift = std::clamp(-slope_at_i / curvature, -hl, h);
      center = f[i] + shift;
      value = y[i] + slope_at_i * shift + 0.5 * curvature * shift * shift;
    }
    const double prominence = baseline - value;
    if (prominence >= threshold) candidates.push_back({i, {center, prominence}});
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.dip.prominence > b.dip.prominence;
  });
  std::vector<Candidate> accepted;
  for (const auto& c : candidates) {
    bool separated = true;
    for (const auto& a : accepted) {
      const auto lo = std::min(a.index, c.index);
      const auto hi = std::max(a.index, c.index);
      const double ridge = *std::max_element(y.begin() + static_cast<std::ptrdiff_t>(lo),
                                             y.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
      if (ridge - y[c.index] <= rise) {
        separated = false;
        break;
      }
    }
    if (separated) accepted.push_back(c);
  }
  if (accepted.empty()) throw NoDipsFound("no dip exceeds the detection threshold");

  std::vector<Dip> out;
  for (const auto& a : accepted) {
    if (static_cast<int>(out.size()) == max_dips) break;
    out.push_back(a.dip);
  }
  return out;
}

}  // namespace nvodmr
