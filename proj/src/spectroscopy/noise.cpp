#include <cmath>
#include <random>

#include "nvodmr/errors.hpp"
#include "nvodmr/spectroscopy.hpp"

namespace nvodmr {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a combination of both inputs
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double shot_sigma(double signal, double dwell_s, double scale) {
  if (!(dwell_s > 0.0)) throw InvalidArgument("shot noise: dwell must be positive");
  if (!(scale >= 0.0)) throw InvalidArgument("shot noise: scale must be non-negative");
  return scale * std::sqrt(std::max(signal, 0.0) / dwell_s);
}

double gaussian(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

}  // namespace

Spectrum add_shot_noise(const Spectrum& s, std::uint64_t seed, double scale) {
  Spectrum out = s;
  out.meta.seed = seed;
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    auto& pt = out.points[k];
    const double sigma = shot_sigma(pt.signal, s.meta.dwell_s, scale);
    pt.signal += sigma * gaussian(derive_seed(seed, k));
    pt.sigma = sigma;
  }
  return out;
}

std::vector<double> repeated_readings(double signal, double dwell_s, int n, std::uint64_t seed,
                                      double scale) {
  if (n < 1) throw InvalidArgument("repeated_readings: n must be positive");
  const double sigma = shot_sigma(signal, dwell_s, scale);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.push_back(signal + sigma * gaussian(derive_seed(seed, static_cast<std::uint64_t>(k))));
  }
  return out;
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) throw InvalidArgument("sample_std: need at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace nvodmr
