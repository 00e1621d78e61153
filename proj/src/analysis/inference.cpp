#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nvodmr/analysis.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

AcEstimate infer_b_ac_from_splitting(const FitResult& fit, const NvParams& p) {
  p.validate();
  if (fit.dips.size() != 4) {
    throw UnpairableDips("need exactly four dips to pair, got " + std::to_string(fit.dips.size()));
  }
  if (!fit.converged) throw UnpairableDips("fit did not converge");
  if (fit.covariance.rows() != 13) throw InvalidArgument("infer_b_ac: covariance has wrong size");

  // fit.dips is sorted by center; still sort indices to be safe with hand-built input.
  std::array<std::size_t, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&fit](std::size_t a, std::size_t b) {
    return fit.dips[a].center_hz < fit.dips[b].center_hz;
  });
  Eigen::Vector4d c;
  Eigen::Matrix4d cov;
  for (int i = 0; i < 4; ++i) {
    c(i) = fit.dips[idx[static_cast<std::size_t>(i)]].center_hz;
    for (int j = 0; j < 4; ++j) {
      cov(i, j) = fit.center_covariance(idx[static_cast<std::size_t>(i)],
                                        idx[static_cast<std::size_t>(j)]);
    }
  }

  const Eigen::Vector4d mismatch_grad(0.5, -0.5, -0.5, 0.5);
  const double mismatch = mismatch_grad.dot(c);
  const double mismatch_sigma = std::sqrt(std::max(mismatch_grad.dot(cov * mismatch_grad), 0.0));
  double mean_width = 0.0;
  for (const auto& d : fit.dips) mean_width += d.width_hz / 4.0;
  const double allowed = std::max(3.0 * mismatch_sigma, 0.05 * mean_width);
  if (std::abs(mismatch) > allowed) {
    std::ostringstream msg;
    msg << "pair midpoints differ by " << mismatch << " Hz (allowed " << allowed << " Hz)";
    throw UnpairableDips(msg.str());
  }

  const Eigen::Vector4d grad = Eigen::Vector4d(-1.0, 1.0, -1.0, 1.0) / (2.0 * p.gamma_e_hz_per_t);
  AcEstimate out;
  out.b_ac_t = grad.dot(c);
  out.sigma_t = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
  out.splitting_hz = out.b_ac_t * p.gamma_e_hz_per_t;
  out.midpoint_mismatch_hz = mismatch;
  return out;
}

}  // namespace nvodmr
