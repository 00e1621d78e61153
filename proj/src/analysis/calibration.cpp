#include <algorithm>
#include <cmath>

#include "nvodmr/analysis.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

namespace {

std::size_t distinct_count(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace

QuadraticFit quadratic_response_fit(const std::vector<std::pair<double, double>>& points) {
  std::vector<double> b2;
  for (const auto& [b, s] : points) {
    if (!std::isfinite(b) || !std::isfinite(s)) {
      throw InvalidArgument("quadratic_response_fit: non-finite input");
    }
    b2.push_back(b * b);
  }
  if (distinct_count(b2) < 3) {
    throw RankDeficient("quadratic_response_fit: need at least 3 distinct amplitudes");
  }
  const auto n = static_cast<Eigen::Index>(points.size());
  const double scale = *std::max_element(b2.begin(), b2.end());
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = b2[static_cast<std::size_t>(i)] / scale;
    x(i, 1) = 1.0;
    y(i) = points[static_cast<std::size_t>(i)].second;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 2) throw RankDeficient("quadratic_response_fit: design matrix is rank deficient");
  const Eigen::Vector2d coef = qr.solve(y);

  QuadraticFit out;
  out.a = coef(0) / scale;
  out.s0 = coef(1);
  out.residual_norm = (y - x * coef).norm();
  const double dof = static_cast<double>(n - 2);
  out.reduced_residual_norm = dof > 0.0 ? out.residual_norm / std::sqrt(dof) : 0.0;
  const double s2 = dof > 0.0 ? out.residual_norm * out.residual_norm / dof : 0.0;
  const Eigen::Matrix2d inv = (x.transpose() * x).inverse();
  const Eigen::Matrix2d unscale = Eigen::Vector2d(1.0 / scale, 1.0).asDiagonal();
  out.covariance = s2 * unscale * inv * unscale;
  return out;
}

NoiseFit noise_vs_time_fit(const std::vector<std::pair<double, double>>& samples) {
  std::vector<double> lx, ly, ts;
  for (const auto& [t, ds] : samples) {
    if (!(t > 0.0) || !(ds > 0.0) || !std::isfinite(t) || !std::isfinite(ds)) {
      throw InvalidArgument("noise_vs_time_fit: T and delta S must be positive and finite");
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(ds));
    ts.push_back(t);
  }
  if (distinct_count(ts) < 3) throw InvalidArgument("noise_vs_time_fit: need at least 3 distinct T");
  const double n = static_cast<double>(lx.size());

  double log_c = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) log_c += (ly[i] + 0.5 * lx[i]) / n;
  double mean_y = 0.0, mean_x = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mean_y += ly[i] / n;
    mean_x += lx[i] / n;
  }
  double ss_res = 0.0, ss_tot = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (log_c - 0.5 * lx[i]);
    ss_res += r * r;
    ss_tot += (ly[i] - mean_y) * (ly[i] - mean_y);
    sxx += (lx[i] - mean_x) * (lx[i] - mean_x);
    sxy += (lx[i] - mean_x) * (ly[i] - mean_y);
  }

  NoiseFit out;
  out.c = std::exp(log_c);
  out.log_c_sigma = std::sqrt(ss_res / (n * (n - 1.0)));
  const double tiny = 1e-300;
  if (ss_tot > tiny) {
    out.r_squared = 1.0 - ss_res / ss_tot;
  } else {
    out.r_squared = ss_res <= tiny ? 1.0 : 0.0;
  }
  out.log_slope = sxy / sxx;
  double free_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - mean_y - out.log_slope * (lx[i] - mean_x);
    free_res += r * r;
  }
  out.log_slope_sigma = n > 2.0 ? std::sqrt(free_res / (n - 2.0) / sxx) : 0.0;
  out.flagged = out.r_squared < 0.5;
  return out;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("log_log_slope: need two equally long series of length >= 2");
  }
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log_log_slope: inputs must be positive");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("log_log_slope: x values must not all be equal");
  return sxy / sxx;
}

double estimate_sensitivity(double slope_per_tesla, double c) {
  if (!(slope_per_tesla > 0.0) || !(c > 0.0) || !std::isfinite(slope_per_tesla) ||
      !std::isfinite(c)) {
    throw InvalidArgument("estimate_sensitivity: slope and c must be positive and finite");
  }
  return c / slope_per_tesla;
}

}  // namespace nvodmr
