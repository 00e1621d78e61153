#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nvodmr/analysis.hpp"
#include "nvodmr/errors.hpp"

namespace nvodmr {

double FitResult::evaluate(double f_hz) const {
  double m = baseline;
  for (const auto& d : dips) {
    const double u = f_hz - d.center_hz;
    const double w2 = d.width_hz * d.width_hz;
    m -= d.depth * w2 / (u * u + w2);
  }
  return m;
}

double FitResult::center_sigma(std::size_t k) const {
  return std::sqrt(std::max(center_covariance(k, k), 0.0));
}

double FitResult::center_covariance(std::size_t i, std::size_t j) const {
  const auto a = static_cast<Eigen::Index>(1 + 3 * i);
  const auto b = static_cast<Eigen::Index>(1 + 3 * j);
  if (a >= covariance.rows() || b >= covariance.cols()) {
    throw InvalidArgument("FitResult: dip index out of range");
  }
  return covariance(a, b);
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Frequencies and signals are mapped to O(1) numbers before fitting.
struct Problem {
  Vec x, y, w;  // scaled abscissa, scaled data, per-point weights (1/sigma)
  double f0 = 0.0, fs = 1.0, ys = 1.0;
  int n_dips = 0;

  Vec model(const Vec& p, Mat* jac) const {
    const Eigen::Index n = x.size();
    Vec m = Vec::Constant(n, p(0));
    if (jac) {
      jac->resize(n, p.size());
      jac->col(0).setOnes();
    }
    for (int k = 0; k < n_dips; ++k) {
      const double c = p(1 + 3 * k), wd = p(2 + 3 * k), d = p(3 + 3 * k);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double u = x(i) - c;
        const double q = u * u + wd * wd;
        const double l = wd * wd / q;
        m(i) -= d * l;
        if (jac) {
          (*jac)(i, 1 + 3 * k) = -d * 2.0 * u * wd * wd / (q * q);
          (*jac)(i, 2 + 3 * k) = -d * 2.0 * wd * u * u / (q * q);
          (*jac)(i, 3 + 3 * k) = -l;
        }
      }
    }
    return m;
  }

  double cost(const Vec& p) const { return (w.asDiagonal() * (y - model(p, nullptr))).squaredNorm(); }

  Vec scales() const {
    Vec s(1 + 3 * n_dips);
    s(0) = ys;
    for (int k = 0; k < n_dips; ++k) {
      s(1 + 3 * k) = fs;
      s(2 + 3 * k) = fs;
      s(3 + 3 * k) = ys;
    }
    return s;
  }
};

struct Outcome {
  Vec p;
  double cost = 0.0;
  bool converged = false;
  int iterations = 0;
};

Outcome levenberg_marquardt(const Problem& pr, Vec p, const FitOptions& options) {
  double lambda = 1e-3;
  double cost = pr.cost(p);
  Outcome out{p, cost, false, 0};
  double last_accepted_step = std::numeric_limits<double>::infinity();
  Mat jac;
  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    const Vec m = pr.model(p, &jac);
    const Mat jw = pr.w.asDiagonal() * jac;
    const Vec rw = pr.w.asDiagonal() * (pr.y - m);
    const Mat a = jw.transpose() * jw;
    const Vec g = jw.transpose() * rw;
    Vec diag = a.diagonal().cwiseMax(1e-12 * std::max(a.diagonal().maxCoeff(), 1e-300));

    Mat damped = a;
    damped.diagonal() += lambda * diag;
    const Vec step = damped.ldlt().solve(g);
    if (!step.allFinite()) throw NumericalError("fit_lorentzians: non-finite step");
    const Vec trial = p + step;
    const double trial_cost = pr.cost(trial);
    const double rel = step.norm() / std::max(p.norm(), 1e-12);
    if (std::isfinite(trial_cost) && trial_cost <= cost) {
      p = trial;
      cost = trial_cost;
      lambda = std::max(lambda / 10.0, 1e-12);
      last_accepted_step = rel;
      if (rel < options.step_tolerance) {
        out = {p, cost, true, it};
        return out;
      }
    } else {
      lambda *= 10.0;
      if (lambda > 1e16) {
        // No descent direction left at working precision.
        out = {p, cost, last_accepted_step < 1e-5, it};
        return out;
      }
    }
  }
  out.p = p;
  out.cost = cost;
  return out;
}

bool better_fit(const FitResult& a, const FitResult& b) {
  return (a.converged && !b.converged) ||
         (a.converged == b.converged && a.chi_square < b.chi_square);
}

FitResult split_dip(const FitResult& f, std::size_t k, double min_width) {
  FitResult next = f;
  FittedDip& d = next.dips[k];
  d.width_hz = std::max(0.5 * d.width_hz, min_width);
  FittedDip right = d;
  d.center_hz -= d.width_hz;
  right.center_hz += d.width_hz;
  next.dips.push_back(right);
  return next;
}

}  // namespace

FitResult fit_lorentzians(const Spectrum& s, int n_dips, const std::optional<FitResult>& init,
                          const FitOptions& options) {
  if (n_dips < 1 || n_dips > 4) throw InvalidArgument("fit_lorentzians: n_dips must be in 1..4");
  s.validate();
  const auto n = static_cast<Eigen::Index>(s.points.size());
  if (n < 3 * n_dips + 1) {
    throw InvalidArgument("fit_lorentzians: need at least 3 n_dips + 1 points");
  }

  Problem pr;
  pr.n_dips = n_dips;
  const double f_lo = s.points.front().f_mw_hz, f_hi = s.points.back().f_mw_hz;
  pr.f0 = 0.5 * (f_lo + f_hi);
  pr.fs = 0.5 * (f_hi - f_lo);
  double max_signal = 0.0;
  for (const auto& pt : s.points) max_signal = std::max(max_signal, std::abs(pt.signal));
  pr.ys = max_signal > 0.0 ? max_signal : 1.0;
  pr.x.resize(n);
  pr.y.resize(n);
  pr.w.resize(n);
  const bool weighted = std::all_of(s.points.begin(), s.points.end(),
                                    [](const SpectrumPoint& pt) { return pt.sigma > 0.0; });
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = s.points[static_cast<std::size_t>(i)];
    pr.x(i) = (pt.f_mw_hz - pr.f0) / pr.fs;
    pr.y(i) = pt.signal / pr.ys;
    pr.w(i) = weighted ? pr.ys / pt.sigma : 1.0;
  }

  // Initial guess in physical units.
  FitResult start;
  if (init) {
    start = *init;
    if (static_cast<int>(start.dips.size()) != n_dips) {
      throw InvalidArgument("fit_lorentzians: initial guess has the wrong number of dips");
    }
  } else {
    const std::vector<Dip> found = detect_dips(s, n_dips);
    const double width = 2.0 * s.grid_step();
    std::vector<double> sig = s.signals();
    std::sort(sig.begin(), sig.end());
    start.baseline = sig[static_cast<std::size_t>(0.9 * static_cast<double>(sig.size() - 1))];
    for (const auto& d : found) start.dips.push_back({d.center_hz, width, d.prominence});
    // Too few separated minima (overlapping lines): fit what was found, then add a
    // dip at the deepest point of the smoothed residual and refit, until the count fits.
    FitResult first;
    if (static_cast<int>(start.dips.size()) < n_dips) {
      first = fit_lorentzians(s, static_cast<int>(start.dips.size()), start, options);
      while (static_cast<int>(first.dips.size()) < n_dips) {
        const auto m = s.points.size();
        std::vector<double> resid(m);
        for (std::size_t i = 0; i < m; ++i) {
          resid[i] = s.points[i].signal - first.evaluate(s.points[i].f_mw_hz);
        }
        std::size_t best_i = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
          const std::size_t lo = i >= 2 ? i - 2 : 0, hi = std::min(m - 1, i + 2);
          double avg = 0.0;
          for (std::size_t j = lo; j <= hi; ++j) avg += resid[j];
          avg /= static_cast<double>(hi - lo + 1);
          if (avg < best_v) {
            best_v = avg;
            best_i = i;
          }
        }
        double mean_width = 0.0;
        for (const auto& d : first.dips) mean_width += d.width_hz;
        mean_width = first.dips.empty() ? width : mean_width / first.dips.size();

        // Candidate starts: each existing dip split in two, or a new dip at the
        // residual minimum. Keep the best converged refit.
        std::vector<FitResult> starts;
        for (std::size_t k = 0; k < first.dips.size(); ++k) starts.push_back(split_dip(first, k, width));
        FitResult inserted = first;
        inserted.dips.push_back({s.points[best_i].f_mw_hz, std::max(mean_width, width),
                                 std::max(-best_v, 1e-3 * std::abs(start.baseline))});
        starts.push_back(inserted);

        std::optional<FitResult> chosen;
        for (const auto& st : starts) {
          FitResult r;
          try {
            r = fit_lorentzians(s, static_cast<int>(st.dips.size()), st, options);
          } catch (const NumericalError&) {
            continue;
          }
          if (!chosen || better_fit(r, *chosen)) chosen = r;
        }
        if (!chosen) throw NumericalError("fit_lorentzians: every start failed");
        first = *chosen;
      }
    } else {
      first = fit_lorentzians(s, n_dips, start, options);
    }
    if (n_dips < 2) return first;

    // A noise minimum can take the place of a line hidden in a merged pair. For every
    // dip clearly wider than the narrowest, try splitting it while dropping one of the
    // others; the lowest chi^2 wins.
    double narrowest = std::numeric_limits<double>::infinity();
    for (const auto& d : first.dips) narrowest = std::min(narrowest, d.width_hz);
    FitResult best_fit = first;
    for (std::size_t w = 0; w < first.dips.size(); ++w) {
      if (!(first.dips[w].width_hz > 1.5 * narrowest)) continue;
      for (std::size_t j = 0; j < first.dips.size(); ++j) {
        if (j == w) continue;
        FitResult alt = split_dip(first, w, width);
        alt.dips[j] = alt.dips.back();
        alt.dips.pop_back();
        try {
          const FitResult r = fit_lorentzians(s, n_dips, alt, options);
          if (better_fit(r, best_fit)) best_fit = r;
        } catch (const NumericalError&) {
        }
      }
    }
    return best_fit;
  }

  Vec p0(1 + 3 * n_dips);
  p0(0) = start.baseline / pr.ys;
  for (int k = 0; k < n_dips; ++k) {
    const auto& d = start.dips[static_cast<std::size_t>(k)];
    p0(1 + 3 * k) = (d.center_hz - pr.f0) / pr.fs;
    p0(2 + 3 * k) = std::abs(d.width_hz) / pr.fs;
    p0(3 + 3 * k) = d.depth / pr.ys;
  }

  Outcome best = levenberg_marquardt(pr, p0, options);
  if (options.restarts > 0) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int r = 0; r < options.restarts; ++r) {
      Vec p = p0;
      for (int k = 0; k < n_dips; ++k) {
        p(1 + 3 * k) += unit(rng) * p0(2 + 3 * k);
        p(2 + 3 * k) *= std::exp2(unit(rng));
      }
      const Outcome o = levenberg_marquardt(pr, p, options);
      if (o.cost < best.cost) best = o;
    }
  }

  // Gauss-Newton covariance at the optimum.
  Mat jac;
  pr.model(best.p, &jac);
  const Mat jw = pr.w.asDiagonal() * jac;
  const Mat a = jw.transpose() * jw;
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 1e-14 * sv(0))) {
    throw RankDeficient("fit_lorentzians: degenerate Jacobian at the optimum");
  }
  Mat cov = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
  const int dof = static_cast<int>(n) - static_cast<int>(best.p.size());
  if (!weighted) cov *= dof > 0 ? best.cost / dof : 0.0;
  const Vec sc = pr.scales();
  cov = sc.asDiagonal() * cov * sc.asDiagonal();
  cov = 0.5 * (cov + cov.transpose()).eval();

  FitResult out;
  out.baseline = best.p(0) * pr.ys;
  std::vector<int> order(static_cast<std::size_t>(n_dips));
  for (int k = 0; k < n_dips; ++k) {
    order[static_cast<std::size_t>(k)] = k;
    out.dips.push_back({pr.f0 + best.p(1 + 3 * k) * pr.fs, std::abs(best.p(2 + 3 * k)) * pr.fs,
                        best.p(3 + 3 * k) * pr.ys});
  }
  std::sort(order.begin(), order.end(), [&out](int a, int b) {
    return out.dips[static_cast<std::size_t>(a)].center_hz <
           out.dips[static_cast<std::size_t>(b)].center_hz;
  });
  std::vector<FittedDip> sorted;
  Eigen::VectorXi perm(1 + 3 * n_dips);
  perm(0) = 0;
  for (int k = 0; k < n_dips; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    sorted.push_back(out.dips[static_cast<std::size_t>(src)]);
    for (int j = 0; j < 3; ++j) perm(1 + 3 * k + j) = 1 + 3 * src + j;
  }
  out.dips = std::move(sorted);
  out.covariance.resize(cov.rows(), cov.cols());
  for (Eigen::Index i = 0; i < cov.rows(); ++i)
    for (Eigen::Index j = 0; j < cov.cols(); ++j) out.covariance(i, j) = cov(perm(i), perm(j));

  const Vec resid = pr.y - pr.model(best.p, nullptr);
  out.residual_norm = resid.norm() * pr.ys;
  out.chi_square = weighted ? best.cost : best.cost * pr.ys * pr.ys;
  out.degrees_of_freedom = dof;
  out.weighted = weighted;
  out.iterations = best.iterations;
  out.converged = best.converged;
  for (const auto& d : out.dips) {
    if (d.center_hz < f_lo || d.center_hz > f_hi || !(d.width_hz > 0.0)) out.converged = false;
  }
  return out;
}

}  // namespace nvodmr
