#pragma once

// Full-reference quality measures: MSE, PSNR and windowed SSIM / MSSIM.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "scsa/image.hpp"

namespace scsa {

struct MetricBundle {
  double mse = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();
  double mssim = 1.0;
  double intensity_scale = 1.0;
};

inline double mse(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse");
  return (a.pixels - b.pixels).array().square().mean();
}

// +inf when the images are identical.
inline double psnr_from_mse(double mse_value, double peak) {
  if (mse_value <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse_value);
}

inline double psnr(const Image& a, const Image& b, double peak = 1.0) { return psnr_from_mse(mse(a, b), peak); }

struct SsimOptions {
  int radius = 5;        // 11x11 window
  double sigma = 1.5;
  double dynamic_range = 1.0;
  double k1 = 0.01;
  double k2 = 0.03;
};

namespace detail {

// Gaussian smoothing along one axis; taps falling outside the image are dropped
// and the remaining weights renormalized.
inline Eigen::MatrixXd smooth_columns(const Eigen::MatrixXd& x, const std::vector<double>& taps, int radius) {
  const Eigen::Index rows = x.rows();
  Eigen::MatrixXd out(rows, x.cols());
  for (Eigen::Index i = 0; i < rows; ++i) {
    double wsum = 0.0;
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(x.cols());
    for (int t = -radius; t <= radius; ++t) {
      const Eigen::Index r = i + t;
      if (r < 0 || r >= rows) continue;
      const double w = taps[static_cast<std::size_t>(t + radius)];
      acc += w * x.row(r);
      wsum += w;
    }
    out.row(i) = acc / wsum;
  }
  return out;
}

inline Eigen::MatrixXd gaussian_filter(const Eigen::MatrixXd& x, const SsimOptions& opt) {
  std::vector<double> taps(static_cast<std::size_t>(2 * opt.radius + 1));
  for (int t = -opt.radius; t <= opt.radius; ++t)
    taps[static_cast<std::size_t>(t + opt.radius)] = std::exp(-0.5 * t * t / (opt.sigma * opt.sigma));
  const Eigen::MatrixXd vertical = smooth_columns(x, taps, opt.radius);
  return smooth_columns(vertical.transpose(), taps, opt.radius).transpose();
}

}  // namespace detail

/// Per-pixel SSIM with a Gaussian window centered on each pixel.
inline Eigen::MatrixXd ssim_map(const Image& a, const Image& b, const SsimOptions& opt = {}) {
  require_same_shape(a, b, "ssim_map");
  const double c1 = std::pow(opt.k1 * opt.dynamic_range, 2);
  const double c2 = std::pow(opt.k2 * opt.dynamic_range, 2);

  const Eigen::MatrixXd& x = a.pixels;
  const Eigen::MatrixXd& y = b.pixels;
  const Eigen::ArrayXXd mu_x = detail::gaussian_filter(x, opt).array();
  const Eigen::ArrayXXd mu_y = detail::gaussian_filter(y, opt).array();
  const Eigen::ArrayXXd var_x = detail::gaussian_filter(x.cwiseProduct(x), opt).array() - mu_x * mu_x;
  const Eigen::ArrayXXd var_y = detail::gaussian_filter(y.cwiseProduct(y), opt).array() - mu_y * mu_y;
  const Eigen::ArrayXXd cov = detail::gaussian_filter(x.cwiseProduct(y), opt).array() - mu_x * mu_y;

  const Eigen::ArrayXXd num = (2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2);
  const Eigen::ArrayXXd den = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2);
  return (num / den).matrix();
}

inline double mssim(const Image& a, const Image& b, const SsimOptions& opt = {}) { return ssim_map(a, b, opt).mean(); }

// PSNR uses `peak`; SSIM always runs on the normalized [0, 1] data.
inline MetricBundle compute_metrics(const Image& reference, const Image& test, double peak = 1.0) {
  MetricBundle m;
  m.mse = mse(reference, test);
  m.psnr_db = psnr_from_mse(m.mse, peak);
  m.mssim = mssim(reference, test);
  m.intensity_scale = peak;
  return m;
}

}  // namespace scsa
