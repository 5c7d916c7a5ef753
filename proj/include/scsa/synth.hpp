#pragma once

// Synthetic test images.

#include <Eigen/Dense>

#include <cmath>

#include "scsa/error.hpp"
#include "scsa/image.hpp"

namespace scsa {

struct GridSpec {
  double x_min = -1.0;
  double x_max = 3.0;
  double y_min = -1.0;
  double y_max = 3.0;
  double ts = 0.02;

  Eigen::Index nx() const { return static_cast<Eigen::Index>(std::llround((x_max - x_min) / ts)) + 1; }
  Eigen::Index ny() const { return static_cast<Eigen::Index>(std::llround((y_max - y_min) / ts)) + 1; }

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) throw DataError("GridSpec: empty interval");
    if (!(ts > 0.0) || !std::isfinite(ts)) throw DataError("GridSpec: step must be positive");
    if (nx() < 2 || ny() < 2) throw DataError("GridSpec: fewer than 2 samples per axis");
  }
};

/// Square grid over [-1, 3]^2 with n samples per axis (endpoints included).
inline GridSpec example1_grid(Eigen::Index n) {
  if (n < 2) throw DataError("example1_grid: need at least 2 samples");
  GridSpec g;
  g.ts = (g.x_max - g.x_min) / static_cast<double>(n - 1);
  return g;
}

inline double example1_value(double x, double y) {
  return std::sin(0.5 * x * x + 0.25 * y * y + 3.0) * std::cos(2.0 * x + 1.0 - std::exp(y)) + 1.0;
}

// Rows follow x, columns follow y. Native range [0, 2] is halved into [0, 1];
// value_scale = 2 restores it.
inline Image example1_image(const GridSpec& grid = {}) {
  grid.validate();
  Image img;
  img.pixels.resize(grid.nx(), grid.ny());
  for (Eigen::Index i = 0; i < img.rows(); ++i) {
    const double x = grid.x_min + static_cast<double>(i) * grid.ts;
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      const double y = grid.y_min + static_cast<double>(j) * grid.ts;
      img.pixels(i, j) = 0.5 * example1_value(x, y);
    }
  }
  img.delta = grid.ts;
  img.intensity_scale = 1.0;
  img.value_scale = 2.0;
  return img;
}

// The block containing pixel (0, 0) takes `low`.
inline Image checkerboard(Eigen::Index n, Eigen::Index cell, double low, double high) {
  if (n < 2) throw DataError("checkerboard: n must be >= 2");
  if (cell < 1 || cell > n) throw DataError("checkerboard: cell must lie in [1, n]");
  if (!(0.0 <= low && low < high && high <= 1.0)) throw DataError("checkerboard: need 0 <= low < high <= 1");
  Image img;
  img.pixels.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) img.pixels(i, j) = ((i / cell + j / cell) % 2 == 0) ? low : high;
  img.intensity_scale = 1.0;
  return img;
}

}  // namespace scsa
