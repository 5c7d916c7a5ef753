#pragma once

// Seeded additive white Gaussian noise for denoising experiments.
//
// Generator: std::mt19937_64 (sequence fixed by the C++ standard), uniforms
// from the top 53 bits mapped to (0, 1], normal deviates by the Box-Muller
// transform, both outputs of each pair used, pixels filled in row-major order.
// Output is reproducible for a given seed on a given math library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string_view>

#include "scsa/error.hpp"
#include "scsa/image.hpp"

namespace scsa {

inline constexpr std::string_view kPrngName = "mt19937_64+box-muller";
inline constexpr int kPrngVersion = 1;

struct NoiseSpec {
  double sigma_255 = 0.0;  // standard deviation on the 0..255 scale
  std::uint64_t seed = 0;
  bool clip = true;
};

class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

private:
  double uniform() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Image add_noise(const Image& img, const NoiseSpec& spec) {
  if (!(spec.sigma_255 >= 0.0) || !std::isfinite(spec.sigma_255))
    throw DataError("add_noise: sigma must be finite and >= 0");
  if (spec.sigma_255 == 0.0) return img;

  const double sigma = spec.sigma_255 / 255.0;
  GaussianSource source(spec.seed);
  Image out = img;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      double v = out.pixels(i, j) + sigma * source.next();
      if (spec.clip) v = std::clamp(v, 0.0, 1.0);
      out.pixels(i, j) = v;
    }
  return out;
}

/// 10 log10(sum clean^2 / sum (noisy - clean)^2); +inf for zero noise.
inline double snr_db(const Image& clean, const Image& noisy) {
  require_same_shape(clean, noisy, "snr_db");
  const double noise = (noisy.pixels - clean.pixels).squaredNorm();
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(clean.pixels.squaredNorm() / noise);
}

/// Same ratio with the clean image's mean removed from the signal power,
/// i.e. 10 log10(var(clean) / mean((noisy - clean)^2)).
inline double snr_variance_db(const Image& clean, const Image& noisy) {
  require_same_shape(clean, noisy, "snr_variance_db");
  const double noise = (noisy.pixels - clean.pixels).squaredNorm();
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  const double mean = clean.pixels.mean();
  return 10.0 * std::log10((clean.pixels.array() - mean).square().sum() / noise);
}

}  // namespace scsa
