#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "scsa/error.hpp"

namespace scsa {

// Grayscale image with intensities normalized to [0, 1].
//
// `intensity_scale` is the dynamic range of the source data (255 for 8-bit
// files, 1 for synthetic data) and is only used for reporting.
// `value_scale` maps normalized values back to the original units, e.g. 2 for
// the analytic test surface whose native range is [0, 2].
struct Image {
  Eigen::MatrixXd pixels;
  double delta = 1.0;
  double intensity_scale = 1.0;
  double value_scale = 1.0;

  Eigen::Index rows() const { return pixels.rows(); }
  Eigen::Index cols() const { return pixels.cols(); }

  Image transposed() const { return Image{pixels.transpose(), delta, intensity_scale, value_scale}; }

  // Same metadata, different pixels.
  Image with_pixels(Eigen::MatrixXd p) const { return Image{std::move(p), delta, intensity_scale, value_scale}; }

  void validate(const char* who = "Image") const {
    if (rows() < 2 || cols() < 2)
      throw DataError(std::string(who) + ": image must be at least 2x2, got " + std::to_string(rows()) + "x" +
                      std::to_string(cols()));
    if (!pixels.allFinite()) throw DataError(std::string(who) + ": non-finite pixel value");
    if ((pixels.array() < 0.0).any() || (pixels.array() > 1.0).any())
      throw DataError(std::string(who) + ": pixel values must lie in [0, 1]");
    if (!(delta > 0.0)) throw DataError(std::string(who) + ": pixel spacing must be positive");
  }
};

inline void require_same_shape(const Image& a, const Image& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DataError(std::string(who) + ": dimension mismatch " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace scsa
