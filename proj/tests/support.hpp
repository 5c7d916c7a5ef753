#pragma once

// Shared fixtures: test data location, scratch directories and the Lena crop.

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "scsa/scsa.hpp"

namespace testing_support {

inline std::filesystem::path data_dir() { return SCSA_DATA_DIR; }

// 128x128 window of the 512x512 Lena image around the face.
inline scsa::Image lena_crop() {
  const scsa::Image full = scsa::load(data_dir() / "lena512.pgm");
  return full.with_pixels(full.pixels.block(192, 192, 128, 128));
}

// Fresh directory under the build tree, removed and recreated on each call.
inline std::filesystem::path scratch(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(SCSA_SCRATCH_DIR) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline scsa::Image random_image(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo = 0.0,
                                double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  scsa::Image img;
  img.pixels.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) img.pixels(i, j) = u(rng);
  return img;
}

inline bool extended_tests_enabled() {
  const char* v = std::getenv("SCSA_EXTENDED_TESTS");
  return v != nullptr && std::string(v) == "1";
}

}  // namespace testing_support
