#pragma once

// One-dimensional semi-classical signal analysis: a nonnegative signal is used
// as the potential of -h^2 d^2/dx^2 - V and rebuilt from the squared
// eigenfunctions of its negative spectrum.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "scsa/error.hpp"
#include "scsa/spectral.hpp"

namespace scsa {

// `delta` is the sample spacing used to build D2 and to weight the eigenvector
// normalization; it takes precedence over any spacing carried by the data.
struct ScsaParams {
  double h = 1.0;
  double gamma = 4.0;
  double lambda = 0.0;
  double delta = 1.0;

  void validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw DataError("ScsaParams: h must be positive");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DataError("ScsaParams: gamma must be >= 0");
    if (!(lambda <= 0.0) || !std::isfinite(lambda)) throw DataError("ScsaParams: lambda must be <= 0");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DataError("ScsaParams: delta must be positive");
  }
};

struct Slice1D {
  Eigen::VectorXd samples;
  double delta = 1.0;
};

namespace detail {

// Gamma(a) / Gamma(b) without overflow for large arguments.
inline double gamma_ratio(double a, double b) {
  if (a < 150.0 && b < 150.0) return std::tgamma(a) / std::tgamma(b);
  return std::exp(std::lgamma(a) - std::lgamma(b));
}

// (lambda - mu)^gamma with roundoff negatives clamped to zero; 0^0 = 1.
inline double riesz_weight(double gap, double gamma) {
  gap = std::max(gap, 0.0);
  if (gamma == 0.0) return 1.0;
  return std::pow(gap, gamma);
}

}  // namespace detail

/// L^cl_{1,gamma} = Gamma(gamma+1) / (2 sqrt(pi) Gamma(gamma+3/2)).
inline double semiclassical_constant_1d(double gamma) {
  if (!(gamma >= 0.0)) throw DataError("semiclassical_constant_1d: gamma must be >= 0");
  return (1.0 / (2.0 * std::sqrt(std::numbers::pi))) * detail::gamma_ratio(gamma + 1.0, gamma + 1.5);
}

/// Rebuild a signal from the spectrum of its own operator (full potential, no 1/2).
inline Slice1D reconstruct_1d(const Slice1D& signal, const ScsaParams& params) {
  params.validate();
  if (signal.samples.size() < 2) throw DataError("reconstruct_1d: need at least 2 samples");
  if ((signal.samples.array() < 0.0).any() || !signal.samples.allFinite())
    throw DataError("reconstruct_1d: samples must be finite and nonnegative");

  const Eigen::Index n = signal.samples.size();
  Slice1D out{Eigen::VectorXd::Constant(n, -params.lambda), params.delta};

  SchrodingerOperator1D op;
  op.h = params.h;
  op.potential = signal.samples;
  op.diff = std::make_shared<const DiffMatrix>(build_diff_matrix(n, params.delta));
  op.half_potential = false;
  const SpectralDecomposition spec = negative_spectrum(op, params.lambda);
  if (spec.empty()) return out;

  Eigen::VectorXd weights(spec.count_negative());
  for (Eigen::Index k = 0; k < weights.size(); ++k)
    weights[k] = detail::riesz_weight(params.lambda - spec.eigenvalues[k], params.gamma);

  const double scale = params.h / semiclassical_constant_1d(params.gamma);
  const double exponent = 2.0 / (1.0 + 2.0 * params.gamma);
  const Eigen::VectorXd sums = spec.eigenvectors.array().square().matrix() * weights;
  for (Eigen::Index i = 0; i < n; ++i)
    out.samples[i] = -params.lambda + std::pow(std::max(scale * sums[i], 0.0), exponent);
  return out;
}

/// Closed form for gamma = 1/2, lambda = 0: 4h * sum sqrt(-mu_k) psi_k^2.
inline Slice1D reconstruct_1d_half(const Slice1D& signal, double h, double delta = 1.0) {
  if (signal.samples.size() < 2) throw DataError("reconstruct_1d_half: need at least 2 samples");
  SchrodingerOperator1D op;
  op.h = h;
  op.potential = signal.samples;
  op.diff = std::make_shared<const DiffMatrix>(build_diff_matrix(signal.samples.size(), delta));
  const SpectralDecomposition spec = negative_spectrum(op, 0.0);

  Slice1D out{Eigen::VectorXd::Zero(signal.samples.size()), delta};
  for (Eigen::Index k = 0; k < spec.count_negative(); ++k)
    out.samples += (4.0 * h * std::sqrt(-spec.eigenvalues[k])) * spec.eigenvectors.col(k).array().square().matrix();
  return out;
}

}  // namespace scsa
