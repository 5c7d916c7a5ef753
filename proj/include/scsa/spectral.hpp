#pragma once

// Fourier pseudo-spectral second-derivative matrix on a periodic grid and the
// negative spectrum of the semi-classical Schrodinger operator -h^2 D2 - c V.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "scsa/error.hpp"

namespace scsa {

// Symmetric circulant matrix approximating d^2/dx^2 on n periodic samples with
// spacing `delta`.
class DiffMatrix {
public:
  DiffMatrix(Eigen::MatrixXd entries, double delta) : entries_(std::move(entries)), delta_(delta) {}

  Eigen::Index size() const { return entries_.rows(); }
  double delta() const { return delta_; }
  const Eigen::MatrixXd& entries() const { return entries_; }

private:
  Eigen::MatrixXd entries_;
  double delta_;
};

// Builds D2 on the canonical [0, 2pi) grid then rescales by (2pi / (n*delta))^2.
// Passing delta = 2pi/n leaves the canonical matrix untouched.
inline DiffMatrix build_diff_matrix(Eigen::Index n, double delta) {
  if (n < 2) throw DataError("build_diff_matrix: grid size must be >= 2, got " + std::to_string(n));
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw DataError("build_diff_matrix: spacing must be positive and finite");

  constexpr double pi = std::numbers::pi;
  const double step = 2.0 * pi / static_cast<double>(n);
  const bool even = (n % 2 == 0);

  // circulant: one generating row indexed by the offset (j - k) mod n
  std::vector<double> row(static_cast<std::size_t>(n));
  row[0] = even ? -pi * pi / (3.0 * step * step) - 1.0 / 6.0
                : -pi * pi / (3.0 * step * step) + 1.0 / 12.0;
  for (Eigen::Index d = 1; d < n; ++d) {
    const double half = 0.5 * static_cast<double>(d) * step;
    const double s = std::sin(half);
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    row[static_cast<std::size_t>(d)] =
        even ? -sign / (2.0 * s * s) : -sign * std::cos(half) / (2.0 * s * s);
  }
  // d and n - d carry the same value in exact arithmetic; force it bitwise
  for (Eigen::Index d = 1; d < n - d; ++d) row[static_cast<std::size_t>(n - d)] = row[static_cast<std::size_t>(d)];

  const double scale = std::pow(2.0 * pi / (static_cast<double>(n) * delta), 2);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index d = ((j - k) % n + n) % n;
      m(j, k) = scale * row[static_cast<std::size_t>(d)];
    }
  return DiffMatrix(std::move(m), delta);
}

// -h^2 D2 - c * diag(potential), c = 1/2 for the separated row/column operators.
struct SchrodingerOperator1D {
  double h = 1.0;
  Eigen::VectorXd potential;
  std::shared_ptr<const DiffMatrix> diff;
  bool half_potential = false;
};

inline Eigen::MatrixXd assemble_operator(const SchrodingerOperator1D& op) {
  if (!op.diff) throw DataError("assemble_operator: missing differentiation matrix");
  if (op.potential.size() != op.diff->size())
    throw DataError("assemble_operator: potential length " + std::to_string(op.potential.size()) +
                    " does not match grid size " + std::to_string(op.diff->size()));
  if (!(op.h > 0.0)) throw DataError("assemble_operator: h must be positive");
  if ((op.potential.array() < 0.0).any() || !op.potential.allFinite())
    throw DataError("assemble_operator: potential must be finite and nonnegative");

  const double c = op.half_potential ? 0.5 : 1.0;
  Eigen::MatrixXd m = -(op.h * op.h) * op.diff->entries();
  m.diagonal() -= c * op.potential;
  return m;
}

// Eigenpairs of one operator with eigenvalue strictly below lambda, ascending.
// Column k of `eigenvectors` satisfies norm_weight * sum(v^2) = 1.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double norm_weight = 1.0;

  Eigen::Index count_negative() const { return eigenvalues.size(); }
  bool empty() const { return eigenvalues.size() == 0; }
};

inline constexpr double kResidualTolerance = 1e-10;

inline SpectralDecomposition negative_spectrum(const SchrodingerOperator1D& op, double lambda = 0.0) {
  if (!(lambda <= 0.0)) throw DataError("negative_spectrum: lambda must be <= 0");
  const Eigen::MatrixXd m = assemble_operator(op);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("negative_spectrum: symmetric eigensolver did not converge");

  // Eigen returns eigenvalues in ascending order; equal values keep solver order.
  // Values within solver roundoff of lambda count as equal to it and are
  // dropped, so an exact zero mode (e.g. a black row) never turns into a
  // spurious -1e-16 bound state.
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double margin = static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon() *
                        values.cwiseAbs().maxCoeff();
  Eigen::Index kept = 0;
  while (kept < values.size() && values[kept] < lambda - margin) ++kept;

  SpectralDecomposition out;
  out.norm_weight = op.diff->delta();
  out.eigenvalues = values.head(kept);
  out.eigenvectors = solver.eigenvectors().leftCols(kept);

  const double frob = m.norm();
  for (Eigen::Index k = 0; k < kept; ++k) {
    auto v = out.eigenvectors.col(k);
    v /= std::sqrt(out.norm_weight * v.squaredNorm());

    const double peak = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-10 * peak) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }

    const double mu = out.eigenvalues[k];
    const double residual = (m * v - mu * v).norm() / (v.norm() * (frob + std::abs(mu)));
    if (!(residual <= kResidualTolerance))
      throw NumericalError("negative_spectrum: eigenpair " + std::to_string(k) +
                               " residual " + std::to_string(residual) + " exceeds tolerance",
                           residual);
  }
  return out;
}

}  // namespace scsa
