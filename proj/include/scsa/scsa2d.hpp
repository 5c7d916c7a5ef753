#pragma once

// Two-dimensional SCSA by separation of variables. Every row i and column j
// gets its own 1D operator with potential I/2; pixel [i,j] combines the row-i
// and column-j spectra:
//
//   I[i,j] = -lambda + ( h^2 / L2(gamma) * sum_n sum_m
//            (lambda - kappa_{i,n} - rho_{j,m})^gamma phi_{i,n}[j]^2 phi_{j,m}[i]^2 )^(1/(1+gamma))

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "scsa/error.hpp"
#include "scsa/image.hpp"
#include "scsa/metrics.hpp"
#include "scsa/parallel.hpp"
#include "scsa/scsa1d.hpp"
#include "scsa/spectral.hpp"

namespace scsa {

/// L^cl_{2,gamma} = Gamma(gamma+1) / (4 pi Gamma(gamma+2)) = 1 / (4 pi (gamma+1)).
inline double semiclassical_constant_2d(double gamma) {
  if (!(gamma > 0.0)) throw DataError("semiclassical_constant_2d: gamma must be > 0");
  return detail::gamma_ratio(gamma + 1.0, gamma + 2.0) / (4.0 * std::numbers::pi);
}

struct SeparatedSpectra {
  std::vector<SpectralDecomposition> rows;  // from 1/2 * I[i, :]
  std::vector<SpectralDecomposition> cols;  // from 1/2 * I[:, j]

  std::vector<Eigen::Index> row_counts() const {
    std::vector<Eigen::Index> out;
    out.reserve(rows.size());
    for (const auto& s : rows) out.push_back(s.count_negative());
    return out;
  }
  std::vector<Eigen::Index> col_counts() const {
    std::vector<Eigen::Index> out;
    out.reserve(cols.size());
    for (const auto& s : cols) out.push_back(s.count_negative());
    return out;
  }
  Eigen::Index total_count() const {
    Eigen::Index t = 0;
    for (const auto& s : rows) t += s.count_negative();
    for (const auto& s : cols) t += s.count_negative();
    return t;
  }
};

namespace detail {

template <class E>
[[noreturn]] void rethrow_with_slice(const E& e, const std::string& where) {
  throw E(where + ": " + e.what());
}

}  // namespace detail

/// Solves the rows + cols independent 1D eigenproblems. `threads` = 0 uses all cores.
inline SeparatedSpectra decompose_image(const Image& img, const ScsaParams& params, unsigned threads = 0) {
  img.validate("decompose_image");
  params.validate();

  const Eigen::Index rows = img.rows();
  const Eigen::Index cols = img.cols();
  // a row slice has `cols` samples, a column slice `rows`
  const auto row_diff = std::make_shared<const DiffMatrix>(build_diff_matrix(cols, params.delta));
  const auto col_diff =
      rows == cols ? row_diff : std::make_shared<const DiffMatrix>(build_diff_matrix(rows, params.delta));

  SeparatedSpectra out;
  out.rows.resize(static_cast<std::size_t>(rows));
  out.cols.resize(static_cast<std::size_t>(cols));

  const std::size_t total = static_cast<std::size_t>(rows + cols);
  parallel_for(total, threads, [&](std::size_t task) {
    const bool is_row = task < static_cast<std::size_t>(rows);
    const Eigen::Index idx = is_row ? static_cast<Eigen::Index>(task) : static_cast<Eigen::Index>(task) - rows;
    SchrodingerOperator1D op;
    op.h = params.h;
    op.half_potential = true;
    op.diff = is_row ? row_diff : col_diff;
    op.potential = is_row ? Eigen::VectorXd(img.pixels.row(idx).transpose()) : Eigen::VectorXd(img.pixels.col(idx));
    const std::string where = std::string(is_row ? "row " : "column ") + std::to_string(idx);
    try {
      (is_row ? out.rows : out.cols)[static_cast<std::size_t>(idx)] = negative_spectrum(op, params.lambda);
    } catch (const NumericalError& e) {
      throw NumericalError(where + ": " + e.what(), e.residual());
    } catch (const DataError& e) {
      detail::rethrow_with_slice(e, where);
    }
  });
  return out;
}

namespace detail {

inline bool small_integer(double g) { return g >= 1.0 && g <= 64.0 && g == std::floor(g); }

// Direct double sum over (n, m) per pixel; any gamma > 0.
inline void combine_direct(const SeparatedSpectra& spectra, double lambda, double gamma, Eigen::MatrixXd& sums,
                           unsigned threads) {
  const Eigen::Index cols = sums.cols();
  parallel_for(spectra.rows.size(), threads, [&](std::size_t ii) {
    const Eigen::Index i = static_cast<Eigen::Index>(ii);
    const SpectralDecomposition& row = spectra.rows[ii];
    for (Eigen::Index j = 0; j < cols; ++j) {
      const SpectralDecomposition& col = spectra.cols[static_cast<std::size_t>(j)];
      double sum = 0.0;
      for (Eigen::Index n = 0; n < row.count_negative(); ++n) {
        const double kappa = row.eigenvalues[n];
        const double a = row.eigenvectors(j, n);
        double inner = 0.0;
        for (Eigen::Index m = 0; m < col.count_negative(); ++m) {
          const double base = lambda - (kappa + col.eigenvalues[m]);
          if (base < 0.0)
            throw NumericalError("reconstruct_2d: negative Riesz base at pixel [" + std::to_string(i) + "," +
                                 std::to_string(j) + "]");
          const double b = col.eigenvectors(i, m);
          inner += std::pow(base, gamma) * b * b;
        }
        sum += a * a * inner;
      }
      sums(i, j) = sum;
    }
  });
}

// Moments M[p](pos) = sum_k v_k[pos]^2 * w_k^p for p = 0..order, with
// w_k = lambda/2 - eigenvalue_k > 0.
inline Eigen::MatrixXd slice_moments(const SpectralDecomposition& s, double lambda, int order) {
  const Eigen::Index count = s.count_negative();
  Eigen::MatrixXd powers(count, order + 1);
  for (Eigen::Index k = 0; k < count; ++k) {
    const double w = 0.5 * lambda - s.eigenvalues[k];
    if (!(w > 0.0)) throw NumericalError("reconstruct_2d: eigenvalue not below lambda/2");
    double acc = 1.0;
    for (int p = 0; p <= order; ++p) {
      powers(k, p) = acc;
      acc *= w;
    }
  }
  return s.eigenvectors.array().square().matrix() * powers;
}

// Integer gamma: lambda - kappa - rho = u + v with u = lambda/2 - kappa and
// v = lambda/2 - rho both positive, so (u + v)^g expands binomially and the
// double sum factors into row and column moments. All terms are nonnegative.
inline void combine_binomial(const SeparatedSpectra& spectra, double lambda, int order, Eigen::MatrixXd& sums,
                             unsigned threads) {
  const Eigen::Index rows = sums.rows();
  const Eigen::Index cols = sums.cols();
  std::vector<double> binom(static_cast<std::size_t>(order + 1));
  binom[0] = 1.0;
  for (int p = 1; p <= order; ++p) binom[static_cast<std::size_t>(p)] = binom[static_cast<std::size_t>(p - 1)] * (order - p + 1) / p;

  std::vector<Eigen::MatrixXd> row_moments(static_cast<std::size_t>(rows));  // cols x (order+1)
  std::vector<Eigen::MatrixXd> col_moments(static_cast<std::size_t>(cols));  // rows x (order+1)
  parallel_for(static_cast<std::size_t>(rows + cols), threads, [&](std::size_t t) {
    if (t < static_cast<std::size_t>(rows))
      row_moments[t] = slice_moments(spectra.rows[t], lambda, order);
    else
      col_moments[t - static_cast<std::size_t>(rows)] =
          slice_moments(spectra.cols[t - static_cast<std::size_t>(rows)], lambda, order);
  });

  parallel_for(static_cast<std::size_t>(rows), threads, [&](std::size_t ii) {
    const Eigen::Index i = static_cast<Eigen::Index>(ii);
    const Eigen::MatrixXd& rm = row_moments[ii];
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Eigen::MatrixXd& cm = col_moments[static_cast<std::size_t>(j)];
      double sum = 0.0;
      for (int p = 0; p <= order; ++p) sum += binom[static_cast<std::size_t>(p)] * rm(j, p) * cm(i, order - p);
      sums(i, j) = sum;
    }
  });
}

}  // namespace detail

/// Raw pixel values from precomputed spectra. Only h, gamma and lambda of
/// `params` are read; the spectra must come from the same h and lambda.
inline Eigen::MatrixXd combine_spectra(const SeparatedSpectra& spectra, const ScsaParams& params, unsigned threads = 0) {
  params.validate();
  if (!(params.gamma > 0.0)) throw DataError("reconstruct_2d: gamma must be > 0");

  const Eigen::Index rows = static_cast<Eigen::Index>(spectra.rows.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(spectra.cols.size());
  const double prefactor = params.h * params.h / semiclassical_constant_2d(params.gamma);
  const double exponent = 1.0 / (1.0 + params.gamma);

  Eigen::MatrixXd sums(rows, cols);
  if (detail::small_integer(params.gamma))
    detail::combine_binomial(spectra, params.lambda, static_cast<int>(params.gamma), sums, threads);
  else
    detail::combine_direct(spectra, params.lambda, params.gamma, sums, threads);

  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = -params.lambda + std::pow(prefactor * sums(i, j), exponent);
  return out;
}

struct ReconstructionReport {
  Image reconstructed;  // raw values, not clamped
  std::vector<Eigen::Index> neg_counts_rows;
  std::vector<Eigen::Index> neg_counts_cols;
  ScsaParams params;
  Eigen::Index empty_row_count = 0;
  Eigen::Index empty_col_count = 0;
  std::optional<MetricBundle> metrics;
};

inline ReconstructionReport make_report(const Image& input, const SeparatedSpectra& spectra, const ScsaParams& params,
                                        Eigen::MatrixXd raw) {
  ReconstructionReport rep;
  rep.reconstructed = input.with_pixels(std::move(raw));
  rep.neg_counts_rows = spectra.row_counts();
  rep.neg_counts_cols = spectra.col_counts();
  rep.params = params;
  for (auto c : rep.neg_counts_rows) rep.empty_row_count += (c == 0);
  for (auto c : rep.neg_counts_cols) rep.empty_col_count += (c == 0);
  return rep;
}

/// Full pipeline: decompose, then combine. Metrics are left empty; the caller
/// decides what the reference image is.
inline ReconstructionReport reconstruct_2d(const Image& img, const ScsaParams& params, unsigned threads = 0) {
  if (!(params.gamma > 0.0)) throw DataError("reconstruct_2d: gamma must be > 0");
  const SeparatedSpectra spectra = decompose_image(img, params, threads);
  return make_report(img, spectra, params, combine_spectra(spectra, params, threads));
}

// psi[i,j] = phi_{i,n}[j] * phi_{j,m}[i] for fixed 1-based mode indices (n, m).
struct EigenfunctionField {
  Eigen::MatrixXd values;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> defined;
  Eigen::Index undefined_count = 0;
};

inline EigenfunctionField export_eigenfunction(const SeparatedSpectra& spectra, Eigen::Index n, Eigen::Index m) {
  const Eigen::Index rows = static_cast<Eigen::Index>(spectra.rows.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(spectra.cols.size());
  if (n < 1 || m < 1) throw DataError("export_eigenfunction: mode indices are 1-based");

  EigenfunctionField f;
  f.values = Eigen::MatrixXd::Zero(rows, cols);
  f.defined = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(rows, cols, false);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = spectra.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& col = spectra.cols[static_cast<std::size_t>(j)];
      if (row.count_negative() < n || col.count_negative() < m) continue;
      f.values(i, j) = row.eigenvectors(j, n - 1) * col.eigenvectors(i, m - 1);
      f.defined(i, j) = true;
    }
  }
  f.undefined_count = rows * cols - f.defined.count();
  if (f.undefined_count == rows * cols)
    throw DataError("export_eigenfunction: mode (" + std::to_string(n) + "," + std::to_string(m) +
                    ") does not exist for any pixel");
  return f;
}

/// Single pixel of the product eigenfunction; throws if (row, col) is outside
/// the image or either slice lacks the requested mode.
inline double eigenfunction_value(const SeparatedSpectra& spectra, Eigen::Index row, Eigen::Index col, Eigen::Index n,
                                  Eigen::Index m) {
  if (row < 0 || col < 0 || row >= static_cast<Eigen::Index>(spectra.rows.size()) ||
      col >= static_cast<Eigen::Index>(spectra.cols.size()))
    throw DataError("eigenfunction_value: pixel index out of range");
  const auto& r = spectra.rows[static_cast<std::size_t>(row)];
  const auto& c = spectra.cols[static_cast<std::size_t>(col)];
  if (n < 1 || m < 1 || r.count_negative() < n || c.count_negative() < m)
    throw DataError("eigenfunction_value: mode index out of range at this pixel");
  return r.eigenvectors(col, n - 1) * c.eigenvectors(row, m - 1);
}

}  // namespace scsa
