#pragma once

// Grid search over (h, gamma). Spectra depend on h only, so each h is
// decomposed once and every gamma reuses it.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scsa/error.hpp"
#include "scsa/image.hpp"
#include "scsa/metrics.hpp"
#include "scsa/scsa2d.hpp"

namespace scsa {

enum class Objective { min_mse, max_psnr, max_mssim };

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::min_mse: return "min-mse";
    case Objective::max_psnr: return "max-psnr";
    case Objective::max_mssim: return "max-mssim";
  }
  return "unknown";
}

inline Objective parse_objective(std::string_view s) {
  if (s == "min-mse") return Objective::min_mse;
  if (s == "max-psnr") return Objective::max_psnr;
  if (s == "max-mssim") return Objective::max_mssim;
  throw UsageError("unknown objective '" + std::string(s) + "' (expected min-mse, max-psnr or max-mssim)");
}

struct SweepSpec {
  std::vector<double> h_values;  // strictly ascending
  std::vector<double> gamma_values;
  Objective objective = Objective::min_mse;
  Image reference;
};

// mse is on the reference's original value scale (value_scale^2 times the
// normalized MSE); psnr and mssim are computed on the normalized data with peak 1.
struct SweepRow {
  double h = 0.0;
  double gamma = 0.0;
  double mse = 0.0;
  double psnr_db = 0.0;
  double mssim = 0.0;
  Eigen::Index total_neg_eigs = 0;
  double wall_time_s = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> table;  // h-major, gamma in the given order
  std::size_t best_mse = 0;
  std::size_t best_psnr = 0;
  std::size_t best_mssim = 0;
  Objective objective = Objective::min_mse;

  const SweepRow& best() const { return table[best_index(objective)]; }
  std::size_t best_index(Objective o) const {
    switch (o) {
      case Objective::min_mse: return best_mse;
      case Objective::max_psnr: return best_psnr;
      case Objective::max_mssim: return best_mssim;
    }
    return best_mse;
  }
};

// Geometric grid lo..hi inclusive; steps == 1 yields {lo}.
inline std::vector<double> log_spaced(double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi >= lo) || steps < 1) throw UsageError("log_spaced: need 0 < lo <= hi and steps >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) return {lo};
  const double ratio = std::log(hi / lo) / static_cast<double>(steps - 1);
  for (int k = 0; k < steps; ++k) out.push_back(k == steps - 1 ? hi : lo * std::exp(ratio * k));
  return out;
}

namespace detail {

// True if row a should replace the incumbent b as the optimum of `o`.
inline bool better(const SweepRow& a, const SweepRow& b, Objective o) {
  double va = 0.0;
  double vb = 0.0;
  switch (o) {
    case Objective::min_mse: va = -a.mse; vb = -b.mse; break;
    case Objective::max_psnr: va = a.psnr_db; vb = b.psnr_db; break;
    case Objective::max_mssim: va = a.mssim; vb = b.mssim; break;
  }
  if (va != vb) return va > vb;
  if (a.h != b.h) return a.h < b.h;
  return a.gamma < b.gamma;
}

}  // namespace detail

inline SweepRow evaluate_cell(const SeparatedSpectra& spectra, const Image& input, const Image& reference,
                              const ScsaParams& params, unsigned threads) {
  SweepRow row;
  row.h = params.h;
  row.gamma = params.gamma;
  const Image rec = input.with_pixels(combine_spectra(spectra, params, threads));
  const MetricBundle m = compute_metrics(reference, rec, 1.0);
  row.mse = m.mse * reference.value_scale * reference.value_scale;
  row.psnr_db = m.psnr_db;
  row.mssim = m.mssim;
  row.total_neg_eigs = spectra.total_count();
  return row;
}

inline SweepResult sweep(const Image& img, const SweepSpec& spec, const ScsaParams& params_base, unsigned threads = 0) {
  if (spec.h_values.empty() || spec.gamma_values.empty()) throw DataError("sweep: empty parameter grid");
  for (std::size_t k = 1; k < spec.h_values.size(); ++k)
    if (!(spec.h_values[k] > spec.h_values[k - 1])) throw DataError("sweep: h values must be strictly ascending");
  require_same_shape(img, spec.reference, "sweep");

  using clock = std::chrono::steady_clock;
  SweepResult result;
  result.objective = spec.objective;
  result.table.reserve(spec.h_values.size() * spec.gamma_values.size());

  for (double h : spec.h_values) {
    ScsaParams p = params_base;
    p.h = h;
    const auto t0 = clock::now();
    SeparatedSpectra spectra;
    try {
      spectra = decompose_image(img, p, threads);
    } catch (const NumericalError& e) {
      throw NumericalError("sweep (h=" + std::to_string(h) + "): " + e.what(), e.residual());
    }
    // decomposition time is shared evenly by the gamma cells of this h
    const double decomp_s = std::chrono::duration<double>(clock::now() - t0).count();
    const double share = decomp_s / static_cast<double>(spec.gamma_values.size());

    for (double g : spec.gamma_values) {
      p.gamma = g;
      const auto t1 = clock::now();
      SweepRow row;
      try {
        row = evaluate_cell(spectra, img, spec.reference, p, threads);
      } catch (const Error& e) {
        const std::string tag = "sweep (h=" + std::to_string(h) + ", gamma=" + std::to_string(g) + "): ";
        if (e.kind() == ErrorKind::numerical) throw NumericalError(tag + e.what());
        throw DataError(tag + e.what());
      }
      row.wall_time_s = share + std::chrono::duration<double>(clock::now() - t1).count();
      result.table.push_back(row);
    }
  }

  for (std::size_t k = 1; k < result.table.size(); ++k) {
    const SweepRow& r = result.table[k];
    if (detail::better(r, result.table[result.best_mse], Objective::min_mse)) result.best_mse = k;
    if (detail::better(r, result.table[result.best_psnr], Objective::max_psnr)) result.best_psnr = k;
    if (detail::better(r, result.table[result.best_mssim], Objective::max_mssim)) result.best_mssim = k;
  }
  return result;
}

}  // namespace scsa
