// scsa: command-line driver for semi-classical signal analysis of images.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"
#include "scsa/scsa.hpp"

namespace fs = std::filesystem;
using namespace scsa;
using scsa::cli::ordered_json;

namespace {

struct HGrid {
  std::vector<double> list;
  double h_min = 0.1;
  double h_max = 5.0;
  int h_steps = 25;

  std::vector<double> values() const {
    if (!list.empty()) {
      std::vector<double> v = list;
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return v;
    }
    return log_spaced(h_min, h_max, h_steps);
  }
};

void add_hgrid(CLI::App* cmd, HGrid& g) {
  cmd->add_option("--h", g.list, "Explicit h values (overrides --h-min/--h-max/--h-steps)");
  cmd->add_option("--h-min", g.h_min, "Smallest h of the log-spaced grid")->capture_default_str();
  cmd->add_option("--h-max", g.h_max, "Largest h of the log-spaced grid")->capture_default_str();
  cmd->add_option("--h-steps", g.h_steps, "Number of log-spaced h values")->capture_default_str();
}

ImageFormat image_format(const std::string& name) {
  if (name == "pgm") return ImageFormat::pgm_binary;
  if (name == "pgm-ascii") return ImageFormat::pgm_ascii;
  if (name == "png") return ImageFormat::png;
  throw UsageError("unknown image format '" + name + "'");
}

const char* extension(ImageFormat f) { return f == ImageFormat::png ? ".png" : ".pgm"; }

ordered_json image_json(const fs::path& path, const Image& img) {
  return {{"path", path.generic_string()}, {"rows", img.rows()}, {"cols", img.cols()}};
}

ScsaParams params_for(const Image& img, double h, double gamma, double lambda, std::optional<double> delta) {
  ScsaParams p;
  p.h = h;
  p.gamma = gamma;
  p.lambda = lambda;
  p.delta = delta.value_or(img.delta);
  try {
    p.validate();
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  return p;
}

fs::path default_report_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".json");
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-classical signal analysis (SCSA) for grayscale images"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key = value file ([subcommand] sections); flags override it");
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct an image from its row/column spectra");
  std::string rec_in, rec_out, rec_report;
  double rec_h = 0.0, rec_gamma = 4.0, rec_lambda = 0.0;
  std::optional<double> rec_delta;
  rec->add_option("-i,--input", rec_in, "Input image (PGM or PNG)")->required();
  rec->add_option("--h", rec_h, "Semi-classical parameter h")->required();
  rec->add_option("--gamma", rec_gamma, "Riesz exponent gamma")->capture_default_str();
  rec->add_option("--lambda", rec_lambda, "Spectral threshold lambda (<= 0)")->capture_default_str();
  rec->add_option("--delta", rec_delta, "Sample spacing (default: 1 pixel)");
  rec->add_option("-o,--out", rec_out, "Output image path")->required();
  rec->add_option("--report", rec_report, "JSON report path (default: output path with .json)");

  // denoise
  auto* den = app.add_subcommand("denoise", "Add seeded Gaussian noise, then denoise by an h sweep");
  std::string den_in, den_out, den_objective = "max-psnr", den_format = "pgm";
  double den_sigma = 0.0, den_gamma = 4.0, den_lambda = 0.0;
  std::uint64_t den_seed = 0;
  bool den_no_clip = false;
  HGrid den_grid;
  den->add_option("-i,--input", den_in, "Clean image")->required();
  den->add_option("--sigma", den_sigma, "Noise standard deviation on the 0..255 scale")->required();
  den->add_option("--seed", den_seed, "PRNG seed")->capture_default_str();
  den->add_flag("--no-clip", den_no_clip, "Do not clip the noisy image to [0, 1]");
  add_hgrid(den, den_grid);
  den->add_option("--gamma", den_gamma, "Riesz exponent gamma")->capture_default_str();
  den->add_option("--lambda", den_lambda, "Spectral threshold lambda (<= 0)")->capture_default_str();
  den->add_option("--objective", den_objective, "min-mse, max-psnr or max-mssim")->capture_default_str();
  den->add_option("--image-format", den_format, "pgm, pgm-ascii or png")->capture_default_str();
  den->add_option("-o,--out", den_out, "Output directory")->required();

  // sweep
  auto* swp = app.add_subcommand("sweep", "Grid search over (h, gamma)");
  std::string swp_in, swp_ref, swp_out, swp_report, swp_objective = "min-mse", swp_format = "csv";
  std::vector<double> swp_gammas{4.0};
  double swp_lambda = 0.0;
  std::optional<double> swp_delta;
  HGrid swp_grid;
  swp->add_option("-i,--input", swp_in, "Image to reconstruct")->required();
  swp->add_option("--reference", swp_ref, "Ground-truth image (default: the input)");
  add_hgrid(swp, swp_grid);
  swp->add_option("--gamma", swp_gammas, "Gamma values")->capture_default_str();
  swp->add_option("--lambda", swp_lambda, "Spectral threshold lambda (<= 0)")->capture_default_str();
  swp->add_option("--delta", swp_delta, "Sample spacing (default: 1 pixel)");
  swp->add_option("--objective", swp_objective, "min-mse, max-psnr or max-mssim")->capture_default_str();
  swp->add_option("--format", swp_format, "Table format: csv or json")->capture_default_str();
  swp->add_option("-o,--out", swp_out, "Table output path")->required();
  swp->add_option("--report", swp_report, "JSON summary path (default: table path with .json)");

  // synth
  auto* syn = app.add_subcommand("synth", "Write a synthetic test image");
  std::string syn_kind, syn_out, syn_report;
  std::optional<long> syn_n;
  double syn_ts = 0.02, syn_low = 0.0, syn_high = 1.0;
  long syn_cell = 8;
  syn->add_option("kind", syn_kind, "example1 or checkerboard")->required()->check(CLI::IsMember({"example1", "checkerboard"}));
  syn->add_option("--n", syn_n, "Samples per axis (example1) or image size (checkerboard, default 64)");
  syn->add_option("--ts", syn_ts, "Sample step for example1 over [-1, 3]")->capture_default_str();
  syn->add_option("--cell", syn_cell, "Checkerboard cell size")->capture_default_str();
  syn->add_option("--low", syn_low, "Checkerboard low level")->capture_default_str();
  syn->add_option("--high", syn_high, "Checkerboard high level")->capture_default_str();
  syn->add_option("-o,--out", syn_out, "Output image path")->required();
  syn->add_option("--report", syn_report, "JSON metadata path (default: output path with .json)");

  // metrics
  auto* met = app.add_subcommand("metrics", "MSE / PSNR / MSSIM between two images");
  std::string met_a, met_b, met_out, met_format = "json";
  double met_peak = 1.0;
  met->add_option("a", met_a, "Reference image")->required();
  met->add_option("b", met_b, "Test image")->required();
  met->add_option("--peak", met_peak, "PSNR peak value L on the normalized scale")->capture_default_str();
  met->add_option("--format", met_format, "json or csv")->capture_default_str();
  met->add_option("-o,--out", met_out, "Write to this file instead of stdout");

  // eigreport
  auto* eig = app.add_subcommand("eigreport", "Per-row/column negative eigenvalue counts for several h");
  std::string eig_in, eig_out;
  double eig_lambda = 0.0;
  std::optional<double> eig_delta;
  HGrid eig_grid;
  eig->add_option("-i,--input", eig_in, "Input image")->required();
  add_hgrid(eig, eig_grid);
  eig->add_option("--lambda", eig_lambda, "Spectral threshold lambda (<= 0)")->capture_default_str();
  eig->add_option("--delta", eig_delta, "Sample spacing (default: 1 pixel)");
  eig->add_option("-o,--out", eig_out, "CSV output path")->required();

  // eigenfunction
  auto* efn = app.add_subcommand("eigenfunction", "Export the product eigenfunction of modes (n, m)");
  std::string efn_in, efn_out, efn_report;
  double efn_h = 0.0, efn_lambda = 0.0;
  std::optional<double> efn_delta;
  long efn_n = 1, efn_m = 1;
  efn->add_option("-i,--input", efn_in, "Input image")->required();
  efn->add_option("--h", efn_h, "Semi-classical parameter h")->required();
  efn->add_option("--lambda", efn_lambda, "Spectral threshold lambda (<= 0)")->capture_default_str();
  efn->add_option("--delta", efn_delta, "Sample spacing (default: 1 pixel)");
  efn->add_option("--n", efn_n, "Row mode index (1 = lowest eigenvalue)")->capture_default_str();
  efn->add_option("--m", efn_m, "Column mode index (1 = lowest eigenvalue)")->capture_default_str();
  efn->add_option("-o,--out", efn_out, "Output image of psi^2 scaled to its maximum")->required();
  efn->add_option("--report", efn_report, "JSON report path (default: output path with .json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*rec) {
      const Image img = load(rec_in);
      const ScsaParams p = params_for(img, rec_h, rec_gamma, rec_lambda, rec_delta);
      ReconstructionReport r = reconstruct_2d(img, p, threads);
      r.metrics = compute_metrics(img, r.reconstructed, 1.0);
      save(r.reconstructed, rec_out);

      ordered_json j = cli::header("reconstruct");
      j["input"] = image_json(rec_in, img);
      j["output"] = fs::path(rec_out).generic_string();
      j["params"] = cli::to_json(p);
      j["neg_counts_rows"] = r.neg_counts_rows;
      j["neg_counts_cols"] = r.neg_counts_cols;
      j["empty_row_count"] = r.empty_row_count;
      j["empty_col_count"] = r.empty_col_count;
      j["metrics"] = cli::to_json(*r.metrics);
      cli::write_json(rec_report.empty() ? default_report_path(rec_out) : fs::path(rec_report), j);
    } else if (*den) {
      const Image clean = load(den_in);
      const ImageFormat fmt = image_format(den_format);
      if (!(den_sigma >= 0.0) || !std::isfinite(den_sigma)) throw UsageError("--sigma must be a finite value >= 0");
      const NoiseSpec noise{den_sigma, den_seed, !den_no_clip};
      const Image noisy = add_noise(clean, noise);

      SweepSpec spec;
      spec.h_values = den_grid.values();
      spec.gamma_values = {den_gamma};
      spec.objective = parse_objective(den_objective);
      spec.reference = clean;
      const ScsaParams base = params_for(clean, spec.h_values.front(), den_gamma, den_lambda, std::nullopt);
      const SweepResult result = sweep(noisy, spec, base, threads);

      ScsaParams best = base;
      best.h = result.best().h;
      ReconstructionReport r = reconstruct_2d(noisy, best, threads);
      const MetricBundle denoised_metrics = compute_metrics(clean, r.reconstructed, 1.0);

      const fs::path dir(den_out);
      fs::create_directories(dir);
      save(noisy, dir / (std::string("noisy") + extension(fmt)), fmt);
      save(r.reconstructed, dir / (std::string("denoised") + extension(fmt)), fmt);
      cli::write_text(dir / "sweep.csv", cli::sweep_csv(result));

      ordered_json j = cli::header("denoise");
      j["input"] = image_json(den_in, clean);
      j["noise"] = cli::to_json(noise);
      j["noisy"] = {{"snr_db", cli::number(snr_db(clean, noisy))},
                    {"snr_variance_db", cli::number(snr_variance_db(clean, noisy))},
                    {"metrics", cli::to_json(compute_metrics(clean, noisy, 1.0))}};
      j["sweep"] = cli::sweep_best_json(result);
      j["denoised"] = {{"params", cli::to_json(best)},
                       {"metrics", cli::to_json(denoised_metrics)},
                       {"neg_counts_rows", r.neg_counts_rows},
                       {"neg_counts_cols", r.neg_counts_cols},
                       {"empty_row_count", r.empty_row_count},
                       {"empty_col_count", r.empty_col_count}};
      cli::write_json(dir / "report.json", j);
    } else if (*swp) {
      const Image img = load(swp_in);
      SweepSpec spec;
      spec.h_values = swp_grid.values();
      spec.gamma_values = swp_gammas;
      spec.objective = parse_objective(swp_objective);
      spec.reference = swp_ref.empty() ? img : load(swp_ref);
      const ScsaParams base = params_for(img, spec.h_values.front(), 1.0, swp_lambda, swp_delta);
      const SweepResult result = sweep(img, spec, base, threads);

      if (swp_format == "csv") {
        cli::write_text(swp_out, cli::sweep_csv(result));
      } else if (swp_format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto& row : result.table) {
          ordered_json r = cli::to_json(row);
          r["wall_time_s"] = row.wall_time_s;
          rows.push_back(r);
        }
        cli::write_json(swp_out, rows);
      } else {
        throw UsageError("unknown --format '" + swp_format + "' (expected csv or json)");
      }

      ordered_json j = cli::header("sweep");
      j["input"] = image_json(swp_in, img);
      if (!swp_ref.empty()) j["reference"] = image_json(swp_ref, spec.reference);
      j["lambda"] = swp_lambda;
      j["delta"] = base.delta;
      j["h_values"] = spec.h_values;
      j["gamma_values"] = spec.gamma_values;
      j.update(cli::sweep_best_json(result));
      const fs::path report = swp_report.empty() ? default_report_path(swp_out) : fs::path(swp_report);
      if (report != fs::path(swp_out)) cli::write_json(report, j);
    } else if (*syn) {
      Image img;
      ordered_json j = cli::header("synth");
      j["kind"] = syn_kind;
      if (syn_kind == "example1") {
        const GridSpec grid = syn_n ? example1_grid(*syn_n) : GridSpec{-1.0, 3.0, -1.0, 3.0, syn_ts};
        img = example1_image(grid);
        j["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"y_min", grid.y_min},
                     {"y_max", grid.y_max}, {"ts", grid.ts}};
      } else {
        const long n = syn_n.value_or(64);
        img = checkerboard(n, syn_cell, syn_low, syn_high);
        j["checkerboard"] = {{"n", n}, {"cell", syn_cell}, {"low", syn_low}, {"high", syn_high}};
      }
      save(img, syn_out);
      j["output"] = image_json(syn_out, img);
      j["delta"] = img.delta;
      j["value_scale"] = img.value_scale;
      cli::write_json(syn_report.empty() ? default_report_path(syn_out) : fs::path(syn_report), j);
    } else if (*met) {
      const Image a = load(met_a);
      const Image b = load(met_b);
      const MetricBundle m = compute_metrics(a, b, met_peak);
      std::string text;
      if (met_format == "json") {
        ordered_json j = cli::header("metrics");
        j["a"] = image_json(met_a, a);
        j["b"] = image_json(met_b, b);
        j["metrics"] = cli::to_json(m);
        text = j.dump(2) + "\n";
      } else if (met_format == "csv") {
        text = "mse,psnr_db,mssim,intensity_scale\n" + cli::format_double(m.mse) + "," + cli::format_double(m.psnr_db) +
               "," + cli::format_double(m.mssim) + "," + cli::format_double(m.intensity_scale) + "\n";
      } else {
        throw UsageError("unknown --format '" + met_format + "' (expected json or csv)");
      }
      if (met_out.empty())
        std::cout << text;
      else
        cli::write_text(met_out, text);
    } else if (*eig) {
      const Image img = load(eig_in);
      std::string csv = "h,axis,index,count\n";
      for (double h : eig_grid.values()) {
        const ScsaParams p = params_for(img, h, 1.0, eig_lambda, eig_delta);
        const SeparatedSpectra s = decompose_image(img, p, threads);
        const std::string hs = cli::format_double(h);
        const auto rows = s.row_counts();
        const auto cols = s.col_counts();
        for (std::size_t i = 0; i < rows.size(); ++i)
          csv += hs + ",row," + std::to_string(i) + "," + std::to_string(rows[i]) + "\n";
        for (std::size_t k = 0; k < cols.size(); ++k)
          csv += hs + ",col," + std::to_string(k) + "," + std::to_string(cols[k]) + "\n";
      }
      cli::write_text(eig_out, csv);
    } else if (*efn) {
      const Image img = load(efn_in);
      const ScsaParams p = params_for(img, efn_h, 1.0, efn_lambda, efn_delta);
      const SeparatedSpectra s = decompose_image(img, p, threads);
      const EigenfunctionField f = export_eigenfunction(s, efn_n, efn_m);
      Eigen::MatrixXd energy = f.values.array().square().matrix();
      const double peak = energy.maxCoeff();
      if (peak > 0.0) energy /= peak;
      save(img.with_pixels(energy), efn_out);

      Eigen::Index arg_r = 0, arg_c = 0;
      f.values.cwiseAbs().maxCoeff(&arg_r, &arg_c);
      ordered_json j = cli::header("eigenfunction");
      j["input"] = image_json(efn_in, img);
      j["params"] = cli::to_json(p);
      j["mode"] = {{"n", efn_n}, {"m", efn_m}};
      j["undefined_pixels"] = f.undefined_count;
      j["peak"] = {{"row", arg_r}, {"col", arg_c}, {"psi_squared", cli::number(peak)}};
      cli::write_json(efn_report.empty() ? default_report_path(efn_out) : fs::path(efn_report), j);
    }
  } catch (const Error& e) {
    std::cerr << "scsa: error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::usage: return 2;
      case ErrorKind::data: return 3;
      case ErrorKind::numerical: return 4;
    }
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "scsa: error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
