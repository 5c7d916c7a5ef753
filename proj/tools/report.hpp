#pragma once

// JSON / CSV report writers shared by the CLI subcommands.

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "scsa/scsa.hpp"

namespace scsa::cli {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kSoftwareVersion = "1.0.0";

using nlohmann::ordered_json;

// Non-finite values have no JSON literal; they are written as strings.
inline ordered_json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline ordered_json header(const std::string& command) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["software"] = {{"name", "scsa"}, {"version", kSoftwareVersion}};
  j["command"] = command;
  return j;
}

inline ordered_json to_json(const ScsaParams& p) {
  return {{"h", number(p.h)}, {"gamma", number(p.gamma)}, {"lambda", number(p.lambda)}, {"delta", number(p.delta)}};
}

inline ordered_json to_json(const MetricBundle& m) {
  return {{"mse", number(m.mse)},
          {"psnr_db", number(m.psnr_db)},
          {"mssim", number(m.mssim)},
          {"intensity_scale", number(m.intensity_scale)}};
}

inline ordered_json to_json(const NoiseSpec& n) {
  return {{"sigma_255", number(n.sigma_255)},
          {"seed", n.seed},
          {"clip", n.clip},
          {"prng", {{"name", std::string(kPrngName)}, {"version", kPrngVersion}}}};
}

inline ordered_json to_json(const SweepRow& r) {
  return {{"h", number(r.h)},         {"gamma", number(r.gamma)}, {"mse", number(r.mse)},
          {"psnr_db", number(r.psnr_db)}, {"mssim", number(r.mssim)}, {"total_neg_eigs", r.total_neg_eigs}};
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline constexpr const char* kSweepCsvHeader = "h,gamma,mse,psnr_db,mssim,total_neg_eigs,wall_time_s";

inline std::string sweep_csv(const SweepResult& r) {
  std::string s = std::string(kSweepCsvHeader) + "\n";
  for (const auto& row : r.table) {
    s += format_double(row.h) + "," + format_double(row.gamma) + "," + format_double(row.mse) + "," +
         format_double(row.psnr_db) + "," + format_double(row.mssim) + "," + std::to_string(row.total_neg_eigs) +
         "," + format_double(row.wall_time_s) + "\n";
  }
  return s;
}

inline ordered_json sweep_best_json(const SweepResult& r) {
  ordered_json j;
  j["objective"] = std::string(to_string(r.objective));
  j["best"] = to_json(r.best());
  j["best_by_objective"] = {{"min-mse", to_json(r.table[r.best_mse])},
                            {"max-psnr", to_json(r.table[r.best_psnr])},
                            {"max-mssim", to_json(r.table[r.best_mssim])}};
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace scsa::cli
