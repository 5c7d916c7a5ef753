#pragma once

// 8-bit grayscale image files: Netpbm PGM (P2 ascii, P5 binary) and PNG.
// Pixels are divided by 255 on load. On save they are clamped to [0, 1],
// scaled by 255 and rounded half-to-even.

#include <png.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cfenv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "scsa/error.hpp"
#include "scsa/image.hpp"

namespace scsa {

enum class ImageFormat { pgm_ascii, pgm_binary, png };

class ImageIoError : public DataError {
public:
  enum class Code { not_found, unsupported_format, malformed_header, malformed_payload, not_grayscale, io_failure };

  ImageIoError(Code code, const std::string& what) : DataError(what), code_(code) {}
  Code code() const noexcept { return code_; }

private:
  Code code_;
};

inline ImageFormat format_from_extension(const std::filesystem::path& path, bool ascii_pgm = false) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return ImageFormat::png;
  if (ext == ".pgm" || ext == ".pnm") return ascii_pgm ? ImageFormat::pgm_ascii : ImageFormat::pgm_binary;
  throw ImageIoError(ImageIoError::Code::unsupported_format, "unsupported image extension '" + ext + "'");
}

namespace detail {

inline std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw ImageIoError(ImageIoError::Code::not_found, "file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError(ImageIoError::Code::io_failure, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::uint8_t quantize(double v) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double q = std::nearbyint(std::clamp(v, 0.0, 1.0) * 255.0);
  std::fesetround(saved);
  return static_cast<std::uint8_t>(q);
}

inline std::vector<std::uint8_t> to_bytes(const Image& img) {
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(img.rows() * img.cols()));
  for (Eigen::Index i = 0; i < img.rows(); ++i)
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      const double v = img.pixels(i, j);
      out.push_back(quantize(std::isnan(v) ? 0.0 : v));
    }
  return out;
}

inline Image from_bytes(const std::uint8_t* data, Eigen::Index rows, Eigen::Index cols) {
  Image img;
  img.pixels.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) img.pixels(i, j) = data[i * cols + j] / 255.0;
  img.delta = 1.0;
  img.intensity_scale = 255.0;
  return img;
}

// Cursor over a PGM header: whitespace and '#' comments are skipped.
class PgmReader {
public:
  PgmReader(const std::vector<unsigned char>& buf, std::string name) : buf_(buf), name_(std::move(name)) {}

  long next_int(const char* field) {
    skip_space_and_comments();
    if (pos_ >= buf_.size() || !std::isdigit(buf_[pos_]))
      throw ImageIoError(ImageIoError::Code::malformed_header, name_ + ": expected " + field + " in PGM header");
    long v = 0;
    while (pos_ < buf_.size() && std::isdigit(buf_[pos_])) {
      v = v * 10 + (buf_[pos_++] - '0');
      if (v > 1'000'000'000L) throw ImageIoError(ImageIoError::Code::malformed_header, name_ + ": " + field + " too large");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from a binary raster.
  void consume_single_space() {
    if (pos_ >= buf_.size() || !std::isspace(buf_[pos_]))
      throw ImageIoError(ImageIoError::Code::malformed_header, name_ + ": missing whitespace after maxval");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

private:
  void skip_space_and_comments() {
    while (pos_ < buf_.size()) {
      if (std::isspace(buf_[pos_])) {
        ++pos_;
      } else if (buf_[pos_] == '#') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& buf_;
  std::string name_;
  std::size_t pos_ = 2;
};

inline Image load_pgm(const std::vector<unsigned char>& buf, const std::string& name) {
  const bool binary = buf[1] == '5';
  PgmReader rd(buf, name);
  const long cols = rd.next_int("width");
  const long rows = rd.next_int("height");
  const long maxval = rd.next_int("maxval");
  if (cols < 1 || rows < 1) throw ImageIoError(ImageIoError::Code::malformed_header, name + ": zero image size");
  if (maxval != 255)
    throw ImageIoError(ImageIoError::Code::unsupported_format,
                       name + ": only 8-bit PGM with maxval 255 is supported, got " + std::to_string(maxval));

  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<std::uint8_t> data(count);
  if (binary) {
    rd.consume_single_space();
    if (buf.size() - rd.pos() < count)
      throw ImageIoError(ImageIoError::Code::malformed_payload,
                         name + ": truncated P5 raster (" + std::to_string(buf.size() - rd.pos()) + " of " +
                             std::to_string(count) + " bytes)");
    std::memcpy(data.data(), buf.data() + rd.pos(), count);
  } else {
    std::istringstream body(std::string(buf.begin() + static_cast<std::ptrdiff_t>(rd.pos()), buf.end()));
    for (std::size_t k = 0; k < count; ++k) {
      long v = -1;
      if (!(body >> v))
        throw ImageIoError(ImageIoError::Code::malformed_payload,
                           name + ": truncated P2 raster at sample " + std::to_string(k));
      if (v < 0 || v > 255)
        throw ImageIoError(ImageIoError::Code::malformed_payload, name + ": sample out of range 0..255");
      data[k] = static_cast<std::uint8_t>(v);
    }
  }
  return from_bytes(data.data(), rows, cols);
}

inline Image load_png(const std::vector<unsigned char>& buf, const std::string& name) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, buf.data(), buf.size()))
    throw ImageIoError(ImageIoError::Code::malformed_header, name + ": " + png.message);

  const auto fail = [&](ImageIoError::Code code, const std::string& why) {
    png_image_free(&png);
    throw ImageIoError(code, name + ": " + why);
  };
  if (png.format & PNG_FORMAT_FLAG_COLOR) fail(ImageIoError::Code::not_grayscale, "PNG is not grayscale");
  if (png.format & PNG_FORMAT_FLAG_ALPHA) fail(ImageIoError::Code::not_grayscale, "PNG has an alpha channel");
  if (png.format & PNG_FORMAT_FLAG_LINEAR) fail(ImageIoError::Code::unsupported_format, "PNG is not 8-bit");

  png.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, data.data(), 0, nullptr))
    fail(ImageIoError::Code::malformed_payload, std::string("PNG decode failed: ") + png.message);
  const Eigen::Index rows = png.height;
  const Eigen::Index cols = png.width;
  png_image_free(&png);
  return from_bytes(data.data(), rows, cols);
}

}  // namespace detail

inline Image load(const std::filesystem::path& path) {
  const std::vector<unsigned char> buf = detail::read_file(path);
  const std::string name = path.string();
  if (buf.size() >= 2 && buf[0] == 'P' && (buf[1] == '2' || buf[1] == '5')) return detail::load_pgm(buf, name);
  static constexpr unsigned char png_magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (buf.size() >= 8 && std::equal(std::begin(png_magic), std::end(png_magic), buf.begin()))
    return detail::load_png(buf, name);
  throw ImageIoError(ImageIoError::Code::unsupported_format, name + ": not a P2/P5 PGM or PNG file");
}

/// Encoded file contents. PGM layout: "P2\n<w> <h>\n255\n" then one text row per
/// image row, or "P5\n<w> <h>\n255\n" followed by the raw raster.
inline std::vector<unsigned char> encode(const Image& img, ImageFormat format) {
  if (img.rows() < 1 || img.cols() < 1) throw DataError("encode: empty image");
  const std::vector<std::uint8_t> bytes = detail::to_bytes(img);
  const std::string dims = std::to_string(img.cols()) + " " + std::to_string(img.rows());

  if (format == ImageFormat::pgm_ascii) {
    std::string s = "P2\n" + dims + "\n255\n";
    for (Eigen::Index i = 0; i < img.rows(); ++i) {
      for (Eigen::Index j = 0; j < img.cols(); ++j) {
        if (j) s += ' ';
        s += std::to_string(bytes[static_cast<std::size_t>(i * img.cols() + j)]);
      }
      s += '\n';
    }
    return {s.begin(), s.end()};
  }
  if (format == ImageFormat::pgm_binary) {
    const std::string header = "P5\n" + dims + "\n255\n";
    std::vector<unsigned char> out(header.begin(), header.end());
    out.insert(out.end(), bytes.begin(), bytes.end());
    return out;
  }

  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.cols());
  png.height = static_cast<png_uint_32>(img.rows());
  png.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png, size, 0, bytes.data(), 0, nullptr))
    throw ImageIoError(ImageIoError::Code::io_failure, std::string("PNG encode failed: ") + png.message);
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, bytes.data(), 0, nullptr))
    throw ImageIoError(ImageIoError::Code::io_failure, std::string("PNG encode failed: ") + png.message);
  out.resize(size);
  return out;
}

inline void save(const Image& img, const std::filesystem::path& path, ImageFormat format) {
  const std::vector<unsigned char> data = encode(img, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageIoError(ImageIoError::Code::io_failure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw ImageIoError(ImageIoError::Code::io_failure, "write failed for " + path.string());
}

inline void save(const Image& img, const std::filesystem::path& path) { save(img, path, format_from_extension(path)); }

}  // namespace scsa
