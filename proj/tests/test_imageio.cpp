#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "scsa/scsa.hpp"
#include "support.hpp"

using namespace scsa;
namespace fs = std::filesystem;

namespace {

void write_bytes(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ImageIoError::Code load_error(const fs::path& p) {
  try {
    load(p);
  } catch (const ImageIoError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << p;
  return ImageIoError::Code::io_failure;
}

}  // namespace

TEST(ImageIo, AsciiPgmLoads) {
  const fs::path dir = testing_support::scratch("ascii");
  write_bytes(dir / "a.pgm", "P2\n# comment\n2 2\n255\n0 255\n255 0\n");
  const Image img = load(dir / "a.pgm");
  Eigen::MatrixXd want(2, 2);
  want << 0, 1, 1, 0;
  EXPECT_EQ(img.pixels, want);
  EXPECT_EQ(img.intensity_scale, 255.0);
  EXPECT_EQ(img.delta, 1.0);
}

TEST(ImageIo, RectangularBinaryPgmKeepsOrientation) {
  const fs::path dir = testing_support::scratch("p5");
  write_bytes(dir / "r.pgm", std::string("P5 3 2 255\n") + std::string("\x00\x01\x02\x03\x04\x05", 6));
  const Image img = load(dir / "r.pgm");
  ASSERT_EQ(img.rows(), 2);
  ASSERT_EQ(img.cols(), 3);
  EXPECT_EQ(img.pixels(1, 0), 3.0 / 255.0);
}

TEST(ImageIo, EncodeLayoutAndRounding) {
  const Image zero{Eigen::MatrixXd::Zero(2, 2)};
  const auto p2 = encode(zero, ImageFormat::pgm_ascii);
  EXPECT_EQ(std::string(p2.begin(), p2.end()), "P2\n2 2\n255\n0 0\n0 0\n");

  Image img{Eigen::MatrixXd(1, 4)};
  img.pixels << 0.5, 1.2, -0.3, 0.5 / 255.0;
  // 127.5 rounds to the even 128, 0.5 rounds to the even 0
  const auto p5 = encode(img, ImageFormat::pgm_binary);
  const std::string s(p5.begin(), p5.end());
  EXPECT_EQ(s.substr(0, 11), "P5\n4 1\n255\n");
  EXPECT_EQ(static_cast<unsigned char>(s[11]), 128);
  EXPECT_EQ(static_cast<unsigned char>(s[12]), 255);
  EXPECT_EQ(static_cast<unsigned char>(s[13]), 0);
  EXPECT_EQ(static_cast<unsigned char>(s[14]), 0);
}

class RoundTrip : public ::testing::TestWithParam<const char*> {};

TEST_P(RoundTrip, WithinQuantizationAndIdempotent) {
  const fs::path dir = testing_support::scratch(std::string("rt_") + (GetParam() + 1));
  const Image img = testing_support::random_image(17, 23, 99);
  const fs::path a = dir / (std::string("a") + GetParam());
  const fs::path b = dir / (std::string("b") + GetParam());
  save(img, a);
  const Image back = load(a);
  EXPECT_LE((back.pixels - img.pixels).cwiseAbs().maxCoeff(), 1.0 / 510.0 + 1e-15);
  save(back, b);
  EXPECT_EQ(read_bytes(a), read_bytes(b));
}

INSTANTIATE_TEST_SUITE_P(Formats, RoundTrip, ::testing::Values(".pgm", ".png"));

TEST(ImageIo, AsciiRoundTripIsIdempotent) {
  const fs::path dir = testing_support::scratch("p2rt");
  const Image img = testing_support::random_image(5, 6, 1);
  save(img, dir / "a.pgm", ImageFormat::pgm_ascii);
  save(load(dir / "a.pgm"), dir / "b.pgm", ImageFormat::pgm_ascii);
  EXPECT_EQ(read_bytes(dir / "a.pgm"), read_bytes(dir / "b.pgm"));
}

TEST(ImageIo, ErrorsAreClassified) {
  const fs::path dir = testing_support::scratch("errors");
  EXPECT_EQ(load_error(dir / "missing.pgm"), ImageIoError::Code::not_found);
  write_bytes(dir / "trunc.pgm", std::string("P5\n4 4\n255\n") + std::string(10, '\x01'));
  EXPECT_EQ(load_error(dir / "trunc.pgm"), ImageIoError::Code::malformed_payload);
  write_bytes(dir / "trunc2.pgm", "P2\n2 2\n255\n0 1 2\n");
  EXPECT_EQ(load_error(dir / "trunc2.pgm"), ImageIoError::Code::malformed_payload);
  write_bytes(dir / "deep.pgm", "P2\n2 2\n65535\n0 1 2 3\n");
  EXPECT_EQ(load_error(dir / "deep.pgm"), ImageIoError::Code::unsupported_format);
  write_bytes(dir / "hdr.pgm", "P2\nx 2\n255\n");
  EXPECT_EQ(load_error(dir / "hdr.pgm"), ImageIoError::Code::malformed_header);
  write_bytes(dir / "junk.bin", "hello world");
  EXPECT_EQ(load_error(dir / "junk.bin"), ImageIoError::Code::unsupported_format);
  write_bytes(dir / "bad.png", std::string("\x89PNG\r\n\x1a\n", 8) + "garbage");
  EXPECT_EQ(load_error(dir / "bad.png"), ImageIoError::Code::malformed_header);
  EXPECT_THROW(save(Image{Eigen::MatrixXd::Zero(2, 2)}, dir / "x.tiff"), ImageIoError);
}

TEST(ImageIo, ColorPngIsRejected) {
  const fs::path dir = testing_support::scratch("color");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = 2;
  png.height = 2;
  png.format = PNG_FORMAT_RGB;
  const unsigned char px[12] = {255, 0, 0, 0, 255, 0, 0, 0, 255, 9, 9, 9};
  ASSERT_TRUE(png_image_write_to_file(&png, (dir / "c.png").c_str(), 0, px, 0, nullptr));
  EXPECT_EQ(load_error(dir / "c.png"), ImageIoError::Code::not_grayscale);
}

TEST(ImageIo, BundledLenaLoads) {
  const Image img = load(testing_support::data_dir() / "lena512.pgm");
  EXPECT_EQ(img.rows(), 512);
  EXPECT_EQ(img.cols(), 512);
  EXPECT_NO_THROW(img.validate());
}
