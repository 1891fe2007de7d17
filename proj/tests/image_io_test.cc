/* Copyright 2026 The rvos Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "rvos/image_io.h"

#include <jpeglib.h>
#include <png.h>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>

#include <gtest/gtest.h>

#include "rvos/error.h"
#include "test_util.h"

namespace rvos {
namespace {

namespace fs = std::filesystem;
using testing::RandomMask;
using testing::TempDir;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Writes a raw PNG with arbitrary depth / color type.
void WriteRawPng(const fs::path& path, int width, int height, int depth,
                 int color_type, const std::vector<uint8_t>& data,
                 const std::vector<png_color>& palette = {}) {
  FILE* f = std::fopen(path.c_str(), "wb");
  ASSERT_NE(f, nullptr);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_set_IHDR(png, info, width, height, depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!palette.empty()) {
    png_set_PLTE(png, info, palette.data(), static_cast<int>(palette.size()));
  }
  png_write_info(png, info);
  const size_t rowbytes = data.size() / height;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(data.data() + y * rowbytes));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(f);
}

TEST(MaskPngTest, DecodesGrayZeroOneAndZero255Alike) {
  TempDir dir;
  const std::vector<uint8_t> ones = {0, 1, 1, 0, 0, 0, 1, 1};
  std::vector<uint8_t> full = ones;
  for (auto& v : full) v *= 255;
  WriteRawPng(dir / "a.png", 4, 2, 8, PNG_COLOR_TYPE_GRAY, ones);
  WriteRawPng(dir / "b.png", 4, 2, 8, PNG_COLOR_TYPE_GRAY, full);
  const BinaryMask a = ReadMaskPng(dir / "a.png");
  EXPECT_EQ(a, BinaryMask::FromRows({{0, 1, 1, 0}, {0, 0, 1, 1}}));
  EXPECT_EQ(ReadMaskPng(dir / "b.png"), a);
}

TEST(MaskPngTest, AllZeroFile) {
  TempDir dir;
  WriteRawPng(dir / "z.png", 4, 4, 8, PNG_COLOR_TYPE_GRAY,
              std::vector<uint8_t>(16, 0));
  EXPECT_EQ(ReadMaskPng(dir / "z.png"), BinaryMask(4, 4));
}

TEST(MaskPngTest, PaletteIndicesNotColors) {
  TempDir dir;
  // Index 0 painted white: still background.
  WriteRawPng(dir / "p.png", 3, 1, 8, PNG_COLOR_TYPE_PALETTE, {0, 2, 1},
              {{255, 255, 255}, {0, 0, 0}, {9, 9, 9}});
  EXPECT_EQ(ReadMaskPng(dir / "p.png"), BinaryMask::FromRows({{0, 1, 1}}));
}

TEST(MaskPngTest, RejectsUnsupportedFormats) {
  TempDir dir;
  WriteRawPng(dir / "d16.png", 2, 1, 16, PNG_COLOR_TYPE_GRAY, {0, 0, 0, 1});
  EXPECT_THROW(ReadMaskPng(dir / "d16.png"), DecodeError);
  WriteRawPng(dir / "d1.png", 8, 1, 1, PNG_COLOR_TYPE_GRAY, {0xF0});
  EXPECT_THROW(ReadMaskPng(dir / "d1.png"), DecodeError);
  WriteRgbPng(RgbImage{1, 1, {1, 2, 3}}, dir / "rgb.png");
  EXPECT_THROW(ReadMaskPng(dir / "rgb.png"), DecodeError);
  std::ofstream(dir / "junk.png") << "not a png at all";
  EXPECT_THROW(ReadMaskPng(dir / "junk.png"), DecodeError);
  EXPECT_THROW(ReadMaskPng(dir / "absent.png"), DecodeError);

  // Valid header, truncated body.
  WriteMaskPng(BinaryMask::Full(64, 64), dir / "full.png");
  const std::string bytes = Slurp(dir / "full.png");
  std::ofstream(dir / "cut.png", std::ios::binary)
      << bytes.substr(0, bytes.size() / 2);
  EXPECT_THROW(ReadMaskPng(dir / "cut.png"), DecodeError);
}

TEST(MaskPngTest, WritesPaletteIndexedZeroOne) {
  TempDir dir;
  WriteMaskPng(BinaryMask::FromRows({{1, 0}}), dir / "m.png");
  FILE* f = std::fopen((dir / "m.png").c_str(), "rb");
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, f);
  png_read_info(png, info);
  EXPECT_EQ(png_get_color_type(png, info), PNG_COLOR_TYPE_PALETTE);
  EXPECT_EQ(png_get_bit_depth(png, info), 8);
  png_colorp plte = nullptr;
  int n = 0;
  png_get_PLTE(png, info, &plte, &n);
  ASSERT_EQ(n, 2);
  EXPECT_EQ(plte[1].red, 128);
  uint8_t row[2];
  png_read_row(png, row, nullptr);
  EXPECT_EQ(row[0], 1);
  EXPECT_EQ(row[1], 0);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(f);
}

TEST(MaskPngTest, MinimalAndEmptyRoundTrip) {
  TempDir dir;
  const BinaryMask dot = BinaryMask::Full(1, 1);
  WriteMaskPng(dot, dir / "dot.png");
  EXPECT_EQ(ReadMaskPng(dir / "dot.png"), dot);
  WriteMaskPng(BinaryMask(5, 3), dir / "empty.png");
  EXPECT_EQ(ReadMaskPng(dir / "empty.png"), BinaryMask(5, 3));
}

TEST(MaskPngTest, RoundTripIsBitExactAndBytesStable) {
  TempDir dir;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> side(1, 97);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask m = RandomMask(rng, side(rng), side(rng), dens(rng));
    const fs::path p = dir / "rt.png";
    WriteMaskPng(m, p);
    const std::string first = Slurp(p);
    ASSERT_EQ(ReadMaskPng(p), m) << "trial " << trial;
    WriteMaskPng(m, p);
    ASSERT_EQ(Slurp(p), first);
  }
}

TEST(MaskPngTest, LargestSupportedSizeRoundTrips) {
  TempDir dir;
  std::mt19937_64 rng(4096);
  const BinaryMask m = testing::RandomBlobs(rng, 4096, 4096, 40);
  WriteMaskPng(m, dir / "big.png");
  EXPECT_EQ(ReadMaskPng(dir / "big.png"), m);
}

TEST(MaskPngTest, CustomPaletteAndBadPalette) {
  TempDir dir;
  MaskPalette pal;
  pal.colors = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  WriteMaskPng(BinaryMask::Full(2, 2), dir / "c.png", pal);
  EXPECT_EQ(ReadMaskPng(dir / "c.png"), BinaryMask::Full(2, 2));
  pal.colors = {{0, 0, 0}};
  EXPECT_THROW(WriteMaskPng(BinaryMask(1, 1), dir / "bad.png", pal),
               ConfigError);
}

TEST(MaskPngTest, CreatesParentsAndReportsWriteFailure) {
  TempDir dir;
  WriteMaskPng(BinaryMask(2, 2), dir / "a" / "b" / "c.png");
  EXPECT_TRUE(fs::exists(dir / "a" / "b" / "c.png"));
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(WriteMaskPng(BinaryMask(2, 2), dir / "file" / "m.png"),
               WriteError);
}

TEST(RgbImageTest, PngRoundTrip) {
  TempDir dir;
  RgbImage img{3, 2, {}};
  for (int i = 0; i < 18; ++i) img.pixels.push_back(static_cast<uint8_t>(i * 13));
  WriteRgbPng(img, dir / "rgb.png");
  EXPECT_EQ(ReadRgbImage(dir / "rgb.png"), img);
  // Gray and palette inputs come back as RGB.
  WriteMaskPng(BinaryMask::FromRows({{0, 1}}), dir / "pal.png");
  const RgbImage pal = ReadRgbImage(dir / "pal.png");
  EXPECT_EQ(pal.pixels, (std::vector<uint8_t>{0, 0, 0, 128, 0, 0}));
}

TEST(RgbImageTest, ReadsJpeg) {
  TempDir dir;
  const fs::path p = dir / "f.jpg";
  FILE* f = std::fopen(p.c_str(), "wb");
  jpeg_compress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, f);
  cinfo.image_width = 8;
  cinfo.image_height = 4;
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, 100, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  std::vector<uint8_t> row(8 * 3, 200);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW r = row.data();
    jpeg_write_scanlines(&cinfo, &r, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::fclose(f);

  const RgbImage img = ReadRgbImage(p);
  EXPECT_EQ(img.width, 8);
  EXPECT_EQ(img.height, 4);
  for (uint8_t v : img.pixels) EXPECT_NEAR(v, 200, 2);

  std::ofstream(dir / "bad.jpg") << "garbage";
  EXPECT_THROW(ReadRgbImage(dir / "bad.jpg"), DecodeError);
}

}  // namespace
}  // namespace rvos
