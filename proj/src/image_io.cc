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

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <system_error>

#include "rvos/error.h"

namespace rvos {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

// libpng reports fatal errors through a callback that must not return. The
// message is stashed here and control longjmps back to the decode helper.
struct PngErrorState {
  std::string message;
};

void PngError(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  if (state) state->message = msg;
  png_longjmp(png, 1);
}

void PngWarning(png_structp, png_const_charp) {}

struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<uint8_t> data;
  std::vector<png_bytep> rows;
};

enum class PngReadMode { kMask, kRgb };

// Returns false and fills `err` on failure. Everything that outlives a
// longjmp lives in `out` / `err`, owned by the caller.
bool DecodePng(FILE* file, PngReadMode mode, RawPng& out, PngErrorState& err) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           PngError, PngWarning);
  if (!png) {
    err.message = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    err.message = "out of memory";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_init_io(png, file);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (mode == PngReadMode::kMask) {
    if (bit_depth != 8) {
      err.message = "unsupported bit depth " + std::to_string(bit_depth) +
                    " for a mask (expected 8)";
      png_destroy_read_struct(&png, &info, nullptr);
      return false;
    }
    if (color_type != PNG_COLOR_TYPE_GRAY &&
        color_type != PNG_COLOR_TYPE_PALETTE) {
      err.message = "mask must be single-channel or palette, got color type " +
                    std::to_string(color_type);
      png_destroy_read_struct(&png, &info, nullptr);
      return false;
    }
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png);
    }
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const size_t rowbytes = png_get_rowbytes(png, info);
  out.data.assign(rowbytes * out.height, 0);
  out.rows.resize(out.height);
  for (int y = 0; y < out.height; ++y) out.rows[y] = out.data.data() + y * rowbytes;
  png_read_image(png, out.rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

struct PngImageSpec {
  int width;
  int height;
  int color_type;
  const std::vector<Rgb>* palette;  // palette images only
  const uint8_t* data;
  size_t rowbytes;
};

bool EncodePng(FILE* file, const PngImageSpec& spec,
               std::vector<png_bytep>& rows, std::vector<png_color>& plte,
               PngErrorState& err) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            PngError, PngWarning);
  if (!png) {
    err.message = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    err.message = "out of memory";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, spec.width, spec.height, 8, spec.color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (spec.color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_PLTE(png, info, plte.data(), static_cast<int>(plte.size()));
  }
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void EnsureParent(const fs::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) {
    throw WriteError("cannot create directory " +
                     path.parent_path().string() + ": " + ec.message());
  }
}

void WritePngFile(const PngImageSpec& spec, const fs::path& path) {
  EnsureParent(path);
  std::vector<png_bytep> rows(spec.height);
  for (int y = 0; y < spec.height; ++y) {
    rows[y] = const_cast<png_bytep>(spec.data + y * spec.rowbytes);
  }
  std::vector<png_color> plte;
  if (spec.palette) {
    for (const Rgb& c : *spec.palette) plte.push_back({c[0], c[1], c[2]});
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw WriteError("cannot open " + path.string() + " for writing: " +
                     std::strerror(errno));
  }
  PngErrorState err;
  if (!EncodePng(file.get(), spec, rows, plte, err)) {
    throw WriteError("cannot encode " + path.string() + ": " + err.message);
  }
  if (std::fflush(file.get()) != 0 || std::ferror(file.get())) {
    throw WriteError("write failed for " + path.string());
  }
}

RawPng ReadPngFile(const fs::path& path, PngReadMode mode) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw DecodeError("cannot open " + path.string() + ": " +
                      std::strerror(errno));
  }
  uint8_t sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw DecodeError(path.string() + " is not a PNG file");
  }
  std::rewind(file.get());
  RawPng raw;
  PngErrorState err;
  if (!DecodePng(file.get(), mode, raw, err)) {
    throw DecodeError("cannot decode " + path.string() + ": " + err.message);
  }
  return raw;
}

struct JpegErrorState {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void JpegError(j_common_ptr cinfo) {
  auto* state = reinterpret_cast<JpegErrorState*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, state->message);
  std::longjmp(state->jump, 1);
}

bool DecodeJpeg(FILE* file, RgbImage& out, JpegErrorState& err) {
  jpeg_decompress_struct cinfo;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = JpegError;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out.width = static_cast<int>(cinfo.output_width);
  out.height = static_cast<int>(cinfo.output_height);
  out.pixels.assign(static_cast<size_t>(out.width) * out.height * 3, 0);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row =
        out.pixels.data() + static_cast<size_t>(cinfo.output_scanline) *
                                out.width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

std::string LowerExtension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

BinaryMask ReadMaskPng(const fs::path& path) {
  RawPng raw = ReadPngFile(path, PngReadMode::kMask);
  if (raw.width <= 0 || raw.height <= 0) {
    throw DecodeError(path.string() + " has no pixels");
  }
  return BinaryMask::FromPixels(raw.width, raw.height, std::move(raw.data));
}

void WriteMaskPng(const BinaryMask& mask, const fs::path& path,
                  const MaskPalette& palette) {
  if (palette.colors.size() < 2 || palette.colors.size() > 256) {
    throw ConfigError("mask palette needs between 2 and 256 colors");
  }
  PngImageSpec spec{mask.width(),  mask.height(),
                    PNG_COLOR_TYPE_PALETTE, &palette.colors,
                    mask.pixels().data(), static_cast<size_t>(mask.width())};
  WritePngFile(spec, path);
}

RgbImage ReadRgbImage(const fs::path& path) {
  const std::string ext = LowerExtension(path);
  if (ext == ".jpg" || ext == ".jpeg") {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) {
      throw DecodeError("cannot open " + path.string() + ": " +
                        std::strerror(errno));
    }
    RgbImage image;
    JpegErrorState err{};
    if (!DecodeJpeg(file.get(), image, err)) {
      throw DecodeError("cannot decode " + path.string() + ": " + err.message);
    }
    return image;
  }
  RawPng raw = ReadPngFile(path, PngReadMode::kRgb);
  if (raw.channels != 3) {
    throw DecodeError(path.string() + ": could not convert to RGB");
  }
  return RgbImage{raw.width, raw.height, std::move(raw.data)};
}

void WriteRgbPng(const RgbImage& image, const fs::path& path) {
  if (image.width <= 0 || image.height <= 0 ||
      image.pixels.size() != static_cast<size_t>(image.width) * image.height * 3) {
    throw WriteError("malformed RGB image for " + path.string());
  }
  PngImageSpec spec{image.width,         image.height,
                    PNG_COLOR_TYPE_RGB,  nullptr,
                    image.pixels.data(), static_cast<size_t>(image.width) * 3};
  WritePngFile(spec, path);
}

}  // namespace rvos
