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

#ifndef RVOS_IMAGE_IO_H_
#define RVOS_IMAGE_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "rvos/mask.h"

namespace rvos {

using Rgb = std::array<uint8_t, 3>;

// RGB entries written into the PLTE chunk of mask files. Pixel values are
// always palette indices 0 (background) and 1 (foreground); the colors only
// affect how viewers display them.
struct MaskPalette {
  std::vector<Rgb> colors = {{0, 0, 0}, {128, 0, 0}};
};

// Decodes an 8-bit grayscale or palette PNG. Any nonzero sample (palette
// index for palette images) is foreground. Throws DecodeError otherwise.
BinaryMask ReadMaskPng(const std::filesystem::path& path);

// Writes an 8-bit palette-indexed PNG with index 0 for background and 1 for
// foreground. Creates missing parent directories. Output bytes depend only on
// the mask and the palette. Throws WriteError.
void WriteMaskPng(const BinaryMask& mask, const std::filesystem::path& path,
                  const MaskPalette& palette = {});

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, 3 bytes per pixel

  friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

// PNG (any color type, converted to 8-bit RGB) or JPEG by file extension.
RgbImage ReadRgbImage(const std::filesystem::path& path);
void WriteRgbPng(const RgbImage& image, const std::filesystem::path& path);

}  // namespace rvos

#endif  // RVOS_IMAGE_IO_H_
