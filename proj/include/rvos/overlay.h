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

#ifndef RVOS_OVERLAY_H_
#define RVOS_OVERLAY_H_

#include <filesystem>

#include "rvos/image_io.h"
#include "rvos/mask.h"

namespace rvos {

struct OverlayStyle {
  Rgb color = {255, 0, 0};
  double alpha = 0.5;  // 0 leaves the frame untouched, 1 paints solid color
};

// Foreground pixels become round((1 - alpha) * frame + alpha * color).
// Throws RenderError when sizes differ and ConfigError for alpha outside
// [0, 1].
RgbImage BlendOverlay(const RgbImage& frame, const BinaryMask& mask,
                      const OverlayStyle& style);

// For every <results_root>/<video>/<expression>/<frame>.png, blends the frame
// image <frames_root>/<video>/<frame>.{jpg,jpeg,png} and writes
// <out_dir>/<video>/<expression>/<frame>.png. Returns the number of images
// written. A missing frame image is a RenderError.
int RenderOverlays(const std::filesystem::path& results_root,
                   const std::filesystem::path& frames_root,
                   const std::filesystem::path& out_dir,
                   const OverlayStyle& style = {});

}  // namespace rvos

#endif  // RVOS_OVERLAY_H_
