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

#include "rvos/overlay.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rvos/dataset_io.h"
#include "rvos/error.h"

namespace rvos {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> SortedEntries(const fs::path& dir, bool want_dirs) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (want_dirs ? entry.is_directory()
                  : entry.is_regular_file() &&
                        entry.path().extension() == ".png") {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RgbImage BlendOverlay(const RgbImage& frame, const BinaryMask& mask,
                      const OverlayStyle& style) {
  if (!(style.alpha >= 0.0 && style.alpha <= 1.0)) {
    throw ConfigError("overlay alpha must lie in [0, 1]");
  }
  if (frame.width != mask.width() || frame.height != mask.height()) {
    throw RenderError("frame is " + std::to_string(frame.width) + "x" +
                      std::to_string(frame.height) + " but mask is " +
                      std::to_string(mask.width()) + "x" +
                      std::to_string(mask.height()));
  }
  RgbImage out = frame;
  const auto px = mask.pixels();
  for (size_t i = 0; i < px.size(); ++i) {
    if (!px[i]) continue;
    for (int c = 0; c < 3; ++c) {
      const double v = (1.0 - style.alpha) * frame.pixels[3 * i + c] +
                       style.alpha * style.color[c];
      out.pixels[3 * i + c] =
          static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return out;
}

int RenderOverlays(const fs::path& results_root, const fs::path& frames_root,
                   const fs::path& out_dir, const OverlayStyle& style) {
  if (!fs::is_directory(results_root)) {
    throw RenderError("results directory " + results_root.string() +
                      " does not exist");
  }
  int written = 0;
  for (const fs::path& video_dir : SortedEntries(results_root, true)) {
    const std::string video_id = video_dir.filename().string();
    for (const fs::path& exp_dir : SortedEntries(video_dir, true)) {
      for (const fs::path& mask_path : SortedEntries(exp_dir, false)) {
        const std::string frame_id = mask_path.stem().string();
        auto frame_path = FindFrameImage(frames_root, video_id, frame_id);
        if (!frame_path) {
          throw RenderError("no frame image for video '" + video_id +
                            "', frame '" + frame_id + "' under " +
                            frames_root.string());
        }
        const RgbImage blended =
            BlendOverlay(ReadRgbImage(*frame_path), ReadMaskPng(mask_path),
                         style);
        WriteRgbPng(blended, out_dir / video_id / exp_dir.filename() /
                                 (frame_id + ".png"));
        ++written;
      }
    }
  }
  return written;
}

}  // namespace rvos
