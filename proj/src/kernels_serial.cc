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

#include "rvos/kernels.h"

#include <algorithm>

namespace rvos {
namespace kernels {
namespace serial {

int64_t Count(Plane a) {
  int64_t n = 0;
  for (uint8_t v : a) n += v;
  return n;
}

int64_t CountAnd(Plane a, Plane b) {
  int64_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += a[i] & b[i];
  return n;
}

int64_t CountOr(Plane a, Plane b) {
  int64_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += a[i] | b[i];
  return n;
}

void AddVotes(std::span<uint32_t> counts, Plane m) {
  for (size_t i = 0; i < counts.size(); ++i) counts[i] += m[i];
}

void ThresholdVotes(std::span<const uint32_t> counts, uint32_t thr,
                    MutablePlane out) {
  for (size_t i = 0; i < counts.size(); ++i) out[i] = counts[i] >= thr;
}

void Boundary(int width, int height, Plane in, MutablePlane out) {
  auto fg = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= width || y >= height) return false;
    return in[static_cast<size_t>(y) * width + x] != 0;
  };
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool edge = fg(x, y) && (!fg(x - 1, y) || !fg(x + 1, y) ||
                                     !fg(x, y - 1) || !fg(x, y + 1));
      out[static_cast<size_t>(y) * width + x] = edge;
    }
  }
}

// Stamps the disk around every foreground pixel.
void DilateDisk(int width, int height, Plane in, int radius,
                MutablePlane out) {
  std::fill(out.begin(), out.end(), 0);
  const int64_t r2 = static_cast<int64_t>(radius) * radius;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!in[static_cast<size_t>(y) * width + x]) continue;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= height) continue;
        for (int dx = -radius; dx <= radius; ++dx) {
          const int xx = x + dx;
          if (xx < 0 || xx >= width) continue;
          if (static_cast<int64_t>(dx) * dx + static_cast<int64_t>(dy) * dy >
              r2) {
            continue;
          }
          out[static_cast<size_t>(yy) * width + xx] = 1;
        }
      }
    }
  }
}

}  // namespace serial
}  // namespace kernels
}  // namespace rvos
