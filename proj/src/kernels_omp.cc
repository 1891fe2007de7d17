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
#include <vector>

namespace rvos {
namespace kernels {
namespace omp {

namespace {

// Below this many pixels the fork/join overhead dominates.
constexpr int64_t kMinParallelPixels = 1 << 14;

}  // namespace

int64_t Count(Plane a) {
  const int64_t n = static_cast<int64_t>(a.size());
  const uint8_t* p = a.data();
  int64_t total = 0;
#pragma omp parallel for simd reduction(+ : total) if (n >= kMinParallelPixels)
  for (int64_t i = 0; i < n; ++i) total += p[i];
  return total;
}

int64_t CountAnd(Plane a, Plane b) {
  const int64_t n = static_cast<int64_t>(a.size());
  const uint8_t* pa = a.data();
  const uint8_t* pb = b.data();
  int64_t total = 0;
#pragma omp parallel for simd reduction(+ : total) if (n >= kMinParallelPixels)
  for (int64_t i = 0; i < n; ++i) total += pa[i] & pb[i];
  return total;
}

int64_t CountOr(Plane a, Plane b) {
  const int64_t n = static_cast<int64_t>(a.size());
  const uint8_t* pa = a.data();
  const uint8_t* pb = b.data();
  int64_t total = 0;
#pragma omp parallel for simd reduction(+ : total) if (n >= kMinParallelPixels)
  for (int64_t i = 0; i < n; ++i) total += pa[i] | pb[i];
  return total;
}

void AddVotes(std::span<uint32_t> counts, Plane m) {
  const int64_t n = static_cast<int64_t>(counts.size());
  uint32_t* c = counts.data();
  const uint8_t* pm = m.data();
#pragma omp parallel for simd if (n >= kMinParallelPixels)
  for (int64_t i = 0; i < n; ++i) c[i] += pm[i];
}

void ThresholdVotes(std::span<const uint32_t> counts, uint32_t thr,
                    MutablePlane out) {
  const int64_t n = static_cast<int64_t>(counts.size());
  const uint32_t* c = counts.data();
  uint8_t* po = out.data();
#pragma omp parallel for simd if (n >= kMinParallelPixels)
  for (int64_t i = 0; i < n; ++i) po[i] = c[i] >= thr ? 1 : 0;
}

void Boundary(int width, int height, Plane in, MutablePlane out) {
  const uint8_t* p = in.data();
  uint8_t* po = out.data();
  const int64_t n = static_cast<int64_t>(width) * height;
#pragma omp parallel for if (n >= kMinParallelPixels)
  for (int y = 0; y < height; ++y) {
    const uint8_t* row = p + static_cast<int64_t>(y) * width;
    const uint8_t* up = y > 0 ? row - width : nullptr;
    const uint8_t* down = y + 1 < height ? row + width : nullptr;
    uint8_t* orow = po + static_cast<int64_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      if (!row[x]) {
        orow[x] = 0;
        continue;
      }
      const bool interior = x > 0 && x + 1 < width && up && down &&
                            row[x - 1] && row[x + 1] && up[x] && down[x];
      orow[x] = interior ? 0 : 1;
    }
  }
}

void DilateDisk(int width, int height, Plane in, int radius,
                MutablePlane out) {
  const int64_t n = static_cast<int64_t>(width) * height;
  const uint8_t* p = in.data();

  // Foreground columns of each row, ascending.
  std::vector<std::vector<int>> cols(height);
#pragma omp parallel for if (n >= kMinParallelPixels)
  for (int y = 0; y < height; ++y) {
    const uint8_t* row = p + static_cast<int64_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      if (row[x]) cols[y].push_back(x);
    }
  }

  // Half-width of the disk on each row offset: the largest k with
  // k^2 + dy^2 <= r^2.
  std::vector<int> half(2 * static_cast<size_t>(radius) + 1);
  for (int dy = -radius; dy <= radius; ++dy) {
    const int64_t room = static_cast<int64_t>(radius) * radius -
                         static_cast<int64_t>(dy) * dy;
    int k = 0;
    while (static_cast<int64_t>(k + 1) * (k + 1) <= room) ++k;
    half[dy + radius] = k;
  }

  // Each output row ORs in the runs [x - k, x + k] of every source row within
  // reach. Runs arrive sorted, so already-filled prefixes are skipped and a
  // row costs at most O(width) per offset.
  uint8_t* po = out.data();
#pragma omp parallel for schedule(static) if (n >= kMinParallelPixels)
  for (int y = 0; y < height; ++y) {
    uint8_t* orow = po + static_cast<int64_t>(y) * width;
    std::fill(orow, orow + width, uint8_t{0});
    for (int dy = -radius; dy <= radius; ++dy) {
      const int yy = y + dy;
      if (yy < 0 || yy >= height || cols[yy].empty()) continue;
      const int k = half[dy + radius];
      int filled = 0;  // orow[0, filled) already handled for this offset
      for (int x : cols[yy]) {
        const int lo = std::max(x - k, filled);
        const int hi = std::min(x + k + 1, width);
        if (lo < hi) std::fill(orow + lo, orow + hi, uint8_t{1});
        filled = std::max(filled, hi);
      }
    }
  }
}

}  // namespace omp
}  // namespace kernels
}  // namespace rvos
