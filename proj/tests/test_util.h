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

// Test-only helpers: random inputs and brute-force oracles that do not share
// code with the library paths they check.

#ifndef RVOS_TESTS_TEST_UTIL_H_
#define RVOS_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rvos/mask.h"

namespace rvos {
namespace testing {

inline BinaryMask RandomMask(std::mt19937_64& rng, int width, int height,
                             double density = 0.5) {
  std::bernoulli_distribution bit(density);
  std::vector<uint8_t> px(static_cast<size_t>(width) * height);
  for (auto& v : px) v = bit(rng);
  return BinaryMask::FromPixels(width, height, std::move(px));
}

// Random union of axis-aligned rectangles; gives masks with real contours.
inline BinaryMask RandomBlobs(std::mt19937_64& rng, int width, int height,
                              int blobs) {
  BinaryMask m(width, height);
  std::uniform_int_distribution<int> xs(0, width - 1), ys(0, height - 1);
  for (int b = 0; b < blobs; ++b) {
    int x0 = xs(rng), x1 = xs(rng), y0 = ys(rng), y1 = ys(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) m.set(x, y, true);
  }
  return m;
}

inline BinaryMask Rect(int width, int height, int x0, int y0, int w, int h) {
  BinaryMask m(width, height);
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x)
      if (x >= 0 && y >= 0 && x < width && y < height) m.set(x, y, true);
  return m;
}

// Per-pixel vote count compared against thr, read through at().
inline BinaryMask VoteOracle(const std::vector<BinaryMask>& masks, int thr) {
  BinaryMask out(masks[0].width(), masks[0].height());
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      int votes = 0;
      for (const BinaryMask& m : masks) votes += m.at(x, y) ? 1 : 0;
      out.set(x, y, votes >= thr);
    }
  }
  return out;
}

// Boundary by explicit 4-neighbourhood enumeration.
inline std::vector<std::pair<int, int>> BoundaryOracle(const BinaryMask& m) {
  std::vector<std::pair<int, int>> pts;
  const int dx[] = {1, -1, 0, 0};
  const int dy[] = {0, 0, 1, -1};
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m.at(x, y)) continue;
      for (int k = 0; k < 4; ++k) {
        const int xx = x + dx[k], yy = y + dy[k];
        if (xx < 0 || yy < 0 || xx >= m.width() || yy >= m.height() ||
            !m.at(xx, yy)) {
          pts.emplace_back(x, y);
          break;
        }
      }
    }
  }
  return pts;
}

// F-measure by comparing every boundary pixel pair.
inline double ContourOracle(const BinaryMask& pred, const BinaryMask& gt,
                            int radius) {
  const auto pb = BoundaryOracle(pred);
  const auto gb = BoundaryOracle(gt);
  if (pb.empty() && gb.empty()) return 1.0;
  if (pb.empty() || gb.empty()) return 0.0;
  auto matched = [radius](const std::vector<std::pair<int, int>>& from,
                          const std::vector<std::pair<int, int>>& to) {
    int64_t hits = 0;
    for (const auto& [x, y] : from) {
      for (const auto& [u, v] : to) {
        const int64_t d2 = static_cast<int64_t>(x - u) * (x - u) +
                           static_cast<int64_t>(y - v) * (y - v);
        if (d2 <= static_cast<int64_t>(radius) * radius) {
          ++hits;
          break;
        }
      }
    }
    return hits;
  };
  const double p = static_cast<double>(matched(pb, gb)) / pb.size();
  const double r = static_cast<double>(matched(gb, pb)) / gb.size();
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

// Direct shift by (dx, dy) with clipping, built pixel by pixel.
inline BinaryMask ShiftOracle(const BinaryMask& m, int dx, int dy) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      const int sx = x - dx, sy = y - dy;
      if (sx >= 0 && sy >= 0 && sx < m.width() && sy < m.height() &&
          m.at(sx, sy)) {
        out.set(x, y, true);
      }
    }
  }
  return out;
}

// Fresh directory below the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rvos-test-" + std::to_string(rd()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const {
    return path_ / s;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
}  // namespace rvos

#endif  // RVOS_TESTS_TEST_UTIL_H_
