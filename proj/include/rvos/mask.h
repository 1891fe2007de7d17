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

#ifndef RVOS_MASK_H_
#define RVOS_MASK_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rvos {

// One object in one frame: a width x height grid of foreground indicators,
// stored row-major with the origin at the top-left. Each slot holds exactly
// 0 or 1.
class BinaryMask {
 public:
  // All-background mask. Throws ShapeError unless width, height > 0.
  BinaryMask(int width, int height);

  // Any nonzero byte in `pixels` becomes foreground.
  static BinaryMask FromPixels(int width, int height,
                               std::vector<uint8_t> pixels);
  // Row literal, mostly for tests: {{1, 0}, {0, 1}}.
  static BinaryMask FromRows(
      std::initializer_list<std::initializer_list<int>> rows);
  static BinaryMask Full(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int64_t size() const { return static_cast<int64_t>(pixels_.size()); }

  bool at(int x, int y) const {
    return pixels_[static_cast<size_t>(y) * width_ + x] != 0;
  }
  void set(int x, int y, bool value) {
    pixels_[static_cast<size_t>(y) * width_ + x] = value ? 1 : 0;
  }

  std::span<const uint8_t> pixels() const { return pixels_; }

  bool SameShape(const BinaryMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<uint8_t> pixels_;
};

// T aligned masks for one (video, expression) unit. All frames share one
// shape and frame ids are unique and strictly increasing.
class MaskSequence {
 public:
  MaskSequence(std::vector<BinaryMask> frames,
               std::vector<std::string> frame_ids);

  int64_t length() const { return static_cast<int64_t>(frames_.size()); }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }

  const std::vector<BinaryMask>& frames() const { return frames_; }
  const std::vector<std::string>& frame_ids() const { return frame_ids_; }
  const BinaryMask& frame(int64_t t) const { return frames_.at(t); }

  friend bool operator==(const MaskSequence&, const MaskSequence&) = default;

 private:
  std::vector<BinaryMask> frames_;
  std::vector<std::string> frame_ids_;
};

// Per-frame scores in [0, 1].
class ConfidenceSeries {
 public:
  ConfidenceSeries() = default;
  explicit ConfidenceSeries(std::vector<double> scores);

  // Throws ConsistencyError when the lengths differ.
  void CheckPairedWith(const MaskSequence& seq) const;

  const std::vector<double>& scores() const { return scores_; }
  int64_t length() const { return static_cast<int64_t>(scores_.size()); }
  bool empty() const { return scores_.empty(); }

  friend bool operator==(const ConfidenceSeries&,
                         const ConfidenceSeries&) = default;

 private:
  std::vector<double> scores_;
};

// Per-pixel vote counter. After N calls to Add every count lies in [0, N].
class VoteGrid {
 public:
  VoteGrid(int width, int height);

  void Add(const BinaryMask& mask);

  int width() const { return width_; }
  int height() const { return height_; }
  int members() const { return members_; }
  uint32_t count(int x, int y) const {
    return counts_[static_cast<size_t>(y) * width_ + x];
  }
  std::span<const uint32_t> counts() const { return counts_; }

  friend bool operator==(const VoteGrid&, const VoteGrid&) = default;

 private:
  int width_;
  int height_;
  int members_ = 0;
  std::vector<uint32_t> counts_;
};

int64_t PixelCount(const BinaryMask& m);
// Both throw ShapeError on a dimension mismatch.
int64_t IntersectionCount(const BinaryMask& a, const BinaryMask& b);
int64_t UnionCount(const BinaryMask& a, const BinaryMask& b);

// Returns `grid` with one vote added wherever `m` is foreground.
VoteGrid Accumulate(VoteGrid grid, const BinaryMask& m);

// Foreground iff count >= thr. Throws ConfigError when thr < 1.
BinaryMask Threshold(const VoteGrid& grid, int thr);

}  // namespace rvos

#endif  // RVOS_MASK_H_
