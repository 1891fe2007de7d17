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

#include "rvos/mask.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "rvos/error.h"
#include "rvos/kernels.h"

namespace rvos {

namespace {

void CheckDims(int width, int height) {
  if (width <= 0 || height <= 0) {
    std::ostringstream msg;
    msg << "mask dimensions must be positive, got " << width << "x" << height;
    throw ShapeError(msg.str());
  }
}

void CheckSameShape(int aw, int ah, int bw, int bh, const char* what) {
  if (aw != bw || ah != bh) {
    std::ostringstream msg;
    msg << what << ": shape mismatch " << aw << "x" << ah << " vs " << bw
        << "x" << bh;
    throw ShapeError(msg.str());
  }
}

}  // namespace

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height) {
  CheckDims(width, height);
  pixels_.assign(static_cast<size_t>(width) * height, 0);
}

BinaryMask BinaryMask::FromPixels(int width, int height,
                                  std::vector<uint8_t> pixels) {
  BinaryMask m(width, height);
  if (pixels.size() != m.pixels_.size()) {
    std::ostringstream msg;
    msg << "expected " << m.pixels_.size() << " pixels for " << width << "x"
        << height << ", got " << pixels.size();
    throw ShapeError(msg.str());
  }
  for (uint8_t& v : pixels) v = v != 0;
  m.pixels_ = std::move(pixels);
  return m;
}

BinaryMask BinaryMask::FromRows(
    std::initializer_list<std::initializer_list<int>> rows) {
  const int height = static_cast<int>(rows.size());
  const int width = height > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  BinaryMask m(width, height);
  int y = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != width) {
      throw ShapeError("ragged rows in mask literal");
    }
    int x = 0;
    for (int v : row) m.set(x++, y, v != 0);
    ++y;
  }
  return m;
}

BinaryMask BinaryMask::Full(int width, int height) {
  BinaryMask m(width, height);
  std::fill(m.pixels_.begin(), m.pixels_.end(), 1);
  return m;
}

MaskSequence::MaskSequence(std::vector<BinaryMask> frames,
                           std::vector<std::string> frame_ids)
    : frames_(std::move(frames)), frame_ids_(std::move(frame_ids)) {
  if (frames_.empty()) {
    throw ConsistencyError("mask sequence needs at least one frame");
  }
  if (frames_.size() != frame_ids_.size()) {
    std::ostringstream msg;
    msg << "mask sequence has " << frames_.size() << " frames but "
        << frame_ids_.size() << " frame ids";
    throw ConsistencyError(msg.str());
  }
  for (size_t t = 1; t < frames_.size(); ++t) {
    if (!frames_[t].SameShape(frames_[0])) {
      std::ostringstream msg;
      msg << "frame " << frame_ids_[t] << " is " << frames_[t].width() << "x"
          << frames_[t].height() << ", sequence is " << frames_[0].width()
          << "x" << frames_[0].height();
      throw ShapeError(msg.str());
    }
    if (!(frame_ids_[t - 1] < frame_ids_[t])) {
      throw ConsistencyError("frame ids must be unique and ascending: '" +
                             frame_ids_[t - 1] + "' then '" + frame_ids_[t] +
                             "'");
    }
  }
}

ConfidenceSeries::ConfidenceSeries(std::vector<double> scores)
    : scores_(std::move(scores)) {
  for (size_t i = 0; i < scores_.size(); ++i) {
    const double s = scores_[i];
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      std::ostringstream msg;
      msg << "confidence at position " << i << " is " << s
          << ", expected a value in [0, 1]";
      throw InputError(msg.str());
    }
  }
}

void ConfidenceSeries::CheckPairedWith(const MaskSequence& seq) const {
  if (length() != seq.length()) {
    std::ostringstream msg;
    msg << "confidence series has " << length() << " scores for "
        << seq.length() << " frames";
    throw ConsistencyError(msg.str());
  }
}

VoteGrid::VoteGrid(int width, int height) : width_(width), height_(height) {
  CheckDims(width, height);
  counts_.assign(static_cast<size_t>(width) * height, 0);
}

void VoteGrid::Add(const BinaryMask& mask) {
  CheckSameShape(width_, height_, mask.width(), mask.height(), "accumulate");
  kernels::omp::AddVotes(counts_, mask.pixels());
  ++members_;
}

int64_t PixelCount(const BinaryMask& m) {
  return kernels::omp::Count(m.pixels());
}

int64_t IntersectionCount(const BinaryMask& a, const BinaryMask& b) {
  CheckSameShape(a.width(), a.height(), b.width(), b.height(), "intersection");
  return kernels::omp::CountAnd(a.pixels(), b.pixels());
}

int64_t UnionCount(const BinaryMask& a, const BinaryMask& b) {
  CheckSameShape(a.width(), a.height(), b.width(), b.height(), "union");
  return kernels::omp::CountOr(a.pixels(), b.pixels());
}

VoteGrid Accumulate(VoteGrid grid, const BinaryMask& m) {
  grid.Add(m);
  return grid;
}

BinaryMask Threshold(const VoteGrid& grid, int thr) {
  if (thr < 1) {
    throw ConfigError("vote threshold must be >= 1, got " +
                      std::to_string(thr));
  }
  std::vector<uint8_t> out(grid.counts().size());
  kernels::omp::ThresholdVotes(grid.counts(), static_cast<uint32_t>(thr), out);
  return BinaryMask::FromPixels(grid.width(), grid.height(), std::move(out));
}

}  // namespace rvos
