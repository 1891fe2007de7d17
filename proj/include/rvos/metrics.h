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

#ifndef RVOS_METRICS_H_
#define RVOS_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rvos/dataset_io.h"
#include "rvos/mask.h"

namespace rvos {

// Boundary match tolerance as a fraction of the image diagonal.
struct BoundaryParams {
  double tolerance_ratio = 0.008;

  // max(1, round(tolerance_ratio * sqrt(width^2 + height^2)))
  int RadiusFor(int width, int height) const;
};

struct SequenceScore {
  double j_mean = 0.0;
  double f_mean = 0.0;
  double jf = 0.0;

  static SequenceScore FromMeans(double j, double f) {
    return {j, f, (j + f) / 2.0};
  }
};

// |pred & gt| / |pred | gt|; 1 when both are empty.
double RegionSimilarity(const BinaryMask& pred, const BinaryMask& gt);

// Foreground pixels 4-adjacent to background or to the image border.
BinaryMask BoundaryPixels(const BinaryMask& m);

// Boundary F-measure. A boundary pixel of one mask counts as matched when a
// boundary pixel of the other lies within the tolerance radius (Euclidean).
// Both boundaries empty gives 1; exactly one empty, or no matches, gives 0.
double ContourAccuracy(const BinaryMask& pred, const BinaryMask& gt,
                       const BoundaryParams& params = {});
double ContourAccuracyAtRadius(const BinaryMask& pred, const BinaryMask& gt,
                               int radius);

struct FrameScores {
  std::vector<double> j;
  std::vector<double> f;

  SequenceScore Mean() const;
};

// Per-frame J and F of aligned sequences. Throws ShapeError/ConsistencyError
// when they are not aligned.
FrameScores ScoreSequence(const MaskSequence& pred, const MaskSequence& gt,
                          const BoundaryParams& params = {});

enum class Aggregation {
  kSequence,  // every (video, expression) weighs the same
  kFrame,     // every frame weighs the same
};

Aggregation ParseAggregation(const std::string& name);

struct EvaluationRow {
  std::string video_id;
  std::string expression_id;
  SequenceScore score;
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;  // meta order
  SequenceScore global;

  // Header "video_id,expression_id,J,F,JF", one row per sequence, then a
  // "GLOBAL" row. Values are printed with shortest round-trip precision.
  std::string ToCsv() const;
};

// Scores every (video, expression) of `meta`. Before any scoring, all
// missing prediction or ground-truth files are collected and reported in one
// EvaluationError.
EvaluationReport Evaluate(const ResultsLayout& predictions,
                          const ResultsLayout& ground_truth,
                          const std::vector<VideoRecord>& meta,
                          const BoundaryParams& params = {},
                          Aggregation aggregation = Aggregation::kSequence,
                          int parallelism = 1);

}  // namespace rvos

#endif  // RVOS_METRICS_H_
