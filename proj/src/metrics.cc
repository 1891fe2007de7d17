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

#include "rvos/metrics.h"

#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>

#include "rvos/error.h"
#include "rvos/kernels.h"

namespace rvos {

namespace fs = std::filesystem;

namespace {

void CheckShapes(const BinaryMask& a, const BinaryMask& b, const char* what) {
  if (!a.SameShape(b)) {
    std::ostringstream msg;
    msg << what << ": shape mismatch " << a.width() << "x" << a.height()
        << " vs " << b.width() << "x" << b.height();
    throw ShapeError(msg.str());
  }
}

std::vector<uint8_t> Dilate(const BinaryMask& m, int radius) {
  std::vector<uint8_t> out(m.pixels().size());
  kernels::omp::DilateDisk(m.width(), m.height(), m.pixels(), radius, out);
  return out;
}

void AppendNumber(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, end);
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

int BoundaryParams::RadiusFor(int width, int height) const {
  const double diag = std::sqrt(static_cast<double>(width) * width +
                                static_cast<double>(height) * height);
  const long r = std::lround(tolerance_ratio * diag);
  return r < 1 ? 1 : static_cast<int>(r);
}

double RegionSimilarity(const BinaryMask& pred, const BinaryMask& gt) {
  CheckShapes(pred, gt, "region similarity");
  const int64_t uni = UnionCount(pred, gt);
  if (uni == 0) return 1.0;
  return static_cast<double>(IntersectionCount(pred, gt)) /
         static_cast<double>(uni);
}

BinaryMask BoundaryPixels(const BinaryMask& m) {
  std::vector<uint8_t> out(m.pixels().size());
  kernels::omp::Boundary(m.width(), m.height(), m.pixels(), out);
  return BinaryMask::FromPixels(m.width(), m.height(), std::move(out));
}

double ContourAccuracyAtRadius(const BinaryMask& pred, const BinaryMask& gt,
                               int radius) {
  CheckShapes(pred, gt, "contour accuracy");
  if (radius < 1) throw ConfigError("boundary radius must be >= 1");
  const BinaryMask pred_b = BoundaryPixels(pred);
  const BinaryMask gt_b = BoundaryPixels(gt);
  const int64_t n_pred = PixelCount(pred_b);
  const int64_t n_gt = PixelCount(gt_b);
  if (n_pred == 0 && n_gt == 0) return 1.0;
  if (n_pred == 0 || n_gt == 0) return 0.0;

  const std::vector<uint8_t> gt_zone = Dilate(gt_b, radius);
  const std::vector<uint8_t> pred_zone = Dilate(pred_b, radius);
  const int64_t pred_hits = kernels::omp::CountAnd(pred_b.pixels(), gt_zone);
  const int64_t gt_hits = kernels::omp::CountAnd(gt_b.pixels(), pred_zone);

  const double precision =
      static_cast<double>(pred_hits) / static_cast<double>(n_pred);
  const double recall = static_cast<double>(gt_hits) / static_cast<double>(n_gt);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double ContourAccuracy(const BinaryMask& pred, const BinaryMask& gt,
                       const BoundaryParams& params) {
  return ContourAccuracyAtRadius(pred, gt,
                                 params.RadiusFor(gt.width(), gt.height()));
}

SequenceScore FrameScores::Mean() const {
  return SequenceScore::FromMeans(rvos::Mean(j), rvos::Mean(f));
}

FrameScores ScoreSequence(const MaskSequence& pred, const MaskSequence& gt,
                          const BoundaryParams& params) {
  if (pred.frame_ids() != gt.frame_ids()) {
    throw ConsistencyError("prediction and ground truth frame ids differ");
  }
  FrameScores out;
  out.j.reserve(pred.length());
  out.f.reserve(pred.length());
  for (int64_t t = 0; t < pred.length(); ++t) {
    out.j.push_back(RegionSimilarity(pred.frame(t), gt.frame(t)));
    out.f.push_back(ContourAccuracy(pred.frame(t), gt.frame(t), params));
  }
  return out;
}

Aggregation ParseAggregation(const std::string& name) {
  if (name == "sequence") return Aggregation::kSequence;
  if (name == "frame") return Aggregation::kFrame;
  throw ConfigError("aggregation must be 'sequence' or 'frame', got '" +
                    name + "'");
}

std::string EvaluationReport::ToCsv() const {
  std::string out = "video_id,expression_id,J,F,JF\n";
  auto row = [&](const std::string& vid, const std::string& exp,
                 const SequenceScore& s) {
    out += vid;
    out += ',';
    out += exp;
    out += ',';
    AppendNumber(out, s.j_mean);
    out += ',';
    AppendNumber(out, s.f_mean);
    out += ',';
    AppendNumber(out, s.jf);
    out += '\n';
  };
  for (const EvaluationRow& r : rows) row(r.video_id, r.expression_id, r.score);
  row("GLOBAL", "", global);
  return out;
}

EvaluationReport Evaluate(const ResultsLayout& predictions,
                          const ResultsLayout& ground_truth,
                          const std::vector<VideoRecord>& meta,
                          const BoundaryParams& params,
                          Aggregation aggregation, int parallelism) {
  struct Unit {
    const VideoRecord* video;
    const ExpressionRecord* expression;
  };
  std::vector<Unit> units;
  std::vector<std::string> missing;
  for (const VideoRecord& v : meta) {
    for (const ExpressionRecord& e : v.expressions) {
      units.push_back({&v, &e});
      for (const std::string& fid : v.frame_ids) {
        for (const auto* layout : {&predictions, &ground_truth}) {
          const fs::path p = layout->MaskPath(v.video_id, e.expression_id, fid);
          std::error_code ec;
          if (!fs::is_regular_file(p, ec)) missing.push_back(p.string());
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = std::to_string(missing.size()) + " mask file(s) missing:";
    for (const std::string& m : missing) msg += "\n  " + m;
    throw EvaluationError(msg);
  }
  if (units.empty()) throw EvaluationError("meta lists no expressions");

  const int64_t n = static_cast<int64_t>(units.size());
  std::vector<FrameScores> scores(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(parallelism < 1 ? 1 : parallelism)
  for (int64_t i = 0; i < n; ++i) {
    try {
      const Unit& u = units[i];
      scores[i] = ScoreSequence(
          ReadResults(predictions, *u.video, u.expression->expression_id),
          ReadResults(ground_truth, *u.video, u.expression->expression_id),
          params);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (int64_t i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw EvaluationError("video '" + units[i].video->video_id +
                            "', expression '" +
                            units[i].expression->expression_id + "': " +
                            e.what());
    }
  }

  EvaluationReport report;
  FrameScores all_frames;
  std::vector<double> seq_j, seq_f;
  for (int64_t i = 0; i < n; ++i) {
    const SequenceScore s = scores[i].Mean();
    report.rows.push_back(
        {units[i].video->video_id, units[i].expression->expression_id, s});
    seq_j.push_back(s.j_mean);
    seq_f.push_back(s.f_mean);
    all_frames.j.insert(all_frames.j.end(), scores[i].j.begin(),
                        scores[i].j.end());
    all_frames.f.insert(all_frames.f.end(), scores[i].f.begin(),
                        scores[i].f.end());
  }
  report.global = aggregation == Aggregation::kSequence
                      ? SequenceScore::FromMeans(Mean(seq_j), Mean(seq_f))
                      : all_frames.Mean();
  return report;
}

}  // namespace rvos
