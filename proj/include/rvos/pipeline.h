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

#ifndef RVOS_PIPELINE_H_
#define RVOS_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rvos/backends.h"
#include "rvos/dataset_io.h"
#include "rvos/fusion.h"
#include "rvos/image_io.h"
#include "rvos/metrics.h"

namespace rvos {

struct SourceConfig {
  enum class Kind { kBackend, kPrecomputedDir };

  std::string model_id;
  Kind kind = Kind::kBackend;
  BackendDescriptor backend;   // kBackend
  std::filesystem::path path;  // kPrecomputedDir, a results tree
};

// Name of the ensemble variant built from the language-prior fusion of all
// sources. Any other variant name is a source model id, meaning that model's
// own (expression-fused) masks are propagated separately.
inline constexpr const char* kFusedVariant = "fused";

struct PipelineConfig {
  std::vector<SourceConfig> sources;
  // Its confidences alone choose the keyframe.
  std::string reference_model;
  FusionConfig fusion;      // first stage: language-prior fusion
  FusionConfig ensemble;    // second stage: vote over propagated variants
  std::vector<std::string> ensemble_variants = {kFusedVariant};
  BackendDescriptor propagator;
  BoundaryParams boundary;
  // Keyframes scoring below this still get used, with a warning.
  double min_keyframe_score = 0.0;
  int parallelism = 1;
  ResultsLayout output;
  MaskPalette palette;
  BackendContext backend_context;
  // Adds elapsed_ms to report records, which makes reports run-dependent.
  bool report_timings = false;

  // Throws ConfigError.
  void Validate() const;
};

// JSON config. Relative paths (source paths, the oracle "masks_root"
// parameter, output root, work_dir) resolve against `base_dir`.
//
//   {
//     "sources": [
//       {"model_id": "a", "kind": "backend",
//        "backend": {"kind": "external-process", "command": "...",
//                    "timeout": 600, "parameters": {}, "env": {}}},
//       {"model_id": "b", "kind": "precomputed-dir", "path": "runs/b"}],
//     "reference_model": "a",
//     "fusion": {"thr_ratio": 0.5, "thr_s_ratio": 0.5},
//     "ensemble": {"thr_ratio": 0.5, "variants": ["fused", "a"]},
//     "propagator": {"kind": "identity"},
//     "keyframe": {"min_score": 0.0},
//     "boundary": {"tolerance_ratio": 0.008},
//     "parallelism": 4,
//     "output": {"root": "out", "palette": [[0, 0, 0], [128, 0, 0]]},
//     "work_dir": "/tmp",
//     "keep_exchange_dirs": false,
//     "report_timings": false
//   }
PipelineConfig ParsePipelineConfig(const std::string& text,
                                   const std::filesystem::path& base_dir);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

inline constexpr const char* kStageNames[] = {"segment",   "fuse1",
                                              "keyframe",  "propagate",
                                              "fuse2",     "write"};

struct StageRecord {
  std::string video_id;
  std::string group;  // fusion group key
  std::string stage;  // one of kStageNames
  bool ok = true;
  std::vector<std::string> warnings;
  std::string detail;
  std::string error;
  std::optional<double> elapsed_ms;

  std::string ToJson() const;
};

struct RunReport {
  std::vector<StageRecord> records;  // unit order, stage order within a unit
  int units = 0;
  int failed_units = 0;

  // One JSON object per line.
  std::string ToJsonLines() const;
  bool ok() const { return failed_units == 0; }
};

// For every (video, fusion group): segment with every source, fuse, pick the
// keyframe from the reference model, propagate each ensemble variant from it,
// vote over the propagated variants, and write the result for every
// expression of the group. A failing unit is recorded and skipped.
RunReport RunPipeline(const PipelineConfig& cfg,
                      const std::vector<VideoRecord>& meta,
                      const std::filesystem::path& frames_root);

}  // namespace rvos

#endif  // RVOS_PIPELINE_H_
