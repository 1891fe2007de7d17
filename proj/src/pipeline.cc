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

#include "rvos/pipeline.h"

#include <chrono>
#include <map>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "rvos/error.h"
#include "rvos/keyframe.h"

namespace rvos {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Expressions of one video that describe one target.
struct Unit {
  const VideoRecord* video;
  std::string group_key;
  std::vector<const ExpressionRecord*> expressions;
};

std::vector<Unit> PlanUnits(const std::vector<VideoRecord>& meta) {
  std::vector<Unit> units;
  for (const VideoRecord& v : meta) {
    std::map<std::string, size_t> index;
    for (const ExpressionRecord& e : v.expressions) {
      const std::string key = e.object_id ? "obj:" + *e.object_id
                                          : "exp:" + e.expression_id;
      auto [it, inserted] = index.try_emplace(key, units.size());
      if (inserted) units.push_back({&v, key, {}});
      units[it->second].expressions.push_back(&e);
    }
  }
  return units;
}

class UnitRunner {
 public:
  UnitRunner(const PipelineConfig& cfg, const Unit& unit,
             const fs::path& frames_root)
      : cfg_(cfg), unit_(unit), frames_root_(frames_root) {}

  // Appends one record per completed stage, plus the failing one.
  bool Run(std::vector<StageRecord>& records) {
    records_ = &records;
    try {
      Segment();
      Fuse1();
      SelectKey();
      Propagate();
      Fuse2();
      Write();
      return true;
    } catch (const std::exception& e) {
      current_.ok = false;
      current_.error = e.what();
      Close();
      return false;
    }
  }

 private:
  void Open(const char* stage) {
    current_ = StageRecord{};
    current_.video_id = unit_.video->video_id;
    current_.group = unit_.group_key;
    current_.stage = stage;
    started_ = std::chrono::steady_clock::now();
  }

  void Close() {
    if (cfg_.report_timings) {
      current_.elapsed_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - started_)
                                .count();
    }
    records_->push_back(std::move(current_));
  }

  void Segment() {
    Open("segment");
    const VideoRecord& video = *unit_.video;
    for (const SourceConfig& src : cfg_.sources) {
      const bool is_ref = src.model_id == cfg_.reference_model;
      for (const ExpressionRecord* e : unit_.expressions) {
        SegmenterOutput out =
            src.kind == SourceConfig::Kind::kBackend
                ? RunSegmenter(src.backend, video, *e, frames_root_,
                               cfg_.backend_context)
                : LoadPrecomputed(src.path, video, e->expression_id, is_ref);
        if (out.masks.frame_ids() != video.frame_ids) {
          throw ConsistencyError("source '" + src.model_id +
                                 "' returned frames that differ from the "
                                 "video's frame list");
        }
        if (is_ref) reference_scores_.push_back(out.confidences);
        inputs_.push_back({src.model_id, *e, std::move(out.masks)});
      }
    }
    std::ostringstream detail;
    detail << inputs_.size() << " sequences from " << cfg_.sources.size()
           << " source(s) x " << unit_.expressions.size() << " expression(s)";
    current_.detail = detail.str();
    Close();
  }

  void Fuse1() {
    Open("fuse1");
    // The unit was planned from the same keys, so this yields one group.
    std::vector<FusionGroup> groups = GroupByTarget(std::move(inputs_));
    if (groups.size() != 1) {
      throw ConsistencyError("unit '" + unit_.group_key + "' split into " +
                             std::to_string(groups.size()) + " groups");
    }
    group_.emplace(std::move(groups.front()));
    const int thr =
        cfg_.fusion.ThresholdFor(group_->size(), group_->ExpressionCount());
    fused_.emplace(FuseGroupAt(*group_, thr));
    current_.detail = "N=" + std::to_string(group_->size()) +
                      " thr=" + std::to_string(thr);
    Close();
  }

  void SelectKey() {
    Open("keyframe");
    // Several expressions of the reference model: a frame's score is its best
    // score over those expressions.
    std::vector<double> combined(unit_.video->frame_ids.size(), 0.0);
    for (const ConfidenceSeries& s : reference_scores_) {
      for (size_t t = 0; t < combined.size(); ++t) {
        combined[t] = std::max(combined[t], s.scores()[t]);
      }
    }
    key_ = SelectKeyframe(ConfidenceSeries(std::move(combined)));
    std::ostringstream detail;
    detail << "index=" << key_.index << " frame="
           << unit_.video->frame_ids[key_.index] << " score=" << key_.score;
    current_.detail = detail.str();
    if (key_.score < cfg_.min_keyframe_score) {
      std::ostringstream w;
      w << "keyframe score " << key_.score << " below floor "
        << cfg_.min_keyframe_score;
      current_.warnings.push_back(w.str());
    }
    Close();
  }

  MaskSequence VariantSource(const std::string& variant) const {
    if (variant == kFusedVariant) return *fused_;
    std::vector<MaskSequence> members;
    std::vector<MemberLabel> labels;
    for (int i = 0; i < group_->size(); ++i) {
      if (group_->labels()[i].model_id != variant) continue;
      members.push_back(group_->members()[i]);
      labels.push_back(group_->labels()[i]);
    }
    return FuseGroup(FusionGroup(unit_.group_key + "/" + variant,
                                 std::move(members), std::move(labels)),
                     cfg_.fusion);
  }

  void Propagate() {
    Open("propagate");
    std::string text;
    for (const ExpressionRecord* e : unit_.expressions) {
      if (!text.empty()) text += " | ";
      text += e->text;
    }
    for (const std::string& variant : cfg_.ensemble_variants) {
      const MaskSequence source = VariantSource(variant);
      PropagationRequest req{unit_.video->video_id, text,
                             source.frame(key_.index), key_.index,
                             unit_.video->frame_ids};
      if (PixelCount(req.key_mask) == 0) {
        current_.warnings.push_back("variant '" + variant +
                                    "' has an empty keyframe mask");
      }
      propagated_.push_back(RunPropagator(cfg_.propagator, req, frames_root_,
                                          cfg_.backend_context));
      variant_labels_.push_back({variant, unit_.group_key});
    }
    current_.detail = std::to_string(propagated_.size()) + " variant(s) via " +
                      ToString(cfg_.propagator.kind);
    Close();
  }

  void Fuse2() {
    Open("fuse2");
    const int n = static_cast<int>(propagated_.size());
    const int thr = cfg_.ensemble.ThresholdFor(n, n);
    final_.emplace(FuseGroupAt(FusionGroup(unit_.group_key,
                                           std::move(propagated_),
                                           std::move(variant_labels_)),
                               thr));
    current_.detail = "N=" + std::to_string(n) + " thr=" + std::to_string(thr);
    Close();
  }

  void Write() {
    Open("write");
    for (const ExpressionRecord* e : unit_.expressions) {
      WriteResults(cfg_.output, *unit_.video, e->expression_id, *final_,
                   cfg_.palette);
    }
    current_.detail =
        std::to_string(unit_.expressions.size()) + " expression(s)";
    Close();
  }

  const PipelineConfig& cfg_;
  const Unit& unit_;
  const fs::path& frames_root_;
  std::vector<StageRecord>* records_ = nullptr;
  StageRecord current_;
  std::chrono::steady_clock::time_point started_;

  std::vector<GroupInput> inputs_;
  std::vector<ConfidenceSeries> reference_scores_;
  std::optional<FusionGroup> group_;
  std::optional<MaskSequence> fused_;
  KeyframeChoice key_;
  std::vector<MaskSequence> propagated_;
  std::vector<MemberLabel> variant_labels_;
  std::optional<MaskSequence> final_;
};

}  // namespace

std::string StageRecord::ToJson() const {
  Json j;
  j["video_id"] = video_id;
  j["group"] = group;
  j["stage"] = stage;
  j["status"] = ok ? "ok" : "failed";
  j["warnings"] = warnings;
  if (!detail.empty()) j["detail"] = detail;
  if (!ok) j["error"] = error;
  if (elapsed_ms) j["elapsed_ms"] = *elapsed_ms;
  return j.dump();
}

std::string RunReport::ToJsonLines() const {
  std::string out;
  for (const StageRecord& r : records) {
    out += r.ToJson();
    out += '\n';
  }
  return out;
}

RunReport RunPipeline(const PipelineConfig& cfg,
                      const std::vector<VideoRecord>& meta,
                      const fs::path& frames_root) {
  cfg.Validate();
  const std::vector<Unit> units = PlanUnits(meta);
  const int64_t n = static_cast<int64_t>(units.size());
  std::vector<std::vector<StageRecord>> per_unit(n);
  std::vector<char> ok(n, 0);

#pragma omp parallel for schedule(dynamic, 1) num_threads(cfg.parallelism)
  for (int64_t i = 0; i < n; ++i) {
    UnitRunner runner(cfg, units[i], frames_root);
    ok[i] = runner.Run(per_unit[i]);
  }

  RunReport report;
  report.units = static_cast<int>(n);
  for (int64_t i = 0; i < n; ++i) {
    if (!ok[i]) ++report.failed_units;
    for (StageRecord& r : per_unit[i]) report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace rvos
