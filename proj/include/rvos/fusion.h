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

#ifndef RVOS_FUSION_H_
#define RVOS_FUSION_H_

#include <span>
#include <string>
#include <vector>

#include "rvos/dataset_io.h"
#include "rvos/mask.h"

namespace rvos {

// Pixel-voting thresholds. A group described by several expressions uses
// thr_ratio; a group with a single expression (all votes come from different
// models on the same sentence) uses thr_s_ratio. Either ratio is turned into
// an integer vote count with ceil(ratio * N), clamped to [1, N].
struct FusionConfig {
  double thr_ratio = 0.5;
  double thr_s_ratio = 0.5;

  // Throws ConfigError unless both ratios lie in (0, 1].
  void Validate() const;
  int ThresholdFor(int members, int expressions) const;
};

struct MemberLabel {
  std::string model_id;
  std::string expression_id;

  friend bool operator==(const MemberLabel&, const MemberLabel&) = default;
};

// Aligned sequences voting for one target.
class FusionGroup {
 public:
  // Throws ConsistencyError when empty, when labels and members differ in
  // count, or when members disagree on frame ids or shape.
  FusionGroup(std::string key, std::vector<MaskSequence> members,
              std::vector<MemberLabel> labels);

  const std::string& key() const { return key_; }
  const std::vector<MaskSequence>& members() const { return members_; }
  const std::vector<MemberLabel>& labels() const { return labels_; }
  int size() const { return static_cast<int>(members_.size()); }
  // Distinct expression ids among the members.
  int ExpressionCount() const;
  std::vector<std::string> ExpressionIds() const;
  const std::vector<std::string>& frame_ids() const {
    return members_.front().frame_ids();
  }

 private:
  std::string key_;
  std::vector<MaskSequence> members_;
  std::vector<MemberLabel> labels_;
};

struct GroupInput {
  std::string model_id;
  ExpressionRecord expression;
  MaskSequence masks;
};

// Records sharing an object id form one group keyed "obj:<id>"; records
// without one are grouped per expression id under "exp:<id>". Groups appear
// in order of first occurrence. Throws ConsistencyError if the sequences are
// not all aligned.
std::vector<FusionGroup> GroupByTarget(std::vector<GroupInput> records);

// Per frame: sum member votes and keep pixels with at least
// cfg.ThresholdFor(N, expressions) votes.
MaskSequence FuseGroup(const FusionGroup& group, const FusionConfig& cfg);

// Same as FuseGroup with an explicit vote count (>= 1).
MaskSequence FuseGroupAt(const FusionGroup& group, int thr);

// Vote over same-shape masks with an absolute threshold.
BinaryMask FuseMasks(std::span<const BinaryMask> masks, int thr);

}  // namespace rvos

#endif  // RVOS_FUSION_H_
