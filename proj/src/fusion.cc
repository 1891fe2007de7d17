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

#include "rvos/fusion.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "rvos/error.h"

namespace rvos {

namespace {

void CheckRatio(double r, const char* name) {
  if (!(r > 0.0 && r <= 1.0)) {
    std::ostringstream msg;
    msg << name << " must lie in (0, 1], got " << r;
    throw ConfigError(msg.str());
  }
}

void CheckAligned(const MaskSequence& ref, const MaskSequence& other,
                  const std::string& what) {
  if (other.frame_ids() != ref.frame_ids()) {
    throw ConsistencyError(what + ": frame ids differ from the first member");
  }
  if (other.width() != ref.width() || other.height() != ref.height()) {
    std::ostringstream msg;
    msg << what << ": " << other.width() << "x" << other.height()
        << " masks, expected " << ref.width() << "x" << ref.height();
    throw ConsistencyError(msg.str());
  }
}

}  // namespace

void FusionConfig::Validate() const {
  CheckRatio(thr_ratio, "thr_ratio");
  CheckRatio(thr_s_ratio, "thr_s_ratio");
}

int FusionConfig::ThresholdFor(int members, int expressions) const {
  Validate();
  if (members < 1) throw ConfigError("fusion needs at least one member");
  const double ratio = expressions <= 1 ? thr_s_ratio : thr_ratio;
  // The epsilon keeps products like 0.3 * 10 from rounding up to 4.
  const int thr = static_cast<int>(std::ceil(ratio * members - 1e-9));
  return std::clamp(thr, 1, members);
}

FusionGroup::FusionGroup(std::string key, std::vector<MaskSequence> members,
                         std::vector<MemberLabel> labels)
    : key_(std::move(key)),
      members_(std::move(members)),
      labels_(std::move(labels)) {
  if (members_.empty()) {
    throw ConsistencyError("fusion group '" + key_ + "' has no members");
  }
  if (labels_.size() != members_.size()) {
    throw ConsistencyError("fusion group '" + key_ +
                           "': one label per member required");
  }
  for (size_t i = 1; i < members_.size(); ++i) {
    CheckAligned(members_[0], members_[i],
                 "fusion group '" + key_ + "' member " + labels_[i].model_id +
                     "/" + labels_[i].expression_id);
  }
}

std::vector<std::string> FusionGroup::ExpressionIds() const {
  std::vector<std::string> ids;
  for (const MemberLabel& l : labels_) {
    if (std::find(ids.begin(), ids.end(), l.expression_id) == ids.end()) {
      ids.push_back(l.expression_id);
    }
  }
  return ids;
}

int FusionGroup::ExpressionCount() const {
  return static_cast<int>(ExpressionIds().size());
}

std::vector<FusionGroup> GroupByTarget(std::vector<GroupInput> records) {
  for (size_t i = 1; i < records.size(); ++i) {
    CheckAligned(records[0].masks, records[i].masks,
                 "record " + records[i].model_id + "/" +
                     records[i].expression.expression_id);
  }

  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<MaskSequence>,
                                  std::vector<MemberLabel>>>
      buckets;
  for (GroupInput& r : records) {
    const std::string key = r.expression.object_id
                                ? "obj:" + *r.expression.object_id
                                : "exp:" + r.expression.expression_id;
    auto [it, inserted] = buckets.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.first.push_back(std::move(r.masks));
    it->second.second.push_back(
        {std::move(r.model_id), r.expression.expression_id});
  }

  std::vector<FusionGroup> groups;
  groups.reserve(order.size());
  for (const std::string& key : order) {
    auto& [members, labels] = buckets.at(key);
    groups.emplace_back(key, std::move(members), std::move(labels));
  }
  return groups;
}

BinaryMask FuseMasks(std::span<const BinaryMask> masks, int thr) {
  if (masks.empty()) throw ConfigError("nothing to fuse");
  VoteGrid grid(masks.front().width(), masks.front().height());
  for (const BinaryMask& m : masks) grid.Add(m);
  return Threshold(grid, thr);
}

MaskSequence FuseGroup(const FusionGroup& group, const FusionConfig& cfg) {
  return FuseGroupAt(group,
                     cfg.ThresholdFor(group.size(), group.ExpressionCount()));
}

MaskSequence FuseGroupAt(const FusionGroup& group, int thr) {
  const auto& ref = group.members().front();
  std::vector<BinaryMask> fused;
  fused.reserve(ref.length());
  for (int64_t t = 0; t < ref.length(); ++t) {
    VoteGrid grid(ref.width(), ref.height());
    for (const MaskSequence& member : group.members()) {
      grid.Add(member.frame(t));
    }
    fused.push_back(Threshold(grid, thr));
  }
  return MaskSequence(std::move(fused), ref.frame_ids());
}

}  // namespace rvos
