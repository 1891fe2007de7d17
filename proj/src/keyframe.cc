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

#include "rvos/keyframe.h"

#include "rvos/error.h"

namespace rvos {

KeyframeChoice SelectKeyframe(const ConfidenceSeries& scores) {
  const auto& s = scores.scores();
  if (s.empty()) throw InputError("cannot select a keyframe from no scores");
  KeyframeChoice best{0, s[0]};
  for (size_t i = 1; i < s.size(); ++i) {
    // Strict comparison keeps the earliest maximum.
    if (s[i] > best.score) best = {static_cast<int64_t>(i), s[i]};
  }
  return best;
}

}  // namespace rvos
