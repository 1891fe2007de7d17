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

#ifndef RVOS_KEYFRAME_H_
#define RVOS_KEYFRAME_H_

#include <cstdint>

#include "rvos/mask.h"

namespace rvos {

struct KeyframeChoice {
  int64_t index = 0;  // zero-based frame position
  double score = 0.0;

  friend bool operator==(const KeyframeChoice&,
                         const KeyframeChoice&) = default;
};

// Frame with the highest confidence; the lowest index wins ties. Throws
// InputError on an empty series.
KeyframeChoice SelectKeyframe(const ConfidenceSeries& scores);

}  // namespace rvos

#endif  // RVOS_KEYFRAME_H_
