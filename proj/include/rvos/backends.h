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

#ifndef RVOS_BACKENDS_H_
#define RVOS_BACKENDS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvos/dataset_io.h"
#include "rvos/mask.h"

namespace rvos {

enum class BackendKind {
  kExternalProcess,
  // Segmenter only: reads masks (and optional scores.json) from a results
  // tree given by parameter "masks_root".
  kOracle,
  // Propagator only: broadcasts the key mask.
  kIdentity,
  // Propagator only: moves the key mask by ("dx", "dy") pixels per frame,
  // forward after the keyframe and backward before it, clipping at borders.
  kTranslation,
};

std::string ToString(BackendKind kind);
// Accepts "external-process", "oracle", "identity", "translation".
BackendKind ParseBackendKind(const std::string& name);

struct BackendDescriptor {
  BackendKind kind = BackendKind::kIdentity;
  // Shell command; {request_dir} and {response_dir} are replaced by quoted
  // absolute paths.
  std::string command_template;
  double timeout_seconds = 600.0;
  std::map<std::string, std::string> parameters;
  // Extra variables for the otherwise empty child environment.
  std::map<std::string, std::string> environment;

  // Throws ConfigError, e.g. for an external backend without a command.
  void Validate() const;
};

struct SegmenterOutput {
  MaskSequence masks;
  ConfidenceSeries confidences;
};

struct PropagationRequest {
  std::string video_id;
  std::string expression;  // referring sentence, informational
  BinaryMask key_mask;
  int64_t key_index = 0;
  std::vector<std::string> frame_ids;

  // Throws InputError unless 0 <= key_index < frame_ids.size().
  void Validate() const;
};

// Where external backends exchange files. Each call creates (and afterwards
// removes, unless keep_exchange_dirs) a private directory below work_root;
// an empty work_root means the system temp directory.
struct BackendContext {
  std::filesystem::path work_root;
  bool keep_exchange_dirs = false;
};

// One mask and one confidence per frame of `video`, in frame order. Throws
// BackendError when the process fails or times out and ProtocolError when
// its response is incomplete or malformed.
SegmenterOutput RunSegmenter(const BackendDescriptor& backend,
                             const VideoRecord& video,
                             const ExpressionRecord& expression,
                             const std::filesystem::path& frames_root,
                             const BackendContext& ctx = {});

// A mask for every requested frame. The output at key_index always equals
// the key mask; a backend that returns anything else is a ProtocolError.
MaskSequence RunPropagator(const BackendDescriptor& backend,
                           const PropagationRequest& request,
                           const std::filesystem::path& frames_root,
                           const BackendContext& ctx = {});

// Reads <root>/<video>/<expression>/<frame>.png for every frame plus
// scores.json in the same directory. Missing scores give all-ones unless
// `require_scores`, which raises InputError.
SegmenterOutput LoadPrecomputed(const std::filesystem::path& root,
                                const VideoRecord& video,
                                const std::string& expression_id,
                                bool require_scores);

// Shifts foreground by (dx, dy); pixels leaving the image are dropped.
BinaryMask ShiftMask(const BinaryMask& mask, int dx, int dy);

// Request/response documents of the exchange protocol.
std::string SerializeExchangeRequest(const std::string& video_id,
                                     const std::string& expression,
                                     const std::vector<std::string>& frame_ids,
                                     std::optional<int64_t> key_index);
std::vector<double> ParseScores(const std::string& text);

}  // namespace rvos

#endif  // RVOS_BACKENDS_H_
