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

#ifndef RVOS_DATASET_IO_H_
#define RVOS_DATASET_IO_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rvos/image_io.h"
#include "rvos/mask.h"

namespace rvos {

struct ExpressionRecord {
  std::string expression_id;
  std::string text;
  // Annotated target object. Expressions sharing an object id describe the
  // same target and are fused together.
  std::optional<std::string> object_id;

  friend bool operator==(const ExpressionRecord&,
                         const ExpressionRecord&) = default;
};

struct VideoRecord {
  std::string video_id;
  std::vector<std::string> frame_ids;  // non-empty, unique, ascending
  std::vector<ExpressionRecord> expressions;

  const ExpressionRecord* FindExpression(const std::string& id) const;

  friend bool operator==(const VideoRecord&, const VideoRecord&) = default;
};

// Parses a meta document of the form
//
//   {"videos": {"<video_id>": {
//       "expressions": {"<expression_id>": {"exp": "...", "obj_id": "1"}},
//       "frames": ["00000", "00005", ...]}}}
//
// Video and expression order follow the document. `obj_id` may be a string
// or an integer and may be absent. Throws ParseError for malformed JSON and
// SchemaError for missing or mistyped fields; both name the offending
// video/expression.
std::vector<VideoRecord> ParseMeta(const std::string& text);
std::vector<VideoRecord> LoadMeta(const std::filesystem::path& path);

// Inverse of ParseMeta; ParseMeta(SerializeMeta(v)) == v.
std::string SerializeMeta(const std::vector<VideoRecord>& videos);

// Results tree: <root>/<video_id>/<expression_id>/<frame_id>.png
struct ResultsLayout {
  std::filesystem::path root;

  std::filesystem::path SequenceDir(const std::string& video_id,
                                    const std::string& expression_id) const;
  std::filesystem::path MaskPath(const std::string& video_id,
                                 const std::string& expression_id,
                                 const std::string& frame_id) const;
};

// Writes one PNG per frame. Existing files are overwritten. Throws
// ConsistencyError if the sequence frame ids differ from the video's frames.
void WriteResults(const ResultsLayout& layout, const VideoRecord& video,
                  const std::string& expression_id, const MaskSequence& seq,
                  const MaskPalette& palette = {});

// Frame image <frames_root>/<video_id>/<frame_id>.{jpg,jpeg,png}, if any.
std::optional<std::filesystem::path> FindFrameImage(
    const std::filesystem::path& frames_root, const std::string& video_id,
    const std::string& frame_id);

MaskSequence ReadResults(const ResultsLayout& layout, const VideoRecord& video,
                         const std::string& expression_id);

}  // namespace rvos

#endif  // RVOS_DATASET_IO_H_
