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

#include "rvos/dataset_io.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rvos/error.h"

namespace rvos {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string Where(const std::string& video_id,
                  const std::string& expression_id = "") {
  std::string where = "video '" + video_id + "'";
  if (!expression_id.empty()) where += ", expression '" + expression_id + "'";
  return where;
}

ExpressionRecord ParseExpression(const std::string& video_id,
                                 const std::string& expression_id,
                                 const Json& node) {
  if (!node.is_object()) {
    throw SchemaError(Where(video_id, expression_id) + ": expected an object");
  }
  ExpressionRecord rec;
  rec.expression_id = expression_id;
  auto exp = node.find("exp");
  if (exp == node.end() || !exp->is_string()) {
    throw SchemaError(Where(video_id, expression_id) +
                      ": missing string field 'exp'");
  }
  rec.text = exp->get<std::string>();
  auto obj = node.find("obj_id");
  if (obj != node.end() && !obj->is_null()) {
    if (obj->is_string()) {
      rec.object_id = obj->get<std::string>();
    } else if (obj->is_number_integer()) {
      rec.object_id = std::to_string(obj->get<int64_t>());
    } else {
      throw SchemaError(Where(video_id, expression_id) +
                        ": 'obj_id' must be a string or integer");
    }
  }
  return rec;
}

VideoRecord ParseVideo(const std::string& video_id, const Json& node) {
  if (!node.is_object()) {
    throw SchemaError(Where(video_id) + ": expected an object");
  }
  VideoRecord video;
  video.video_id = video_id;

  auto frames = node.find("frames");
  if (frames == node.end() || !frames->is_array()) {
    throw SchemaError(Where(video_id) + ": missing array field 'frames'");
  }
  for (const Json& f : *frames) {
    if (!f.is_string()) {
      throw SchemaError(Where(video_id) + ": frame ids must be strings");
    }
    video.frame_ids.push_back(f.get<std::string>());
  }
  if (video.frame_ids.empty()) {
    throw SchemaError(Where(video_id) + ": 'frames' is empty");
  }
  for (size_t i = 1; i < video.frame_ids.size(); ++i) {
    if (!(video.frame_ids[i - 1] < video.frame_ids[i])) {
      throw SchemaError(Where(video_id) +
                        ": frames must be unique and ascending, got '" +
                        video.frame_ids[i - 1] + "' before '" +
                        video.frame_ids[i] + "'");
    }
  }

  auto exps = node.find("expressions");
  if (exps == node.end() || !exps->is_object()) {
    throw SchemaError(Where(video_id) +
                      ": missing object field 'expressions'");
  }
  for (const auto& [exp_id, exp_node] : exps->items()) {
    video.expressions.push_back(ParseExpression(video_id, exp_id, exp_node));
  }
  return video;
}

}  // namespace

const ExpressionRecord* VideoRecord::FindExpression(
    const std::string& id) const {
  for (const ExpressionRecord& e : expressions) {
    if (e.expression_id == id) return &e;
  }
  return nullptr;
}

std::vector<VideoRecord> ParseMeta(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("meta document is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object()) throw SchemaError("meta document must be an object");
  auto videos = doc.find("videos");
  if (videos == doc.end() || !videos->is_object()) {
    throw SchemaError("meta document lacks an object field 'videos'");
  }
  std::vector<VideoRecord> out;
  out.reserve(videos->size());
  for (const auto& [video_id, node] : videos->items()) {
    out.push_back(ParseVideo(video_id, node));
  }
  return out;
}

std::vector<VideoRecord> LoadMeta(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open meta file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseMeta(buf.str());
}

std::string SerializeMeta(const std::vector<VideoRecord>& videos) {
  Json doc;
  Json& vids = doc["videos"] = Json::object();
  for (const VideoRecord& v : videos) {
    Json node;
    Json& exps = node["expressions"] = Json::object();
    for (const ExpressionRecord& e : v.expressions) {
      Json ej;
      ej["exp"] = e.text;
      if (e.object_id) ej["obj_id"] = *e.object_id;
      exps[e.expression_id] = std::move(ej);
    }
    node["frames"] = v.frame_ids;
    vids[v.video_id] = std::move(node);
  }
  return doc.dump(2);
}

fs::path ResultsLayout::SequenceDir(const std::string& video_id,
                                    const std::string& expression_id) const {
  return root / video_id / expression_id;
}

fs::path ResultsLayout::MaskPath(const std::string& video_id,
                                 const std::string& expression_id,
                                 const std::string& frame_id) const {
  return SequenceDir(video_id, expression_id) / (frame_id + ".png");
}

void WriteResults(const ResultsLayout& layout, const VideoRecord& video,
                  const std::string& expression_id, const MaskSequence& seq,
                  const MaskPalette& palette) {
  if (seq.frame_ids() != video.frame_ids) {
    std::ostringstream msg;
    msg << Where(video.video_id, expression_id) << ": sequence has "
        << seq.length() << " frames that do not match the video's "
        << video.frame_ids.size() << " frame ids";
    throw ConsistencyError(msg.str());
  }
  for (int64_t t = 0; t < seq.length(); ++t) {
    WriteMaskPng(seq.frame(t),
                 layout.MaskPath(video.video_id, expression_id,
                                 seq.frame_ids()[t]),
                 palette);
  }
}

std::optional<fs::path> FindFrameImage(const fs::path& frames_root,
                                       const std::string& video_id,
                                       const std::string& frame_id) {
  for (const char* ext : {".jpg", ".jpeg", ".png"}) {
    fs::path p = frames_root / video_id / (frame_id + ext);
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p;
  }
  return std::nullopt;
}

MaskSequence ReadResults(const ResultsLayout& layout, const VideoRecord& video,
                         const std::string& expression_id) {
  std::vector<BinaryMask> frames;
  frames.reserve(video.frame_ids.size());
  for (const std::string& fid : video.frame_ids) {
    frames.push_back(
        ReadMaskPng(layout.MaskPath(video.video_id, expression_id, fid)));
  }
  return MaskSequence(std::move(frames), video.frame_ids);
}

}  // namespace rvos
