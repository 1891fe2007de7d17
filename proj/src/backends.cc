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

#include "rvos/backends.h"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "rvos/error.h"
#include "rvos/image_io.h"
#include "rvos/subprocess.h"

namespace rvos {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw WriteError("cannot write " + path.string());
}

int IntParameter(const BackendDescriptor& b, const std::string& name,
                 int fallback) {
  auto it = b.parameters.find(name);
  if (it == b.parameters.end()) return fallback;
  try {
    size_t used = 0;
    const int v = std::stoi(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(name);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("backend parameter '" + name +
                      "' must be an integer, got '" + it->second + "'");
  }
}

void ReplaceAll(std::string& s, const std::string& from,
                const std::string& to) {
  for (size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

// Private request/response directories for one backend call.
class ExchangeDir {
 public:
  explicit ExchangeDir(const BackendContext& ctx) : keep_(ctx.keep_exchange_dirs) {
    static std::atomic<uint64_t> counter{0};
    const fs::path base =
        ctx.work_root.empty() ? fs::temp_directory_path() : ctx.work_root;
    root_ = fs::absolute(base / ("rvos-" + std::to_string(::getpid()) + "-" +
                                 std::to_string(counter++)));
    std::error_code ec;
    fs::remove_all(root_, ec);
    fs::create_directories(request_dir(), ec);
    if (!ec) fs::create_directories(response_dir(), ec);
    if (ec) {
      throw BackendError("cannot create exchange directory " +
                         root_.string() + ": " + ec.message());
    }
  }
  ~ExchangeDir() {
    if (keep_) return;
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  ExchangeDir(const ExchangeDir&) = delete;
  ExchangeDir& operator=(const ExchangeDir&) = delete;

  fs::path request_dir() const { return root_ / "request"; }
  fs::path response_dir() const { return root_ / "response"; }
  fs::path log_path() const { return root_ / "backend.log"; }

 private:
  fs::path root_;
  bool keep_;
};

void StageFrames(const fs::path& frames_root, const std::string& video_id,
                 const std::vector<std::string>& frame_ids,
                 const fs::path& request_dir) {
  for (const std::string& fid : frame_ids) {
    auto src = FindFrameImage(frames_root, video_id, fid);
    if (!src) {
      throw InputError("missing frame image for video '" + video_id +
                       "', frame '" + fid + "' under " + frames_root.string());
    }
    std::error_code ec;
    fs::copy_file(*src, request_dir / (fid + src->extension().string()),
                  fs::copy_options::overwrite_existing, ec);
    if (ec) {
      throw BackendError("cannot stage frame " + src->string() + ": " +
                         ec.message());
    }
  }
}

void Invoke(const BackendDescriptor& backend, const ExchangeDir& dir) {
  std::string cmd = backend.command_template;
  ReplaceAll(cmd, "{request_dir}", ShellQuote(dir.request_dir().string()));
  ReplaceAll(cmd, "{response_dir}", ShellQuote(dir.response_dir().string()));
  const ProcessResult r = RunShellCommand(cmd, backend.environment,
                                          backend.timeout_seconds,
                                          dir.log_path());
  if (r.timed_out) {
    std::ostringstream msg;
    msg << "backend timed out after " << backend.timeout_seconds
        << "s: " << cmd << "\n" << r.log_tail;
    throw BackendError(msg.str());
  }
  if (r.exit_code != 0) {
    std::ostringstream msg;
    msg << "backend exited with status " << r.exit_code << ": " << cmd << "\n"
        << r.log_tail;
    throw BackendError(msg.str());
  }
}

MaskSequence ReadResponseMasks(const fs::path& response_dir,
                               const std::vector<std::string>& frame_ids) {
  std::vector<BinaryMask> frames;
  frames.reserve(frame_ids.size());
  for (size_t t = 0; t < frame_ids.size(); ++t) {
    const fs::path p = response_dir / (frame_ids[t] + ".png");
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) {
      throw ProtocolError("backend response is missing the mask for frame '" +
                          frame_ids[t] + "' (position " + std::to_string(t) +
                          ")");
    }
    try {
      frames.push_back(ReadMaskPng(p));
    } catch (const DecodeError& e) {
      throw ProtocolError(std::string("backend mask unreadable: ") + e.what());
    }
    if (!frames.back().SameShape(frames.front())) {
      throw ProtocolError("backend mask for frame '" + frame_ids[t] +
                          "' differs in size from the first frame");
    }
  }
  return MaskSequence(std::move(frames), frame_ids);
}

SegmenterOutput RunExternalSegmenter(const BackendDescriptor& backend,
                                     const VideoRecord& video,
                                     const ExpressionRecord& expression,
                                     const fs::path& frames_root,
                                     const BackendContext& ctx) {
  ExchangeDir dir(ctx);
  WriteFile(dir.request_dir() / "request.json",
            SerializeExchangeRequest(video.video_id, expression.text,
                                     video.frame_ids, std::nullopt));
  StageFrames(frames_root, video.video_id, video.frame_ids, dir.request_dir());
  Invoke(backend, dir);

  MaskSequence masks = ReadResponseMasks(dir.response_dir(), video.frame_ids);
  const fs::path scores_path = dir.response_dir() / "scores.json";
  std::error_code ec;
  if (!fs::is_regular_file(scores_path, ec)) {
    throw ProtocolError("segmenter response lacks scores.json");
  }
  ConfidenceSeries scores(ParseScores(ReadFile(scores_path)));
  if (scores.length() != masks.length()) {
    throw ProtocolError("scores.json has " + std::to_string(scores.length()) +
                        " entries for " + std::to_string(masks.length()) +
                        " frames");
  }
  return {std::move(masks), std::move(scores)};
}

MaskSequence RunExternalPropagator(const BackendDescriptor& backend,
                                   const PropagationRequest& req,
                                   const fs::path& frames_root,
                                   const BackendContext& ctx) {
  ExchangeDir dir(ctx);
  WriteFile(dir.request_dir() / "request.json",
            SerializeExchangeRequest(req.video_id, req.expression,
                                     req.frame_ids, req.key_index));
  WriteMaskPng(req.key_mask, dir.request_dir() / "key.png");
  StageFrames(frames_root, req.video_id, req.frame_ids, dir.request_dir());
  Invoke(backend, dir);
  return ReadResponseMasks(dir.response_dir(), req.frame_ids);
}

MaskSequence Translate(const PropagationRequest& req, int dx, int dy) {
  const size_t n = req.frame_ids.size();
  const size_t key = static_cast<size_t>(req.key_index);
  std::vector<BinaryMask> frames(n, req.key_mask);
  for (size_t t = key + 1; t < n; ++t) {
    frames[t] = ShiftMask(frames[t - 1], dx, dy);
  }
  for (size_t t = key; t-- > 0;) {
    frames[t] = ShiftMask(frames[t + 1], -dx, -dy);
  }
  return MaskSequence(std::move(frames), req.frame_ids);
}

}  // namespace

std::string ToString(BackendKind kind) {
  switch (kind) {
    case BackendKind::kExternalProcess:
      return "external-process";
    case BackendKind::kOracle:
      return "oracle";
    case BackendKind::kIdentity:
      return "identity";
    case BackendKind::kTranslation:
      return "translation";
  }
  return "unknown";
}

BackendKind ParseBackendKind(const std::string& name) {
  for (BackendKind k : {BackendKind::kExternalProcess, BackendKind::kOracle,
                        BackendKind::kIdentity, BackendKind::kTranslation}) {
    if (ToString(k) == name) return k;
  }
  throw ConfigError("unknown backend kind '" + name + "'");
}

void BackendDescriptor::Validate() const {
  if (kind == BackendKind::kExternalProcess && command_template.empty()) {
    throw ConfigError("external-process backend needs a command template");
  }
  if (!(timeout_seconds > 0)) {
    throw ConfigError("backend timeout must be positive");
  }
  if (kind == BackendKind::kOracle && !parameters.contains("masks_root")) {
    throw ConfigError("oracle backend needs parameter 'masks_root'");
  }
  if (kind == BackendKind::kTranslation) {
    IntParameter(*this, "dx", 0);
    IntParameter(*this, "dy", 0);
  }
}

void PropagationRequest::Validate() const {
  if (key_index < 0 || key_index >= static_cast<int64_t>(frame_ids.size())) {
    throw InputError("key index " + std::to_string(key_index) +
                     " outside a " + std::to_string(frame_ids.size()) +
                     "-frame video");
  }
}

BinaryMask ShiftMask(const BinaryMask& mask, int dx, int dy) {
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    const int yy = y + dy;
    if (yy < 0 || yy >= mask.height()) continue;
    for (int x = 0; x < mask.width(); ++x) {
      const int xx = x + dx;
      if (xx < 0 || xx >= mask.width()) continue;
      if (mask.at(x, y)) out.set(xx, yy, true);
    }
  }
  return out;
}

std::string SerializeExchangeRequest(const std::string& video_id,
                                     const std::string& expression,
                                     const std::vector<std::string>& frame_ids,
                                     std::optional<int64_t> key_index) {
  Json doc;
  doc["video_id"] = video_id;
  doc["expression"] = expression;
  doc["frame_ids"] = frame_ids;
  if (key_index) doc["key_index"] = *key_index;
  return doc.dump(2) + "\n";
}

std::vector<double> ParseScores(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ProtocolError(std::string("scores.json is not valid JSON: ") +
                        e.what());
  }
  if (!doc.is_array()) throw ProtocolError("scores.json must be an array");
  std::vector<double> scores;
  for (const Json& v : doc) {
    if (!v.is_number()) throw ProtocolError("scores.json holds a non-number");
    const double s = v.get<double>();
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ProtocolError("score " + v.dump() + " outside [0, 1]");
    }
    scores.push_back(s);
  }
  return scores;
}

SegmenterOutput LoadPrecomputed(const fs::path& root, const VideoRecord& video,
                                const std::string& expression_id,
                                bool require_scores) {
  const ResultsLayout layout{root};
  std::vector<BinaryMask> frames;
  for (const std::string& fid : video.frame_ids) {
    const fs::path p = layout.MaskPath(video.video_id, expression_id, fid);
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) {
      throw InputError("missing precomputed mask " + p.string());
    }
    frames.push_back(ReadMaskPng(p));
  }
  MaskSequence masks(std::move(frames), video.frame_ids);

  const fs::path scores_path =
      layout.SequenceDir(video.video_id, expression_id) / "scores.json";
  std::error_code ec;
  std::vector<double> scores;
  if (fs::is_regular_file(scores_path, ec)) {
    try {
      scores = ParseScores(ReadFile(scores_path));
    } catch (const ProtocolError& e) {
      throw InputError(scores_path.string() + ": " + e.what());
    }
  } else if (require_scores) {
    throw InputError("missing " + scores_path.string());
  } else {
    scores.assign(video.frame_ids.size(), 1.0);
  }
  ConfidenceSeries series(std::move(scores));
  series.CheckPairedWith(masks);
  return {std::move(masks), std::move(series)};
}

SegmenterOutput RunSegmenter(const BackendDescriptor& backend,
                             const VideoRecord& video,
                             const ExpressionRecord& expression,
                             const fs::path& frames_root,
                             const BackendContext& ctx) {
  backend.Validate();
  switch (backend.kind) {
    case BackendKind::kOracle:
      return LoadPrecomputed(backend.parameters.at("masks_root"), video,
                             expression.expression_id, false);
    case BackendKind::kExternalProcess:
      return RunExternalSegmenter(backend, video, expression, frames_root,
                                  ctx);
    default:
      throw ConfigError(ToString(backend.kind) +
                        " backend cannot act as a segmenter");
  }
}

MaskSequence RunPropagator(const BackendDescriptor& backend,
                           const PropagationRequest& req,
                           const fs::path& frames_root,
                           const BackendContext& ctx) {
  backend.Validate();
  req.Validate();
  MaskSequence out = [&] {
    switch (backend.kind) {
      case BackendKind::kIdentity:
        return MaskSequence(
            std::vector<BinaryMask>(req.frame_ids.size(), req.key_mask),
            req.frame_ids);
      case BackendKind::kTranslation:
        return Translate(req, IntParameter(backend, "dx", 0),
                         IntParameter(backend, "dy", 0));
      case BackendKind::kExternalProcess:
        return RunExternalPropagator(backend, req, frames_root, ctx);
      default:
        throw ConfigError(ToString(backend.kind) +
                          " backend cannot act as a propagator");
    }
  }();
  if (!(out.frame(req.key_index) == req.key_mask)) {
    throw ProtocolError("propagator changed the key mask at frame '" +
                        req.frame_ids[req.key_index] + "'");
  }
  return out;
}

}  // namespace rvos
