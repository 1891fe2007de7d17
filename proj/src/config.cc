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

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rvos/error.h"
#include "rvos/pipeline.h"

namespace rvos {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

fs::path Resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

const Json* Child(const Json& node, const char* key) {
  auto it = node.find(key);
  return it == node.end() || it->is_null() ? nullptr : &*it;
}

std::string GetString(const Json& node, const char* key,
                      const std::string& where) {
  const Json* v = Child(node, key);
  if (!v || !v->is_string()) {
    throw ConfigError(where + ": missing string field '" + key + "'");
  }
  return v->get<std::string>();
}

double GetNumber(const Json& node, const char* key, double fallback,
                 const std::string& where) {
  const Json* v = Child(node, key);
  if (!v) return fallback;
  if (!v->is_number()) {
    throw ConfigError(where + ": field '" + key + "' must be a number");
  }
  return v->get<double>();
}

bool GetBool(const Json& node, const char* key, bool fallback,
             const std::string& where) {
  const Json* v = Child(node, key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    throw ConfigError(where + ": field '" + key + "' must be a boolean");
  }
  return v->get<bool>();
}

std::map<std::string, std::string> GetStringMap(const Json& node,
                                                const char* key,
                                                const std::string& where) {
  std::map<std::string, std::string> out;
  const Json* v = Child(node, key);
  if (!v) return out;
  if (!v->is_object()) {
    throw ConfigError(where + ": field '" + key + "' must be an object");
  }
  for (const auto& [k, value] : v->items()) {
    if (value.is_string()) {
      out[k] = value.get<std::string>();
    } else if (value.is_number_integer()) {
      out[k] = std::to_string(value.get<int64_t>());
    } else if (value.is_number() || value.is_boolean()) {
      out[k] = value.dump();
    } else {
      throw ConfigError(where + ": '" + key + "." + k +
                        "' must be a scalar");
    }
  }
  return out;
}

BackendDescriptor ParseBackend(const Json& node, const fs::path& base,
                               const std::string& where) {
  if (!node.is_object()) throw ConfigError(where + ": expected an object");
  BackendDescriptor b;
  b.kind = ParseBackendKind(GetString(node, "kind", where));
  if (const Json* cmd = Child(node, "command")) {
    if (!cmd->is_string()) {
      throw ConfigError(where + ": 'command' must be a string");
    }
    b.command_template = cmd->get<std::string>();
  }
  b.timeout_seconds = GetNumber(node, "timeout", b.timeout_seconds, where);
  b.parameters = GetStringMap(node, "parameters", where);
  b.environment = GetStringMap(node, "env", where);
  if (auto it = b.parameters.find("masks_root"); it != b.parameters.end()) {
    it->second = Resolve(base, it->second).string();
  }
  b.Validate();
  return b;
}

FusionConfig ParseFusion(const Json* node, const std::string& where) {
  FusionConfig f;
  if (!node) return f;
  if (!node->is_object()) throw ConfigError(where + ": expected an object");
  f.thr_ratio = GetNumber(*node, "thr_ratio", f.thr_ratio, where);
  f.thr_s_ratio = GetNumber(*node, "thr_s_ratio", f.thr_s_ratio, where);
  return f;
}

}  // namespace

void PipelineConfig::Validate() const {
  if (sources.empty()) throw ConfigError("config lists no sources");
  std::set<std::string> ids;
  for (const SourceConfig& s : sources) {
    if (s.model_id.empty()) throw ConfigError("source without model_id");
    if (!ids.insert(s.model_id).second) {
      throw ConfigError("duplicate source model_id '" + s.model_id + "'");
    }
    if (s.kind == SourceConfig::Kind::kBackend) {
      s.backend.Validate();
      if (s.backend.kind != BackendKind::kExternalProcess &&
          s.backend.kind != BackendKind::kOracle) {
        throw ConfigError("source '" + s.model_id + "': " +
                          ToString(s.backend.kind) +
                          " backend cannot segment");
      }
    } else if (s.path.empty()) {
      throw ConfigError("source '" + s.model_id + "' needs a path");
    }
  }
  if (!ids.contains(reference_model)) {
    throw ConfigError("reference_model '" + reference_model +
                      "' is not among the sources");
  }
  fusion.Validate();
  ensemble.Validate();
  if (ensemble_variants.empty()) {
    throw ConfigError("ensemble needs at least one variant");
  }
  std::set<std::string> seen;
  for (const std::string& v : ensemble_variants) {
    if (v != kFusedVariant && !ids.contains(v)) {
      throw ConfigError("ensemble variant '" + v +
                        "' is neither 'fused' nor a source model_id");
    }
    if (!seen.insert(v).second) {
      throw ConfigError("ensemble variant '" + v + "' listed twice");
    }
  }
  propagator.Validate();
  if (propagator.kind == BackendKind::kOracle) {
    throw ConfigError("oracle backend cannot propagate");
  }
  if (!(boundary.tolerance_ratio > 0)) {
    throw ConfigError("boundary tolerance_ratio must be positive");
  }
  if (!(min_keyframe_score >= 0.0 && min_keyframe_score <= 1.0)) {
    throw ConfigError("keyframe min_score must lie in [0, 1]");
  }
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  if (output.root.empty()) throw ConfigError("output root is not set");
  if (palette.colors.size() < 2 || palette.colors.size() > 256) {
    throw ConfigError("palette needs between 2 and 256 colors");
  }
}

PipelineConfig ParsePipelineConfig(const std::string& text,
                                   const fs::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig cfg;
  const Json* sources = Child(doc, "sources");
  if (!sources || !sources->is_array()) {
    throw ConfigError("config needs a 'sources' array");
  }
  for (size_t i = 0; i < sources->size(); ++i) {
    const Json& s = (*sources)[i];
    const std::string where = "sources[" + std::to_string(i) + "]";
    if (!s.is_object()) throw ConfigError(where + ": expected an object");
    SourceConfig src;
    src.model_id = GetString(s, "model_id", where);
    const std::string kind = GetString(s, "kind", where);
    if (kind == "backend") {
      src.kind = SourceConfig::Kind::kBackend;
      const Json* b = Child(s, "backend");
      if (!b) throw ConfigError(where + ": missing 'backend'");
      src.backend = ParseBackend(*b, base_dir, where + ".backend");
    } else if (kind == "precomputed-dir") {
      src.kind = SourceConfig::Kind::kPrecomputedDir;
      src.path = Resolve(base_dir, GetString(s, "path", where));
    } else {
      throw ConfigError(where + ": kind must be 'backend' or "
                                "'precomputed-dir', got '" + kind + "'");
    }
    cfg.sources.push_back(std::move(src));
  }
  cfg.reference_model = GetString(doc, "reference_model", "config");
  cfg.fusion = ParseFusion(Child(doc, "fusion"), "fusion");
  if (const Json* ens = Child(doc, "ensemble")) {
    cfg.ensemble = ParseFusion(ens, "ensemble");
    if (const Json* vars = Child(*ens, "variants")) {
      if (!vars->is_array()) {
        throw ConfigError("ensemble.variants must be an array");
      }
      cfg.ensemble_variants.clear();
      for (const Json& v : *vars) {
        if (!v.is_string()) {
          throw ConfigError("ensemble.variants must hold strings");
        }
        cfg.ensemble_variants.push_back(v.get<std::string>());
      }
    }
  }
  const Json* prop = Child(doc, "propagator");
  if (!prop) throw ConfigError("config needs a 'propagator'");
  cfg.propagator = ParseBackend(*prop, base_dir, "propagator");
  if (const Json* kf = Child(doc, "keyframe")) {
    cfg.min_keyframe_score =
        GetNumber(*kf, "min_score", cfg.min_keyframe_score, "keyframe");
  }
  if (const Json* b = Child(doc, "boundary")) {
    cfg.boundary.tolerance_ratio = GetNumber(
        *b, "tolerance_ratio", cfg.boundary.tolerance_ratio, "boundary");
  }
  const double par = GetNumber(doc, "parallelism", 1, "config");
  if (par != static_cast<int>(par)) {
    throw ConfigError("parallelism must be an integer");
  }
  cfg.parallelism = static_cast<int>(par);
  if (const Json* out = Child(doc, "output")) {
    if (Child(*out, "root")) {
      cfg.output.root = Resolve(base_dir, GetString(*out, "root", "output"));
    }
    if (const Json* pal = Child(*out, "palette")) {
      if (!pal->is_array()) throw ConfigError("output.palette must be an array");
      cfg.palette.colors.clear();
      for (const Json& c : *pal) {
        if (!c.is_array() || c.size() != 3) {
          throw ConfigError("palette entries must be [r, g, b]");
        }
        Rgb rgb{};
        for (int k = 0; k < 3; ++k) {
          if (!c[k].is_number_integer() || c[k].get<int>() < 0 ||
              c[k].get<int>() > 255) {
            throw ConfigError("palette components must be integers 0..255");
          }
          rgb[k] = static_cast<uint8_t>(c[k].get<int>());
        }
        cfg.palette.colors.push_back(rgb);
      }
    }
  }
  if (Child(doc, "work_dir")) {
    cfg.backend_context.work_root =
        Resolve(base_dir, GetString(doc, "work_dir", "config"));
  }
  cfg.backend_context.keep_exchange_dirs =
      GetBool(doc, "keep_exchange_dirs", false, "config");
  cfg.report_timings = GetBool(doc, "report_timings", false, "config");
  return cfg;
}

PipelineConfig LoadPipelineConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParsePipelineConfig(buf.str(), path.parent_path());
}

}  // namespace rvos
