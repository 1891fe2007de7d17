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

// Command-line front end: run, evaluate, visualize, fuse.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvos/dataset_io.h"
#include "rvos/error.h"
#include "rvos/fusion.h"
#include "rvos/image_io.h"
#include "rvos/metrics.h"
#include "rvos/overlay.h"
#include "rvos/pipeline.h"

namespace fs = std::filesystem;

namespace {

struct RunOptions {
  std::string config;
  std::string meta;
  std::string frames;
  std::string out;
  std::string report;
  int parallelism = 0;
};

struct EvaluateOptions {
  std::string pred;
  std::string gt;
  std::string meta;
  std::string report;
  std::string aggregation = "sequence";
  double tolerance_ratio = 0.008;
  int parallelism = 1;
};

struct VisualizeOptions {
  std::string results;
  std::string frames;
  std::string out;
  double alpha = 0.5;
  std::vector<int> color = {255, 0, 0};
};

struct FuseOptions {
  std::vector<std::string> inputs;
  std::string out;
  double thr_ratio = 0.5;
  int thr = 0;
};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw rvos::WriteError("cannot write " + path.string());
}

int Run(const RunOptions& opt) {
  rvos::PipelineConfig cfg = rvos::LoadPipelineConfig(opt.config);
  if (!opt.out.empty()) cfg.output.root = opt.out;
  if (opt.parallelism > 0) cfg.parallelism = opt.parallelism;
  const auto meta = rvos::LoadMeta(opt.meta);
  const rvos::RunReport report = rvos::RunPipeline(cfg, meta, opt.frames);

  const fs::path report_path = opt.report.empty()
                                   ? cfg.output.root / "run_report.jsonl"
                                   : fs::path(opt.report);
  WriteText(report_path, report.ToJsonLines());

  for (const rvos::StageRecord& r : report.records) {
    for (const std::string& w : r.warnings) {
      std::cerr << "warning: " << r.video_id << " " << r.group << " "
                << r.stage << ": " << w << "\n";
    }
    if (!r.ok) {
      std::cerr << "failed: " << r.video_id << " " << r.group << " "
                << r.stage << ": " << r.error << "\n";
    }
  }
  std::cout << report.units - report.failed_units << "/" << report.units
            << " units succeeded; results in " << cfg.output.root.string()
            << ", report in " << report_path.string() << "\n";
  return report.ok() ? 0 : 1;
}

int Evaluate(const EvaluateOptions& opt) {
  const auto meta = rvos::LoadMeta(opt.meta);
  rvos::BoundaryParams params;
  params.tolerance_ratio = opt.tolerance_ratio;
  const rvos::EvaluationReport report = rvos::Evaluate(
      rvos::ResultsLayout{opt.pred}, rvos::ResultsLayout{opt.gt}, meta, params,
      rvos::ParseAggregation(opt.aggregation), opt.parallelism);
  const std::string csv = report.ToCsv();
  if (opt.report.empty()) {
    std::cout << csv;
  } else {
    WriteText(opt.report, csv);
    std::cout << "J&F " << report.global.jf << " (J " << report.global.j_mean
              << ", F " << report.global.f_mean << ") over "
              << report.rows.size() << " sequences\n";
  }
  return 0;
}

int Visualize(const VisualizeOptions& opt) {
  if (opt.color.size() != 3) throw rvos::ConfigError("--color needs r g b");
  rvos::OverlayStyle style;
  style.alpha = opt.alpha;
  for (int c = 0; c < 3; ++c) {
    if (opt.color[c] < 0 || opt.color[c] > 255) {
      throw rvos::ConfigError("--color components must be 0..255");
    }
    style.color[c] = static_cast<uint8_t>(opt.color[c]);
  }
  const int n = rvos::RenderOverlays(opt.results, opt.frames, opt.out, style);
  std::cout << n << " overlay(s) written to " << opt.out << "\n";
  return 0;
}

// Every input directory holds one <frame>.png per frame; frames present in
// the first directory must exist in all others.
int Fuse(const FuseOptions& opt) {
  if (opt.inputs.empty()) throw rvos::ConfigError("no input directories");
  const int n = static_cast<int>(opt.inputs.size());
  int thr = opt.thr;
  if (thr <= 0) {
    rvos::FusionConfig cfg;
    cfg.thr_ratio = opt.thr_ratio;
    cfg.thr_s_ratio = opt.thr_ratio;
    thr = cfg.ThresholdFor(n, n);
  }
  std::vector<std::string> frames;
  for (const auto& entry : fs::directory_iterator(opt.inputs.front())) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      frames.push_back(entry.path().filename().string());
    }
  }
  std::sort(frames.begin(), frames.end());
  for (const std::string& f : frames) {
    std::vector<rvos::BinaryMask> masks;
    for (const std::string& dir : opt.inputs) {
      const fs::path p = fs::path(dir) / f;
      if (!fs::is_regular_file(p)) {
        throw rvos::InputError("missing " + p.string());
      }
      masks.push_back(rvos::ReadMaskPng(p));
    }
    rvos::WriteMaskPng(rvos::FuseMasks(masks, thr), fs::path(opt.out) / f);
  }
  std::cout << frames.size() << " frame(s) fused from " << n
            << " input(s) at threshold " << thr << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Referring video segmentation pipeline: fuse, propagate, "
               "evaluate."};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run the full pipeline");
  run_cmd->add_option("--config", run.config, "Pipeline config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--meta", run.meta, "Meta expressions JSON")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--frames", run.frames,
                      "Frame images root: <frames>/<video>/<frame>.jpg");
  run_cmd->add_option("--out", run.out, "Results root (overrides config)");
  run_cmd->add_option("--parallelism", run.parallelism,
                      "Concurrent units (overrides config)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--report", run.report,
                      "Run report path (default <out>/run_report.jsonl)");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score results with J&F");
  eval_cmd->add_option("--pred", eval.pred, "Predicted results root")
      ->required();
  eval_cmd->add_option("--gt", eval.gt, "Ground-truth results root")
      ->required();
  eval_cmd->add_option("--meta", eval.meta, "Meta expressions JSON")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", eval.report,
                       "CSV output path (default: stdout)");
  eval_cmd->add_option("--aggregation", eval.aggregation,
                       "Global mean over 'sequence' or 'frame'")
      ->check(CLI::IsMember({"sequence", "frame"}));
  eval_cmd->add_option("--tolerance-ratio", eval.tolerance_ratio,
                       "Boundary tolerance as a fraction of the diagonal");
  eval_cmd->add_option("--parallelism", eval.parallelism,
                       "Concurrent sequences")
      ->check(CLI::PositiveNumber);

  VisualizeOptions vis;
  auto* vis_cmd = app.add_subcommand("visualize", "Render mask overlays");
  vis_cmd->add_option("--results", vis.results, "Results root")->required();
  vis_cmd->add_option("--frames", vis.frames, "Frame images root")
      ->required();
  vis_cmd->add_option("--out", vis.out, "Overlay output root")->required();
  vis_cmd->add_option("--alpha", vis.alpha, "Mask opacity in [0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  vis_cmd->add_option("--color", vis.color, "Mask color r g b")
      ->expected(3);

  FuseOptions fuse;
  auto* fuse_cmd = app.add_subcommand(
      "fuse", "Pixel-vote masks from several directories");
  fuse_cmd->add_option("inputs", fuse.inputs, "Mask directories")
      ->required()
      ->check(CLI::ExistingDirectory);
  fuse_cmd->add_option("--out", fuse.out, "Output directory")->required();
  fuse_cmd->add_option("--thr-ratio", fuse.thr_ratio,
                       "Votes needed as a fraction of inputs, rounded up");
  fuse_cmd->add_option("--thr", fuse.thr,
                       "Absolute vote count (overrides --thr-ratio)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return Run(run);
    if (*eval_cmd) return Evaluate(eval);
    if (*vis_cmd) return Visualize(vis);
    if (*fuse_cmd) return Fuse(fuse);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
