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

#include "rvos/pipeline.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "rvos/error.h"
#include "rvos/metrics.h"
#include "rvos/overlay.h"
#include "synthetic.h"
#include "test_util.h"

namespace rvos {
namespace {

namespace fs = std::filesystem;
using testing::Rect;
using testing::TempDir;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::map<std::string, std::string> ReadTree(const fs::path& root) {
  std::map<std::string, std::string> tree;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      tree[fs::relative(e.path(), root).string()] = Slurp(e.path());
    }
  }
  return tree;
}

SourceConfig OracleSource(const std::string& id, const fs::path& root) {
  SourceConfig s;
  s.model_id = id;
  s.backend.kind = BackendKind::kOracle;
  s.backend.parameters["masks_root"] = root.string();
  return s;
}

SourceConfig DirSource(const std::string& id, const fs::path& root) {
  SourceConfig s;
  s.model_id = id;
  s.kind = SourceConfig::Kind::kPrecomputedDir;
  s.path = root;
  return s;
}

PipelineConfig BaseConfig(std::vector<SourceConfig> sources,
                          const fs::path& out) {
  PipelineConfig cfg;
  cfg.reference_model = sources.front().model_id;
  cfg.sources = std::move(sources);
  cfg.propagator.kind = BackendKind::kIdentity;
  cfg.output.root = out;
  return cfg;
}

// Writes an all-background results tree shaped like `ds`.
void WriteEmptyTree(const testing::SyntheticDataset& ds, const fs::path& root) {
  const int w = ds.gt[0][0][0].width(), h = ds.gt[0][0][0].height();
  for (const VideoRecord& v : ds.meta) {
    for (const ExpressionRecord& e : v.expressions) {
      WriteResults(ResultsLayout{root}, v, e.expression_id,
                   MaskSequence(std::vector<BinaryMask>(v.frame_ids.size(),
                                                        BinaryMask(w, h)),
                                v.frame_ids));
    }
  }
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::SyntheticSpec spec;
    spec.videos = 3;
    spec.frames = 5;
    ds_ = testing::MakeSyntheticDataset(dir_.path(), spec);
  }

  TempDir dir_;
  testing::SyntheticDataset ds_;
};

TEST_F(PipelineTest, OracleIdentityRecoversStaticObjects) {
  PipelineConfig cfg =
      BaseConfig({OracleSource("oracle", ds_.gt_root)}, dir_ / "out");
  const RunReport report = RunPipeline(cfg, ds_.meta, ds_.frames_root);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.units, 6);
  EXPECT_EQ(report.records.size(), 36u);
  const auto eval =
      Evaluate(cfg.output, ResultsLayout{ds_.gt_root}, ds_.meta);
  EXPECT_EQ(eval.global.jf, 1.0);
}

TEST_F(PipelineTest, ThresholdOneIsUnionThresholdAllIsIntersection) {
  WriteEmptyTree(ds_, dir_ / "empty");
  for (double ratio : {0.25, 1.0}) {
    PipelineConfig cfg = BaseConfig(
        {OracleSource("a", ds_.gt_root), DirSource("b", dir_ / "empty")},
        dir_ / ("out" + std::to_string(ratio)));
    cfg.fusion.thr_ratio = ratio;
    ASSERT_TRUE(RunPipeline(cfg, ds_.meta, ds_.frames_root).ok());
    const auto eval =
        Evaluate(cfg.output, ResultsLayout{ds_.gt_root}, ds_.meta);
    // Two sources x two expressions: thr 1 keeps the oracle, thr 4 keeps
    // nothing.
    EXPECT_EQ(eval.global.jf, ratio < 0.5 ? 1.0 : 0.0) << ratio;
  }
}

TEST_F(PipelineTest, SingleExpressionRatioAppliesToOneExpressionGroups) {
  testing::SyntheticSpec spec;
  spec.videos = 1;
  spec.frames = 3;
  spec.expressions_per_object = 1;
  TempDir d;
  const auto ds = testing::MakeSyntheticDataset(d.path(), spec);
  WriteEmptyTree(ds, d / "empty");
  PipelineConfig cfg = BaseConfig(
      {OracleSource("a", ds.gt_root), DirSource("b", d / "empty")}, d / "out");
  cfg.fusion.thr_ratio = 1.0;
  cfg.fusion.thr_s_ratio = 0.5;
  const RunReport report = RunPipeline(cfg, ds.meta, ds.frames_root);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report.records[1].stage, "fuse1");
  EXPECT_EQ(report.records[1].detail, "N=2 thr=1");
  EXPECT_EQ(Evaluate(cfg.output, ResultsLayout{ds.gt_root}, ds.meta).global.jf,
            1.0);
}

TEST_F(PipelineTest, GroupMembersShareOneResult) {
  // Two expressions of one object disagree; both must come out identical.
  const fs::path src = dir_ / "src";
  const VideoRecord& v = ds_.meta[0];
  const int w = 48, h = 32;
  std::vector<BinaryMask> a(5, Rect(w, h, 2, 2, 6, 6));
  std::vector<BinaryMask> b(5, Rect(w, h, 4, 4, 6, 6));
  for (const ExpressionRecord& e : v.expressions) {
    const bool first = e.expression_id == "0" || e.expression_id == "2";
    WriteResults(ResultsLayout{src}, v, e.expression_id,
                 MaskSequence(first ? a : b, v.frame_ids));
  }
  PipelineConfig cfg = BaseConfig({OracleSource("m", src)}, dir_ / "out");
  const std::vector<VideoRecord> meta = {v};
  ASSERT_TRUE(RunPipeline(cfg, meta, ds_.frames_root).ok());
  const MaskSequence r0 = ReadResults(cfg.output, v, "0");
  const MaskSequence r1 = ReadResults(cfg.output, v, "1");
  EXPECT_EQ(r0, r1);
  // thr = ceil(0.5 * 2) = 1: the union of the two squares.
  BinaryMask uni = a[0];
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) uni.set(x, y, a[0].at(x, y) || b[0].at(x, y));
  }
  EXPECT_EQ(r0.frame(3), uni);
}

TEST_F(PipelineTest, ByteIdenticalAcrossRunsAndParallelism) {
  WriteEmptyTree(ds_, dir_ / "empty");
  std::vector<std::string> reports;
  std::vector<std::map<std::string, std::string>> trees;
  for (int par : {1, 1, 4}) {
    const fs::path out = dir_ / ("out" + std::to_string(reports.size()));
    PipelineConfig cfg = BaseConfig(
        {OracleSource("a", ds_.gt_root), DirSource("b", dir_ / "empty")}, out);
    cfg.ensemble_variants = {kFusedVariant, "a", "b"};
    cfg.parallelism = par;
    const RunReport report = RunPipeline(cfg, ds_.meta, ds_.frames_root);
    ASSERT_TRUE(report.ok());
    reports.push_back(report.ToJsonLines());
    trees.push_back(ReadTree(out));
  }
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(reports[0], reports[2]);
  EXPECT_EQ(trees[0], trees[1]);
  EXPECT_EQ(trees[0], trees[2]);
  EXPECT_EQ(trees[0].size(), 12u * 5u);
  EXPECT_EQ(reports[0].find("elapsed_ms"), std::string::npos);
}

TEST_F(PipelineTest, FailingUnitIsIsolated) {
  const fs::path src = dir_ / "partial";
  fs::copy(ds_.gt_root, src, fs::copy_options::recursive);
  fs::remove(ResultsLayout{src}.MaskPath("vid1", "2", ds_.meta[1].frame_ids[3]));
  PipelineConfig cfg = BaseConfig({DirSource("a", src)}, dir_ / "out");
  // Reference precomputed dirs must carry scores.
  for (const VideoRecord& v : ds_.meta) {
    for (const ExpressionRecord& e : v.expressions) {
      WriteText(ResultsLayout{src}.SequenceDir(v.video_id, e.expression_id) /
                    "scores.json",
                "[0.2, 0.9, 0.4, 0.1, 0.3]");
    }
  }
  const RunReport report = RunPipeline(cfg, ds_.meta, ds_.frames_root);
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.units, 6);
  EXPECT_EQ(report.failed_units, 1);
  int failed = 0;
  for (const StageRecord& r : report.records) {
    if (r.ok) continue;
    ++failed;
    EXPECT_EQ(r.video_id, "vid1");
    EXPECT_EQ(r.group, "obj:2");
    EXPECT_EQ(r.stage, "segment");
    EXPECT_NE(r.error.find("missing precomputed mask"), std::string::npos);
  }
  EXPECT_EQ(failed, 1);
  EXPECT_TRUE(fs::exists(cfg.output.MaskPath("vid1", "0", "00000")));
  EXPECT_FALSE(fs::exists(cfg.output.SequenceDir("vid1", "2")));
  EXPECT_TRUE(fs::exists(cfg.output.MaskPath("vid2", "3", "00020")));
  EXPECT_NE(report.ToJsonLines().find("\"status\":\"failed\""),
            std::string::npos);
}

TEST_F(PipelineTest, ReferenceDirWithoutScoresFails) {
  PipelineConfig cfg = BaseConfig({DirSource("a", ds_.gt_root)}, dir_ / "out");
  const RunReport report = RunPipeline(cfg, ds_.meta, ds_.frames_root);
  EXPECT_EQ(report.failed_units, report.units);
  EXPECT_NE(report.records[0].error.find("scores.json"), std::string::npos);
}

TEST(PipelineKeyframeTest, TranslationFromBestFrameRebuildsMotion) {
  TempDir d;
  VideoRecord v;
  v.video_id = "walk";
  v.frame_ids = {"a0", "a1", "a2", "a3", "a4"};
  v.expressions = {{"7", "the square", std::nullopt}};
  std::vector<BinaryMask> gt, pred;
  for (int t = 0; t < 5; ++t) {
    gt.push_back(Rect(20, 12, 2 + t, 3, 4, 4));
    pred.push_back(t == 2 ? gt.back() : BinaryMask(20, 12));
  }
  const ResultsLayout src{d / "src"};
  WriteResults(src, v, "7", MaskSequence(pred, v.frame_ids));
  WriteText(src.SequenceDir("walk", "7") / "scores.json",
            "[0.1, 0.2, 0.9, 0.3, 0.1]");

  PipelineConfig cfg = BaseConfig({DirSource("m", src.root)}, d / "out");
  cfg.propagator.kind = BackendKind::kTranslation;
  cfg.propagator.parameters = {{"dx", "1"}, {"dy", "0"}};
  cfg.min_keyframe_score = 0.95;
  const RunReport report = RunPipeline(cfg, {v}, d / "frames");
  ASSERT_TRUE(report.ok()) << report.ToJsonLines();
  const StageRecord& key = report.records[2];
  EXPECT_EQ(key.stage, "keyframe");
  EXPECT_EQ(key.group, "exp:7");
  EXPECT_EQ(key.detail, "index=2 frame=a2 score=0.9");
  ASSERT_EQ(key.warnings.size(), 1u);
  EXPECT_NE(key.warnings[0].find("below floor"), std::string::npos);
  EXPECT_EQ(ReadResults(cfg.output, v, "7"), MaskSequence(gt, v.frame_ids));
}

TEST_F(PipelineTest, EnsembleVoteDetailAndTimings) {
  WriteEmptyTree(ds_, dir_ / "empty");
  PipelineConfig cfg = BaseConfig(
      {OracleSource("a", ds_.gt_root), DirSource("b", dir_ / "empty")},
      dir_ / "out");
  cfg.ensemble_variants = {kFusedVariant, "a", "b"};
  cfg.report_timings = true;
  const std::vector<VideoRecord> meta = {ds_.meta[0]};
  const RunReport report = RunPipeline(cfg, meta, ds_.frames_root);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report.records[4].stage, "fuse2");
  EXPECT_EQ(report.records[4].detail, "N=3 thr=2");
  // "b" propagates an empty key mask.
  EXPECT_EQ(report.records[3].warnings.size(), 1u);
  for (const StageRecord& r : report.records) {
    EXPECT_TRUE(r.elapsed_ms.has_value());
  }
  // fused = oracle (thr 2 of 4), a = oracle, b = empty: majority is oracle.
  EXPECT_EQ(Evaluate(cfg.output, ResultsLayout{ds_.gt_root}, meta).global.jf,
            1.0);
}

TEST(PipelineConfigTest, ParsesAndResolvesRelativePaths) {
  const std::string text = R"({
    "sources": [
      {"model_id": "a", "kind": "backend",
       "backend": {"kind": "oracle", "parameters": {"masks_root": "gt"}}},
      {"model_id": "b", "kind": "precomputed-dir", "path": "runs/b"},
      {"model_id": "c", "kind": "backend",
       "backend": {"kind": "external-process", "command": "seg {request}",
                   "timeout": 30, "env": {"CUDA_VISIBLE_DEVICES": "0"}}}],
    "reference_model": "b",
    "fusion": {"thr_ratio": 0.4, "thr_s_ratio": 0.6},
    "ensemble": {"thr_ratio": 0.5, "variants": ["fused", "a"]},
    "propagator": {"kind": "translation", "parameters": {"dx": 2, "dy": -1}},
    "keyframe": {"min_score": 0.3},
    "boundary": {"tolerance_ratio": 0.01},
    "parallelism": 3,
    "output": {"root": "out", "palette": [[0, 0, 0], [0, 255, 0]]},
    "work_dir": "/var/tmp",
    "keep_exchange_dirs": true,
    "report_timings": true
  })";
  const PipelineConfig cfg = ParsePipelineConfig(text, "/base");
  ASSERT_EQ(cfg.sources.size(), 3u);
  EXPECT_EQ(cfg.sources[0].backend.parameters.at("masks_root"), "/base/gt");
  EXPECT_EQ(cfg.sources[1].kind, SourceConfig::Kind::kPrecomputedDir);
  EXPECT_EQ(cfg.sources[1].path, fs::path("/base/runs/b"));
  EXPECT_EQ(cfg.sources[2].backend.kind, BackendKind::kExternalProcess);
  EXPECT_EQ(cfg.sources[2].backend.timeout_seconds, 30);
  EXPECT_EQ(cfg.sources[2].backend.environment.at("CUDA_VISIBLE_DEVICES"),
            "0");
  EXPECT_EQ(cfg.reference_model, "b");
  EXPECT_EQ(cfg.fusion.thr_ratio, 0.4);
  EXPECT_EQ(cfg.fusion.thr_s_ratio, 0.6);
  EXPECT_EQ(cfg.ensemble_variants, (std::vector<std::string>{"fused", "a"}));
  EXPECT_EQ(cfg.propagator.parameters.at("dx"), "2");
  EXPECT_EQ(cfg.propagator.parameters.at("dy"), "-1");
  EXPECT_EQ(cfg.min_keyframe_score, 0.3);
  EXPECT_EQ(cfg.boundary.tolerance_ratio, 0.01);
  EXPECT_EQ(cfg.parallelism, 3);
  EXPECT_EQ(cfg.output.root, fs::path("/base/out"));
  EXPECT_EQ(cfg.palette.colors[1], (Rgb{0, 255, 0}));
  EXPECT_EQ(cfg.backend_context.work_root, fs::path("/var/tmp"));
  EXPECT_TRUE(cfg.backend_context.keep_exchange_dirs);
  EXPECT_TRUE(cfg.report_timings);
  EXPECT_NO_THROW(cfg.Validate());
}

TEST(PipelineConfigTest, RejectsBadConfigs) {
  const std::string ok_tail =
      R"("propagator": {"kind": "identity"}, "output": {"root": "o"})";
  const std::string src =
      R"("sources": [{"model_id": "a", "kind": "precomputed-dir", "path": "p"}])";
  auto parse_and_validate = [](const std::string& text) {
    ParsePipelineConfig(text, "/b").Validate();
  };
  EXPECT_NO_THROW(parse_and_validate("{" + src + R"(, "reference_model": "a", )" +
                                     ok_tail + "}"));
  for (const std::string& bad : {
           std::string("not json"),
           std::string("[]"),
           R"({"reference_model": "a", )" + ok_tail + "}",
           "{" + src + R"(, "reference_model": "z", )" + ok_tail + "}",
           "{" + src + R"(, "reference_model": "a", "parallelism": 0, )" +
               ok_tail + "}",
           "{" + src + R"(, "reference_model": "a", "parallelism": 1.5, )" +
               ok_tail + "}",
           "{" + src + R"(, "reference_model": "a", "fusion": {"thr_ratio": 0}, )" +
               ok_tail + "}",
           "{" + src +
               R"(, "reference_model": "a", "ensemble": {"variants": ["q"]}, )" +
               ok_tail + "}",
           "{" + src +
               R"(, "reference_model": "a", "propagator": {"kind": "oracle", "parameters": {"masks_root": "m"}}, "output": {"root": "o"}})",
           "{" + src + R"(, "reference_model": "a", "propagator": {"kind": "warp"}, "output": {"root": "o"}})",
           R"({"sources": [{"model_id": "a", "kind": "backend", "backend": {"kind": "identity"}}], "reference_model": "a", )" +
               ok_tail + "}",
           R"({"sources": [{"model_id": "a", "kind": "cloud"}], "reference_model": "a", )" +
               ok_tail + "}",
       }) {
    EXPECT_THROW(parse_and_validate(bad), ConfigError) << bad;
  }
}

TEST(PipelineConfigTest, LoadResolvesAgainstConfigDirectory) {
  TempDir d;
  WriteText(d / "cfg/run.json",
            R"({"sources": [{"model_id": "a", "kind": "precomputed-dir",
                 "path": "../masks"}],
                "reference_model": "a",
                "propagator": {"kind": "identity"},
                "output": {"root": "res"}})");
  const PipelineConfig cfg = LoadPipelineConfig(d / "cfg/run.json");
  EXPECT_EQ(cfg.sources[0].path.lexically_normal(),
            (d / "masks").lexically_normal());
  EXPECT_EQ(cfg.output.root, d / "cfg" / "res");
}

TEST(OverlayTest, BlendRules) {
  RgbImage frame{3, 2, {10,  20,  30,  40,  50,  60,  70,  80,  90,
                        100, 110, 120, 130, 140, 150, 160, 170, 180}};
  EXPECT_EQ(BlendOverlay(frame, BinaryMask(3, 2), {}).pixels, frame.pixels);
  const RgbImage solid =
      BlendOverlay(frame, BinaryMask::Full(3, 2), {{1, 2, 3}, 1.0});
  for (size_t i = 0; i < solid.pixels.size(); ++i) {
    EXPECT_EQ(solid.pixels[i], i % 3 + 1);
  }
  const RgbImage half =
      BlendOverlay(frame, BinaryMask::FromRows({{1, 0, 0}, {0, 0, 0}}),
                   {{255, 0, 0}, 0.5});
  EXPECT_EQ(half.pixels[0], 133);  // round(5 + 127.5) = 133 (132.5 rounds up)
  EXPECT_EQ(half.pixels[1], 10);
  EXPECT_EQ(half.pixels[2], 15);
  EXPECT_EQ(half.pixels[3], 40);
  EXPECT_THROW(BlendOverlay(frame, BinaryMask(2, 2), {}), RenderError);
  EXPECT_THROW(BlendOverlay(frame, BinaryMask(3, 2), {{0, 0, 0}, 1.5}),
               ConfigError);
}

TEST(OverlayTest, RendersOneImagePerMask) {
  TempDir d;
  testing::SyntheticSpec spec;
  spec.videos = 1;
  spec.frames = 3;
  spec.objects = 1;
  spec.expressions_per_object = 1;
  const auto ds = testing::MakeSyntheticDataset(d.path(), spec);
  EXPECT_EQ(RenderOverlays(ds.gt_root, ds.frames_root, d / "viz"), 3);
  for (const std::string& f : ds.meta[0].frame_ids) {
    const RgbImage img = ReadRgbImage(d / "viz/vid0/0" / (f + ".png"));
    EXPECT_EQ(img.width, 48);
    EXPECT_EQ(img.height, 32);
  }
  fs::remove(ds.frames_root / "vid0" / "00005.png");
  EXPECT_THROW(RenderOverlays(ds.gt_root, ds.frames_root, d / "viz2"),
               RenderError);
}

int Shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PipelineTest, CommandLineRunEvaluateVisualizeFuse) {
  const std::string cli = RVOS_CLI_PATH;
  WriteText(dir_ / "meta.json", SerializeMeta(ds_.meta));
  WriteText(dir_ / "run.json",
            R"({"sources": [{"model_id": "o", "kind": "backend",
                 "backend": {"kind": "oracle",
                             "parameters": {"masks_root": "gt"}}}],
                "reference_model": "o",
                "propagator": {"kind": "identity"},
                "output": {"root": "out"}})");
  const std::string d = dir_.path().string();
  ASSERT_EQ(Shell(cli + " run --config " + d + "/run.json --meta " + d +
                  "/meta.json --frames " + d + "/frames"),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "out/run_report.jsonl"));
  ASSERT_EQ(Shell(cli + " evaluate --pred " + d + "/out --gt " + d +
                  "/gt --meta " + d + "/meta.json --report " + d +
                  "/eval.csv"),
            0);
  const std::string csv = Slurp(dir_ / "eval.csv");
  EXPECT_NE(csv.find("GLOBAL,,1,1,1"), std::string::npos) << csv;
  EXPECT_EQ(Shell(cli + " visualize --results " + d + "/out --frames " + d +
                  "/frames --out " + d + "/viz --alpha 1"),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "viz/vid2/3/00020.png"));
  EXPECT_EQ(Shell(cli + " fuse " + d + "/gt/vid0/0 " + d +
                  "/out/vid0/0 --out " + d + "/fused --thr 2 >/dev/null"),
            0);
  EXPECT_EQ(ReadTree(dir_ / "fused"), ReadTree(dir_ / "gt/vid0/0"));
  EXPECT_EQ(Shell(cli + " evaluate --pred " + d + "/nowhere --gt " + d +
                  "/gt --meta " + d + "/meta.json 2>/dev/null"),
            2);
}

}  // namespace
}  // namespace rvos
