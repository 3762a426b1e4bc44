// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

// dyto: command-line front end.
//   exit 0 ok, 1 internal failure, 2 input-format error, 3 constraint or
//   validation error. Diagnostics go to stderr.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dyto/bench_suite.hpp"
#include "dyto/error.hpp"
#include "dyto/metrics.hpp"
#include "dyto/pipeline.hpp"
#include "dyto/serialize.hpp"
#include "dyto/synth.hpp"
#include "dyto/tensor_io.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code(dyto::ErrorKind kind) {
  switch (kind) {
    case dyto::ErrorKind::Format:
    case dyto::ErrorKind::Storage:
      return 2;
    default:
      return 3;
  }
}

struct Options {
  std::string input;
  std::string output;
  std::string sidecar;
  std::string keyframes_doc;
  std::string gt;
  std::string tensors_dir;
  bool trace = false;
  bool serial = false;
  bool no_timing = false;
  std::string policy = "temporal-middle";
  std::string rule = "refined-gap";
  std::string pooling = "weighted";
  std::optional<std::size_t> level;
  dyto::PipelineConfig pipeline;
  dyto::SyntheticSpec synth;
  dyto::BenchConfig bench;
};

void add_merge_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--budget", o.pipeline.budget, "Total visual token budget Z")->capture_default_str();
  cmd->add_option("--heads", o.pipeline.heads, "Similarity heads H")->capture_default_str();
  cmd->add_option("--r1", o.pipeline.r1_cap, "First-iteration merge cap")->capture_default_str();
  cmd->add_option("--pooling", o.pooling, "weighted | mean")->capture_default_str();
  cmd->add_flag("--spread-remainder", o.pipeline.spread_remainder, "Give the first Z mod K keyframes one extra token");
}

void add_cluster_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--policy", o.policy, "temporal-middle | centroid-nearest | random-uniform")->capture_default_str();
  cmd->add_option("--seed", o.pipeline.seed, "Seed for random-uniform keyframes")->capture_default_str();
  cmd->add_option("--rule", o.rule, "refined-gap | refined-threshold | penultimate-level")->capture_default_str();
  cmd->add_option("--threshold", o.pipeline.rule_threshold, "Cost threshold for refined-threshold")
      ->capture_default_str();
  cmd->add_option("--level", o.level, "Use this first-neighbour hierarchy level directly");
  cmd->add_option("--keyframes-per-cluster", o.pipeline.keyframes_per_cluster)->capture_default_str();
}

void finish_config(Options& o) {
  o.pipeline.policy = dyto::parse_keyframe_policy(o.policy);
  o.pipeline.rule = dyto::parse_partition_rule(o.rule);
  o.pipeline.pooling = dyto::parse_pooling(o.pooling);
  o.pipeline.level_override = o.level;
  o.pipeline.parallel = !o.serial;
}

std::string sidecar_path(const Options& o) { return o.sidecar.empty() ? o.output + ".json" : o.sidecar; }

void write_compressed(const dyto::CompressedVideo& cv, const Options& o) {
  dyto::write_tensor_file(o.output, cv.to_tensor());
  dyto::write_json(sidecar_path(o), dyto::sidecar_json(cv, o.trace));
}

int cmd_cluster(Options& o) {
  finish_config(o);
  const auto tokens = dyto::load_tokens(o.input);
  const auto cls = dyto::extract_cls_sequence(tokens);
  const auto seg = dyto::segment_events(cls, {o.pipeline.rule, o.pipeline.rule_threshold, o.pipeline.level_override});
  const auto keyframes =
      dyto::select_keyframes(seg.selected(), cls, {o.pipeline.policy, o.pipeline.keyframes_per_cluster, o.pipeline.seed});
  dyto::write_json(o.output, dyto::clustering_document(seg, keyframes, o.pipeline.policy));
  std::cout << seg.selected().k << '\n';
  return 0;
}

int cmd_run(Options& o) {
  finish_config(o);
  const auto tokens = dyto::load_tokens(o.input);
  const auto cv = dyto::run_dyto(tokens, o.pipeline);
  write_compressed(cv, o);
  std::cout << cv.keyframes.size() << ' ' << cv.total_tokens << '\n';
  return 0;
}

int cmd_merge(Options& o) {
  finish_config(o);
  const auto tokens = dyto::load_tokens(o.input);
  dyto::CompressedVideo cv;
  cv.method = "merge";
  cv.config = o.pipeline;
  cv.dim = tokens.dim();
  cv.source_patches = tokens.patch_count();
  if (o.keyframes_doc.empty()) {
    for (std::size_t f = 0; f < tokens.n_frames(); ++f) cv.keyframes.frames.push_back(f);
  } else {
    cv.keyframes.frames = dyto::keyframes_from_clustering(dyto::read_json(o.keyframes_doc));
  }
  for (std::size_t j = 0; j < cv.keyframes.frames.size(); ++j) {
    if (cv.keyframes.frames[j] >= tokens.n_frames()) throw dyto::Error(dyto::ErrorKind::Input, "keyframe out of range");
    cv.keyframes.clusters.push_back(j);
  }
  if (tokens.dim() % o.pipeline.heads != 0)
    throw dyto::Error(dyto::ErrorKind::Config, "heads do not divide token dimension");
  const auto targets = dyto::frame_targets(tokens.patch_count(), o.pipeline.budget, cv.keyframes.size(),
                                           o.pipeline.spread_remainder);
  cv.frames = dyto::compress_keyframes(tokens, cv.keyframes.frames, targets, o.pipeline);
  for (const auto& f : cv.frames) cv.total_tokens += f.tokens.count();
  write_compressed(cv, o);
  std::cout << cv.keyframes.size() << ' ' << cv.total_tokens << '\n';
  return 0;
}

int cmd_baseline(Options& o) {
  finish_config(o);
  const auto tokens = dyto::load_tokens(o.input);
  const auto cv = dyto::run_baseline_uniform_pool(tokens, o.pipeline);
  write_compressed(cv, o);
  std::cout << cv.keyframes.size() << ' ' << cv.total_tokens << '\n';
  return 0;
}

int cmd_synth(Options& o) {
  const auto video = dyto::generate_synthetic_video(o.synth);
  dyto::save_tokens(video.tokens, o.output);
  dyto::write_json(o.gt.empty() ? o.output + ".gt.json" : o.gt, dyto::ground_truth_json(video.truth));
  return 0;
}

int cmd_bench(Options& o) {
  finish_config(o);
  o.bench.pipeline = o.pipeline;
  o.bench.timing = !o.no_timing;
  if (!o.tensors_dir.empty()) fs::create_directories(o.tensors_dir);
  const auto report = dyto::run_bench_suite(
      o.bench, [&](const dyto::BenchRun& run, const dyto::SyntheticVideo&, const dyto::CompressedVideo& dyto_out,
                   const dyto::CompressedVideo& base_out) {
        if (o.tensors_dir.empty()) return;
        const auto stem = fs::path(o.tensors_dir) / ("run_" + std::to_string(run.seed));
        dyto::write_tensor_file(stem.string() + "_dyto.dyt", dyto_out.to_tensor());
        dyto::write_tensor_file(stem.string() + "_uniform_pool.dyt", base_out.to_tensor());
      });
  dyto::write_json(o.output, dyto::bench_report_json(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training-free video token compression: event clustering and bipartite token merging"};
  app.require_subcommand(1);
  Options o;

  auto* cluster = app.add_subcommand("cluster", "Segment frames into events and pick keyframes");
  cluster->add_option("--input", o.input, "DYT1 rank-3 video tokens")->required();
  cluster->add_option("--output", o.output, "Clustering JSON document")->required();
  add_cluster_flags(cluster, o);

  auto* run = app.add_subcommand("run", "Full pipeline: cluster, select keyframes, merge tokens");
  run->add_option("--input", o.input, "DYT1 rank-3 video tokens")->required();
  run->add_option("--output", o.output, "Merged DYT1 tensor")->required();
  run->add_option("--sidecar", o.sidecar, "Sidecar JSON (default: <output>.json)");
  run->add_flag("--trace", o.trace, "Include per-frame merge traces with provenance");
  run->add_flag("--serial", o.serial, "Compress keyframes on one thread");
  add_cluster_flags(run, o);
  add_merge_flags(run, o);

  auto* merge = app.add_subcommand("merge", "Merge tokens of given keyframes (all frames by default)");
  merge->add_option("--input", o.input, "DYT1 rank-3 video tokens")->required();
  merge->add_option("--output", o.output, "Merged DYT1 tensor")->required();
  merge->add_option("--sidecar", o.sidecar, "Sidecar JSON (default: <output>.json)");
  merge->add_option("--keyframes", o.keyframes_doc, "Clustering JSON whose keyframes to merge");
  merge->add_flag("--trace", o.trace, "Include per-frame merge traces with provenance");
  merge->add_flag("--serial", o.serial, "Compress keyframes on one thread");
  add_merge_flags(merge, o);

  auto* baseline = app.add_subcommand("baseline", "Uniform frame sampling with spatial average pooling");
  baseline->add_option("--input", o.input, "DYT1 rank-3 video tokens")->required();
  baseline->add_option("--output", o.output, "Pooled DYT1 tensor")->required();
  baseline->add_option("--sidecar", o.sidecar, "Sidecar JSON (default: <output>.json)");
  baseline->add_flag("--trace", o.trace, "Include per-frame provenance");
  baseline->add_option("--frames-to-sample", o.pipeline.baseline_frames)->capture_default_str();
  baseline->add_option("--grid", o.pipeline.baseline_grid, "Pooled grid side")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Write a synthetic video and its ground truth");
  synth->add_option("--output", o.output, "DYT1 output")->required();
  synth->add_option("--gt", o.gt, "Ground-truth JSON (default: <output>.gt.json)");
  synth->add_option("--frames", o.synth.n_frames)->capture_default_str();
  synth->add_option("--events", o.synth.n_events)->capture_default_str();
  synth->add_option("--tokens", o.synth.tokens_per_frame, "Tokens per frame including CLS")->capture_default_str();
  synth->add_option("--dim", o.synth.dim)->capture_default_str();
  synth->add_option("--sigma", o.synth.sigma)->capture_default_str();
  synth->add_option("--offset-scale", o.synth.offset_scale)->capture_default_str();
  synth->add_option("--min-event-length", o.synth.min_event_length)->capture_default_str();
  synth->add_option("--seed", o.synth.seed)->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Seeded DyTo vs uniform-pool comparison");
  bench->add_option("--output", o.output, "Report JSON")->required();
  bench->add_option("--tensors", o.tensors_dir, "Directory for per-run output tensors");
  bench->add_option("--runs", o.bench.runs)->capture_default_str();
  bench->add_option("--seed", o.bench.seed)->capture_default_str();
  bench->add_option("--min-events", o.bench.min_events)->capture_default_str();
  bench->add_option("--max-events", o.bench.max_events)->capture_default_str();
  bench->add_option("--frames", o.bench.video.n_frames)->capture_default_str();
  bench->add_option("--tokens", o.bench.video.tokens_per_frame)->capture_default_str();
  bench->add_option("--dim", o.bench.video.dim)->capture_default_str();
  bench->add_option("--sigma", o.bench.video.sigma)->capture_default_str();
  bench->add_option("--policy", o.policy)->capture_default_str();
  bench->add_option("--rule", o.rule)->capture_default_str();
  bench->add_option("--frames-to-sample", o.pipeline.baseline_frames)->capture_default_str();
  bench->add_option("--grid", o.pipeline.baseline_grid)->capture_default_str();
  bench->add_flag("--no-timing", o.no_timing, "Report wall times as 0 for byte-stable output");
  add_merge_flags(bench, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*cluster) return cmd_cluster(o);
    if (*run) return cmd_run(o);
    if (*merge) return cmd_merge(o);
    if (*baseline) return cmd_baseline(o);
    if (*synth) return cmd_synth(o);
    if (*bench) return cmd_bench(o);
  } catch (const dyto::Error& e) {
    std::cerr << "dyto: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "dyto: internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
