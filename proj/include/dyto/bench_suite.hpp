// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "dyto/pipeline.hpp"
#include "dyto/synth.hpp"

namespace dyto {

/// Seeded comparison of DyTo against the uniform-pool baseline on synthetic
/// videos. Run i uses seed + i and cycles the event count through
/// [min_events, max_events].
struct BenchConfig {
  std::size_t runs = 20;
  std::uint64_t seed = 0;
  std::size_t min_events = 3;
  std::size_t max_events = 8;
  SyntheticSpec video;  // n_events and seed are overwritten per run
  PipelineConfig pipeline;
  bool timing = true;  // when false, wall times are reported as 0
};

struct MethodMetrics {
  double coverage = 0.0;
  double accuracy = 0.0;
  double reconstruction_error = 0.0;
  std::size_t tokens_used = 0;
  double wall_time_ms = 0.0;
};

struct BenchRun {
  std::uint64_t seed = 0;
  std::size_t events = 0;
  std::size_t keyframes = 0;
  MethodMetrics dyto;
  MethodMetrics baseline;
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRun> runs;
  MethodMetrics dyto_mean;
  MethodMetrics baseline_mean;
};

/// Called once per run with the generated video and both method outputs.
using BenchObserver = std::function<void(const BenchRun&, const SyntheticVideo&, const CompressedVideo& dyto,
                                         const CompressedVideo& baseline)>;

BenchReport run_bench_suite(const BenchConfig& config, const BenchObserver& observer = {});

}  // namespace dyto
