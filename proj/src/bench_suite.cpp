// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/bench_suite.hpp"

#include <chrono>

#include "dyto/error.hpp"
#include "dyto/metrics.hpp"

namespace dyto {

namespace {

template <typename F>
auto timed(bool enabled, double& ms, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  const auto stop = std::chrono::steady_clock::now();
  ms = enabled ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
  return result;
}

MethodMetrics evaluate(const CompressedVideo& cv, const SyntheticVideo& video, double ms) {
  MethodMetrics m;
  m.coverage = event_coverage(cv.keyframes, video.truth);
  m.accuracy = partition_accuracy(cv.partition, video.truth);
  m.reconstruction_error = reconstruction_error(cv, video.tokens);
  m.tokens_used = cv.total_tokens;
  m.wall_time_ms = ms;
  return m;
}

void accumulate(MethodMetrics& sum, const MethodMetrics& m) {
  sum.coverage += m.coverage;
  sum.accuracy += m.accuracy;
  sum.reconstruction_error += m.reconstruction_error;
  sum.tokens_used += m.tokens_used;
  sum.wall_time_ms += m.wall_time_ms;
}

void finish_mean(MethodMetrics& sum, std::size_t n) {
  const auto d = static_cast<double>(n);
  sum.coverage /= d;
  sum.accuracy /= d;
  sum.reconstruction_error /= d;
  sum.tokens_used /= n;
  sum.wall_time_ms /= d;
}

}  // namespace

BenchReport run_bench_suite(const BenchConfig& config, const BenchObserver& observer) {
  if (config.runs == 0) fail(ErrorKind::Config, "bench needs at least one run");
  if (config.min_events == 0 || config.min_events > config.max_events)
    fail(ErrorKind::Config, "bench event range is empty");

  BenchReport report;
  report.config = config;
  const std::size_t span = config.max_events - config.min_events + 1;
  for (std::size_t i = 0; i < config.runs; ++i) {
    SyntheticSpec spec = config.video;
    spec.seed = config.seed + i;
    spec.n_events = config.min_events + i % span;
    const auto video = generate_synthetic_video(spec);

    double dyto_ms = 0.0, base_ms = 0.0;
    const auto dyto = timed(config.timing, dyto_ms, [&] { return run_dyto(video.tokens, config.pipeline); });
    const auto base =
        timed(config.timing, base_ms, [&] { return run_baseline_uniform_pool(video.tokens, config.pipeline); });

    BenchRun run;
    run.seed = spec.seed;
    run.events = spec.n_events;
    run.keyframes = dyto.keyframes.size();
    run.dyto = evaluate(dyto, video, dyto_ms);
    run.baseline = evaluate(base, video, base_ms);
    if (observer) observer(run, video, dyto, base);
    accumulate(report.dyto_mean, run.dyto);
    accumulate(report.baseline_mean, run.baseline);
    report.runs.push_back(run);
  }
  finish_mean(report.dyto_mean, config.runs);
  finish_mean(report.baseline_mean, config.runs);
  return report;
}

}  // namespace dyto
