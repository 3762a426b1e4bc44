// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/pipeline.hpp"

#include <cmath>
#include <cstdint>
#include <exception>
#include <string>

#include "dyto/error.hpp"

namespace dyto {

namespace {

std::size_t exact_sqrt(std::size_t n) {
  auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (s * s > n) --s;
  while ((s + 1) * (s + 1) <= n) ++s;
  return s * s == n ? s : 0;
}

}  // namespace

void PipelineConfig::validate() const {
  if (n_frames == 0) fail(ErrorKind::Config, "n_frames must be positive");
  if (budget == 0) fail(ErrorKind::Config, "budget must be positive");
  if (heads == 0) fail(ErrorKind::Config, "heads must be positive");
  if (r1_cap == 0) fail(ErrorKind::Config, "r1 cap must be positive");
  if (keyframes_per_cluster == 0) fail(ErrorKind::Config, "keyframes per cluster must be positive");
  if (baseline_frames == 0) fail(ErrorKind::Config, "baseline frames must be positive");
  if (baseline_grid == 0) fail(ErrorKind::Config, "baseline grid must be positive");
}

std::optional<std::size_t> CompressedVideo::uniform_frame_tokens() const {
  if (frames.empty()) return std::nullopt;
  const auto n = frames.front().tokens.count();
  for (const auto& f : frames) {
    if (f.tokens.count() != n) return std::nullopt;
  }
  return n;
}

TensorFile CompressedVideo::to_tensor() const {
  TensorFile t;
  if (const auto per = uniform_frame_tokens()) {
    t.dims = {frames.size(), *per, dim};
  } else {
    t.dims = {total_tokens, dim};
  }
  t.values.reserve(total_tokens * dim);
  for (const auto& f : frames) {
    for (double v : f.tokens.values) t.values.push_back(static_cast<float>(v));
  }
  return t;
}

std::vector<std::size_t> frame_targets(std::size_t patch_count, std::size_t budget, std::size_t keyframes,
                                       bool spread_remainder) {
  if (keyframes == 0) fail(ErrorKind::Config, "keyframe count must be positive");
  if (budget < keyframes) {
    fail(ErrorKind::Config, "token budget Z=" + std::to_string(budget) + " is smaller than the " +
                                std::to_string(keyframes) + " discovered keyframes K");
  }
  const std::size_t base = budget / keyframes;
  const std::size_t extra = spread_remainder ? budget % keyframes : 0;
  std::vector<std::size_t> targets(keyframes);
  for (std::size_t j = 0; j < keyframes; ++j) targets[j] = std::min(patch_count, base + (j < extra ? 1 : 0));
  return targets;
}

std::vector<MergedFrame> compress_keyframes(const VideoTokens& tokens, const std::vector<std::size_t>& frames,
                                            const std::vector<std::size_t>& targets, const PipelineConfig& config) {
  const std::size_t r0 = tokens.patch_count();
  std::vector<MergeSchedule> schedules;
  schedules.reserve(frames.size());
  for (auto target : targets) schedules.push_back(plan_to_target(r0, target, config.r1_cap, config.heads));

  std::vector<MergedFrame> out(frames.size());
  const auto count = static_cast<std::int64_t>(frames.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) if (config.parallel)
  for (std::int64_t j = 0; j < count; ++j) {
    try {
      out[j] = compress_frame(tokens.patches(frames[j]), tokens.dim(), frames[j], schedules[j], config.pooling);
    } catch (...) {
#pragma omp critical(dyto_compress_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

CompressedVideo run_dyto(const VideoTokens& tokens, const PipelineConfig& config) {
  config.validate();
  if (tokens.dim() % config.heads != 0) {
    fail(ErrorKind::Config, "head count " + std::to_string(config.heads) + " does not divide token dimension " +
                                std::to_string(tokens.dim()));
  }
  const auto cls = extract_cls_sequence(tokens);

  CompressedVideo cv;
  cv.method = "dyto";
  cv.config = config;
  cv.dim = tokens.dim();
  cv.source_patches = tokens.patch_count();
  cv.segmentation = segment_events(cls, {config.rule, config.rule_threshold, config.level_override});
  cv.partition = cv.segmentation->selected();
  cv.keyframes = select_keyframes(cv.partition, cls, {config.policy, config.keyframes_per_cluster, config.seed});

  const auto targets =
      frame_targets(tokens.patch_count(), config.budget, cv.keyframes.size(), config.spread_remainder);
  cv.frames = compress_keyframes(tokens, cv.keyframes.frames, targets, config);
  for (const auto& f : cv.frames) cv.total_tokens += f.tokens.count();
  return cv;
}

std::vector<std::size_t> uniform_sample(std::size_t n_frames, std::size_t count) {
  if (count == 0 || count > n_frames) {
    fail(ErrorKind::Config, "cannot sample " + std::to_string(count) + " of " + std::to_string(n_frames) + " frames");
  }
  std::vector<std::size_t> idx(count);
  for (std::size_t j = 0; j < count; ++j) idx[j] = j * n_frames / count;
  return idx;
}

TokenSet pool_patch_grid(std::span<const float> patches, std::size_t dim, std::size_t grid) {
  const std::size_t count = patches.size() / dim;
  const std::size_t side = exact_sqrt(count);
  if (side == 0) fail(ErrorKind::Config, std::to_string(count) + " patches do not form a square grid");
  if (grid == 0 || side % grid != 0) {
    fail(ErrorKind::Config, "pooled grid " + std::to_string(grid) + " does not divide patch grid side " +
                                std::to_string(side));
  }
  const std::size_t block = side / grid;
  TokenSet out;
  out.dim = dim;
  out.values.assign(grid * grid * dim, 0.0);
  out.sizes.assign(grid * grid, static_cast<std::uint32_t>(block * block));
  out.provenance.resize(grid * grid);
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const std::size_t src = row * side + col;
      const std::size_t dst = (row / block) * grid + col / block;
      for (std::size_t c = 0; c < dim; ++c) out.values[dst * dim + c] += patches[src * dim + c];
      out.provenance[dst].push_back(static_cast<std::uint32_t>(src));
    }
  }
  const auto n = static_cast<double>(block * block);
  for (auto& v : out.values) v /= n;
  return out;
}

CompressedVideo run_baseline_uniform_pool(const VideoTokens& tokens, const PipelineConfig& config) {
  config.validate();
  CompressedVideo cv;
  cv.method = "uniform-pool";
  cv.config = config;
  cv.dim = tokens.dim();
  cv.source_patches = tokens.patch_count();

  const auto sampled = uniform_sample(tokens.n_frames(), std::min(config.baseline_frames, tokens.n_frames()));
  // Each frame belongs to the segment of its nearest sampled frame (earlier on ties).
  std::vector<std::uint32_t> labels(tokens.n_frames());
  for (std::size_t f = 0; f < labels.size(); ++f) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < sampled.size(); ++j) {
      const auto d = [f](std::size_t x) { return x > f ? x - f : f - x; };
      if (d(sampled[j]) < d(sampled[best])) best = j;
    }
    labels[f] = static_cast<std::uint32_t>(best);
  }
  std::vector<double> t(tokens.n_frames());
  for (std::size_t f = 0; f < t.size(); ++f) t[f] = static_cast<double>(f + 1);
  cv.partition = make_partition(labels, t);
  for (std::size_t j = 0; j < sampled.size(); ++j) {
    cv.keyframes.frames.push_back(sampled[j]);
    cv.keyframes.clusters.push_back(j);
  }

  cv.frames.resize(sampled.size());
  for (std::size_t j = 0; j < sampled.size(); ++j) {
    cv.frames[j].frame_index = sampled[j];
    cv.frames[j].tokens = pool_patch_grid(tokens.patches(sampled[j]), tokens.dim(), config.baseline_grid);
    cv.total_tokens += cv.frames[j].tokens.count();
  }
  return cv;
}

}  // namespace dyto
