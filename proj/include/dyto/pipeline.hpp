// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyto/clustering.hpp"
#include "dyto/merge.hpp"
#include "dyto/tensor_io.hpp"

namespace dyto {

struct PipelineConfig {
  std::size_t n_frames = 100;  // frames per synthetic video
  std::size_t budget = 3680;   // total output tokens Z
  std::size_t heads = 16;
  std::size_t r1_cap = 288;
  KeyframePolicy policy = KeyframePolicy::TemporalMiddle;
  std::size_t keyframes_per_cluster = 1;
  std::uint64_t seed = 0;  // random-uniform keyframe policy
  PartitionRule rule = PartitionRule::RefinedGap;
  double rule_threshold = 0.5;
  std::optional<std::size_t> level_override;
  bool spread_remainder = false;  // first Z mod K keyframes get one extra token
  Pooling pooling = Pooling::SizeWeighted;

  std::size_t baseline_frames = 10;  // uniform-pool baseline: frames sampled
  std::size_t baseline_grid = 12;    // uniform-pool baseline: pooled grid side

  bool parallel = true;  // compress keyframes concurrently

  void validate() const;
};

struct CompressedVideo {
  std::string method;
  KeyframeSet keyframes;
  Partition partition;
  std::optional<Segmentation> segmentation;  // absent for baselines
  std::vector<MergedFrame> frames;           // one per keyframe, temporal order
  PipelineConfig config;
  std::size_t dim = 0;
  std::size_t source_patches = 0;  // R0 per frame
  std::size_t total_tokens = 0;

  /// Common per-frame token count, or nullopt when frames differ.
  std::optional<std::size_t> uniform_frame_tokens() const;
  /// Rank 3 (K, T, D) when frames share a count, otherwise rank 2 (sum, D).
  TensorFile to_tensor() const;
};

CompressedVideo run_dyto(const VideoTokens& tokens, const PipelineConfig& config);

/// Per-keyframe token targets for budget Z split over K keyframes.
std::vector<std::size_t> frame_targets(std::size_t patch_count, std::size_t budget, std::size_t keyframes,
                                       bool spread_remainder);

/// Compress a chosen set of frames with the given per-frame targets.
std::vector<MergedFrame> compress_keyframes(const VideoTokens& tokens, const std::vector<std::size_t>& frames,
                                            const std::vector<std::size_t>& targets, const PipelineConfig& config);

/// Evenly spaced frame indices floor(j * N / count), j = 0..count-1.
std::vector<std::size_t> uniform_sample(std::size_t n_frames, std::size_t count);

/// Average-pools a side x side patch grid into grid x grid blocks.
TokenSet pool_patch_grid(std::span<const float> patches, std::size_t dim, std::size_t grid);

CompressedVideo run_baseline_uniform_pool(const VideoTokens& tokens, const PipelineConfig& config);

}  // namespace dyto
