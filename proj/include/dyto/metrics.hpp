// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dyto/clustering.hpp"
#include "dyto/merge.hpp"
#include "dyto/pipeline.hpp"
#include "dyto/synth.hpp"

namespace dyto {

struct Assignment {
  std::vector<std::size_t> column_of_row;
  double total = 0.0;  // summed in row order
};

/// Minimum-cost perfect assignment on a k x k row-major cost matrix. Among
/// optimal assignments the lexicographically smallest permutation is
/// returned.
Assignment hungarian_match(std::span<const double> cost, std::size_t rows, std::size_t cols);

/// Fraction of frames whose cluster is matched to their event under the
/// agreement-maximizing one-to-one cluster/event mapping.
double partition_accuracy(std::span<const std::uint32_t> labels, const GroundTruth& gt);
double partition_accuracy(const Partition& p, const GroundTruth& gt);

/// Fraction of events that contain at least one keyframe.
double event_coverage(std::span<const std::size_t> keyframes, const GroundTruth& gt);
double event_coverage(const KeyframeSet& k, const GroundTruth& gt);

/// Mean of 1 - cos(source patch, merged token holding it) over a frame.
double frame_reconstruction_error(std::span<const float> patches, std::size_t dim, const TokenSet& merged);

/// Same, over every source patch of every compressed frame.
double reconstruction_error(const CompressedVideo& cv, const VideoTokens& original);

/// Unweighted mean-pooling of consecutive tokens into `target` groups
/// [floor(g R / T), floor((g + 1) R / T)).
TokenSet mean_pool_tokens(std::span<const float> patches, std::size_t dim, std::size_t target);

/// Reference for bipartite_match: full |P| x |Q| score table, per-row
/// argmax, global top-r. Guarded to R <= 16.
MatchSet exhaustive_match_oracle(const TokenSet& t, std::size_t r, std::size_t heads);

}  // namespace dyto
