// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace dyto {

/// Live tokens of one frame during merging. values is count x dim; each
/// token carries the source patches it absorbed (provenance, ascending) and
/// their count (size).
struct TokenSet {
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<std::uint32_t> sizes;
  std::vector<std::vector<std::uint32_t>> provenance;

  /// Singleton tokens from a contiguous count x dim block of patches.
  static TokenSet from_patches(std::span<const float> patches, std::size_t dim);

  std::size_t count() const { return sizes.size(); }
  std::span<const double> token(std::size_t i) const { return {values.data() + i * dim, dim}; }

  /// Throws Validation unless provenance partitions {0..origin_count-1}
  /// and sizes match.
  void check_provenance(std::size_t origin_count) const;
};

struct Match {
  std::size_t p = 0;  // position of the absorbed token (even)
  std::size_t q = 0;  // position of the surviving token (odd)
  double score = 0.0;

  friend bool operator==(const Match&, const Match&) = default;
};

/// Pairs ordered by non-increasing score; each p appears once.
struct MatchSet {
  std::vector<Match> pairs;

  std::size_t size() const { return pairs.size(); }
};

/// Mean over heads of the cosine between matching D/H-channel slices.
double head_similarity(std::span<const double> a, std::span<const double> b, std::size_t heads);

/// Per-token, per-head L2 norms (count x heads). Zero norms are a
/// computation error naming token and head.
std::vector<double> head_norms(const TokenSet& t, std::size_t heads);

/// Alternating split (even positions propose into odd positions), best
/// partner per proposer, top-r proposals by score.
MatchSet bipartite_match(const TokenSet& t, std::size_t r, std::size_t heads);

enum class Pooling { SizeWeighted, Unweighted };

Pooling parse_pooling(std::string_view name);
std::string_view to_string(Pooling pooling);

/// Every matched p token is folded into its q token and removed. Several p
/// tokens may share a q; the survivor becomes their joint (size-weighted)
/// mean. Survivors keep their relative order.
TokenSet merge_matched(const TokenSet& t, const MatchSet& m, Pooling pooling = Pooling::SizeWeighted);

/// Per-iteration merge counts taking one frame from start_count tokens to target.
struct MergeSchedule {
  std::size_t start_count = 0;
  std::size_t target = 0;
  std::vector<std::size_t> steps;
  std::size_t heads = 1;
};

/// Greedy schedule: first step capped at r1_cap, every step at half the live
/// tokens, never overshooting the target.
MergeSchedule plan_to_target(std::size_t start_count, std::size_t target, std::size_t r1_cap, std::size_t heads);

/// Schedule for keyframes of L tokens (CLS excluded) under total budget Z
/// split evenly across K keyframes.
MergeSchedule plan_budget(std::size_t tokens_per_frame, std::size_t budget, std::size_t keyframes,
                          std::size_t r1_cap, std::size_t heads = 16);

struct MergeStep {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (p, q) positions at that step
};

struct MergedFrame {
  std::size_t frame_index = 0;
  TokenSet tokens;
  std::vector<std::size_t> schedule;
  std::vector<MergeStep> steps;
};

/// Runs the schedule on one frame's R0 x D patch tokens.
MergedFrame compress_frame(std::span<const float> patches, std::size_t dim, std::size_t frame_index,
                           const MergeSchedule& schedule, Pooling pooling = Pooling::SizeWeighted);

}  // namespace dyto
