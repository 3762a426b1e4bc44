// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dyto/tensor_io.hpp"

namespace dyto {

using FrameRange = std::pair<std::size_t, std::size_t>;  // half-open [lo, hi), 0-based

struct SyntheticSpec {
  std::size_t n_frames = 100;
  std::size_t n_events = 5;
  std::size_t tokens_per_frame = 577;
  std::size_t dim = 64;
  double sigma = 0.05;
  double offset_scale = 0.5;     // magnitude of the per-patch spatial offsets
  std::size_t offset_regions = 6;
  std::size_t min_event_length = 2;  // random boundaries only; lowered to N/E when needed
  std::vector<FrameRange> boundaries;  // explicit events; random when empty
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::vector<FrameRange> boundaries;
  std::vector<std::uint32_t> labels;

  std::size_t n_events() const { return boundaries.size(); }
};

struct SyntheticVideo {
  VideoTokens tokens;
  GroundTruth truth;
};

/// Event directions are orthonormalized seeded Gaussian vectors. A frame's
/// CLS is normalize(direction + sigma * noise); its patches are
/// direction + offset(patch) + sigma * noise, where offsets come from a
/// seeded Voronoi layout of offset_regions prototype vectors over the patch
/// grid. Every draw is addressed by counter, so output is bit-identical for
/// a given spec regardless of thread count.
SyntheticVideo generate_synthetic_video(const SyntheticSpec& spec);

/// Event boundaries the generator would use for spec (explicit or random).
std::vector<FrameRange> event_boundaries(const SyntheticSpec& spec);

GroundTruth make_ground_truth(std::size_t n_frames, std::vector<FrameRange> boundaries);

}  // namespace dyto
