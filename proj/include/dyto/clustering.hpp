// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dyto/kernels.hpp"
#include "dyto/tensor_io.hpp"

namespace dyto {

/// Symmetric n x n temporally weighted distance matrix with unit diagonal.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// Symmetrized first-neighbour graph. nearest[i] is node i's own nearest
/// neighbour; edges are the undirected union, each stored once as (a < b)
/// and sorted.
struct NNGraph {
  std::size_t n = 0;
  std::vector<std::size_t> nearest;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Labels over nodes. Cluster ids are dense and ordered by each cluster's
/// smallest member index. timestamps[c] is the mean member timestamp.
struct Partition {
  std::vector<std::uint32_t> labels;
  std::size_t k = 0;
  std::vector<double> timestamps;

  std::size_t size() const { return labels.size(); }
  std::vector<std::vector<std::size_t>> members() const;
};

/// Finest partition first; cluster counts strictly decrease; last level has k = 1.
struct PartitionHierarchy {
  std::vector<Partition> levels;
};

struct KeyframeSet {
  std::vector<std::size_t> frames;    // ascending, 0-based
  std::vector<std::size_t> clusters;  // source cluster of each keyframe

  std::size_t size() const { return frames.size(); }
};

DistanceMatrix temporal_distance_matrix(const ClsSequence& cls);

/// Distances for arbitrary unit feature rows (cluster means at coarser
/// levels). horizon is the original frame count N.
DistanceMatrix temporal_distances(FeatureView features, std::span<const double> timestamps, double horizon);

NNGraph one_nn_graph(const DistanceMatrix& w);

/// Components of g; node timestamps feed the cluster timestamps.
Partition connected_components(const NNGraph& g, std::span<const double> timestamps);

/// Relabel so ids follow first appearance and recompute k and timestamps.
Partition make_partition(std::span<const std::uint32_t> labels, std::span<const double> timestamps);

/// Unit-normalized mean CLS vector of each cluster, k x D.
std::vector<double> cluster_features(const ClsSequence& cls, const Partition& p);

PartitionHierarchy build_hierarchy(const ClsSequence& cls);

/// Last level with k >= 2, or the single k = 1 level.
const Partition& select_partition(const PartitionHierarchy& h);

/// Single-pair agglomeration path starting from `start`: each step merges
/// the two clusters at the smallest temporally weighted distance (same
/// weighting and horizon as build_hierarchy). path.levels[s] is the
/// partition after s merges; costs[s] is the feature dissimilarity
/// 1 - <mean_a, mean_b> of merge s+1.
struct MergePath {
  PartitionHierarchy path;
  std::vector<double> costs;
};

MergePath single_merge_path(const ClsSequence& cls, const Partition& start);

/// Number of merges to keep: stop just before the largest increase in merge
/// cost (the first merge is measured against zero). Ties pick the earliest.
std::size_t largest_gap_cut(std::span<const double> costs);

/// Number of merges whose cost stays at or below threshold before the first
/// one that exceeds it.
std::size_t threshold_cut(std::span<const double> costs, double threshold);

enum class PartitionRule {
  RefinedGap,        // single-merge refinement, largest cost gap
  RefinedThreshold,  // single-merge refinement, fixed cost threshold
  PenultimateLevel,  // select_partition on the first-neighbour hierarchy
};

PartitionRule parse_partition_rule(std::string_view name);
std::string_view to_string(PartitionRule rule);

struct SegmentationOptions {
  PartitionRule rule = PartitionRule::RefinedGap;
  double threshold = 0.5;
  /// Pick this first-neighbour hierarchy level directly, bypassing the rule.
  std::optional<std::size_t> level_override;
};

struct Segmentation {
  PartitionHierarchy hierarchy;   // first-neighbour levels
  PartitionHierarchy candidates;  // levels the selection indexes into
  std::vector<double> merge_costs;  // empty unless a refined rule ran
  std::size_t selected_level = 0;
  PartitionRule rule = PartitionRule::RefinedGap;
  bool overridden = false;

  const Partition& selected() const { return candidates.levels[selected_level]; }
};

Segmentation segment_events(const ClsSequence& cls, const SegmentationOptions& options = {});

enum class KeyframePolicy { TemporalMiddle, CentroidNearest, RandomUniform };

KeyframePolicy parse_keyframe_policy(std::string_view name);
std::string_view to_string(KeyframePolicy policy);

struct KeyframeOptions {
  KeyframePolicy policy = KeyframePolicy::TemporalMiddle;
  std::size_t per_cluster = 1;
  std::uint64_t seed = 0;
};

/// One keyframe per cluster (or per_cluster evenly spread members, capped at
/// the cluster size), sorted by frame index.
KeyframeSet select_keyframes(const Partition& p, const ClsSequence& cls, const KeyframeOptions& options = {});

}  // namespace dyto
