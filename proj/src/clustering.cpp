// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dyto/error.hpp"
#include "dyto/rng.hpp"

namespace dyto {

namespace {

// Must match kernels::temporal_distances element for element.
double weighted_distance(double dot, double ti, double tj, double horizon) {
  return (1.0 - std::min(dot, 1.0)) * std::abs(ti - tj) / horizon;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

// Unit mean direction of the given rows, members in ascending order.
void mean_direction(const ClsSequence& cls, std::span<const std::size_t> members, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (auto m : members) {
    const auto row = cls.row(m);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += row[c];
  }
  const auto count = static_cast<double>(members.size());
  double sq = 0.0;
  for (auto& v : out) {
    v /= count;
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0)) fail(ErrorKind::Computation, "cluster mean feature has zero norm");
  for (auto& v : out) v /= norm;
}

std::vector<double> frame_timestamps(const ClsSequence& cls) {
  std::vector<double> t(cls.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cls.timestamp(i);
  return t;
}

// Smallest index wins on ties.
std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> out(k);
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
  return out;
}

DistanceMatrix temporal_distances(FeatureView features, std::span<const double> timestamps, double horizon) {
  if (features.rows < 2) fail(ErrorKind::Input, "need ≥ 2 frames");
  DistanceMatrix w;
  w.n = features.rows;
  w.values.resize(w.n * w.n);
  kernels::temporal_distances(features, timestamps, horizon, w.values);
  return w;
}

DistanceMatrix temporal_distance_matrix(const ClsSequence& cls) {
  if (cls.size() < 2) fail(ErrorKind::Input, "need ≥ 2 frames");
  const auto t = frame_timestamps(cls);
  return temporal_distances({cls.vectors(), cls.size(), cls.dim()}, t, static_cast<double>(cls.size()));
}

NNGraph one_nn_graph(const DistanceMatrix& w) {
  NNGraph g;
  g.n = w.n;
  g.nearest.resize(w.n);
  for (std::size_t i = 0; i < w.n; ++i) {
    std::size_t best = w.n;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < w.n; ++j) {
      if (j == i) continue;
      const double v = w.at(i, j);
      if (v < best_value || best == w.n) {
        best_value = v;
        best = j;
      }
    }
    g.nearest[i] = best;
    g.edges.emplace_back(std::min(i, best), std::max(i, best));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  return g;
}

Partition make_partition(std::span<const std::uint32_t> labels, std::span<const double> timestamps) {
  Partition p;
  p.labels.resize(labels.size());
  std::vector<std::uint32_t> remap;
  std::vector<std::uint32_t> seen_as;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto old = labels[i];
    if (old >= remap.size()) remap.resize(old + 1, std::numeric_limits<std::uint32_t>::max());
    if (remap[old] == std::numeric_limits<std::uint32_t>::max()) remap[old] = static_cast<std::uint32_t>(p.k++);
    p.labels[i] = remap[old];
  }
  p.timestamps.assign(p.k, 0.0);
  std::vector<std::size_t> counts(p.k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    p.timestamps[p.labels[i]] += timestamps[i];
    ++counts[p.labels[i]];
  }
  for (std::size_t c = 0; c < p.k; ++c) p.timestamps[c] /= static_cast<double>(counts[c]);
  return p;
}

Partition connected_components(const NNGraph& g, std::span<const double> timestamps) {
  std::vector<std::size_t> parent(g.n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const auto& [a, b] : g.edges) {
    const auto ra = find_root(parent, a);
    const auto rb = find_root(parent, b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::uint32_t> roots(g.n);
  for (std::size_t i = 0; i < g.n; ++i) roots[i] = static_cast<std::uint32_t>(find_root(parent, i));
  return make_partition(roots, timestamps);
}

std::vector<double> cluster_features(const ClsSequence& cls, const Partition& p) {
  std::vector<double> out(p.k * cls.dim());
  const auto members = p.members();
  for (std::size_t c = 0; c < p.k; ++c)
    mean_direction(cls, members[c], std::span<double>(out).subspan(c * cls.dim(), cls.dim()));
  return out;
}

PartitionHierarchy build_hierarchy(const ClsSequence& cls) {
  const auto frame_t = frame_timestamps(cls);
  const auto horizon = static_cast<double>(cls.size());

  PartitionHierarchy h;
  h.levels.push_back(connected_components(one_nn_graph(temporal_distance_matrix(cls)), frame_t));

  while (h.levels.back().k > 1) {
    const Partition& current = h.levels.back();
    const auto features = cluster_features(cls, current);
    const auto w = temporal_distances({features, current.k, cls.dim()}, current.timestamps, horizon);
    const auto merged = connected_components(one_nn_graph(w), current.timestamps);

    std::vector<std::uint32_t> labels(cls.size());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = merged.labels[current.labels[i]];
    h.levels.push_back(make_partition(labels, frame_t));
  }
  return h;
}

const Partition& select_partition(const PartitionHierarchy& h) {
  for (auto it = h.levels.rbegin(); it != h.levels.rend(); ++it) {
    if (it->k >= 2) return *it;
  }
  return h.levels.front();
}

MergePath single_merge_path(const ClsSequence& cls, const Partition& start) {
  const std::size_t dim = cls.dim();
  const auto horizon = static_cast<double>(cls.size());
  const auto frame_t = frame_timestamps(cls);

  auto members = start.members();
  std::vector<double> timestamps = start.timestamps;
  std::vector<std::vector<double>> features(start.k, std::vector<double>(dim));
  for (std::size_t c = 0; c < start.k; ++c) mean_direction(cls, members[c], features[c]);

  std::vector<std::vector<double>> dots(start.k, std::vector<double>(start.k, 1.0));
  for (std::size_t i = 0; i < start.k; ++i)
    for (std::size_t j = i + 1; j < start.k; ++j) dots[i][j] = dots[j][i] = dot(features[i], features[j]);

  MergePath out;
  out.path.levels.push_back(start);
  while (members.size() > 1) {
    const std::size_t k = members.size();
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double w = weighted_distance(dots[i][j], timestamps[i], timestamps[j], horizon);
        if (w < best) {
          best = w;
          best_a = i;
          best_b = j;
        }
      }
    }
    out.costs.push_back(1.0 - std::min(dots[best_a][best_b], 1.0));

    auto& into = members[best_a];
    into.insert(into.end(), members[best_b].begin(), members[best_b].end());
    std::sort(into.begin(), into.end());
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(best_b));
    features.erase(features.begin() + static_cast<std::ptrdiff_t>(best_b));
    timestamps.erase(timestamps.begin() + static_cast<std::ptrdiff_t>(best_b));
    dots.erase(dots.begin() + static_cast<std::ptrdiff_t>(best_b));
    for (auto& row : dots) row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));

    mean_direction(cls, into, features[best_a]);
    double t = 0.0;
    for (auto m : into) t += frame_t[m];
    timestamps[best_a] = t / static_cast<double>(into.size());
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (j != best_a) dots[best_a][j] = dots[j][best_a] = dot(features[best_a], features[j]);
    }

    std::vector<std::uint32_t> labels(cls.size());
    for (std::size_t c = 0; c < members.size(); ++c)
      for (auto m : members[c]) labels[m] = static_cast<std::uint32_t>(c);
    out.path.levels.push_back(make_partition(labels, frame_t));
  }
  return out;
}

std::size_t largest_gap_cut(std::span<const double> costs) {
  std::size_t cut = 0;
  double widest = -std::numeric_limits<double>::infinity();
  double previous = 0.0;
  for (std::size_t s = 0; s < costs.size(); ++s) {
    const double gap = costs[s] - previous;
    if (gap > widest) {
      widest = gap;
      cut = s;
    }
    previous = costs[s];
  }
  return cut;
}

std::size_t threshold_cut(std::span<const double> costs, double threshold) {
  std::size_t s = 0;
  while (s < costs.size() && costs[s] <= threshold) ++s;
  return s;
}

PartitionRule parse_partition_rule(std::string_view name) {
  if (name == "refined-gap") return PartitionRule::RefinedGap;
  if (name == "refined-threshold") return PartitionRule::RefinedThreshold;
  if (name == "penultimate-level") return PartitionRule::PenultimateLevel;
  fail(ErrorKind::Config, "unknown partition rule '" + std::string(name) + "'");
}

std::string_view to_string(PartitionRule rule) {
  switch (rule) {
    case PartitionRule::RefinedGap: return "refined-gap";
    case PartitionRule::RefinedThreshold: return "refined-threshold";
    case PartitionRule::PenultimateLevel: return "penultimate-level";
  }
  return "unknown";
}

Segmentation segment_events(const ClsSequence& cls, const SegmentationOptions& options) {
  Segmentation s;
  s.rule = options.rule;
  s.hierarchy = build_hierarchy(cls);

  if (options.level_override) {
    if (*options.level_override >= s.hierarchy.levels.size()) {
      fail(ErrorKind::Config, "level override " + std::to_string(*options.level_override) +
                                  " out of range, hierarchy has " + std::to_string(s.hierarchy.levels.size()) +
                                  " levels");
    }
    s.candidates = s.hierarchy;
    s.selected_level = *options.level_override;
    s.overridden = true;
    return s;
  }

  switch (options.rule) {
    case PartitionRule::PenultimateLevel: {
      s.candidates = s.hierarchy;
      const auto& chosen = select_partition(s.hierarchy);
      s.selected_level = static_cast<std::size_t>(&chosen - s.hierarchy.levels.data());
      break;
    }
    case PartitionRule::RefinedGap:
    case PartitionRule::RefinedThreshold: {
      auto path = single_merge_path(cls, s.hierarchy.levels.front());
      s.selected_level = options.rule == PartitionRule::RefinedGap ? largest_gap_cut(path.costs)
                                                                    : threshold_cut(path.costs, options.threshold);
      s.candidates = std::move(path.path);
      s.merge_costs = std::move(path.costs);
      break;
    }
  }
  return s;
}

KeyframePolicy parse_keyframe_policy(std::string_view name) {
  if (name == "temporal-middle") return KeyframePolicy::TemporalMiddle;
  if (name == "centroid-nearest") return KeyframePolicy::CentroidNearest;
  if (name == "random-uniform") return KeyframePolicy::RandomUniform;
  fail(ErrorKind::Config, "unknown keyframe policy '" + std::string(name) + "'");
}

std::string_view to_string(KeyframePolicy policy) {
  switch (policy) {
    case KeyframePolicy::TemporalMiddle: return "temporal-middle";
    case KeyframePolicy::CentroidNearest: return "centroid-nearest";
    case KeyframePolicy::RandomUniform: return "random-uniform";
  }
  return "unknown";
}

KeyframeSet select_keyframes(const Partition& p, const ClsSequence& cls, const KeyframeOptions& options) {
  if (options.per_cluster == 0) fail(ErrorKind::Config, "keyframes per cluster must be positive");
  if (p.size() != cls.size()) fail(ErrorKind::Input, "partition and CLS sequence lengths differ");

  std::vector<std::pair<std::size_t, std::size_t>> picked;  // (frame, cluster)
  const auto members = p.members();
  for (std::size_t c = 0; c < p.k; ++c) {
    const auto& group = members[c];
    const std::size_t size = group.size();
    const std::size_t m = std::min(options.per_cluster, size);
    switch (options.policy) {
      case KeyframePolicy::TemporalMiddle:
        for (std::size_t j = 0; j < m; ++j) picked.emplace_back(group[((2 * j + 1) * size - 1) / (2 * m)], c);
        break;
      case KeyframePolicy::CentroidNearest: {
        std::vector<double> centre(cls.dim(), 0.0);
        for (auto f : group) {
          const auto row = cls.row(f);
          for (std::size_t d = 0; d < centre.size(); ++d) centre[d] += row[d];
        }
        for (auto& v : centre) v /= static_cast<double>(size);
        std::vector<std::pair<double, std::size_t>> ranked;
        for (auto f : group) {
          const auto row = cls.row(f);
          double sq = 0.0;
          for (std::size_t d = 0; d < centre.size(); ++d) sq += (row[d] - centre[d]) * (row[d] - centre[d]);
          ranked.emplace_back(sq, f);
        }
        std::sort(ranked.begin(), ranked.end());
        for (std::size_t j = 0; j < m; ++j) picked.emplace_back(ranked[j].second, c);
        break;
      }
      case KeyframePolicy::RandomUniform: {
        const auto rng = CounterRng::derive(options.seed, c);
        std::vector<std::size_t> pool = group;
        for (std::size_t j = 0; j < m; ++j) {
          const auto swap_with = j + rng.below(j, size - j);
          std::swap(pool[j], pool[swap_with]);
          picked.emplace_back(pool[j], c);
        }
        break;
      }
    }
  }
  std::sort(picked.begin(), picked.end());

  KeyframeSet out;
  for (const auto& [frame, cluster] : picked) {
    out.frames.push_back(frame);
    out.clusters.push_back(cluster);
  }
  return out;
}

}  // namespace dyto
