// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

// JSON documents exchanged with plotting and scripting tools. Frame indices
// are 0-based everywhere.

#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "dyto/bench_suite.hpp"
#include "dyto/clustering.hpp"
#include "dyto/merge.hpp"
#include "dyto/pipeline.hpp"
#include "dyto/synth.hpp"

namespace dyto {

using Json = nlohmann::ordered_json;

Json partition_json(const Partition& p);
Json config_json(const PipelineConfig& config);

/// {"levels":[{"k","labels"}...],"selected_level","keyframes","policy"}
/// plus "rule", and for refined rules "first_neighbour_levels" and
/// "merge_costs". "levels" is the list selected_level indexes into.
Json clustering_document(const Segmentation& s, const KeyframeSet& keyframes, KeyframePolicy policy);

/// {"frame","schedule","steps":[{"pairs":[[p,q]...]}...],"provenance","sizes"}
Json merge_trace(const MergedFrame& frame);

/// Sidecar for a compressed tensor: keyframes, partition, config, per-frame
/// counts, and merge traces when include_traces is set.
Json sidecar_json(const CompressedVideo& cv, bool include_traces);

/// {"boundaries":[[lo,hi)...],"labels":[...]}
Json ground_truth_json(const GroundTruth& gt);
GroundTruth ground_truth_from_json(const Json& doc);

Json bench_report_json(const BenchReport& report);

/// Keyframe indices from a clustering document.
std::vector<std::size_t> keyframes_from_clustering(const Json& doc);

void write_json(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);

}  // namespace dyto
