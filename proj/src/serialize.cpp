// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/serialize.hpp"

#include <fstream>

#include "dyto/error.hpp"

namespace dyto {

namespace {

Json levels_json(const PartitionHierarchy& h) {
  Json levels = Json::array();
  for (const auto& p : h.levels) levels.push_back(partition_json(p));
  return levels;
}

Json metrics_json(const MethodMetrics& m) {
  return {{"coverage", m.coverage},
          {"accuracy", m.accuracy},
          {"reconstruction_error", m.reconstruction_error},
          {"tokens_used", m.tokens_used},
          {"wall_time_ms", m.wall_time_ms}};
}

}  // namespace

Json partition_json(const Partition& p) { return {{"k", p.k}, {"labels", p.labels}}; }

Json config_json(const PipelineConfig& c) {
  Json j = {{"budget", c.budget},
            {"heads", c.heads},
            {"r1", c.r1_cap},
            {"policy", to_string(c.policy)},
            {"keyframes_per_cluster", c.keyframes_per_cluster},
            {"seed", c.seed},
            {"rule", to_string(c.rule)},
            {"rule_threshold", c.rule_threshold},
            {"level", c.level_override ? Json(*c.level_override) : Json(nullptr)},
            {"spread_remainder", c.spread_remainder},
            {"pooling", to_string(c.pooling)},
            {"baseline_frames", c.baseline_frames},
            {"baseline_grid", c.baseline_grid}};
  return j;
}

Json clustering_document(const Segmentation& s, const KeyframeSet& keyframes, KeyframePolicy policy) {
  Json doc;
  doc["levels"] = levels_json(s.candidates);
  doc["selected_level"] = s.selected_level;
  doc["keyframes"] = keyframes.frames;
  doc["policy"] = to_string(policy);
  doc["rule"] = s.overridden ? "level-override" : std::string(to_string(s.rule));
  if (!s.overridden && s.rule != PartitionRule::PenultimateLevel) {
    doc["first_neighbour_levels"] = levels_json(s.hierarchy);
    doc["merge_costs"] = s.merge_costs;
  }
  return doc;
}

Json merge_trace(const MergedFrame& frame) {
  Json steps = Json::array();
  for (const auto& step : frame.steps) {
    Json pairs = Json::array();
    for (const auto& [p, q] : step.pairs) pairs.push_back({p, q});
    steps.push_back({{"pairs", pairs}});
  }
  return {{"frame", frame.frame_index},
          {"schedule", frame.schedule},
          {"steps", steps},
          {"provenance", frame.tokens.provenance},
          {"sizes", frame.tokens.sizes}};
}

Json sidecar_json(const CompressedVideo& cv, bool include_traces) {
  Json doc;
  doc["method"] = cv.method;
  doc["keyframes"] = cv.keyframes.frames;
  doc["keyframe_clusters"] = cv.keyframes.clusters;
  doc["partition"] = partition_json(cv.partition);
  if (cv.segmentation) {
    doc["selected_level"] = cv.segmentation->selected_level;
    doc["rule"] = cv.segmentation->overridden ? "level-override" : std::string(to_string(cv.segmentation->rule));
  }
  doc["config"] = config_json(cv.config);
  doc["dim"] = cv.dim;
  doc["source_patches"] = cv.source_patches;
  Json counts = Json::array();
  for (const auto& f : cv.frames) counts.push_back(f.tokens.count());
  doc["frame_tokens"] = counts;
  doc["total_tokens"] = cv.total_tokens;
  if (include_traces) {
    Json traces = Json::array();
    for (const auto& f : cv.frames) traces.push_back(merge_trace(f));
    doc["traces"] = traces;
  }
  return doc;
}

Json ground_truth_json(const GroundTruth& gt) {
  Json b = Json::array();
  for (const auto& [lo, hi] : gt.boundaries) b.push_back({lo, hi});
  return {{"boundaries", b}, {"labels", gt.labels}};
}

GroundTruth ground_truth_from_json(const Json& doc) {
  try {
    std::vector<FrameRange> ranges;
    for (const auto& r : doc.at("boundaries")) ranges.emplace_back(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>());
    const auto n = ranges.empty() ? 0 : ranges.back().second;
    auto gt = make_ground_truth(n, std::move(ranges));
    if (doc.at("labels").get<std::vector<std::uint32_t>>() != gt.labels)
      fail(ErrorKind::Format, "ground truth labels disagree with boundaries");
    return gt;
  } catch (const Json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed ground truth: ") + e.what());
  }
}

Json bench_report_json(const BenchReport& report) {
  const auto& c = report.config;
  Json runs = Json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"seed", r.seed},
                    {"events", r.events},
                    {"keyframes", r.keyframes},
                    {"dyto", metrics_json(r.dyto)},
                    {"uniform_pool", metrics_json(r.baseline)}});
  }
  return {{"suite",
           {{"runs", c.runs},
            {"seed", c.seed},
            {"events", {c.min_events, c.max_events}},
            {"frames", c.video.n_frames},
            {"tokens_per_frame", c.video.tokens_per_frame},
            {"dim", c.video.dim},
            {"sigma", c.video.sigma}}},
          {"config", config_json(c.pipeline)},
          {"methods", {{"dyto", metrics_json(report.dyto_mean)}, {"uniform_pool", metrics_json(report.baseline_mean)}}},
          {"runs", runs}};
}

std::vector<std::size_t> keyframes_from_clustering(const Json& doc) {
  try {
    return doc.at("keyframes").get<std::vector<std::size_t>>();
  } catch (const Json::exception& e) {
    fail(ErrorKind::Format, std::string("clustering document has no keyframes: ") + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::Storage, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorKind::Storage, "write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Storage, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::Format, path.string() + ": " + e.what());
  }
}

}  // namespace dyto
