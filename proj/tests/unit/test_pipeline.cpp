// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numeric>

#include "dyto/error.hpp"
#include "dyto/metrics.hpp"
#include "dyto/pipeline.hpp"
#include "dyto/synth.hpp"

using namespace dyto;

namespace {

SyntheticVideo small_video(std::size_t events, double sigma, std::uint64_t seed, std::size_t tokens = 65,
                           std::size_t frames = 40) {
  SyntheticSpec spec;
  spec.n_frames = frames;
  spec.n_events = events;
  spec.tokens_per_frame = tokens;
  spec.dim = 32;
  spec.sigma = sigma;
  spec.seed = seed;
  return generate_synthetic_video(spec);
}

PipelineConfig small_config(std::size_t budget) {
  PipelineConfig c;
  c.budget = budget;
  c.heads = 4;
  c.r1_cap = 32;
  c.baseline_frames = 4;
  c.baseline_grid = 4;
  return c;
}

}  // namespace

TEST_CASE("frame targets") {
  CHECK(frame_targets(576, 3680, 10, false) == std::vector<std::size_t>(10, 368));
  CHECK(frame_targets(576, 7200, 2, false) == std::vector<std::size_t>(2, 576));
  CHECK(frame_targets(576, 10, 3, true) == std::vector<std::size_t>{4, 3, 3});
  CHECK(frame_targets(576, 10, 3, false) == std::vector<std::size_t>{3, 3, 3});
  try {
    frame_targets(576, 1, 2, false);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    CHECK(std::string(e.what()).find("Z=1") != std::string::npos);
  }
}

TEST_CASE("uniform sample") {
  CHECK(uniform_sample(100, 10) == std::vector<std::size_t>{0, 10, 20, 30, 40, 50, 60, 70, 80, 90});
  CHECK(uniform_sample(5, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(uniform_sample(3, 4), Error);
}

TEST_CASE("grid pooling averages square blocks") {
  std::vector<float> patches(16);
  std::iota(patches.begin(), patches.end(), 0.0f);
  const auto pooled = pool_patch_grid(patches, 1, 2);
  REQUIRE(pooled.count() == 4);
  CHECK(pooled.token(0)[0] == doctest::Approx(2.5));   // 0 1 4 5
  CHECK(pooled.token(3)[0] == doctest::Approx(12.5));  // 10 11 14 15
  pooled.check_provenance(16);
  CHECK_THROWS_AS(pool_patch_grid(patches, 1, 3), Error);
  CHECK_THROWS_AS(pool_patch_grid(std::vector<float>(15, 0.0f), 1, 1), Error);
}

TEST_CASE("dyto output shape and budget") {
  const auto video = small_video(3, 0.0, 7);
  const auto cv = run_dyto(video.tokens, small_config(60));
  CHECK(cv.method == "dyto");
  CHECK(cv.keyframes.size() == 3);
  CHECK(cv.frames.size() == 3);
  CHECK(cv.total_tokens == 60);
  REQUIRE(cv.uniform_frame_tokens().has_value());
  CHECK(*cv.uniform_frame_tokens() == 20);
  const auto t = cv.to_tensor();
  CHECK(t.dims == std::vector<std::uint64_t>{3, 20, 32});
  for (const auto& f : cv.frames) f.tokens.check_provenance(64);
  CHECK(partition_accuracy(cv.partition, video.truth) == 1.0);
  CHECK(event_coverage(cv.keyframes, video.truth) == 1.0);
}

TEST_CASE("budget larger than the frames keeps every patch") {
  const auto video = small_video(2, 0.0, 3);
  const auto cv = run_dyto(video.tokens, small_config(100000));
  for (const auto& f : cv.frames) {
    CHECK(f.tokens.count() == 64);
    CHECK(f.steps.empty());
  }
}

TEST_CASE("budget below the keyframe count is a configuration error") {
  const auto video = small_video(2, 0.0, 3);
  CHECK_THROWS_AS(run_dyto(video.tokens, small_config(1)), Error);
}

TEST_CASE("spread remainder gives a ragged rank-2 tensor") {
  const auto video = small_video(3, 0.0, 11);
  auto config = small_config(61);
  config.spread_remainder = true;
  const auto cv = run_dyto(video.tokens, config);
  CHECK(cv.total_tokens == 61);
  CHECK_FALSE(cv.uniform_frame_tokens().has_value());
  CHECK(cv.to_tensor().dims == std::vector<std::uint64_t>{61, 32});
}

TEST_CASE("parallel and serial pipelines agree bit for bit") {
  const auto video = small_video(4, 0.05, 13);
  auto config = small_config(80);
  const auto a = run_dyto(video.tokens, config);
  config.parallel = false;
  const auto b = run_dyto(video.tokens, config);
  CHECK(a.to_tensor().values == b.to_tensor().values);
  CHECK(a.keyframes.frames == b.keyframes.frames);
}

TEST_CASE("repeated runs are identical") {
  const auto video = small_video(4, 0.05, 17);
  const auto a = run_dyto(video.tokens, small_config(80));
  const auto b = run_dyto(video.tokens, small_config(80));
  CHECK(a.to_tensor().values == b.to_tensor().values);
  for (std::size_t j = 0; j < a.frames.size(); ++j) CHECK(a.frames[j].tokens.provenance == b.frames[j].tokens.provenance);
}

TEST_CASE("per-cluster keyframe override") {
  const auto video = small_video(3, 0.0, 19);
  auto config = small_config(120);
  config.keyframes_per_cluster = 2;
  const auto cv = run_dyto(video.tokens, config);
  CHECK(cv.keyframes.size() == 6);
  CHECK(cv.total_tokens == 120);
}

TEST_CASE("uniform-pool baseline") {
  const auto video = small_video(3, 0.0, 23);
  const auto cv = run_baseline_uniform_pool(video.tokens, small_config(60));
  CHECK(cv.method == "uniform-pool");
  CHECK(cv.keyframes.frames == std::vector<std::size_t>{0, 10, 20, 30});
  CHECK(cv.total_tokens == 4 * 16);
  CHECK(cv.partition.k == 4);
  CHECK(cv.partition.labels[4] == 0);
  CHECK(cv.partition.labels[5] == 0);  // tie goes to the earlier sample
  CHECK(cv.partition.labels[6] == 1);
  CHECK(cv.partition.labels[39] == 3);
  for (const auto& f : cv.frames) f.tokens.check_provenance(64);
  CHECK(cv.to_tensor().dims == std::vector<std::uint64_t>{4, 16, 32});
}

TEST_CASE("pipeline rejects an invalid configuration") {
  const auto video = small_video(2, 0.0, 29);
  auto config = small_config(60);
  config.heads = 5;
  CHECK_THROWS_AS(run_dyto(video.tokens, config), Error);
}
