// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any gated criterion fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dyto/bench_suite.hpp"
#include "dyto/error.hpp"
#include "dyto/metrics.hpp"
#include "dyto/serialize.hpp"
#include "dyto/synth.hpp"
#include "oracles.hpp"

using namespace dyto;

namespace {

int failures = 0;

struct Outcome {
  bool ok = true;
  std::string detail;
};

void criterion(const std::string& name, double limit_s, bool gated, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = out.ok && in_time;
  if (!pass && gated) ++failures;
  std::printf("%s  %-28s %s (%.2f s%s)%s\n", pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs,
              limit_s > 0.0 ? (", limit " + std::to_string(static_cast<int>(limit_s)) + " s").c_str() : "",
              gated ? "" : " [recorded only]");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<float> normal_floats(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<float> g;
  std::vector<float> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

SyntheticSpec video_spec(std::size_t events, double sigma, std::uint64_t seed) {
  SyntheticSpec s;
  s.n_frames = 100;
  s.n_events = events;
  s.sigma = sigma;
  s.seed = seed;
  return s;
}

Outcome equation_fidelity() {
  std::mt19937_64 rng(1001);
  double worst_w = 0.0, worst_h = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng() % 31;
    const std::size_t dim = 1 + rng() % 64;
    std::vector<std::vector<double>> raw(n);
    std::vector<double> flat;
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (auto& row : raw) {
      row = oracle::random_unit(rng, dim);
      const double s = scale(rng);
      for (auto& x : row) x *= s;
      flat.insert(flat.end(), row.begin(), row.end());
    }
    const auto w = temporal_distance_matrix(ClsSequence(n, dim, flat));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst_w = std::max(worst_w, std::abs(w.at(i, j) - oracle::naive_temporal_distance(raw, i, j)));
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t heads = std::size_t{1} << (rng() % 5);
    const std::size_t dim = heads * (1 + rng() % 64);
    std::normal_distribution<double> g;
    std::vector<double> a(dim), b(dim);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    worst_h = std::max(worst_h, std::abs(head_similarity(a, b, heads) - oracle::naive_head_similarity(a, b, heads)));
  }
  return {worst_w <= 1e-6 && worst_h <= 1e-6, fmt("max |dW| %.2e, max |dS| %.2e, tol 1e-6", worst_w, worst_h)};
}

Outcome match_oracle() {
  std::mt19937_64 rng(1002);
  std::size_t mismatches = 0, checks = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t count = 2 + rng() % 11;
    const std::size_t heads = 1 + rng() % 4;
    const std::size_t dim = heads * (1 + rng() % 8);
    auto patches = normal_floats(rng, count * dim);
    if (trial % 5 == 0) {
      // quantized values force exact score ties
      for (auto& x : patches) x = std::round(x);
      for (std::size_t i = 0; i < count * dim; i += dim)
        for (std::size_t h = 0; h < heads; ++h) patches[i + h * (dim / heads)] = 1.0f;
    }
    const auto t = TokenSet::from_patches(patches, dim);
    for (std::size_t r = 0; r <= count / 2; ++r) {
      ++checks;
      if (bipartite_match(t, r, heads).pairs != exhaustive_match_oracle(t, r, heads).pairs) ++mismatches;
    }
  }
  return {mismatches == 0, fmt("%zu mismatches in %zu (set, r) checks", mismatches, checks)};
}

Outcome hungarian() {
  std::mt19937_64 rng(1003);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 1 + rng() % 8;
    std::vector<double> cost(k * k);
    for (auto& c : cost)
      c = trial % 2 ? std::uniform_real_distribution<double>(0, 100)(rng) : static_cast<double>(rng() % 5);
    const auto got = hungarian_match(cost, k, k);
    const auto want = oracle::brute_force_assignment(cost, k);
    if (got.column_of_row != want.perm || got.total != want.total) ++mismatches;
  }
  return {mismatches == 0, fmt("%zu mismatches in 500 matrices", mismatches)};
}

Outcome budget() {
  std::size_t bad = 0;
  for (std::size_t z : {3680u, 7200u}) {
    for (std::size_t k = 1; k <= 64; ++k) {
      const auto s = plan_budget(577, z, k, 288);
      std::size_t live = s.start_count;
      for (auto r : s.steps) live -= r;
      const std::size_t expected = std::min<std::size_t>(z / k, 576);
      if (live != expected || live * k > z || (!s.steps.empty() && s.steps[0] > 288)) ++bad;
    }
  }
  return {bad == 0, fmt("%zu of 128 (Z, K) cases off; per-frame count min(floor(Z/K), 576)", bad)};
}

Outcome conservation() {
  std::mt19937_64 rng(1005);
  double worst = 0.0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto video = generate_synthetic_video([&] {
      auto s = video_spec(1, 0.05, run);
      s.n_frames = 1;
      return s;
    }());
    const auto patches = video.tokens.patches(0);
    const std::size_t k = 1 + rng() % 64;
    const auto frame = compress_frame(patches, 64, 0, plan_budget(577, 3680, k, 288));
    for (std::size_t c = 0; c < 64; ++c) {
      double before = 0.0, after = 0.0;
      for (std::size_t i = 0; i < 576; ++i) before += patches[i * 64 + c];
      for (std::size_t i = 0; i < frame.tokens.count(); ++i) after += frame.tokens.sizes[i] * frame.tokens.token(i)[c];
      worst = std::max(worst, std::abs(before - after));
    }
  }
  return {worst <= 1e-4, fmt("max channel drift %.2e, tol 1e-4", worst)};
}

struct BenchCapture {
  std::string report;
  std::vector<std::vector<std::uint8_t>> tensors;
  std::size_t frames_checked = 0;
  std::size_t provenance_failures = 0;
};

BenchCapture run_bench() {
  BenchConfig c;
  c.seed = 2024;
  c.timing = false;
  BenchCapture cap;
  const auto report = run_bench_suite(
      c, [&](const BenchRun&, const SyntheticVideo&, const CompressedVideo& d, const CompressedVideo& b) {
        for (const auto* cv : {&d, &b}) {
          cap.tensors.push_back(encode_dyt1(cv->to_tensor()));
          for (const auto& f : cv->frames) {
            ++cap.frames_checked;
            try {
              f.tokens.check_provenance(cv->source_patches);
            } catch (const Error&) {
              ++cap.provenance_failures;
            }
          }
        }
      });
  cap.report = bench_report_json(report).dump(2);
  return cap;
}

Outcome noiseless() {
  std::size_t perfect = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t events = 2 + seed % 7;
    const auto video = generate_synthetic_video(video_spec(events, 0.0, seed));
    const auto cv = run_dyto(video.tokens, PipelineConfig{});
    if (partition_accuracy(cv.partition, video.truth) == 1.0 && event_coverage(cv.keyframes, video.truth) == 1.0)
      ++perfect;
  }
  return {perfect == 50, fmt("%zu of 50 runs with accuracy = coverage = 1.0", perfect)};
}

Outcome noisy() {
  std::vector<double> accuracy;
  std::size_t covered = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t events = 3 + seed % 6;
    const auto video = generate_synthetic_video(video_spec(events, 0.05, 500 + seed));
    const PipelineConfig config;
    const auto cv = run_dyto(video.tokens, config);
    const auto base = run_baseline_uniform_pool(video.tokens, config);
    accuracy.push_back(partition_accuracy(cv.partition, video.truth));
    if (event_coverage(cv.keyframes, video.truth) >= event_coverage(base.keyframes, video.truth)) ++covered;
  }
  const double med = median(accuracy);
  return {med >= 0.95 && covered >= 45,
          fmt("median accuracy %.4f (>= 0.95), coverage >= baseline in %zu of 50 (>= 45)", med, covered)};
}

Outcome reconstruction() {
  std::vector<double> dyto_err, pool_err;
  const std::size_t target = 3680 / 10;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto spec = video_spec(1, 0.05, 900 + seed);
    spec.n_frames = 1;
    const auto video = generate_synthetic_video(spec);
    const auto patches = video.tokens.patches(0);
    const auto merged = compress_frame(patches, 64, 0, plan_to_target(576, target, 288, 16));
    dyto_err.push_back(frame_reconstruction_error(patches, 64, merged.tokens));
    pool_err.push_back(frame_reconstruction_error(patches, 64, mean_pool_tokens(patches, 64, target)));
  }
  const double d = median(dyto_err), p = median(pool_err);
  return {d <= p, fmt("median error merge %.4f vs mean-pool %.4f at %zu tokens/frame", d, p, target)};
}

Outcome throughput() {
  auto spec = video_spec(8, 0.05, 77);  // K = 8 keeps Z / K below the frame size
  spec.dim = 1024;
  const auto video = generate_synthetic_video(spec);
  PipelineConfig config;
  config.parallel = false;
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto start = std::chrono::steady_clock::now();
  const auto cv = run_dyto(video.tokens, config);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  omp_set_num_threads(threads);
  return {secs < 5.0, fmt("run_dyto N=100 L=577 D=1024 Z=3680 single thread: %.2f s, K=%zu", secs,
                          cv.keyframes.size())};
}

}  // namespace

int main() {
  criterion("equation fidelity", 10, true, equation_fidelity);
  criterion("match oracle equivalence", 30, true, match_oracle);
  criterion("hungarian correctness", 10, true, hungarian);
  criterion("budget arithmetic", 0, true, budget);
  criterion("conservation", 0, true, conservation);

  BenchCapture first, second;
  criterion("provenance", 0, true, [&] {
    first = run_bench();
    return Outcome{first.provenance_failures == 0 && first.frames_checked > 0,
                   fmt("%zu of %zu bench frames fail", first.provenance_failures, first.frames_checked)};
  });
  criterion("noiseless segmentation", 60, true, noiseless);
  criterion("noisy segmentation", 0, true, noisy);
  criterion("reconstruction", 0, true, reconstruction);
  criterion("determinism", 0, true, [&] {
    second = run_bench();
    const bool same = first.report == second.report && first.tensors == second.tensors;
    return Outcome{same, fmt("report %s, %zu tensors %s", first.report == second.report ? "identical" : "differs",
                             first.tensors.size(), first.tensors == second.tensors ? "identical" : "differ")};
  });
  criterion("throughput", 0, false, throughput);
  std::printf("%s\n", failures == 0 ? "ALL GATED CRITERIA PASS" : (std::to_string(failures) + " FAILED").c_str());
  return failures == 0 ? 0 : 1;
}
