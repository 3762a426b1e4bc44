// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dyto/error.hpp"
#include "dyto/rng.hpp"

namespace dyto {

namespace {

enum Stream : std::uint64_t { kBoundaries = 1, kDirections = 2, kPrototypes = 3, kSites = 4, kNoise = 5 };

void normalize(std::span<double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double n = std::sqrt(sq);
  if (n > 0.0)
    for (double& x : v) x /= n;
}

std::vector<double> event_directions(const SyntheticSpec& spec) {
  const auto rng = CounterRng::derive(spec.seed, kDirections);
  const std::size_t d = spec.dim;
  std::vector<double> dirs(spec.n_events * d);
  for (std::size_t e = 0; e < spec.n_events; ++e) {
    std::span<double> v(dirs.data() + e * d, d);
    for (std::size_t c = 0; c < d; ++c) v[c] = rng.normal(e * d + c);
    std::vector<double> raw(v.begin(), v.end());
    // Modified Gram-Schmidt against earlier directions while they span < D.
    if (e < d) {
      for (std::size_t prev = 0; prev < e; ++prev) {
        std::span<const double> u(dirs.data() + prev * d, d);
        double proj = 0.0;
        for (std::size_t c = 0; c < d; ++c) proj += v[c] * u[c];
        for (std::size_t c = 0; c < d; ++c) v[c] -= proj * u[c];
      }
      double sq = 0.0;
      for (double x : v) sq += x * x;
      if (std::sqrt(sq) < 1e-8) std::copy(raw.begin(), raw.end(), v.begin());
    }
    normalize(v);
  }
  return dirs;
}

std::vector<double> patch_offsets(const SyntheticSpec& spec) {
  const std::size_t patches = spec.tokens_per_frame - 1;
  const std::size_t d = spec.dim;
  const std::size_t regions = std::max<std::size_t>(1, spec.offset_regions);
  const auto proto_rng = CounterRng::derive(spec.seed, kPrototypes);
  const auto site_rng = CounterRng::derive(spec.seed, kSites);

  std::vector<double> prototypes(regions * d);
  for (std::size_t r = 0; r < regions; ++r) {
    std::span<double> v(prototypes.data() + r * d, d);
    for (std::size_t c = 0; c < d; ++c) v[c] = proto_rng.normal(r * d + c);
    normalize(v);
    for (double& x : v) x *= spec.offset_scale;
  }

  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(patches))));
  std::vector<double> offsets(patches * d);
  for (std::size_t j = 0; j < patches; ++j) {
    const double x = (static_cast<double>(j % side) + 0.5) / static_cast<double>(side);
    const double y = (static_cast<double>(j / side) + 0.5) / static_cast<double>(side);
    std::size_t nearest = 0;
    double best = 1e300;
    for (std::size_t r = 0; r < regions; ++r) {
      const double dx = x - site_rng.uniform(2 * r);
      const double dy = y - site_rng.uniform(2 * r + 1);
      const double dist = dx * dx + dy * dy;
      if (dist < best) {
        best = dist;
        nearest = r;
      }
    }
    std::copy_n(prototypes.begin() + static_cast<std::ptrdiff_t>(nearest * d), d,
                offsets.begin() + static_cast<std::ptrdiff_t>(j * d));
  }
  return offsets;
}

}  // namespace

GroundTruth make_ground_truth(std::size_t n_frames, std::vector<FrameRange> boundaries) {
  GroundTruth gt;
  std::size_t expect = 0;
  for (const auto& [lo, hi] : boundaries) {
    if (lo != expect || hi <= lo) fail(ErrorKind::Spec, "event boundaries must be contiguous, non-empty ranges");
    expect = hi;
  }
  if (expect != n_frames) fail(ErrorKind::Spec, "event boundaries do not cover all frames");
  gt.labels.resize(n_frames);
  for (std::size_t e = 0; e < boundaries.size(); ++e)
    for (std::size_t f = boundaries[e].first; f < boundaries[e].second; ++f) gt.labels[f] = static_cast<std::uint32_t>(e);
  gt.boundaries = std::move(boundaries);
  return gt;
}

std::vector<FrameRange> event_boundaries(const SyntheticSpec& spec) {
  if (spec.n_frames == 0) fail(ErrorKind::Spec, "n_frames must be positive");
  if (spec.n_events == 0) fail(ErrorKind::Spec, "n_events must be positive");
  if (spec.n_events > spec.n_frames) {
    fail(ErrorKind::Spec, std::to_string(spec.n_events) + " events do not fit in " + std::to_string(spec.n_frames) +
                              " frames");
  }
  if (!spec.boundaries.empty()) {
    if (spec.boundaries.size() != spec.n_events) fail(ErrorKind::Spec, "explicit boundaries disagree with n_events");
    return make_ground_truth(spec.n_frames, spec.boundaries).boundaries;
  }

  // Uniform over compositions of N into E parts of length >= m: choose E-1
  // bar positions among S + E - 1 slots, S = N - E*m.
  const std::size_t e = spec.n_events;
  const std::size_t m = std::max<std::size_t>(1, std::min(spec.min_event_length, spec.n_frames / e));
  const std::size_t slack = spec.n_frames - e * m;
  const std::size_t slots = slack + e - 1;
  const auto rng = CounterRng::derive(spec.seed, kBoundaries);
  std::vector<std::size_t> pool(slots);
  std::iota(pool.begin(), pool.end(), std::size_t{1});
  for (std::size_t j = 0; j + 1 < e; ++j) std::swap(pool[j], pool[j + rng.below(j, slots - j)]);
  std::vector<std::size_t> bars(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(e - 1));
  std::sort(bars.begin(), bars.end());
  bars.push_back(slots + 1);

  std::vector<FrameRange> out;
  std::size_t lo = 0;
  std::size_t prev_bar = 0;
  for (auto bar : bars) {
    const std::size_t len = (bar - prev_bar - 1) + m;
    out.emplace_back(lo, lo + len);
    lo += len;
    prev_bar = bar;
  }
  return out;
}

SyntheticVideo generate_synthetic_video(const SyntheticSpec& spec) {
  if (spec.tokens_per_frame < 2) fail(ErrorKind::Spec, "tokens per frame must be at least 2");
  if (spec.dim == 0) fail(ErrorKind::Spec, "dim must be positive");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) fail(ErrorKind::Spec, "sigma must be finite and >= 0");
  auto truth = make_ground_truth(spec.n_frames, event_boundaries(spec));

  const std::size_t n = spec.n_frames;
  const std::size_t l = spec.tokens_per_frame;
  const std::size_t d = spec.dim;
  const auto dirs = event_directions(spec);
  const auto offsets = patch_offsets(spec);
  const auto noise = CounterRng::derive(spec.seed, kNoise);

  std::vector<float> data(n * l * d);
  const auto frames = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t f = 0; f < frames; ++f) {
    const double* dir = dirs.data() + truth.labels[f] * d;
    std::vector<double> cls(d);
    const std::uint64_t base = static_cast<std::uint64_t>(f) * l * d;
    for (std::size_t c = 0; c < d; ++c) cls[c] = dir[c] + (spec.sigma > 0.0 ? spec.sigma * noise.normal(base + c) : 0.0);
    normalize(cls);
    float* out = data.data() + f * l * d;
    for (std::size_t c = 0; c < d; ++c) out[c] = static_cast<float>(cls[c]);
    for (std::size_t t = 1; t < l; ++t) {
      const double* off = offsets.data() + (t - 1) * d;
      for (std::size_t c = 0; c < d; ++c) {
        const double jitter = spec.sigma > 0.0 ? spec.sigma * noise.normal(base + t * d + c) : 0.0;
        out[t * d + c] = static_cast<float>(dir[c] + off[c] + jitter);
      }
    }
  }
  return {VideoTokens(n, l, d, std::move(data)), std::move(truth)};
}

}  // namespace dyto
