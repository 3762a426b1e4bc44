// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

// Times the OpenMP kernels against their serial references and checks that
// both produce identical output.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

#include "dyto/kernels.hpp"
#include "dyto/merge.hpp"
#include "dyto/pipeline.hpp"
#include "dyto/synth.hpp"

namespace {

template <typename F>
double best_ms(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  dyto::SyntheticSpec spec;
  spec.n_frames = 400;
  spec.n_events = 8;
  spec.tokens_per_frame = 577;
  spec.dim = 1024;
  spec.sigma = 0.05;
  spec.seed = 11;
  const auto video = dyto::generate_synthetic_video(spec);
  const auto cls = dyto::extract_cls_sequence(video.tokens);
  const dyto::FeatureView features{cls.vectors(), cls.size(), cls.dim()};
  std::vector<double> t(cls.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cls.timestamp(i);

  {
    std::vector<double> a(cls.size() * cls.size()), b(a.size());
    const double s = best_ms(5, [&] { dyto::reference::temporal_distances(features, t, 400.0, a); });
    const double p = best_ms(5, [&] { dyto::kernels::temporal_distances(features, t, 400.0, b); });
    report("temporal_distances 400x1024", s, p, a == b);
  }

  {
    const auto tokens = dyto::TokenSet::from_patches(video.tokens.patches(0), spec.dim);
    const auto norms = dyto::head_norms(tokens, 16);
    const dyto::FeatureView view{tokens.values, tokens.count(), tokens.dim};
    const std::size_t p_count = (tokens.count() + 1) / 2;
    std::vector<std::size_t> pa(p_count), pb(p_count);
    std::vector<double> sa(p_count), sb(p_count);
    const double s = best_ms(5, [&] { dyto::reference::best_partners(view, 16, norms, pa, sa); });
    const double p = best_ms(5, [&] { dyto::kernels::best_partners(view, 16, norms, pb, sb); });
    report("best_partners 576x1024 H16", s, p, pa == pb && sa == sb);
  }

  {
    dyto::PipelineConfig cfg;
    cfg.budget = 1440;
    std::vector<std::size_t> frames;
    for (std::size_t f = 0; f < 40; ++f) frames.push_back(f * 10);
    const auto targets = dyto::frame_targets(video.tokens.patch_count(), cfg.budget, frames.size(), false);
    std::vector<dyto::MergedFrame> a, b;
    cfg.parallel = false;
    const double s = best_ms(2, [&] { a = dyto::compress_keyframes(video.tokens, frames, targets, cfg); });
    cfg.parallel = true;
    const double p = best_ms(2, [&] { b = dyto::compress_keyframes(video.tokens, frames, targets, cfg); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].tokens.values == b[i].tokens.values;
    report("compress 40 keyframes", s, p, same);
  }
  return 0;
}
