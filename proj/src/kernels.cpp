// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "dyto/kernels.hpp"

namespace dyto::kernels {

void temporal_distances(FeatureView features, std::span<const double> timestamps, double horizon,
                        std::span<double> out) {
  const auto n = static_cast<std::int64_t>(features.rows);
  const std::size_t dim = features.dim;
  const double* f = features.values.data();
  double* w = out.data();

#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < n; ++i) {
    const double* fi = f + i * dim;
    w[i * n + i] = 1.0;
    for (std::int64_t j = i + 1; j < n; ++j) {
      const double* fj = f + j * dim;
      double dot = 0.0;
      for (std::size_t c = 0; c < dim; ++c) dot += fi[c] * fj[c];
      dot = std::min(dot, 1.0);
      const double value = (1.0 - dot) * std::abs(timestamps[i] - timestamps[j]) / horizon;
      w[i * n + j] = value;
      w[j * n + i] = value;
    }
  }
}

void best_partners(FeatureView tokens, std::size_t heads, std::span<const double> head_norms,
                   std::span<std::size_t> partner, std::span<double> score) {
  const auto count = tokens.rows;
  const auto p_count = static_cast<std::int64_t>((count + 1) / 2);

#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < p_count; ++a) {
    const std::size_t p = 2 * static_cast<std::size_t>(a);
    const auto pv = tokens.row(p);
    const auto pn = head_norms.subspan(p * heads, heads);
    std::size_t best_q = count;
    double best = -2.0;
    for (std::size_t q = 1; q < count; q += 2) {
      const double s = averaged_head_cosine(pv, tokens.row(q), pn, head_norms.subspan(q * heads, heads));
      if (s > best) {
        best = s;
        best_q = q;
      }
    }
    partner[a] = best_q;
    score[a] = best;
  }
}

}  // namespace dyto::kernels
