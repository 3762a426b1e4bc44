// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "dyto/kernels.hpp"

namespace dyto::reference {

void temporal_distances(FeatureView features, std::span<const double> timestamps, double horizon,
                        std::span<double> out) {
  const std::size_t n = features.rows;
  for (std::size_t i = 0; i < n; ++i) {
    out[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto fi = features.row(i);
      const auto fj = features.row(j);
      double dot = 0.0;
      for (std::size_t c = 0; c < features.dim; ++c) dot += fi[c] * fj[c];
      dot = std::min(dot, 1.0);
      const double value = (1.0 - dot) * std::abs(timestamps[i] - timestamps[j]) / horizon;
      out[i * n + j] = value;
      out[j * n + i] = value;
    }
  }
}

void best_partners(FeatureView tokens, std::size_t heads, std::span<const double> head_norms,
                   std::span<std::size_t> partner, std::span<double> score) {
  const std::size_t count = tokens.rows;
  for (std::size_t p = 0; p < count; p += 2) {
    std::size_t best_q = count;
    double best = -2.0;
    for (std::size_t q = 1; q < count; q += 2) {
      const double s = averaged_head_cosine(tokens.row(p), tokens.row(q), head_norms.subspan(p * heads, heads),
                                            head_norms.subspan(q * heads, heads));
      if (s > best) {
        best = s;
        best_q = q;
      }
    }
    partner[p / 2] = best_q;
    score[p / 2] = best;
  }
}

}  // namespace dyto::reference
