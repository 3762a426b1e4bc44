// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel inner loops. Each kernel has an OpenMP version (namespace
// dyto::kernels) and a serial version (namespace dyto::reference) that
// evaluates every output element with the same arithmetic in the same order,
// so the two agree bit-for-bit regardless of thread count.

#pragma once

#include <cstddef>
#include <span>

namespace dyto {

/// Row-major feature matrix view.
struct FeatureView {
  std::span<const double> values;
  std::size_t rows = 0;
  std::size_t dim = 0;

  std::span<const double> row(std::size_t i) const { return values.subspan(i * dim, dim); }
};

/// Per-head cosine similarity averaged over heads, given per-head L2 norms
/// of both vectors. Shared by every similarity path so scores agree exactly.
inline double averaged_head_cosine(std::span<const double> a, std::span<const double> b,
                                   std::span<const double> a_norms, std::span<const double> b_norms) {
  const std::size_t heads = a_norms.size();
  const std::size_t width = a.size() / heads;
  double total = 0.0;
  for (std::size_t h = 0; h < heads; ++h) {
    double dot = 0.0;
    const std::size_t base = h * width;
    for (std::size_t c = 0; c < width; ++c) dot += a[base + c] * b[base + c];
    total += dot / (a_norms[h] * b_norms[h]);
  }
  return total / static_cast<double>(heads);
}

namespace kernels {

/// Temporally weighted distances over unit feature rows:
/// out(i,j) = (1 - <f_i, f_j>) * |t_i - t_j| / horizon for i != j, 1 on the
/// diagonal. The inner product is clamped to 1 so rounding cannot produce
/// negative distances. out must hold rows*rows values.
void temporal_distances(FeatureView features, std::span<const double> timestamps, double horizon,
                        std::span<double> out);

/// Bipartite proposals over tokens split by position parity. For each even
/// position p (P set), finds the odd position q (Q set) maximizing the head
/// score, smallest q on ties. head_norms holds count*heads norms.
/// partner/score have one slot per P token (count+1)/2.
void best_partners(FeatureView tokens, std::size_t heads, std::span<const double> head_norms,
                   std::span<std::size_t> partner, std::span<double> score);

}  // namespace kernels

namespace reference {

void temporal_distances(FeatureView features, std::span<const double> timestamps, double horizon,
                        std::span<double> out);

void best_partners(FeatureView tokens, std::size_t heads, std::span<const double> head_norms,
                   std::span<std::size_t> partner, std::span<double> score);

}  // namespace reference

}  // namespace dyto
