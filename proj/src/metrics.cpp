// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dyto/error.hpp"

namespace dyto {

namespace {

// Shortest augmenting path with potentials, O(n^3). rows/cols select a
// square submatrix of the full cost matrix. Returns the column picked for
// each selected row (as an index into cols).
std::vector<std::size_t> solve_assignment(std::span<const double> cost, std::size_t stride,
                                          const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  const std::size_t n = rows.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  auto a = [&](std::size_t i, std::size_t j) { return cost[rows[i - 1] * stride + cols[j - 1]]; };

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of(n);
  for (std::size_t j = 1; j <= n; ++j) col_of[p[j] - 1] = j - 1;
  return col_of;
}

double assignment_cost(std::span<const double> cost, std::size_t stride, const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& cols, const std::vector<std::size_t>& col_of) {
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) total += cost[rows[i] * stride + cols[col_of[i]]];
  return total;
}

double cosine(std::span<const float> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    dot += a[c] * b[c];
    na += static_cast<double>(a[c]) * a[c];
    nb += b[c] * b[c];
  }
  if (!(na > 0.0) || !(nb > 0.0)) fail(ErrorKind::Computation, "zero-norm token in reconstruction error");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Sum of 1 - cos over a frame's source patches, plus the patch count.
std::pair<double, std::size_t> frame_error_sum(std::span<const float> patches, std::size_t dim,
                                               const TokenSet& merged) {
  const std::size_t count = patches.size() / dim;
  try {
    merged.check_provenance(count);
  } catch (const Error& e) {
    fail(ErrorKind::Input, std::string("missing or inconsistent provenance: ") + e.what());
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < merged.count(); ++i) {
    for (auto src : merged.provenance[i]) {
      // clamp rounding below zero for exact reconstructions
      sum += std::max(0.0, 1.0 - cosine(patches.subspan(src * dim, dim), merged.token(i)));
    }
  }
  return {sum, count};
}

}  // namespace

Assignment hungarian_match(std::span<const double> cost, std::size_t rows, std::size_t cols) {
  if (rows != cols) {
    fail(ErrorKind::Input, "assignment needs a square matrix, got " + std::to_string(rows) + "x" +
                               std::to_string(cols));
  }
  if (cost.size() != rows * cols) fail(ErrorKind::Input, "cost matrix size mismatch");
  for (double c : cost) {
    if (!std::isfinite(c)) fail(ErrorKind::Input, "non-finite assignment cost");
  }
  const std::size_t k = rows;
  Assignment out;
  if (k == 0) return out;

  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) all[i] = i;
  const double optimum = assignment_cost(cost, k, all, all, solve_assignment(cost, k, all, all));
  double scale = 1.0;
  for (double c : cost) scale = std::max(scale, std::abs(c));
  const double tol = 1e-12 * scale * static_cast<double>(k);

  // Fix rows in order, each to the smallest column that keeps the optimum
  // reachable.
  std::vector<std::size_t> free_cols = all;
  double prefix = 0.0;
  out.column_of_row.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::size_t> rest_rows(all.begin() + static_cast<std::ptrdiff_t>(i + 1), all.end());
    bool fixed = false;
    for (std::size_t idx = 0; idx < free_cols.size() && !fixed; ++idx) {
      const std::size_t c = free_cols[idx];
      std::vector<std::size_t> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(idx));
      double rest = 0.0;
      if (!rest_rows.empty())
        rest = assignment_cost(cost, k, rest_rows, rest_cols, solve_assignment(cost, k, rest_rows, rest_cols));
      if (prefix + cost[i * k + c] + rest <= optimum + tol) {
        out.column_of_row[i] = c;
        prefix += cost[i * k + c];
        free_cols.erase(free_cols.begin() + static_cast<std::ptrdiff_t>(idx));
        fixed = true;
      }
    }
    if (!fixed) fail(ErrorKind::Computation, "assignment refinement lost the optimum");
  }
  out.total = 0.0;
  for (std::size_t i = 0; i < k; ++i) out.total += cost[i * k + out.column_of_row[i]];
  return out;
}

double partition_accuracy(std::span<const std::uint32_t> labels, const GroundTruth& gt) {
  if (labels.size() != gt.labels.size()) fail(ErrorKind::Input, "partition and ground truth lengths differ");
  if (labels.empty()) return 1.0;
  std::size_t clusters = 0;
  for (auto l : labels) clusters = std::max<std::size_t>(clusters, l + 1);
  const std::size_t k = std::max(clusters, gt.n_events());
  std::vector<double> agreement(k * k, 0.0);
  for (std::size_t f = 0; f < labels.size(); ++f) agreement[labels[f] * k + gt.labels[f]] += 1.0;
  std::vector<double> cost(k * k);
  for (std::size_t i = 0; i < cost.size(); ++i) cost[i] = -agreement[i];
  const auto match = hungarian_match(cost, k, k);
  double matched = 0.0;
  for (std::size_t c = 0; c < k; ++c) matched += agreement[c * k + match.column_of_row[c]];
  return matched / static_cast<double>(labels.size());
}

double partition_accuracy(const Partition& p, const GroundTruth& gt) { return partition_accuracy(p.labels, gt); }

double event_coverage(std::span<const std::size_t> keyframes, const GroundTruth& gt) {
  if (gt.n_events() == 0) return 0.0;
  std::vector<bool> hit(gt.n_events(), false);
  for (auto f : keyframes) {
    if (f >= gt.labels.size()) fail(ErrorKind::Input, "keyframe " + std::to_string(f) + " out of range");
    hit[gt.labels[f]] = true;
  }
  return static_cast<double>(std::count(hit.begin(), hit.end(), true)) / static_cast<double>(gt.n_events());
}

double event_coverage(const KeyframeSet& k, const GroundTruth& gt) { return event_coverage(k.frames, gt); }

double frame_reconstruction_error(std::span<const float> patches, std::size_t dim, const TokenSet& merged) {
  const auto [sum, count] = frame_error_sum(patches, dim, merged);
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double reconstruction_error(const CompressedVideo& cv, const VideoTokens& original) {
  if (cv.dim != original.dim()) fail(ErrorKind::Input, "compressed video and original differ in dim");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& frame : cv.frames) {
    if (frame.frame_index >= original.n_frames()) fail(ErrorKind::Input, "frame index out of range");
    const auto [s, c] = frame_error_sum(original.patches(frame.frame_index), original.dim(), frame.tokens);
    sum += s;
    count += c;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

TokenSet mean_pool_tokens(std::span<const float> patches, std::size_t dim, std::size_t target) {
  const std::size_t count = patches.size() / dim;
  if (target == 0 || target > count) fail(ErrorKind::Config, "pool target must be in 1..token count");
  TokenSet out;
  out.dim = dim;
  for (std::size_t g = 0; g < target; ++g) {
    const std::size_t lo = g * count / target;
    const std::size_t hi = (g + 1) * count / target;
    std::vector<double> acc(dim, 0.0);
    std::vector<std::uint32_t> prov;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t c = 0; c < dim; ++c) acc[c] += patches[i * dim + c];
      prov.push_back(static_cast<std::uint32_t>(i));
    }
    for (auto& v : acc) v /= static_cast<double>(hi - lo);
    out.values.insert(out.values.end(), acc.begin(), acc.end());
    out.sizes.push_back(static_cast<std::uint32_t>(hi - lo));
    out.provenance.push_back(std::move(prov));
  }
  return out;
}

MatchSet exhaustive_match_oracle(const TokenSet& t, std::size_t r, std::size_t heads) {
  const std::size_t count = t.count();
  if (count > 16) fail(ErrorKind::Input, "exhaustive oracle is limited to 16 tokens");
  if (r > count / 2) fail(ErrorKind::Schedule, "r exceeds half the token count");
  MatchSet out;
  if (r == 0) return out;
  if (heads == 0 || t.dim % heads != 0) fail(ErrorKind::Config, "heads must divide dim");

  const std::size_t width = t.dim / heads;
  auto score = [&](std::size_t i, std::size_t j) {
    const auto a = t.token(i);
    const auto b = t.token(j);
    double total = 0.0;
    for (std::size_t h = 0; h < heads; ++h) {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t c = h * width; c < (h + 1) * width; ++c) {
        dot += a[c] * b[c];
        na += a[c] * a[c];
        nb += b[c] * b[c];
      }
      total += dot / (std::sqrt(na) * std::sqrt(nb));
    }
    return total / static_cast<double>(heads);
  };

  std::vector<std::size_t> p_set, q_set;
  for (std::size_t i = 0; i < count; ++i) (i % 2 == 0 ? p_set : q_set).push_back(i);
  std::vector<std::vector<double>> table(p_set.size(), std::vector<double>(q_set.size()));
  for (std::size_t a = 0; a < p_set.size(); ++a)
    for (std::size_t b = 0; b < q_set.size(); ++b) table[a][b] = score(p_set[a], q_set[b]);

  std::vector<Match> proposals;
  for (std::size_t a = 0; a < p_set.size(); ++a) {
    std::size_t best = 0;
    for (std::size_t b = 1; b < q_set.size(); ++b) {
      if (table[a][b] > table[a][best]) best = b;
    }
    proposals.push_back({p_set[a], q_set[best], table[a][best]});
  }
  std::sort(proposals.begin(), proposals.end(), [](const Match& x, const Match& y) {
    return x.score != y.score ? x.score > y.score : x.p < y.p;
  });
  out.pairs.assign(proposals.begin(), proposals.begin() + static_cast<std::ptrdiff_t>(r));
  return out;
}

}  // namespace dyto
