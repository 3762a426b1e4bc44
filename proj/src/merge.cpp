// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/merge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyto/error.hpp"
#include "dyto/kernels.hpp"

namespace dyto {

namespace {

void check_heads(std::size_t dim, std::size_t heads) {
  if (heads == 0 || dim % heads != 0) {
    fail(ErrorKind::Config,
         "head count " + std::to_string(heads) + " does not divide token dimension " + std::to_string(dim));
  }
}

void slice_norms(std::span<const double> v, std::size_t heads, std::span<double> out) {
  const std::size_t width = v.size() / heads;
  for (std::size_t h = 0; h < heads; ++h) {
    double sq = 0.0;
    for (std::size_t c = 0; c < width; ++c) sq += v[h * width + c] * v[h * width + c];
    out[h] = std::sqrt(sq);
  }
}

}  // namespace

TokenSet TokenSet::from_patches(std::span<const float> patches, std::size_t dim) {
  if (dim == 0 || patches.size() % dim != 0) fail(ErrorKind::Input, "patch block is not a multiple of dim");
  TokenSet t;
  t.dim = dim;
  t.values.assign(patches.begin(), patches.end());
  const std::size_t count = patches.size() / dim;
  t.sizes.assign(count, 1);
  t.provenance.resize(count);
  for (std::size_t i = 0; i < count; ++i) t.provenance[i] = {static_cast<std::uint32_t>(i)};
  return t;
}

void TokenSet::check_provenance(std::size_t origin_count) const {
  std::vector<bool> seen(origin_count, false);
  std::size_t total = 0;
  for (std::size_t i = 0; i < count(); ++i) {
    if (provenance[i].size() != sizes[i])
      fail(ErrorKind::Validation, "token " + std::to_string(i) + " size disagrees with provenance");
    for (auto src : provenance[i]) {
      if (src >= origin_count || seen[src])
        fail(ErrorKind::Validation, "provenance is not a partition (patch " + std::to_string(src) + ")");
      seen[src] = true;
    }
    total += sizes[i];
  }
  if (total != origin_count) fail(ErrorKind::Validation, "provenance does not cover every source patch");
}

double head_similarity(std::span<const double> a, std::span<const double> b, std::size_t heads) {
  if (a.size() != b.size()) fail(ErrorKind::Input, "token dimensions differ");
  check_heads(a.size(), heads);
  std::vector<double> norms(2 * heads);
  slice_norms(a, heads, std::span<double>(norms).first(heads));
  slice_norms(b, heads, std::span<double>(norms).last(heads));
  for (std::size_t h = 0; h < 2 * heads; ++h) {
    if (!(norms[h] > 0.0)) fail(ErrorKind::Computation, "zero-norm slice in head " + std::to_string(h % heads));
  }
  return averaged_head_cosine(a, b, std::span<const double>(norms).first(heads),
                              std::span<const double>(norms).last(heads));
}

std::vector<double> head_norms(const TokenSet& t, std::size_t heads) {
  check_heads(t.dim, heads);
  std::vector<double> norms(t.count() * heads);
  for (std::size_t i = 0; i < t.count(); ++i) {
    auto out = std::span<double>(norms).subspan(i * heads, heads);
    slice_norms(t.token(i), heads, out);
    for (std::size_t h = 0; h < heads; ++h) {
      if (!(out[h] > 0.0)) {
        fail(ErrorKind::Computation,
             "zero-norm slice in head " + std::to_string(h) + " of token " + std::to_string(i));
      }
    }
  }
  return norms;
}

MatchSet bipartite_match(const TokenSet& t, std::size_t r, std::size_t heads) {
  const std::size_t count = t.count();
  if (count < 2) fail(ErrorKind::Input, "bipartite matching needs at least 2 tokens");
  if (r > count / 2) {
    fail(ErrorKind::Schedule,
         "cannot merge " + std::to_string(r) + " pairs out of " + std::to_string(count) + " tokens");
  }
  MatchSet out;
  if (r == 0) return out;

  const auto norms = head_norms(t, heads);
  const std::size_t p_count = (count + 1) / 2;
  std::vector<std::size_t> partner(p_count);
  std::vector<double> score(p_count);
  kernels::best_partners({t.values, count, t.dim}, heads, norms, partner, score);

  std::vector<std::size_t> order(p_count);
  for (std::size_t a = 0; a < p_count; ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });

  out.pairs.reserve(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto a = order[i];
    out.pairs.push_back({2 * a, partner[a], score[a]});
  }
  return out;
}

Pooling parse_pooling(std::string_view name) {
  if (name == "weighted") return Pooling::SizeWeighted;
  if (name == "mean") return Pooling::Unweighted;
  fail(ErrorKind::Config, "unknown pooling '" + std::string(name) + "'");
}

std::string_view to_string(Pooling pooling) {
  return pooling == Pooling::SizeWeighted ? "weighted" : "mean";
}

TokenSet merge_matched(const TokenSet& t, const MatchSet& m, Pooling pooling) {
  if (m.pairs.empty()) return t;
  const std::size_t count = t.count();
  const std::size_t dim = t.dim;

  std::vector<bool> absorbed(count, false);
  std::vector<std::vector<std::size_t>> incoming(count);
  for (const auto& pair : m.pairs) {
    if (pair.p >= count || pair.q >= count || absorbed[pair.p])
      fail(ErrorKind::Input, "match set does not belong to this token set");
    absorbed[pair.p] = true;
    incoming[pair.q].push_back(pair.p);
  }

  TokenSet out;
  out.dim = dim;
  out.values.reserve((count - m.size()) * dim);
  std::vector<double> acc(dim);
  for (std::size_t i = 0; i < count; ++i) {
    if (absorbed[i]) continue;
    const auto own = t.token(i);
    if (incoming[i].empty()) {
      out.values.insert(out.values.end(), own.begin(), own.end());
      out.sizes.push_back(t.sizes[i]);
      out.provenance.push_back(t.provenance[i]);
      continue;
    }
    auto sources = incoming[i];
    std::sort(sources.begin(), sources.end());
    const bool weighted = pooling == Pooling::SizeWeighted;
    double weight = weighted ? t.sizes[i] : 1.0;
    std::uint32_t size = t.sizes[i];
    auto prov = t.provenance[i];
    for (std::size_t c = 0; c < dim; ++c) acc[c] = weight * own[c];
    for (auto p : sources) {
      const double w = weighted ? t.sizes[p] : 1.0;
      const auto v = t.token(p);
      for (std::size_t c = 0; c < dim; ++c) acc[c] += w * v[c];
      weight += w;
      size += t.sizes[p];
      prov.insert(prov.end(), t.provenance[p].begin(), t.provenance[p].end());
    }
    std::sort(prov.begin(), prov.end());
    for (std::size_t c = 0; c < dim; ++c) out.values.push_back(acc[c] / weight);
    out.sizes.push_back(size);
    out.provenance.push_back(std::move(prov));
  }
  return out;
}

MergeSchedule plan_to_target(std::size_t start_count, std::size_t target, std::size_t r1_cap, std::size_t heads) {
  if (target == 0) fail(ErrorKind::Config, "per-frame token target must be positive");
  if (target > start_count) fail(ErrorKind::Config, "per-frame target exceeds available tokens");
  MergeSchedule s;
  s.start_count = start_count;
  s.target = target;
  s.heads = heads;
  std::size_t live = start_count;
  while (live > target) {
    std::size_t r = std::min(live / 2, live - target);
    if (s.steps.empty()) r = std::min(r, r1_cap);
    if (r == 0) fail(ErrorKind::Schedule, "schedule cannot make progress (first-step cap is 0)");
    s.steps.push_back(r);
    live -= r;
  }
  return s;
}

MergeSchedule plan_budget(std::size_t tokens_per_frame, std::size_t budget, std::size_t keyframes,
                          std::size_t r1_cap, std::size_t heads) {
  if (tokens_per_frame < 2) fail(ErrorKind::Config, "frames need at least one patch token");
  if (keyframes == 0) fail(ErrorKind::Config, "keyframe count must be positive");
  if (budget < keyframes) {
    fail(ErrorKind::Config, "token budget " + std::to_string(budget) + " is smaller than the keyframe count " +
                                std::to_string(keyframes));
  }
  const std::size_t start = tokens_per_frame - 1;
  return plan_to_target(start, std::min(start, budget / keyframes), r1_cap, heads);
}

MergedFrame compress_frame(std::span<const float> patches, std::size_t dim, std::size_t frame_index,
                           const MergeSchedule& schedule, Pooling pooling) {
  if (dim == 0 || patches.size() != schedule.start_count * dim) {
    fail(ErrorKind::Input, "frame has " + std::to_string(dim == 0 ? 0 : patches.size() / dim) +
                               " patch tokens, schedule expects " + std::to_string(schedule.start_count));
  }
  MergedFrame out;
  out.frame_index = frame_index;
  out.schedule = schedule.steps;
  out.tokens = TokenSet::from_patches(patches, dim);
  for (auto r : schedule.steps) {
    const auto matches = bipartite_match(out.tokens, r, schedule.heads);
    MergeStep step;
    for (const auto& pair : matches.pairs) step.pairs.emplace_back(pair.p, pair.q);
    out.tokens = merge_matched(out.tokens, matches, pooling);
    out.steps.push_back(std::move(step));
  }
  return out;
}

}  // namespace dyto
