// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dyto {

/// Per-frame visual tokens, N x L x D, row-major (frame, token, channel).
/// Token 0 of every frame is the CLS token; tokens 1..L-1 are patches.
/// Construction validates shape and finiteness.
class VideoTokens {
 public:
  VideoTokens(std::size_t n_frames, std::size_t tokens_per_frame, std::size_t dim,
              std::vector<float> data);

  std::size_t n_frames() const { return n_frames_; }
  std::size_t tokens_per_frame() const { return tokens_per_frame_; }
  std::size_t dim() const { return dim_; }
  std::size_t patch_count() const { return tokens_per_frame_ - 1; }

  std::span<const float> data() const { return data_; }
  std::span<const float> frame(std::size_t f) const;
  std::span<const float> token(std::size_t f, std::size_t t) const;
  std::span<const float> cls(std::size_t f) const { return token(f, 0); }
  /// The L-1 patch tokens of frame f, contiguous (L-1) x D.
  std::span<const float> patches(std::size_t f) const;

  friend bool operator==(const VideoTokens&, const VideoTokens&) = default;

 private:
  std::size_t n_frames_;
  std::size_t tokens_per_frame_;
  std::size_t dim_;
  std::vector<float> data_;
};

/// L2-normalized CLS vectors with timestamps 1..N.
class ClsSequence {
 public:
  /// Rows are normalized here; a zero row is a validation error naming the
  /// 0-based row index.
  ClsSequence(std::size_t n, std::size_t dim, std::span<const double> raw_rows);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const { return {vectors_.data() + i * dim_, dim_}; }
  std::span<const double> vectors() const { return vectors_; }
  /// 1-based timestamp of row i.
  double timestamp(std::size_t i) const { return static_cast<double>(i + 1); }

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> vectors_;
};

ClsSequence extract_cls_sequence(const VideoTokens& tokens);

/// Generic DYT1 payload: rank 2 or 3 float32 tensor.
struct TensorFile {
  std::vector<std::uint64_t> dims;
  std::vector<float> values;
};

inline constexpr std::size_t kDyt1HeaderBytes = 8;

void write_tensor_file(const std::filesystem::path& path, const TensorFile& tensor);
TensorFile read_tensor_file(const std::filesystem::path& path);

/// Serialize to the exact DYT1 byte layout (header + dims + payload).
std::vector<std::uint8_t> encode_dyt1(const TensorFile& tensor);
TensorFile decode_dyt1(std::span<const std::uint8_t> bytes);

void save_tokens(const VideoTokens& tokens, const std::filesystem::path& path);
VideoTokens load_tokens(const std::filesystem::path& path);

}  // namespace dyto
