// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#include "dyto/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "dyto/error.hpp"

namespace dyto {

static_assert(std::endian::native == std::endian::little,
              "DYT1 I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'D', 'Y', 'T', '1'};
constexpr std::uint8_t kDtypeFloat32 = 1;

std::size_t first_non_finite(std::span<const float> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) return i;
  }
  return values.size();
}

}  // namespace

VideoTokens::VideoTokens(std::size_t n_frames, std::size_t tokens_per_frame, std::size_t dim,
                         std::vector<float> data)
    : n_frames_(n_frames), tokens_per_frame_(tokens_per_frame), dim_(dim), data_(std::move(data)) {
  if (n_frames_ < 1) fail(ErrorKind::Validation, "video must have at least one frame");
  if (tokens_per_frame_ < 2)
    fail(ErrorKind::Validation, "each frame needs a CLS token and at least one patch token");
  if (dim_ < 1) fail(ErrorKind::Validation, "token dimension must be positive");
  if (data_.size() != n_frames_ * tokens_per_frame_ * dim_)
    fail(ErrorKind::Validation, "data length does not match N x L x D");
  if (const auto bad = first_non_finite(data_); bad != data_.size()) {
    const auto frame = bad / (tokens_per_frame_ * dim_);
    fail(ErrorKind::Validation, "non-finite value in frame " + std::to_string(frame));
  }
}

std::span<const float> VideoTokens::frame(std::size_t f) const {
  return std::span<const float>(data_).subspan(f * tokens_per_frame_ * dim_, tokens_per_frame_ * dim_);
}

std::span<const float> VideoTokens::token(std::size_t f, std::size_t t) const {
  return std::span<const float>(data_).subspan((f * tokens_per_frame_ + t) * dim_, dim_);
}

std::span<const float> VideoTokens::patches(std::size_t f) const {
  return frame(f).subspan(dim_);
}

ClsSequence::ClsSequence(std::size_t n, std::size_t dim, std::span<const double> raw_rows)
    : n_(n), dim_(dim), vectors_(raw_rows.begin(), raw_rows.end()) {
  if (vectors_.size() != n * dim) fail(ErrorKind::Input, "CLS rows do not match n x dim");
  for (std::size_t i = 0; i < n_; ++i) {
    double* row = vectors_.data() + i * dim_;
    double sq = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) sq += row[c] * row[c];
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0) || !std::isfinite(norm))
      fail(ErrorKind::Validation, "zero-norm CLS token in frame " + std::to_string(i));
    for (std::size_t c = 0; c < dim_; ++c) row[c] /= norm;
  }
}

ClsSequence extract_cls_sequence(const VideoTokens& tokens) {
  const std::size_t n = tokens.n_frames();
  const std::size_t d = tokens.dim();
  std::vector<double> raw(n * d);
  for (std::size_t f = 0; f < n; ++f) {
    const auto cls = tokens.cls(f);
    std::copy(cls.begin(), cls.end(), raw.begin() + static_cast<std::ptrdiff_t>(f * d));
  }
  return ClsSequence(n, d, raw);
}

std::vector<std::uint8_t> encode_dyt1(const TensorFile& tensor) {
  if (tensor.dims.size() != 2 && tensor.dims.size() != 3)
    fail(ErrorKind::Input, "DYT1 rank must be 2 or 3");
  std::uint64_t count = 1;
  for (auto d : tensor.dims) count *= d;
  if (count != tensor.values.size()) fail(ErrorKind::Input, "dims do not match value count");
  if (const auto bad = first_non_finite(tensor.values); bad != tensor.values.size())
    fail(ErrorKind::Validation, "refusing to write non-finite value at element " + std::to_string(bad));

  std::vector<std::uint8_t> out(kDyt1HeaderBytes + 8 * tensor.dims.size() + 4 * tensor.values.size());
  std::memcpy(out.data(), kMagic, 4);
  out[4] = kDtypeFloat32;
  out[5] = static_cast<std::uint8_t>(tensor.dims.size());
  std::size_t offset = kDyt1HeaderBytes;
  for (auto d : tensor.dims) {
    std::memcpy(out.data() + offset, &d, 8);
    offset += 8;
  }
  if (!tensor.values.empty()) std::memcpy(out.data() + offset, tensor.values.data(), 4 * tensor.values.size());
  return out;
}

TensorFile decode_dyt1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kDyt1HeaderBytes) fail(ErrorKind::Format, "file shorter than DYT1 header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) fail(ErrorKind::Format, "bad magic, expected DYT1");
  if (bytes[4] != kDtypeFloat32)
    fail(ErrorKind::Format, "unsupported dtype code " + std::to_string(bytes[4]));
  const std::size_t rank = bytes[5];
  if (rank != 2 && rank != 3) fail(ErrorKind::Format, "unsupported rank " + std::to_string(rank));
  if (bytes[6] != 0 || bytes[7] != 0) fail(ErrorKind::Format, "non-zero header padding");
  if (bytes.size() < kDyt1HeaderBytes + 8 * rank) fail(ErrorKind::Format, "truncated dims");

  TensorFile tensor;
  tensor.dims.resize(rank);
  unsigned __int128 count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    std::memcpy(&tensor.dims[i], bytes.data() + kDyt1HeaderBytes + 8 * i, 8);
    count *= tensor.dims[i];
  }
  const std::size_t payload_offset = kDyt1HeaderBytes + 8 * rank;
  const auto payload = bytes.size() - payload_offset;
  if (count * 4 != payload) {
    fail(ErrorKind::Format, "payload is " + std::to_string(payload) + " bytes, header declares " +
                                std::to_string(static_cast<std::uint64_t>(count * 4)));
  }
  tensor.values.resize(static_cast<std::size_t>(count));
  if (payload > 0) std::memcpy(tensor.values.data(), bytes.data() + payload_offset, payload);
  if (const auto bad = first_non_finite(tensor.values); bad != tensor.values.size())
    fail(ErrorKind::Validation, "non-finite value at element " + std::to_string(bad));
  return tensor;
}

void write_tensor_file(const std::filesystem::path& path, const TensorFile& tensor) {
  const auto bytes = encode_dyt1(tensor);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Storage, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Storage, "write failed for " + path.string());
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Storage, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::Storage, "read failed for " + path.string());
  return decode_dyt1(bytes);
}

void save_tokens(const VideoTokens& tokens, const std::filesystem::path& path) {
  TensorFile t;
  t.dims = {tokens.n_frames(), tokens.tokens_per_frame(), tokens.dim()};
  t.values.assign(tokens.data().begin(), tokens.data().end());
  write_tensor_file(path, t);
}

VideoTokens load_tokens(const std::filesystem::path& path) {
  auto t = read_tensor_file(path);
  if (t.dims.size() != 3) fail(ErrorKind::Format, path.string() + " is not a rank-3 video tensor");
  return VideoTokens(t.dims[0], t.dims[1], t.dims[2], std::move(t.values));
}

}  // namespace dyto
