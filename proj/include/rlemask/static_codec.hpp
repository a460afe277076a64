#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rlemask/mask.hpp"
#include "rlemask/runs.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask {

// Runs of every label including background (BAC family); covers the vector.
RunList contiguous_runs(std::span<const Label> vec);

// The run list exactly as it is tokenized: split to max_len and, if the
// config asks for it, shuffled. BAC schemes include background runs (class 0);
// DIFF schemes yield one unit-length "run" per transition carrying the new label.
RunList tokenized_runs(const LabelMask& mask, const SchemeConfig& cfg);

TokenSequence encode_static(const LabelMask& mask, const SchemeConfig& cfg);

// Strict mode is the exact inverse of encode_static and raises ParseError,
// OverlapError or RangeError on malformed input. Lenient mode always returns
// a valid mask.
LabelMask decode_static(const TokenSequence& tokens, ReconstructMode mode = ReconstructMode::kStrict);

// SX, SY, LEN, CLS streams with stream-local 0-based ids (LEN = length - 1,
// CLS = class - 1); one entry per run in every stream.
struct SplitStreams {
  std::array<std::vector<std::int64_t>, 4> streams;
  std::size_t runs() const noexcept { return streams[0].size(); }
};

enum SplitStream : std::size_t { kStreamSX = 0, kStreamSY = 1, kStreamLen = 2, kStreamCls = 3 };

SplitStreams encode_split_stream(const LabelMask& mask, const SchemeConfig& cfg);
std::array<std::int64_t, 4> split_stream_vocab_sizes(const SchemeConfig& cfg);
// Interleaves the streams into a single SPLIT_STREAM token sequence.
TokenSequence zip_streams(const SplitStreams& streams, const SchemeConfig& cfg);
SplitStreams unzip_streams(const TokenSequence& tokens);

// Row-major L x V matrix of per-position token scores.
struct ScoreMatrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<float> data;

  ScoreMatrix() = default;
  ScoreMatrix(std::int64_t r, std::int64_t c, float fill = 0.0f)
      : rows(r), cols(c), data(static_cast<std::size_t>(r * c), fill) {}
  float& at(std::int64_t r, std::int64_t c) { return data[static_cast<std::size_t>(r * cols + c)]; }
  float at(std::int64_t r, std::int64_t c) const { return data[static_cast<std::size_t>(r * cols + c)]; }
};

// Argmax restricted at every position to the ids the scheme grammar allows
// there; ties go to the smallest id. Stops at the end token or after all
// rows, trimming or closing the tail so the result always parses strictly.
TokenSequence constrained_argmax_decode(const ScoreMatrix& scores, const SchemeConfig& cfg);

}  // namespace rlemask
