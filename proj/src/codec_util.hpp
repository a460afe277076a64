#pragma once

// Helpers shared by the static, video and structured codecs.

#include <cstdint>
#include <string>
#include <vector>

#include "rlemask/error.hpp"
#include "rlemask/grammar.hpp"
#include "rlemask/runs.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask::detail {

inline std::int64_t start_slot_count(const SchemeConfig& cfg) {
  return cfg.start_mode == StartMode::k2D ? 2 : 1;
}

// Appends the start token values of a flat start index to `values`.
inline void push_start(const SchemeConfig& cfg, std::int64_t start, std::vector<std::int64_t>& values) {
  if (cfg.start_mode == StartMode::k1D) {
    values.push_back(start);
    return;
  }
  if (cfg.flatten == FlattenOrder::kColumnMajor) {
    values.push_back(start % cfg.height);  // row
    values.push_back(start / cfg.height);  // col
  } else {
    values.push_back(start / cfg.width);
    values.push_back(start % cfg.width);
  }
}

// Inverse of push_start, reading from the front of a parsed group.
inline std::int64_t read_start(const SchemeConfig& cfg, const ParsedGroup& g) {
  if (cfg.start_mode == StartMode::k1D) return g.values[0];
  const auto row = g.values[0];
  const auto col = g.values[1];
  return cfg.flatten == FlattenOrder::kColumnMajor ? col * cfg.height + row : row * cfg.width + col;
}

// Maps per-group slot values to ids following the grammar's group shape.
inline void emit_group(const SequenceGrammar& grammar, const std::vector<std::int64_t>& values,
                       std::vector<TokenId>& out) {
  const auto& shape = grammar.group_shape();
  for (std::size_t i = 0; i < shape.size(); ++i) out.push_back(grammar.layout().id_of(shape[i], values[i]));
}

inline void check_labels_within(std::span<const Label> vec, int num_classes) {
  for (Label v : vec) {
    if (v < 0 || v > num_classes) {
      throw InvalidArgument("label " + std::to_string(v) + " exceeds configured class count " +
                            std::to_string(num_classes));
    }
  }
}

inline void check_dims(const SchemeConfig& cfg, int height, int width) {
  if (height != cfg.height || width != cfg.width) {
    throw InvalidArgument("mask is " + std::to_string(height) + "x" + std::to_string(width) +
                          " but the scheme is configured for " + std::to_string(cfg.height) + "x" +
                          std::to_string(cfg.width));
  }
}

}  // namespace rlemask::detail
