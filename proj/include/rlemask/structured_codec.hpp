#pragma once

#include <cstdint>
#include <vector>

#include "rlemask/mask.hpp"
#include "rlemask/runs.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask {

// Class-wise: for c = 1..C, the binary runs of class c followed by the
// class-c separator. Empty classes emit the bare separator.
TokenSequence encode_cw(const LabelMask& mask, const SchemeConfig& cfg);
LabelMask decode_cw(const TokenSequence& tokens, ReconstructMode mode = ReconstructMode::kStrict);

struct InstanceOrder {
  bool shuffled = false;  // false: ascending first flattened pixel
  std::uint64_t seed = 0;
};

// Instance-wise: per instance, its binary runs terminated by its class token.
TokenSequence encode_iw(const InstanceMask& mask, const SchemeConfig& cfg, InstanceOrder order = {});

// Instance ids are renumbered 1, 2, ... in serialization order.
struct PanopticMask {
  LabelMask labels;
  InstanceMask instances;
};
PanopticMask decode_iw(const TokenSequence& tokens, ReconstructMode mode = ReconstructMode::kStrict);

// Serialization order of instance ids under `order` (exposed for tests and tools).
std::vector<std::int32_t> instance_order(const InstanceMask& mask, FlattenOrder flatten, InstanceOrder order);

// Per-token loss weights. With equalize, each separator/class token weighs as
// much as the coordinate tokens of its segment combined (at least 1).
std::vector<double> token_weights(const TokenSequence& tokens, bool equalize);

}  // namespace rlemask
