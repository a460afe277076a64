#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rlemask/mask.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask {

enum class CorruptionKind { kDropRun, kDropToken, kPerturbToken };
std::string_view to_string(CorruptionKind k) noexcept;
CorruptionKind parse_corruption(std::string_view name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kDropRun;
  std::size_t count = 1;
  std::int64_t radius = 1;  // perturb only
};

struct Corrupted {
  TokenSequence tokens;
  std::vector<std::size_t> groups;     // run groups touched (drop-run, perturb), ascending
  std::vector<std::size_t> positions;  // token positions touched in the input, ascending
  bool clamped = false;                // count exceeded the available units
};

// Seed-deterministic corruption of a well-formed sequence. Drop-run removes
// whole run groups (never CW/IW terminators); perturb moves a run-group token
// to another id of the same segment within +-radius.
Corrupted corrupt(const TokenSequence& tokens, const CorruptionSpec& spec, std::uint64_t seed);

struct RobustnessReport {
  std::size_t trials = 0;
  std::vector<double> dice;            // mean dice per trial vs the clean decode
  std::vector<std::size_t> changed;    // changed pixels per trial
  double mean_dice = 0.0;
  double min_dice = 0.0;
  double mean_changed = 0.0;
  std::size_t max_changed = 0;
};

enum class MorphOp { kClose, kOpen };

struct RepairSpec {
  MorphOp op = MorphOp::kClose;
  int radius = 1;
};

// Trial t corrupts with seed + t and decodes leniently, then applies the
// optional repair before comparing. Static and CW schemes.
RobustnessReport robustness_eval(const LabelMask& mask, const SchemeConfig& cfg, const CorruptionSpec& spec,
                                 std::size_t trials, std::uint64_t seed,
                                 const std::optional<RepairSpec>& repair = std::nullopt);

// Per-class binary closing/opening with a (2r+1)^2 square; windows are clipped
// at the border. Pixels claimed by several classes go to the smallest id.
LabelMask morph_repair(const LabelMask& mask, MorphOp op, int radius);

}  // namespace rlemask
