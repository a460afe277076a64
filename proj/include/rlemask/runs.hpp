#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rlemask/mask.hpp"

namespace rlemask {

struct Run {
  std::int64_t start = 0;   // 0-based index into the flattened vector
  std::int64_t length = 1;
  Label cls = 1;
  std::int32_t instance = 0;  // 0 when not instance-tagged

  bool operator==(const Run&) const = default;
};

struct RunList {
  std::vector<Run> runs;
  std::int64_t vector_length = 0;
  std::int64_t max_len = 0;  // 0: unbounded

  bool operator==(const RunList&) const = default;
};

enum class ReconstructMode { kStrict, kLenient };

// Maximal runs of constant nonzero label, in increasing start order.
RunList extract_runs(std::span<const Label> vec);

// Breaks every run longer than max_len into consecutive pieces.
RunList split_runs(const RunList& runs, std::int64_t max_len);

// Strict: overlap -> OverlapError, out-of-range run -> RangeError.
// Lenient: later runs overwrite earlier ones, out-of-range pixels are clipped.
std::vector<Label> runs_to_vector(const RunList& runs, std::int64_t length,
                                  ReconstructMode mode = ReconstructMode::kStrict);

// Seeded permutation of the runs (std::mt19937_64 + Fisher-Yates).
RunList shuffle_runs(const RunList& runs, std::uint64_t seed);

}  // namespace rlemask
