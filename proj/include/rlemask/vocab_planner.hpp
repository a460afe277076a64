#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlemask/scheme.hpp"

namespace rlemask {

inline constexpr std::int64_t kDefaultVocabLimit = 32000;

struct VocabBreakdown {
  SchemeConfig config;
  std::vector<Segment> segments;
  std::int64_t total = 0;
};

// Segment sizes for an S x S mask, C classes and N frames (N ignored by
// static schemes). Throws CapacityError on arithmetic overflow.
VocabBreakdown vocab_breakdown(Scheme scheme, int side, int num_classes, int frames = 1,
                               StartMode start_mode = StartMode::k1D, int specials = 0);

struct Feasibility {
  Scheme scheme = Scheme::kTac;
  int side = 0;
  int num_classes = 0;
  std::int64_t limit = 0;
  int max_frames = 0;              // largest N with V < limit; 0 when none
  std::int64_t vocab_at_max = 0;   // V at max_frames
  std::int64_t vocab_at_next = 0;  // V at max_frames + 1 (-1 when it overflows)
  std::optional<int> reference_frames;  // independently reported limit, when one exists
  bool discrepancy = false;             // reference differs from the formula
  std::string diagnostic;
};

// Largest N whose vocabulary stays strictly below `limit`. Video schemes only.
Feasibility max_feasible_frames(Scheme scheme, int side, int num_classes,
                                std::int64_t limit = kDefaultVocabLimit, int specials = 0,
                                StartMode start_mode = StartMode::k1D, int max_search = 64);

// Reported video-length limits for V < 32000 at common mask sizes, kept so
// planner output can flag where the formula disagrees with them.
std::optional<int> reference_frame_limit(Scheme scheme, int side, int num_classes);

}  // namespace rlemask
