#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "rlemask/mask.hpp"

namespace rlemask {

struct Origin {
  int top = 0;
  int left = 0;
  bool operator==(const Origin&) const = default;
};

struct PatchGrid {
  int height = 0;
  int width = 0;
  int patch = 0;
  int stride = 0;
  std::vector<Origin> windows;  // row-major over (top, left)
};

// Origins at multiples of `stride` plus a clamped final window per axis when
// the strided ones leave a margin uncovered. Requires 1 <= stride <= P <= min(H, W).
PatchGrid patchify(int height, int width, int patch, int stride);

LabelMask extract_patch(const LabelMask& mask, Origin origin, int patch);

// Rotation by quarter turns followed by horizontal then vertical flips.
// One quarter turn maps out[i][j] = in[P-1-j][i] (counter-clockwise with the
// y axis pointing up, i.e. [[1,0],[0,2]] -> [[0,1],[2,0]] as printed).
struct Transform {
  int rot90 = 0;
  bool flip_h = false;  // mirror columns
  bool flip_v = false;  // mirror rows
  bool operator==(const Transform&) const = default;
};

LabelMask augment_patch(const LabelMask& mask, const Transform& transform);
Transform inverse(const Transform& transform);
Transform random_transform(std::mt19937_64& rng);

enum class Combiner { kVote, kLast, kOr, kAnd, kMin, kMax };
std::string_view to_string(Combiner c) noexcept;
Combiner parse_combiner(std::string_view name);

struct PlacedPatch {
  LabelMask mask;
  Origin origin;
};

struct Recomposed {
  LabelMask mask;
  std::size_t uncovered = 0;  // pixels no patch covered; left as background
};

// Later entries in `patches` count as later patches for tie-breaks and "last".
Recomposed recompose(const std::vector<PlacedPatch>& patches, int height, int width, Combiner combiner);

}  // namespace rlemask
