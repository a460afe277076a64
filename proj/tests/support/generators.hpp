#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "rlemask/mask.hpp"

namespace testgen {

using rlemask::Label;
using rlemask::LabelMask;

enum class Style { kBlobs, kNoise, kStripes, kEmpty, kFull };

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Style random_style(std::mt19937_64& rng) {
  // Mostly blobs; the degenerate styles show up now and then.
  const int r = uniform(rng, 0, 19);
  if (r < 11) return Style::kBlobs;
  if (r < 15) return Style::kNoise;
  if (r < 18) return Style::kStripes;
  return r == 18 ? Style::kEmpty : Style::kFull;
}

inline LabelMask random_mask(std::mt19937_64& rng, int h, int w, int classes, Style style) {
  std::vector<Label> px(static_cast<std::size_t>(h) * w, 0);
  auto at = [&](int y, int x) -> Label& { return px[static_cast<std::size_t>(y) * w + x]; };
  switch (style) {
    case Style::kEmpty:
      break;
    case Style::kFull: {
      const Label c = uniform(rng, 1, classes);
      std::fill(px.begin(), px.end(), c);
      break;
    }
    case Style::kNoise: {
      const double p = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      std::bernoulli_distribution on(p);
      for (auto& v : px) v = on(rng) ? uniform(rng, 1, classes) : 0;
      break;
    }
    case Style::kStripes: {
      int y = 0;
      while (y < h) {
        const int band = uniform(rng, 1, std::max(1, h / 3));
        const Label c = uniform(rng, 0, classes);
        for (int yy = y; yy < std::min(h, y + band); ++yy) {
          for (int x = 0; x < w; ++x) at(yy, x) = c;
        }
        y += band;
      }
      break;
    }
    case Style::kBlobs: {
      const int blobs = uniform(rng, 1, 8);
      for (int b = 0; b < blobs; ++b) {
        const Label c = uniform(rng, 1, classes);
        const int cy = uniform(rng, 0, h - 1);
        const int cx = uniform(rng, 0, w - 1);
        const int ry = uniform(rng, 0, std::max(1, h / 3));
        const int rx = uniform(rng, 0, std::max(1, w / 3));
        const bool ellipse = uniform(rng, 0, 1) == 1;
        for (int y = std::max(0, cy - ry); y <= std::min(h - 1, cy + ry); ++y) {
          for (int x = std::max(0, cx - rx); x <= std::min(w - 1, cx + rx); ++x) {
            if (ellipse && ry > 0 && rx > 0) {
              const double dy = double(y - cy) / ry, dx = double(x - cx) / rx;
              if (dy * dy + dx * dx > 1.0) continue;
            }
            at(y, x) = c;
          }
        }
      }
      break;
    }
  }
  return LabelMask(h, w, classes, std::move(px));
}

inline LabelMask random_mask(std::mt19937_64& rng, int h, int w, int classes) {
  return random_mask(rng, h, w, classes, random_style(rng));
}

// Frames share a base mask; each frame moves a few pixels and adds a blob.
inline rlemask::VideoMask random_video(std::mt19937_64& rng, int side, int classes, int frames) {
  const auto base = random_mask(rng, side, side, classes, uniform(rng, 0, 3) == 0 ? Style::kNoise : Style::kBlobs);
  std::vector<LabelMask> out;
  for (int t = 0; t < frames; ++t) {
    const int shift = uniform(rng, -2, 2);
    std::vector<Label> px(static_cast<std::size_t>(side) * side, 0);
    for (int y = 0; y < side; ++y) {
      for (int x = 0; x < side; ++x) {
        const int sx = x - shift;
        if (sx >= 0 && sx < side) px[static_cast<std::size_t>(y) * side + x] = base.at(y, sx);
      }
    }
    const auto extra = random_mask(rng, side, side, classes, Style::kBlobs);
    if (uniform(rng, 0, 1) == 1) {
      for (std::size_t i = 0; i < px.size(); ++i) {
        if (px[i] == 0 && uniform(rng, 0, 7) == 0) px[i] = extra.labels()[i];
      }
    }
    out.emplace_back(side, side, classes, std::move(px));
  }
  return rlemask::VideoMask(std::move(out));
}

// Overlapping rectangles; later instances cover earlier ones, so some ids
// may end up split into several components or vanish entirely.
inline rlemask::InstanceMask random_instances(std::mt19937_64& rng, int h, int w, int classes, int count) {
  rlemask::InstanceMask m;
  m.height = h;
  m.width = w;
  m.num_classes = classes;
  m.ids.assign(static_cast<std::size_t>(h) * w, 0);
  for (int id = 1; id <= count; ++id) {
    const int y0 = uniform(rng, 0, h - 1), x0 = uniform(rng, 0, w - 1);
    const int y1 = uniform(rng, y0, std::min(h - 1, y0 + h / 2));
    const int x1 = uniform(rng, x0, std::min(w - 1, x0 + w / 2));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) m.ids[static_cast<std::size_t>(y) * w + x] = id;
    }
  }
  for (auto id : m.ids) {
    if (id != 0 && !m.class_of.count(id)) m.class_of[id] = uniform(rng, 1, classes);
  }
  return m;
}

}  // namespace testgen
