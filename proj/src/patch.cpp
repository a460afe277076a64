#include "rlemask/patch.hpp"

#include <algorithm>
#include <string>

#include "rlemask/error.hpp"

namespace rlemask {

namespace {

std::vector<int> axis_origins(int extent, int patch, int stride) {
  std::vector<int> out;
  for (int o = 0; o + patch <= extent; o += stride) out.push_back(o);
  if (out.back() + patch < extent) out.push_back(extent - patch);
  return out;
}

LabelMask rotate_once(const LabelMask& m) {
  const int h = m.height();
  const int w = m.width();
  std::vector<Label> labels(m.size());
  // Output is w x h; out[i][j] = in[h-1-j][i].
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j < h; ++j) labels[static_cast<std::size_t>(i) * h + j] = m.at(h - 1 - j, i);
  }
  return LabelMask(w, h, m.num_classes(), std::move(labels));
}

}  // namespace

PatchGrid patchify(int height, int width, int patch, int stride) {
  if (patch < 1 || patch > std::min(height, width)) {
    throw InvalidArgument("patch size " + std::to_string(patch) + " must be in 1.." +
                          std::to_string(std::min(height, width)));
  }
  if (stride < 1 || stride > patch) {
    throw InvalidArgument("stride " + std::to_string(stride) + " must be in 1.." + std::to_string(patch));
  }
  PatchGrid grid{height, width, patch, stride, {}};
  for (int top : axis_origins(height, patch, stride)) {
    for (int left : axis_origins(width, patch, stride)) grid.windows.push_back({top, left});
  }
  return grid;
}

LabelMask extract_patch(const LabelMask& mask, Origin origin, int patch) {
  if (origin.top < 0 || origin.left < 0 || origin.top + patch > mask.height() || origin.left + patch > mask.width()) {
    throw InvalidArgument("patch at (" + std::to_string(origin.top) + ", " + std::to_string(origin.left) +
                          ") leaves the mask");
  }
  std::vector<Label> labels;
  labels.reserve(static_cast<std::size_t>(patch) * patch);
  for (int y = 0; y < patch; ++y) {
    for (int x = 0; x < patch; ++x) labels.push_back(mask.at(origin.top + y, origin.left + x));
  }
  return LabelMask(patch, patch, mask.num_classes(), std::move(labels));
}

LabelMask augment_patch(const LabelMask& mask, const Transform& t) {
  const int turns = ((t.rot90 % 4) + 4) % 4;
  if (turns != 0 && mask.height() != mask.width()) throw InvalidArgument("rot90 needs a square patch");
  LabelMask out = mask;
  for (int k = 0; k < turns; ++k) out = rotate_once(out);
  if (t.flip_h || t.flip_v) {
    const int h = out.height();
    const int w = out.width();
    std::vector<Label> labels(out.size());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int sy = t.flip_v ? h - 1 - y : y;
        const int sx = t.flip_h ? w - 1 - x : x;
        labels[static_cast<std::size_t>(y) * w + x] = out.at(sy, sx);
      }
    }
    out = LabelMask(h, w, out.num_classes(), std::move(labels));
  }
  return out;
}

Transform inverse(const Transform& t) {
  const int turns = ((t.rot90 % 4) + 4) % 4;
  if (t.flip_h && t.flip_v) return Transform{(4 - (turns + 2) % 4) % 4, false, false};
  if (t.flip_h || t.flip_v) return Transform{turns, t.flip_h, t.flip_v};  // reflections are involutions
  return Transform{(4 - turns) % 4, false, false};
}

Transform random_transform(std::mt19937_64& rng) {
  const auto bits = rng();
  return Transform{static_cast<int>(bits & 3u), ((bits >> 2) & 1u) != 0, ((bits >> 3) & 1u) != 0};
}

std::string_view to_string(Combiner c) noexcept {
  switch (c) {
    case Combiner::kVote: return "vote";
    case Combiner::kLast: return "last";
    case Combiner::kOr: return "or";
    case Combiner::kAnd: return "and";
    case Combiner::kMin: return "min";
    case Combiner::kMax: return "max";
  }
  return "?";
}

Combiner parse_combiner(std::string_view name) {
  for (auto c : {Combiner::kVote, Combiner::kLast, Combiner::kOr, Combiner::kAnd, Combiner::kMin, Combiner::kMax}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidArgument("unknown combiner '" + std::string(name) + "'");
}

Recomposed recompose(const std::vector<PlacedPatch>& patches, int height, int width, Combiner combiner) {
  if (height < 1 || width < 1) throw InvalidArgument("target dimensions must be positive");
  int num_classes = 1;
  for (const auto& p : patches) {
    const auto& o = p.origin;
    if (o.top < 0 || o.left < 0 || o.top + p.mask.height() > height || o.left + p.mask.width() > width) {
      throw InvalidArgument("patch origin (" + std::to_string(o.top) + ", " + std::to_string(o.left) +
                            ") out of bounds");
    }
    num_classes = std::max(num_classes, p.mask.num_classes());
  }
  const std::size_t pixels = static_cast<std::size_t>(height) * width;
  const std::size_t labels = static_cast<std::size_t>(num_classes) + 1;
  std::vector<int> seen(pixels, 0);
  std::vector<Label> result(pixels, 0);
  // Vote state: per pixel and label, count and index of the latest patch.
  std::vector<int> counts;
  std::vector<int> latest;
  if (combiner == Combiner::kVote) {
    counts.assign(pixels * labels, 0);
    latest.assign(pixels * labels, -1);
  }
  std::vector<bool> all_fg(pixels, true);

  for (std::size_t pi = 0; pi < patches.size(); ++pi) {
    const auto& p = patches[pi];
    for (int y = 0; y < p.mask.height(); ++y) {
      for (int x = 0; x < p.mask.width(); ++x) {
        const auto idx = static_cast<std::size_t>(p.origin.top + y) * width + (p.origin.left + x);
        const Label v = p.mask.at(y, x);
        const bool first = seen[idx]++ == 0;
        switch (combiner) {
          case Combiner::kVote:
            ++counts[idx * labels + v];
            latest[idx * labels + v] = static_cast<int>(pi);
            break;
          case Combiner::kLast:
            result[idx] = v;
            break;
          case Combiner::kOr:
          case Combiner::kAnd:
            if (v != 0) result[idx] = v;
            if (v == 0) all_fg[idx] = false;
            break;
          case Combiner::kMin:
            result[idx] = first ? v : std::min(result[idx], v);
            break;
          case Combiner::kMax:
            result[idx] = first ? v : std::max(result[idx], v);
            break;
        }
      }
    }
  }

  Recomposed out{LabelMask(height, width, num_classes), 0};
  for (std::size_t idx = 0; idx < pixels; ++idx) {
    if (seen[idx] == 0) {
      ++out.uncovered;
      result[idx] = 0;
      continue;
    }
    if (combiner == Combiner::kVote) {
      Label best = 0;
      for (std::size_t l = 1; l < labels; ++l) {
        const int c = counts[idx * labels + l];
        const int b = counts[idx * labels + static_cast<std::size_t>(best)];
        if (c > b || (c == b && latest[idx * labels + l] > latest[idx * labels + static_cast<std::size_t>(best)])) {
          best = static_cast<Label>(l);
        }
      }
      result[idx] = best;
    } else if (combiner == Combiner::kAnd && !all_fg[idx]) {
      result[idx] = 0;
    }
  }
  out.mask = LabelMask(height, width, num_classes, std::move(result));
  return out;
}

}  // namespace rlemask
