#pragma once

// Deliberately naive reference implementations. They share no code with the
// library beyond the data types, so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

#include "rlemask/mask.hpp"
#include "rlemask/metrics.hpp"
#include "rlemask/patch.hpp"
#include "rlemask/scheme.hpp"

namespace oracle {

using rlemask::Label;
using rlemask::LabelMask;
using rlemask::Scheme;

// Vector position of every (y, x) written out by the index formulas.
inline std::vector<Label> flatten_rows(const LabelMask& m) {
  std::vector<Label> v(m.size());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) v[static_cast<std::size_t>(y * m.width() + x)] = m.at(y, x);
  }
  return v;
}

inline std::vector<Label> flatten_cols(const LabelMask& m) {
  std::vector<Label> v(m.size());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) v[static_cast<std::size_t>(x * m.height() + y)] = m.at(y, x);
  }
  return v;
}

inline std::vector<Label> flatten_video(const rlemask::VideoMask& v, bool time_fastest) {
  const int n = v.num_frames(), h = v.height(), w = v.width();
  std::vector<Label> out(static_cast<std::size_t>(n) * h * w);
  for (int t = 0; t < n; ++t) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto idx = time_fastest ? t + n * y + n * h * x : t * h * w + y * w + x;
        out[static_cast<std::size_t>(idx)] = v.frame(t).at(y, x);
      }
    }
  }
  return out;
}

struct SimpleRun {
  std::int64_t start, length;
  Label cls;
  bool operator==(const SimpleRun&) const = default;
};

// Linear scan; `with_background` also emits runs of label 0.
inline std::vector<SimpleRun> scan_runs(const std::vector<Label>& v, bool with_background = false) {
  std::vector<SimpleRun> out;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if (v[i] != 0 || with_background) {
      out.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(j - i), v[i]});
    }
    i = j;
  }
  return out;
}

// Split by repeated subtraction.
inline std::vector<SimpleRun> split(const std::vector<SimpleRun>& runs, std::int64_t max_len) {
  std::vector<SimpleRun> out;
  for (auto r : runs) {
    while (r.length > max_len) {
      out.push_back({r.start, max_len, r.cls});
      r.start += max_len;
      r.length -= max_len;
    }
    out.push_back(r);
  }
  return out;
}

// Token count of a scheme, counted from first principles.
inline std::int64_t token_count(const LabelMask& m, Scheme scheme, bool two_d = false, bool column_major = false) {
  const auto v = column_major ? flatten_cols(m) : flatten_rows(m);
  const std::int64_t max_len = column_major ? m.height() : m.width();
  const std::int64_t start_tokens = two_d ? 2 : 1;
  auto pieces = [&](bool background) {
    return static_cast<std::int64_t>(split(scan_runs(v, background), max_len).size());
  };
  switch (scheme) {
    case Scheme::kNaiveBin:
      return pieces(false) * (start_tokens + 1);
    case Scheme::kNaiveMc:
      return pieces(false) * (start_tokens + 2);
    case Scheme::kLac:
      return pieces(false) * (start_tokens + 1);
    case Scheme::kBac:
      return pieces(true) * 2;
    case Scheme::kBacLac:
      return pieces(true);
    case Scheme::kDiffBin:
    case Scheme::kDiffMc: {
      std::int64_t transitions = 0;
      Label prev = 0;
      for (auto l : v) {
        transitions += l != prev;
        prev = l;
      }
      return scheme == Scheme::kDiffBin ? transitions : 2 * transitions;
    }
    case Scheme::kSplitStream:
      return pieces(false) * 4;
    case Scheme::kClassWise: {
      std::int64_t total = m.num_classes();
      for (Label c = 1; c <= m.num_classes(); ++c) {
        std::vector<Label> binary(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) binary[i] = v[i] == c;
        total += static_cast<std::int64_t>(split(scan_runs(binary), max_len).size()) * (start_tokens + 1);
      }
      return total;
    }
    default:
      return -1;
  }
}

// Vocabulary size by listing every distinct token meaning.
inline std::int64_t enumerate_vocab(Scheme scheme, int side, int classes, int frames = 1, bool two_d = false,
                                    int specials = 0) {
  std::set<std::tuple<int, std::int64_t, std::int64_t>> tokens;  // (kind, a, b)
  enum { kSpecial, kStart, kRow, kCol, kLen, kCls, kPair, kSep };
  const std::int64_t s = side;
  for (int i = 0; i < specials; ++i) tokens.insert({kSpecial, i, 0});
  auto starts = [&](std::int64_t pixels) {
    if (two_d) {
      for (std::int64_t i = 0; i < s; ++i) {
        tokens.insert({kRow, i, 0});
        tokens.insert({kCol, i, 0});
      }
    } else {
      for (std::int64_t p = 0; p < pixels; ++p) tokens.insert({kStart, p, 0});
    }
  };
  auto lengths = [&] {
    for (std::int64_t l = 1; l <= s; ++l) tokens.insert({kLen, l, 0});
  };
  std::int64_t composites = 1;
  for (int t = 0; t < frames; ++t) composites *= classes + 1;
  switch (scheme) {
    case Scheme::kNaiveBin:
      starts(s * s);
      lengths();
      break;
    case Scheme::kNaiveMc:
    case Scheme::kSplitStream:
      starts(s * s);
      lengths();
      for (int c = 1; c <= classes; ++c) tokens.insert({kCls, c, 0});
      break;
    case Scheme::kLac:
      starts(s * s);
      for (int c = 1; c <= classes; ++c) {
        for (std::int64_t l = 1; l <= s; ++l) tokens.insert({kPair, c, l});
      }
      break;
    case Scheme::kBac:
      lengths();
      for (int c = 0; c <= classes; ++c) tokens.insert({kCls, c, 0});
      break;
    case Scheme::kBacLac:
      for (int c = 0; c <= classes; ++c) {
        for (std::int64_t l = 1; l <= s; ++l) tokens.insert({kPair, c, l});
      }
      break;
    case Scheme::kDiffBin:
      for (std::int64_t p = 0; p < s * s; ++p) tokens.insert({kStart, p, 0});
      break;
    case Scheme::kDiffMc:
      for (std::int64_t p = 0; p < s * s; ++p) tokens.insert({kStart, p, 0});
      for (int c = 0; c <= classes; ++c) tokens.insert({kCls, c, 0});
      break;
    case Scheme::kFlat3DC:
    case Scheme::kFlat3DF:
      for (std::int64_t p = 0; p < frames * s * s; ++p) tokens.insert({kStart, p, 0});
      lengths();
      if (classes > 1) {
        for (int c = 1; c <= classes; ++c) tokens.insert({kCls, c, 0});
      }
      break;
    case Scheme::kTac:
      starts(s * s);
      lengths();
      for (std::int64_t k = 1; k < composites; ++k) tokens.insert({kCls, k, 0});
      break;
    case Scheme::kLtac:
      starts(s * s);
      for (std::int64_t k = 1; k < composites; ++k) {
        for (std::int64_t l = 1; l <= s; ++l) tokens.insert({kPair, k, l});
      }
      break;
    case Scheme::kClassWise:
      starts(s * s);
      lengths();
      for (int c = 1; c <= classes; ++c) tokens.insert({kSep, c, 0});
      break;
    case Scheme::kInstanceWise:
      starts(s * s);
      lengths();
      for (int c = 1; c <= classes; ++c) tokens.insert({kCls, c, 0});
      break;
  }
  return static_cast<std::int64_t>(tokens.size());
}

inline rlemask::ConfusionMatrix confusion(const LabelMask& gt, const LabelMask& pred) {
  rlemask::ConfusionMatrix cm(gt.num_classes());
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) cm.add(gt.at(y, x), pred.at(y, x));
  }
  return cm;
}

// Per-pixel recomposition: collect every contribution in patch order.
inline LabelMask recompose(const std::vector<rlemask::PlacedPatch>& patches, int h, int w,
                           rlemask::Combiner combiner) {
  std::vector<Label> out(static_cast<std::size_t>(h) * w, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::vector<Label> seen;
      for (const auto& p : patches) {
        const int py = y - p.origin.top, px = x - p.origin.left;
        if (py >= 0 && px >= 0 && py < p.mask.height() && px < p.mask.width()) seen.push_back(p.mask.at(py, px));
      }
      if (seen.empty()) continue;
      Label result = seen.back();
      Label latest_fg = 0;
      for (auto l : seen) {
        if (l != 0) latest_fg = l;
      }
      const bool all_fg = std::count(seen.begin(), seen.end(), 0) == 0;
      switch (combiner) {
        case rlemask::Combiner::kVote: {
          std::ptrdiff_t best = 0;
          for (auto l : seen) best = std::max(best, std::count(seen.begin(), seen.end(), l));
          // The latest contributor among the modal labels.
          for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
            if (std::count(seen.begin(), seen.end(), *it) == best) {
              result = *it;
              break;
            }
          }
          break;
        }
        case rlemask::Combiner::kLast:
          break;
        case rlemask::Combiner::kOr:
          result = latest_fg;
          break;
        case rlemask::Combiner::kAnd:
          result = all_fg ? latest_fg : 0;
          break;
        case rlemask::Combiner::kMin:
          result = *std::min_element(seen.begin(), seen.end());
          break;
        case rlemask::Combiner::kMax:
          result = *std::max_element(seen.begin(), seen.end());
          break;
      }
      out[static_cast<std::size_t>(y) * w + x] = result;
    }
  }
  return LabelMask(h, w, patches.front().mask.num_classes(), std::move(out));
}

}  // namespace oracle
