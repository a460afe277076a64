#include "rlemask/noise.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "rlemask/error.hpp"
#include "rlemask/grammar.hpp"
#include "rlemask/metrics.hpp"
#include "rlemask/static_codec.hpp"
#include "rlemask/structured_codec.hpp"

namespace rlemask {

namespace {

// k distinct indices out of n, ascending.
std::vector<std::size_t> sample(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

LabelMask decode_any(const TokenSequence& tokens, ReconstructMode mode) {
  if (tokens.config.scheme == Scheme::kClassWise) return decode_cw(tokens, mode);
  return decode_static(tokens, mode);
}

TokenSequence encode_any(const LabelMask& mask, const SchemeConfig& cfg) {
  if (cfg.scheme == Scheme::kClassWise) return encode_cw(mask, cfg);
  if (is_video_scheme(cfg.scheme) || cfg.scheme == Scheme::kInstanceWise) {
    throw InvalidArgument("robustness evaluation supports static and cw schemes");
  }
  return encode_static(mask, cfg);
}

std::vector<bool> morph_pass(const std::vector<bool>& in, int h, int w, int r, bool erode) {
  // Separable square window, clipped at the border.
  std::vector<bool> tmp(in.size());
  std::vector<bool> out(in.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool v = erode;
      for (int dx = std::max(0, x - r); dx <= std::min(w - 1, x + r); ++dx) {
        const bool p = in[static_cast<std::size_t>(y) * w + dx];
        v = erode ? (v && p) : (v || p);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool v = erode;
      for (int dy = std::max(0, y - r); dy <= std::min(h - 1, y + r); ++dy) {
        const bool p = tmp[static_cast<std::size_t>(dy) * w + x];
        v = erode ? (v && p) : (v || p);
      }
      out[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(CorruptionKind k) noexcept {
  switch (k) {
    case CorruptionKind::kDropRun: return "drop-run";
    case CorruptionKind::kDropToken: return "drop-token";
    case CorruptionKind::kPerturbToken: return "perturb-token";
  }
  return "?";
}

CorruptionKind parse_corruption(std::string_view name) {
  for (auto k : {CorruptionKind::kDropRun, CorruptionKind::kDropToken, CorruptionKind::kPerturbToken}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown corruption '" + std::string(name) + "'");
}

Corrupted corrupt(const TokenSequence& tokens, const CorruptionSpec& spec, std::uint64_t seed) {
  const SequenceGrammar grammar(tokens.config);
  const auto parsed = parse_strict(grammar, tokens.ids);
  std::vector<std::size_t> run_groups;  // indices into parsed
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!parsed[i].terminator) run_groups.push_back(i);
  }
  std::mt19937_64 rng(seed);
  Corrupted out{tokens, {}, {}, false};

  auto take = [&out](std::size_t available, std::size_t wanted) {
    if (wanted > available) {
      out.clamped = true;
      return available;
    }
    return wanted;
  };

  switch (spec.kind) {
    case CorruptionKind::kDropRun: {
      const auto picked = sample(run_groups.size(), take(run_groups.size(), spec.count), rng);
      std::vector<bool> drop(tokens.ids.size(), false);
      for (auto p : picked) {
        const auto& g = parsed[run_groups[p]];
        out.groups.push_back(p);
        for (std::size_t t = g.position; t < g.position + g.tokens; ++t) {
          drop[t] = true;
          out.positions.push_back(t);
        }
      }
      out.tokens.ids.clear();
      for (std::size_t t = 0; t < tokens.ids.size(); ++t) {
        if (!drop[t]) out.tokens.ids.push_back(tokens.ids[t]);
      }
      break;
    }
    case CorruptionKind::kDropToken: {
      out.positions = sample(tokens.ids.size(), take(tokens.ids.size(), spec.count), rng);
      std::vector<bool> drop(tokens.ids.size(), false);
      for (auto p : out.positions) drop[p] = true;
      out.tokens.ids.clear();
      for (std::size_t t = 0; t < tokens.ids.size(); ++t) {
        if (!drop[t]) out.tokens.ids.push_back(tokens.ids[t]);
      }
      break;
    }
    case CorruptionKind::kPerturbToken: {
      if (spec.radius < 1) throw InvalidArgument("perturbation radius must be >= 1");
      std::vector<std::pair<std::size_t, std::size_t>> candidates;  // (token position, run group ordinal)
      for (std::size_t g = 0; g < run_groups.size(); ++g) {
        const auto& pg = parsed[run_groups[g]];
        for (std::size_t t = pg.position; t < pg.position + pg.tokens; ++t) candidates.emplace_back(t, g);
      }
      const auto picked = sample(candidates.size(), take(candidates.size(), spec.count), rng);
      const auto& layout = grammar.layout();
      for (auto p : picked) {
        const auto [pos, group] = candidates[p];
        const auto id = tokens.ids[pos];
        const auto& seg = layout.segment(layout.locate(id).kind);
        const auto lo = std::max<std::int64_t>(seg.offset, id - spec.radius);
        const auto hi = std::min<std::int64_t>(seg.offset + seg.size - 1, id + spec.radius);
        out.positions.push_back(pos);
        if (out.groups.empty() || out.groups.back() != group) out.groups.push_back(group);
        if (hi - lo < 1) continue;  // no other id in reach
        auto replacement = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo));
        if (replacement >= id) ++replacement;  // skip the original id
        out.tokens.ids[pos] = static_cast<TokenId>(replacement);
      }
      break;
    }
  }
  return out;
}

RobustnessReport robustness_eval(const LabelMask& mask, const SchemeConfig& cfg, const CorruptionSpec& spec,
                                 std::size_t trials, std::uint64_t seed, const std::optional<RepairSpec>& repair) {
  if (trials < 1) throw InvalidArgument("robustness evaluation needs at least one trial");
  const auto clean_tokens = encode_any(mask, cfg);
  const auto clean = decode_any(clean_tokens, ReconstructMode::kStrict);
  RobustnessReport report;
  report.trials = trials;
  report.min_dice = 1.0;
  double dice_sum = 0;
  double changed_sum = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto noisy = decode_any(corrupt(clean_tokens, spec, seed + t).tokens, ReconstructMode::kLenient);
    if (repair) noisy = morph_repair(noisy, repair->op, repair->radius);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) changed += clean.labels()[i] != noisy.labels()[i];
    const auto m = compute_metrics(accumulate(clean, noisy, ConfusionMatrix(cfg.num_classes)));
    report.dice.push_back(m.dice);
    report.changed.push_back(changed);
    dice_sum += m.dice;
    changed_sum += static_cast<double>(changed);
    report.min_dice = std::min(report.min_dice, m.dice);
    report.max_changed = std::max(report.max_changed, changed);
  }
  report.mean_dice = dice_sum / static_cast<double>(trials);
  report.mean_changed = changed_sum / static_cast<double>(trials);
  return report;
}

LabelMask morph_repair(const LabelMask& mask, MorphOp op, int radius) {
  if (radius < 1) throw InvalidArgument("morphology radius must be >= 1");
  const int h = mask.height();
  const int w = mask.width();
  std::vector<Label> out(mask.size(), 0);
  std::vector<bool> binary(mask.size());
  const auto labels = mask.labels();
  // Descending class order so the smallest id is written last and wins.
  for (Label c = mask.num_classes(); c >= 1; --c) {
    for (std::size_t i = 0; i < labels.size(); ++i) binary[i] = labels[i] == c;
    const auto result = op == MorphOp::kClose ? morph_pass(morph_pass(binary, h, w, radius, false), h, w, radius, true)
                                              : morph_pass(morph_pass(binary, h, w, radius, true), h, w, radius, false);
    for (std::size_t i = 0; i < result.size(); ++i) {
      if (result[i]) out[i] = c;
    }
  }
  return LabelMask(h, w, mask.num_classes(), std::move(out));
}

}  // namespace rlemask
