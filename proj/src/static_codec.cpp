#include "rlemask/static_codec.hpp"

#include <algorithm>
#include <string>

#include "codec_util.hpp"
#include "rlemask/error.hpp"
#include "rlemask/grammar.hpp"

namespace rlemask {

namespace {

void require_static(const SchemeConfig& cfg) {
  if (is_video_scheme(cfg.scheme) || is_structured_scheme(cfg.scheme)) {
    throw InvalidArgument("scheme " + std::string(to_string(cfg.scheme)) + " is not a static mask scheme");
  }
}

std::vector<std::int64_t> group_values(const SchemeConfig& cfg, const Run& r, std::int64_t max_len) {
  std::vector<std::int64_t> v;
  switch (cfg.scheme) {
    case Scheme::kNaiveBin:
      detail::push_start(cfg, r.start, v);
      v.push_back(r.length - 1);
      break;
    case Scheme::kNaiveMc:
      detail::push_start(cfg, r.start, v);
      v.push_back(r.length - 1);
      v.push_back(r.cls - 1);
      break;
    case Scheme::kLac:
      detail::push_start(cfg, r.start, v);
      v.push_back((r.cls - 1) * max_len + (r.length - 1));
      break;
    case Scheme::kBac:
      v.push_back(r.length - 1);
      v.push_back(r.cls);
      break;
    case Scheme::kBacLac:
      v.push_back(r.cls * max_len + (r.length - 1));
      break;
    case Scheme::kDiffBin:
      v.push_back(r.start);
      break;
    case Scheme::kDiffMc:
      v.push_back(r.start);
      v.push_back(r.cls);
      break;
    case Scheme::kSplitStream: {
      SchemeConfig two_d = cfg;
      two_d.start_mode = StartMode::k2D;
      detail::push_start(two_d, r.start, v);
      std::swap(v[0], v[1]);  // SX (column) before SY (row)
      v.push_back(r.length - 1);
      v.push_back(r.cls - 1);
      break;
    }
    default:
      throw InvalidArgument("not a static scheme");
  }
  return v;
}

std::vector<Label> decode_transitions(const SchemeConfig& cfg, const std::vector<ParsedGroup>& groups,
                                      std::int64_t n, ReconstructMode mode) {
  std::vector<Label> vec(static_cast<std::size_t>(n), 0);
  Label current = 0;
  std::int64_t pos = 0;
  std::int64_t last = -1;
  for (const auto& g : groups) {
    const auto at = g.values[0];
    if (at <= last) {
      if (mode == ReconstructMode::kStrict) {
        throw ParseError(g.position, "transition positions must increase (" + std::to_string(at) +
                                         " after " + std::to_string(last) + ")");
      }
      continue;
    }
    std::fill(vec.begin() + pos, vec.begin() + at, current);
    pos = at;
    last = at;
    current = cfg.scheme == Scheme::kDiffBin ? (current == 0 ? 1 : 0) : static_cast<Label>(g.values[1]);
  }
  std::fill(vec.begin() + pos, vec.end(), current);
  return vec;
}

std::vector<Label> decode_contiguous(const SchemeConfig& cfg, const std::vector<ParsedGroup>& groups,
                                     std::int64_t n, std::int64_t max_len, ReconstructMode mode) {
  std::vector<Label> vec(static_cast<std::size_t>(n), 0);
  std::int64_t pos = 0;
  for (const auto& g : groups) {
    std::int64_t length = 0;
    Label cls = 0;
    if (cfg.scheme == Scheme::kBac) {
      length = g.values[0] + 1;
      cls = static_cast<Label>(g.values[1]);
    } else {
      length = g.values[0] % max_len + 1;
      cls = static_cast<Label>(g.values[0] / max_len);
    }
    if (pos + length > n) {
      if (mode == ReconstructMode::kStrict) {
        throw RangeError("runs cover " + std::to_string(pos + length) + " pixels, mask has " + std::to_string(n));
      }
      length = n - pos;
    }
    std::fill(vec.begin() + pos, vec.begin() + pos + length, cls);
    pos += length;
    if (pos >= n && mode == ReconstructMode::kLenient) break;
  }
  return vec;
}

}  // namespace

RunList contiguous_runs(std::span<const Label> vec) {
  RunList out;
  out.vector_length = static_cast<std::int64_t>(vec.size());
  std::size_t i = 0;
  while (i < vec.size()) {
    std::size_t j = i + 1;
    while (j < vec.size() && vec[j] == vec[i]) ++j;
    out.runs.push_back(Run{static_cast<std::int64_t>(i), static_cast<std::int64_t>(j - i), vec[i], 0});
    i = j;
  }
  return out;
}

RunList tokenized_runs(const LabelMask& mask, const SchemeConfig& cfg) {
  cfg.validate();
  require_static(cfg);
  detail::check_dims(cfg, mask.height(), mask.width());
  const auto vec = flatten_2d(mask, cfg.flatten);
  detail::check_labels_within(vec, cfg.num_classes);
  const auto max_len = cfg.effective_max_len();
  RunList runs;
  switch (cfg.scheme) {
    case Scheme::kBac:
    case Scheme::kBacLac:
      runs = split_runs(contiguous_runs(vec), max_len);
      break;
    case Scheme::kDiffBin:
    case Scheme::kDiffMc: {
      runs.vector_length = static_cast<std::int64_t>(vec.size());
      Label prev = 0;
      for (std::size_t i = 0; i < vec.size(); ++i) {
        if (vec[i] != prev) runs.runs.push_back(Run{static_cast<std::int64_t>(i), 1, vec[i], 0});
        prev = vec[i];
      }
      break;
    }
    default:
      runs = split_runs(extract_runs(vec), max_len);
      break;
  }
  if (cfg.shuffled) runs = shuffle_runs(runs, cfg.seed);
  return runs;
}

TokenSequence encode_static(const LabelMask& mask, const SchemeConfig& cfg) {
  require_static(cfg);
  const SequenceGrammar grammar(cfg);
  const auto runs = tokenized_runs(mask, cfg);
  const auto max_len = cfg.effective_max_len();
  TokenSequence seq{cfg, {}};
  seq.ids.reserve(runs.runs.size() * grammar.group_shape().size());
  for (const auto& r : runs.runs) detail::emit_group(grammar, group_values(cfg, r, max_len), seq.ids);
  return seq;
}

LabelMask decode_static(const TokenSequence& tokens, ReconstructMode mode) {
  const auto& cfg = tokens.config;
  require_static(cfg);
  const SequenceGrammar grammar(cfg);
  const auto groups = parse(grammar, tokens.ids, mode);
  const auto n = cfg.vector_length();
  const auto max_len = cfg.effective_max_len();
  std::vector<Label> vec;
  switch (cfg.scheme) {
    case Scheme::kBac:
    case Scheme::kBacLac:
      vec = decode_contiguous(cfg, groups, n, max_len, mode);
      break;
    case Scheme::kDiffBin:
    case Scheme::kDiffMc:
      vec = decode_transitions(cfg, groups, n, mode);
      break;
    default: {
      RunList runs;
      runs.vector_length = n;
      for (const auto& g : groups) {
        Run r;
        switch (cfg.scheme) {
          case Scheme::kNaiveBin:
            r.start = detail::read_start(cfg, g);
            r.length = g.values[static_cast<std::size_t>(detail::start_slot_count(cfg))] + 1;
            r.cls = 1;
            break;
          case Scheme::kNaiveMc: {
            const auto k = static_cast<std::size_t>(detail::start_slot_count(cfg));
            r.start = detail::read_start(cfg, g);
            r.length = g.values[k] + 1;
            r.cls = static_cast<Label>(g.values[k + 1] + 1);
            break;
          }
          case Scheme::kLac: {
            const auto lac = g.values[static_cast<std::size_t>(detail::start_slot_count(cfg))];
            r.start = detail::read_start(cfg, g);
            r.length = lac % max_len + 1;
            r.cls = static_cast<Label>(lac / max_len + 1);
            break;
          }
          case Scheme::kSplitStream: {
            const auto col = g.values[0];
            const auto row = g.values[1];
            r.start = cfg.flatten == FlattenOrder::kColumnMajor ? col * cfg.height + row : row * cfg.width + col;
            r.length = g.values[2] + 1;
            r.cls = static_cast<Label>(g.values[3] + 1);
            break;
          }
          default:
            break;
        }
        runs.runs.push_back(r);
      }
      vec = runs_to_vector(runs, n, mode);
      break;
    }
  }
  return unflatten_2d(vec, cfg.height, cfg.width, cfg.num_classes, cfg.flatten);
}

SplitStreams encode_split_stream(const LabelMask& mask, const SchemeConfig& cfg) {
  if (cfg.scheme != Scheme::kSplitStream) throw InvalidArgument("encode_split_stream needs the split_stream scheme");
  const auto runs = tokenized_runs(mask, cfg);
  SplitStreams out;
  for (const auto& r : runs.runs) {
    const auto v = group_values(cfg, r, cfg.effective_max_len());
    for (std::size_t s = 0; s < 4; ++s) out.streams[s].push_back(v[s]);
  }
  return out;
}

std::array<std::int64_t, 4> split_stream_vocab_sizes(const SchemeConfig& cfg) {
  return {cfg.width, cfg.height, cfg.effective_max_len(), cfg.num_classes};
}

TokenSequence zip_streams(const SplitStreams& streams, const SchemeConfig& cfg) {
  if (cfg.scheme != Scheme::kSplitStream) throw InvalidArgument("zip_streams needs the split_stream scheme");
  const SequenceGrammar grammar(cfg);
  const auto n = streams.runs();
  for (const auto& s : streams.streams) {
    if (s.size() != n) throw InvalidArgument("split streams differ in length");
  }
  TokenSequence seq{cfg, {}};
  seq.ids.reserve(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::emit_group(grammar,
                       {streams.streams[0][i], streams.streams[1][i], streams.streams[2][i], streams.streams[3][i]},
                       seq.ids);
  }
  return seq;
}

SplitStreams unzip_streams(const TokenSequence& tokens) {
  if (tokens.config.scheme != Scheme::kSplitStream) throw InvalidArgument("unzip_streams needs the split_stream scheme");
  const SequenceGrammar grammar(tokens.config);
  SplitStreams out;
  for (const auto& g : parse_strict(grammar, tokens.ids)) {
    for (std::size_t s = 0; s < 4; ++s) out.streams[s].push_back(g.values[s]);
  }
  return out;
}

TokenSequence constrained_argmax_decode(const ScoreMatrix& scores, const SchemeConfig& cfg) {
  const SequenceGrammar grammar(cfg);
  if (scores.cols != grammar.layout().total()) {
    throw InvalidArgument("score matrix has " + std::to_string(scores.cols) + " columns, vocabulary has " +
                          std::to_string(grammar.layout().total()));
  }
  TokenSequence seq{cfg, {}};
  SequenceGrammar::State state;
  std::size_t last_boundary = 0;
  for (std::int64_t row = 0; row < scores.rows; ++row) {
    const auto legal = grammar.legal(state);
    if (legal.empty()) break;
    TokenId best = legal.front().lo;
    float best_score = scores.at(row, best);
    for (const auto& r : legal) {
      for (TokenId id = r.lo; id < r.hi; ++id) {
        if (scores.at(row, id) > best_score) {
          best = id;
          best_score = scores.at(row, id);
        }
      }
    }
    if (grammar.is_end(best) && state.slot == 0) break;
    grammar.advance(state, best);
    seq.ids.push_back(best);
    if (state.slot == 0) last_boundary = seq.ids.size();
  }
  // Out of rows: drop a partial group and close what the grammar requires.
  seq.ids.resize(last_boundary);
  if (cfg.scheme == Scheme::kInstanceWise) {
    const auto& layout = grammar.layout();
    // Class ids only occur as segment terminators; drop runs left unterminated.
    while (!seq.ids.empty() && layout.locate(seq.ids.back()).kind != SegmentKind::kClass) {
      seq.ids.resize(seq.ids.size() - grammar.group_shape().size());
    }
  } else if (cfg.scheme == Scheme::kClassWise) {
    SequenceGrammar::State replay;
    for (auto id : seq.ids) grammar.advance(replay, id);
    for (auto sep = replay.separators; sep < cfg.num_classes; ++sep) {
      seq.ids.push_back(grammar.layout().id_of(SegmentKind::kSeparator, sep));
    }
  }
  return seq;
}

}  // namespace rlemask
