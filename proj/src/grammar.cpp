#include "rlemask/grammar.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "rlemask/error.hpp"

namespace rlemask {

namespace {

std::vector<SegmentKind> start_slots(const SchemeConfig& cfg) {
  if (cfg.start_mode == StartMode::k2D) return {SegmentKind::kStartRow, SegmentKind::kStartCol};
  return {SegmentKind::kStart};
}

IdRange range_of(const Segment& s) {
  return {static_cast<TokenId>(s.offset), static_cast<TokenId>(s.offset + s.size)};
}

}  // namespace

SequenceGrammar::SequenceGrammar(const SchemeConfig& cfg) : cfg_(cfg), layout_(build_layout(cfg)) {
  auto append = [this](std::initializer_list<SegmentKind> kinds) {
    slots_.insert(slots_.end(), kinds.begin(), kinds.end());
  };
  switch (cfg.scheme) {
    case Scheme::kNaiveBin:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLength});
      break;
    case Scheme::kNaiveMc:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLength, SegmentKind::kClass});
      break;
    case Scheme::kLac:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLac});
      break;
    case Scheme::kBac:
      append({SegmentKind::kLength, SegmentKind::kClass});
      break;
    case Scheme::kBacLac:
      append({SegmentKind::kLac});
      break;
    case Scheme::kDiffBin:
      append({SegmentKind::kStart});
      break;
    case Scheme::kDiffMc:
      append({SegmentKind::kStart, SegmentKind::kClass});
      break;
    case Scheme::kSplitStream:
      append({SegmentKind::kStartCol, SegmentKind::kStartRow, SegmentKind::kLength, SegmentKind::kClass});
      break;
    case Scheme::kFlat3DC:
    case Scheme::kFlat3DF:
      append({SegmentKind::kStart, SegmentKind::kLength});
      if (cfg.num_classes > 1) append({SegmentKind::kClass});
      break;
    case Scheme::kTac:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLength, SegmentKind::kTac});
      break;
    case Scheme::kLtac:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLtac});
      break;
    case Scheme::kClassWise:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLength});
      terminator_ = SegmentKind::kSeparator;
      break;
    case Scheme::kInstanceWise:
      slots_ = start_slots(cfg);
      append({SegmentKind::kLength});
      terminator_ = SegmentKind::kClass;
      break;
  }
}

std::vector<IdRange> SequenceGrammar::legal(const State& state) const {
  std::vector<IdRange> out;
  if (state.ended) return out;
  if (state.slot > 0) {
    out.push_back(range_of(layout_.segment(slots_[state.slot])));
    return out;
  }
  const bool may_end = complete(state);
  if (may_end && cfg_.specials > 0) out.push_back({0, 1});
  if (cfg_.scheme == Scheme::kClassWise) {
    if (state.separators < cfg_.num_classes) {
      out.push_back(range_of(layout_.segment(slots_[0])));
      const auto sep = layout_.id_of(SegmentKind::kSeparator, state.separators);
      out.push_back({sep, sep + 1});
    }
  } else {
    out.push_back(range_of(layout_.segment(slots_[0])));
    if (terminator_ && state.runs_in_segment > 0) out.push_back(range_of(layout_.segment(*terminator_)));
  }
  std::sort(out.begin(), out.end(), [](const IdRange& a, const IdRange& b) { return a.lo < b.lo; });
  return out;
}

bool SequenceGrammar::is_legal(const State& state, TokenId id) const {
  for (const auto& r : legal(state)) {
    if (r.contains(id)) return true;
  }
  return false;
}

void SequenceGrammar::advance(State& state, TokenId id) const {
  if (is_end(id) && state.slot == 0) {
    state.ended = true;
    return;
  }
  if (state.slot == 0 && terminator_ && layout_.locate(id).kind == *terminator_) {
    ++state.separators;
    state.runs_in_segment = 0;
    return;
  }
  if (++state.slot == slots_.size()) {
    state.slot = 0;
    ++state.runs_in_segment;
  }
}

bool SequenceGrammar::complete(const State& state) const {
  if (state.slot != 0) return false;
  if (cfg_.scheme == Scheme::kClassWise) return state.separators == cfg_.num_classes;
  if (cfg_.scheme == Scheme::kInstanceWise) return state.runs_in_segment == 0;
  return true;
}

namespace {

void push_value(const SequenceGrammar& grammar, std::vector<ParsedGroup>& groups, ParsedGroup& current,
                std::size_t pos, TokenId id, bool at_boundary) {
  const auto tv = grammar.layout().locate(id);
  if (at_boundary && grammar.terminator() && tv.kind == *grammar.terminator()) {
    ParsedGroup term;
    term.terminator = true;
    term.values[0] = tv.value;
    term.count = 1;
    term.position = pos;
    term.tokens = 1;
    groups.push_back(term);
    return;
  }
  if (current.count == 0) current.position = pos;
  current.values[static_cast<std::size_t>(current.count++)] = tv.value;
  current.tokens = pos - current.position + 1;
  if (static_cast<std::size_t>(current.count) == grammar.group_shape().size()) {
    groups.push_back(current);
    current = ParsedGroup{};
  }
}

TokenId nearest_legal(const std::vector<IdRange>& legal, TokenId id) {
  TokenId best = legal.front().lo;
  std::int64_t best_dist = -1;
  for (const auto& r : legal) {
    const TokenId candidate = std::clamp(id, r.lo, static_cast<TokenId>(r.hi - 1));
    const std::int64_t dist = std::abs(static_cast<std::int64_t>(candidate) - id);
    if (best_dist < 0 || dist < best_dist) {
      best = candidate;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace

std::vector<ParsedGroup> parse_strict(const SequenceGrammar& grammar, std::span<const TokenId> ids) {
  std::vector<ParsedGroup> groups;
  ParsedGroup current;
  SequenceGrammar::State state;
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    const TokenId id = ids[pos];
    if (state.ended) throw ParseError(pos, "token after end of sequence");
    if (!grammar.is_legal(state, id)) {
      std::string expected;
      for (const auto& r : grammar.legal(state)) {
        expected += " [" + std::to_string(r.lo) + "," + std::to_string(r.hi) + ")";
      }
      throw ParseError(pos, "id " + std::to_string(id) + " not legal here; expected" + expected);
    }
    const bool at_boundary = state.slot == 0;
    grammar.advance(state, id);
    if (state.ended) continue;
    push_value(grammar, groups, current, pos, id, at_boundary);
  }
  if (!state.ended && !grammar.complete(state)) throw ParseError(ids.size(), "sequence ends mid-group");
  return groups;
}

std::vector<ParsedGroup> parse_lenient(const SequenceGrammar& grammar, std::span<const TokenId> ids) {
  std::vector<ParsedGroup> groups;
  ParsedGroup current;
  SequenceGrammar::State state;
  for (std::size_t pos = 0; pos < ids.size() && !state.ended; ++pos) {
    TokenId id = ids[pos];
    if (grammar.is_end(id)) break;
    if (id >= 0 && id < grammar.config().specials) continue;
    const auto legal = grammar.legal(state);
    if (legal.empty()) break;
    if (!grammar.is_legal(state, id)) id = nearest_legal(legal, id);
    if (grammar.is_end(id)) break;
    const bool at_boundary = state.slot == 0;
    grammar.advance(state, id);
    push_value(grammar, groups, current, pos, id, at_boundary);
  }
  // Only whole groups reach `groups`; a partial trailing group stays in `current`.
  // IW runs without a class terminator cannot be attributed to an instance.
  if (grammar.config().scheme == Scheme::kInstanceWise) {
    std::size_t keep = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
      if (groups[i].terminator) keep = i + 1;
    }
    groups.resize(keep);
  }
  return groups;
}

std::vector<ParsedGroup> parse(const SequenceGrammar& grammar, std::span<const TokenId> ids,
                               ReconstructMode mode) {
  return mode == ReconstructMode::kStrict ? parse_strict(grammar, ids) : parse_lenient(grammar, ids);
}

}  // namespace rlemask
