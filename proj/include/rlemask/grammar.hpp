#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlemask/runs.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask {

// Half-open id interval [lo, hi).
struct IdRange {
  TokenId lo;
  TokenId hi;
  bool contains(TokenId id) const noexcept { return id >= lo && id < hi; }
};

// One parsed unit: either a run group (slot values, one per token) or a
// CW/IW terminator. Values are 0-based indices inside their segments.
struct ParsedGroup {
  std::array<std::int64_t, 4> values{};
  int count = 0;
  bool terminator = false;
  std::size_t position = 0;  // index of the first token of the group
  std::size_t tokens = 0;    // number of tokens the group spans in the input
};

// Per-position legality of a scheme's token sequences. Every scheme is a
// sequence of fixed-shape run groups; CW and IW additionally close each
// segment with a separator/class token. When specials > 0, id 0 ends the
// sequence and is legal wherever a new group may begin.
class SequenceGrammar {
 public:
  struct State {
    std::size_t slot = 0;
    std::int64_t separators = 0;       // CW: separators emitted so far
    std::size_t runs_in_segment = 0;   // CW/IW: runs since the last terminator
    bool ended = false;
  };

  explicit SequenceGrammar(const SchemeConfig& cfg);

  const SchemeConfig& config() const noexcept { return cfg_; }
  const VocabLayout& layout() const noexcept { return layout_; }
  const std::vector<SegmentKind>& group_shape() const noexcept { return slots_; }
  std::optional<SegmentKind> terminator() const noexcept { return terminator_; }

  std::vector<IdRange> legal(const State& state) const;
  bool is_legal(const State& state, TokenId id) const;
  bool is_end(TokenId id) const noexcept { return cfg_.specials > 0 && id == 0; }
  // Consumes a legal, non-end token.
  void advance(State& state, TokenId id) const;
  // True when the sequence may stop here and still parse.
  bool complete(const State& state) const;

 private:
  SchemeConfig cfg_;
  VocabLayout layout_;
  std::vector<SegmentKind> slots_;
  std::optional<SegmentKind> terminator_;
};

// Strict parse: any illegal id, tokens after the end marker, or an incomplete
// tail raise ParseError carrying the token position.
std::vector<ParsedGroup> parse_strict(const SequenceGrammar& grammar, std::span<const TokenId> ids);

// Lenient parse: ids outside the legal set are remapped to the nearest legal
// id, stray specials are skipped, an end marker stops parsing, and an
// incomplete trailing fragment is dropped.
std::vector<ParsedGroup> parse_lenient(const SequenceGrammar& grammar, std::span<const TokenId> ids);

std::vector<ParsedGroup> parse(const SequenceGrammar& grammar, std::span<const TokenId> ids,
                               ReconstructMode mode);

}  // namespace rlemask
