#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rlemask/mask.hpp"

namespace rlemask {

using TokenId = std::int32_t;

enum class Scheme {
  kNaiveBin,     // (start, length)
  kNaiveMc,      // (start, length, class)
  kLac,          // (start, length-as-class)
  kBac,          // (length, class) over background and foreground runs
  kBacLac,       // one (length, class) token per contiguous run
  kDiffBin,      // transition positions
  kDiffMc,       // (transition position, new class)
  kSplitStream,  // SX, SY, LEN, CLS streams
  kFlat3DC,      // video, frames concatenated
  kFlat3DF,      // video, time-fastest interleaving
  kTac,          // video, (start, length, time-as-class)
  kLtac,         // video, (start, length-and-time-as-class)
  kClassWise,    // per-class binary runs + class separators
  kInstanceWise  // per-instance binary runs + class terminators
};

enum class StartMode { k1D, k2D };

enum class SegmentKind {
  kSpecial,
  kStart,
  kStartRow,
  kStartCol,
  kLength,
  kClass,
  kLac,
  kTac,
  kLtac,
  kSeparator
};

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(StartMode m) noexcept;
std::string_view to_string(FlattenOrder o) noexcept;
std::string_view to_string(SegmentKind k) noexcept;
Scheme parse_scheme(std::string_view name);
StartMode parse_start_mode(std::string_view name);
FlattenOrder parse_flatten(std::string_view name);

bool is_video_scheme(Scheme s) noexcept;
bool is_structured_scheme(Scheme s) noexcept;
// Schemes whose runs carry explicit absolute starts (decoding is order-free).
bool has_absolute_starts(Scheme s) noexcept;

struct SchemeConfig {
  Scheme scheme = Scheme::kNaiveBin;
  int height = 80;
  int width = 80;
  int num_classes = 1;
  int frames = 1;
  StartMode start_mode = StartMode::k1D;
  FlattenOrder flatten = FlattenOrder::kRowMajor;
  std::int64_t max_len = 0;  // 0: extent of the fastest-varying spatial axis
  int specials = 0;          // reserved ids [0, specials); id 0 doubles as end-of-sequence
  bool shuffled = false;     // randomize run order before tokenizing
  std::uint64_t seed = 0;
  std::int64_t vocab_limit = 0;  // 0: unlimited

  std::int64_t effective_max_len() const noexcept;
  // Pixel count of the vector the runs index into (N*H*W for flat video).
  std::int64_t vector_length() const noexcept;
  bool has_end_token() const noexcept { return specials > 0; }
  // Throws InvalidArgument for inconsistent combinations.
  void validate() const;

  bool operator==(const SchemeConfig&) const = default;
};

SchemeConfig make_config(Scheme scheme, int side, int num_classes, int frames = 1,
                         StartMode start_mode = StartMode::k1D, int specials = 0);

struct Segment {
  SegmentKind kind;
  std::int64_t offset;
  std::int64_t size;
};

struct TokenValue {
  SegmentKind kind;
  std::int64_t value;  // 0-based index inside the segment
};

// Contiguous token-id address space:
// [SPECIAL][START...][LENGTH/LAC/TAC...][CLASS/SEPARATOR...]
class VocabLayout {
 public:
  explicit VocabLayout(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::int64_t total() const noexcept { return total_; }
  bool has(SegmentKind kind) const noexcept;
  const Segment& segment(SegmentKind kind) const;
  std::int64_t size(SegmentKind kind) const noexcept;

  TokenId id_of(SegmentKind kind, std::int64_t value) const;
  TokenValue locate(TokenId id) const;

 private:
  std::vector<Segment> segments_;
  std::int64_t total_ = 0;
};

// Throws CapacityError when V overflows or exceeds cfg.vocab_limit.
VocabLayout build_layout(const SchemeConfig& cfg);

struct TokenSequence {
  SchemeConfig config;
  std::vector<TokenId> ids;

  bool operator==(const TokenSequence&) const = default;
};

}  // namespace rlemask
