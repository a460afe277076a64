#include "rlemask/scheme.hpp"

#include <array>
#include <limits>
#include <string>
#include <utility>

#include "rlemask/error.hpp"

namespace rlemask {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 14> kSchemeNames{{
    {Scheme::kNaiveBin, "naive_bin"},
    {Scheme::kNaiveMc, "naive_mc"},
    {Scheme::kLac, "lac"},
    {Scheme::kBac, "bac"},
    {Scheme::kBacLac, "bac_lac"},
    {Scheme::kDiffBin, "diff_bin"},
    {Scheme::kDiffMc, "diff_mc"},
    {Scheme::kSplitStream, "split_stream"},
    {Scheme::kFlat3DC, "flat_3dc"},
    {Scheme::kFlat3DF, "flat_3df"},
    {Scheme::kTac, "tac"},
    {Scheme::kLtac, "ltac"},
    {Scheme::kClassWise, "cw"},
    {Scheme::kInstanceWise, "iw"},
}};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  if (a != 0 && b > std::numeric_limits<std::int64_t>::max() / a) {
    throw CapacityError("vocabulary size overflows");
  }
  return a * b;
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  for (const auto& [scheme, name] : kSchemeNames) {
    if (scheme == s) return name;
  }
  return "?";
}

std::string_view to_string(StartMode m) noexcept { return m == StartMode::k1D ? "1d" : "2d"; }

std::string_view to_string(FlattenOrder o) noexcept {
  switch (o) {
    case FlattenOrder::kRowMajor: return "row";
    case FlattenOrder::kColumnMajor: return "col";
    case FlattenOrder::kVideo3DC: return "3dc";
    case FlattenOrder::kVideo3DF: return "3df";
  }
  return "?";
}

std::string_view to_string(SegmentKind k) noexcept {
  switch (k) {
    case SegmentKind::kSpecial: return "special";
    case SegmentKind::kStart: return "start";
    case SegmentKind::kStartRow: return "start_row";
    case SegmentKind::kStartCol: return "start_col";
    case SegmentKind::kLength: return "length";
    case SegmentKind::kClass: return "class";
    case SegmentKind::kLac: return "lac";
    case SegmentKind::kTac: return "tac";
    case SegmentKind::kLtac: return "ltac";
    case SegmentKind::kSeparator: return "separator";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& [scheme, n] : kSchemeNames) {
    if (n == name) return scheme;
  }
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

StartMode parse_start_mode(std::string_view name) {
  if (name == "1d") return StartMode::k1D;
  if (name == "2d") return StartMode::k2D;
  throw InvalidArgument("unknown start mode '" + std::string(name) + "'");
}

FlattenOrder parse_flatten(std::string_view name) {
  if (name == "row") return FlattenOrder::kRowMajor;
  if (name == "col") return FlattenOrder::kColumnMajor;
  if (name == "3dc") return FlattenOrder::kVideo3DC;
  if (name == "3df") return FlattenOrder::kVideo3DF;
  throw InvalidArgument("unknown flatten order '" + std::string(name) + "'");
}

bool is_video_scheme(Scheme s) noexcept {
  return s == Scheme::kFlat3DC || s == Scheme::kFlat3DF || s == Scheme::kTac || s == Scheme::kLtac;
}

bool is_structured_scheme(Scheme s) noexcept {
  return s == Scheme::kClassWise || s == Scheme::kInstanceWise;
}

bool has_absolute_starts(Scheme s) noexcept {
  switch (s) {
    case Scheme::kBac:
    case Scheme::kBacLac:
    case Scheme::kDiffBin:
    case Scheme::kDiffMc:
      return false;
    default:
      return true;
  }
}

std::int64_t SchemeConfig::effective_max_len() const noexcept {
  if (max_len > 0) return max_len;
  return flatten == FlattenOrder::kColumnMajor ? height : width;
}

std::int64_t SchemeConfig::vector_length() const noexcept {
  const auto pixels = static_cast<std::int64_t>(height) * width;
  return scheme == Scheme::kFlat3DC || scheme == Scheme::kFlat3DF ? pixels * frames : pixels;
}

void SchemeConfig::validate() const {
  auto fail = [this](const std::string& why) {
    throw InvalidArgument(std::string(to_string(scheme)) + ": " + why);
  };
  if (height < 1 || width < 1) fail("mask dimensions must be positive");
  if (num_classes < 1) fail("class count must be >= 1");
  if (frames < 1) fail("frame count must be >= 1");
  if (max_len < 0) fail("max_len must be >= 1 (or 0 for the default)");
  if (specials < 0) fail("specials must be >= 0");
  if (vocab_limit < 0) fail("vocab limit must be >= 0");
  if (is_video_order(flatten)) fail("flatten order must be row or col; video order is implied by the scheme");
  if ((scheme == Scheme::kNaiveBin || scheme == Scheme::kDiffBin) && num_classes != 1) {
    fail("binary scheme needs exactly one foreground class");
  }
  if (!is_video_scheme(scheme) && frames != 1) fail("static scheme with more than one frame");
  const bool two_d = start_mode == StartMode::k2D;
  switch (scheme) {
    case Scheme::kBac:
    case Scheme::kBacLac:
    case Scheme::kDiffBin:
    case Scheme::kDiffMc:
      if (two_d) fail("scheme has no start tokens, 2D starts not applicable");
      break;
    case Scheme::kFlat3DC:
    case Scheme::kFlat3DF:
      if (two_d) fail("flat video schemes use 1D starts");
      if (flatten != FlattenOrder::kRowMajor) fail("flat video schemes take their order from the scheme");
      break;
    case Scheme::kSplitStream:
      if (!two_d) fail("split-stream layout needs 2D starts");
      break;
    default:
      break;
  }
}

SchemeConfig make_config(Scheme scheme, int side, int num_classes, int frames, StartMode start_mode,
                         int specials) {
  SchemeConfig cfg;
  cfg.scheme = scheme;
  cfg.height = side;
  cfg.width = side;
  cfg.num_classes = num_classes;
  cfg.frames = frames;
  cfg.start_mode = start_mode;
  cfg.specials = specials;
  return cfg;
}

VocabLayout::VocabLayout(std::vector<Segment> segments) : segments_(std::move(segments)) {
  std::int64_t offset = 0;
  for (auto& s : segments_) {
    s.offset = offset;
    offset += s.size;
  }
  total_ = offset;
}

bool VocabLayout::has(SegmentKind kind) const noexcept {
  for (const auto& s : segments_) {
    if (s.kind == kind) return true;
  }
  return false;
}

const Segment& VocabLayout::segment(SegmentKind kind) const {
  for (const auto& s : segments_) {
    if (s.kind == kind) return s;
  }
  throw InvalidArgument("layout has no '" + std::string(to_string(kind)) + "' segment");
}

std::int64_t VocabLayout::size(SegmentKind kind) const noexcept {
  for (const auto& s : segments_) {
    if (s.kind == kind) return s.size;
  }
  return 0;
}

TokenId VocabLayout::id_of(SegmentKind kind, std::int64_t value) const {
  const auto& s = segment(kind);
  if (value < 0 || value >= s.size) {
    throw RangeError(std::string(to_string(kind)) + " value " + std::to_string(value) + " outside 0.." +
                     std::to_string(s.size - 1));
  }
  return static_cast<TokenId>(s.offset + value);
}

TokenValue VocabLayout::locate(TokenId id) const {
  for (const auto& s : segments_) {
    if (id >= s.offset && id < s.offset + s.size) return {s.kind, id - s.offset};
  }
  throw RangeError("token id " + std::to_string(id) + " outside vocabulary of size " + std::to_string(total_));
}

VocabLayout build_layout(const SchemeConfig& cfg) {
  cfg.validate();
  const std::int64_t h = cfg.height;
  const std::int64_t w = cfg.width;
  const std::int64_t c = cfg.num_classes;
  const std::int64_t max_len = cfg.effective_max_len();
  std::vector<Segment> segs;
  auto add = [&segs](SegmentKind kind, std::int64_t size) {
    if (size > 0) segs.push_back({kind, 0, size});
  };
  auto add_starts = [&] {
    if (cfg.start_mode == StartMode::k2D) {
      add(SegmentKind::kStartRow, h);
      add(SegmentKind::kStartCol, w);
    } else {
      add(SegmentKind::kStart, checked_mul(h, w));
    }
  };

  add(SegmentKind::kSpecial, cfg.specials);
  switch (cfg.scheme) {
    case Scheme::kNaiveBin:
      add_starts();
      add(SegmentKind::kLength, max_len);
      break;
    case Scheme::kNaiveMc:
    case Scheme::kSplitStream:
    case Scheme::kInstanceWise:
      add_starts();
      add(SegmentKind::kLength, max_len);
      add(SegmentKind::kClass, c);
      break;
    case Scheme::kLac:
      add_starts();
      add(SegmentKind::kLac, checked_mul(max_len, c));
      break;
    case Scheme::kBac:
      add(SegmentKind::kLength, max_len);
      add(SegmentKind::kClass, c + 1);
      break;
    case Scheme::kBacLac:
      add(SegmentKind::kLac, checked_mul(max_len, c + 1));
      break;
    case Scheme::kDiffBin:
      add(SegmentKind::kStart, checked_mul(h, w));
      break;
    case Scheme::kDiffMc:
      add(SegmentKind::kStart, checked_mul(h, w));
      add(SegmentKind::kClass, c + 1);
      break;
    case Scheme::kFlat3DC:
    case Scheme::kFlat3DF:
      add(SegmentKind::kStart, checked_mul(checked_mul(h, w), cfg.frames));
      add(SegmentKind::kLength, max_len);
      if (c > 1) add(SegmentKind::kClass, c);
      break;
    case Scheme::kTac:
      add_starts();
      add(SegmentKind::kLength, max_len);
      add(SegmentKind::kTac, tac_class_count(cfg.num_classes, cfg.frames));
      break;
    case Scheme::kLtac:
      add_starts();
      add(SegmentKind::kLtac, checked_mul(max_len, tac_class_count(cfg.num_classes, cfg.frames)));
      break;
    case Scheme::kClassWise:
      add_starts();
      add(SegmentKind::kLength, max_len);
      add(SegmentKind::kSeparator, c);
      break;
  }
  std::int64_t total = 0;
  for (const auto& s : segs) {
    if (s.size > std::numeric_limits<std::int64_t>::max() - total) throw CapacityError("vocabulary size overflows");
    total += s.size;
  }
  if (total > std::numeric_limits<TokenId>::max()) {
    throw CapacityError("vocabulary of " + std::to_string(total) + " tokens exceeds the token id range");
  }
  if (cfg.vocab_limit > 0 && total > cfg.vocab_limit) {
    throw CapacityError("vocabulary of " + std::to_string(total) + " tokens exceeds the limit of " +
                        std::to_string(cfg.vocab_limit));
  }
  return VocabLayout(std::move(segs));
}

}  // namespace rlemask
