#include "rlemask/vocab_planner.hpp"

#include <array>
#include <string>

#include "rlemask/error.hpp"

namespace rlemask {

namespace {

struct ReferenceLimit {
  Scheme scheme;
  int side;
  int num_classes;  // 1 binary, 2 multi-class
  int frames;
};

constexpr std::array<ReferenceLimit, 10> kReferenceLimits{{
    {Scheme::kTac, 80, 1, 14},
    {Scheme::kTac, 80, 2, 9},
    {Scheme::kTac, 160, 1, 12},
    {Scheme::kTac, 160, 2, 6},
    {Scheme::kLtac, 80, 1, 8},
    {Scheme::kLtac, 80, 2, 5},
    {Scheme::kFlat3DC, 80, 1, 5},
    {Scheme::kFlat3DC, 160, 1, 1},
    {Scheme::kFlat3DF, 80, 1, 5},
    {Scheme::kFlat3DF, 160, 1, 1},
}};

}  // namespace

VocabBreakdown vocab_breakdown(Scheme scheme, int side, int num_classes, int frames, StartMode start_mode,
                               int specials) {
  auto cfg = make_config(scheme, side, num_classes, is_video_scheme(scheme) ? frames : 1, start_mode, specials);
  const auto layout = build_layout(cfg);
  return VocabBreakdown{cfg, layout.segments(), layout.total()};
}

std::optional<int> reference_frame_limit(Scheme scheme, int side, int num_classes) {
  for (const auto& r : kReferenceLimits) {
    if (r.scheme == scheme && r.side == side && r.num_classes == num_classes) return r.frames;
  }
  return std::nullopt;
}

Feasibility max_feasible_frames(Scheme scheme, int side, int num_classes, std::int64_t limit, int specials,
                                StartMode start_mode, int max_search) {
  if (!is_video_scheme(scheme)) {
    throw InvalidArgument("frame feasibility only applies to video schemes, got " + std::string(to_string(scheme)));
  }
  if (limit < 1) throw InvalidArgument("vocabulary limit must be positive");
  Feasibility out;
  out.scheme = scheme;
  out.side = side;
  out.num_classes = num_classes;
  out.limit = limit;
  out.vocab_at_next = -1;
  for (int n = 1; n <= max_search; ++n) {
    std::int64_t v = 0;
    try {
      v = vocab_breakdown(scheme, side, num_classes, n, start_mode, specials).total;
    } catch (const CapacityError&) {
      out.vocab_at_next = -1;
      break;
    }
    if (v >= limit) {
      out.vocab_at_next = v;
      break;
    }
    out.max_frames = n;
    out.vocab_at_max = v;
  }
  if (out.max_frames == 0) {
    out.diagnostic = "no N satisfies V < " + std::to_string(limit) + " (N=1 needs " +
                     std::to_string(out.vocab_at_next) + ")";
  } else if (out.vocab_at_next == limit) {
    out.diagnostic = "N=" + std::to_string(out.max_frames + 1) + " reaches V = limit exactly; excluded (V < limit)";
  }
  if (specials == 0 && start_mode == StartMode::k1D && limit == kDefaultVocabLimit) {
    out.reference_frames = reference_frame_limit(scheme, side, num_classes);
    out.discrepancy = out.reference_frames && *out.reference_frames != out.max_frames;
    if (out.discrepancy) {
      if (!out.diagnostic.empty()) out.diagnostic += "; ";
      out.diagnostic += "reference limit N=" + std::to_string(*out.reference_frames) + " differs from formula N=" +
                        std::to_string(out.max_frames);
    }
  }
  return out;
}

}  // namespace rlemask
