#include "rlemask/video_codec.hpp"

#include <string>

#include "codec_util.hpp"
#include "rlemask/error.hpp"
#include "rlemask/grammar.hpp"

namespace rlemask {

namespace {

void require_video(const SchemeConfig& cfg) {
  if (!is_video_scheme(cfg.scheme)) {
    throw InvalidArgument("scheme " + std::string(to_string(cfg.scheme)) + " is not a video scheme");
  }
}

FlattenOrder flat_order(Scheme s) {
  return s == Scheme::kFlat3DC ? FlattenOrder::kVideo3DC : FlattenOrder::kVideo3DF;
}

bool is_flat(Scheme s) { return s == Scheme::kFlat3DC || s == Scheme::kFlat3DF; }

}  // namespace

SchemeConfig make_video_config(Scheme scheme, int side, int num_classes, int frames, StartMode start_mode,
                               int specials) {
  auto cfg = make_config(scheme, side, num_classes, frames, start_mode, specials);
  require_video(cfg);
  return cfg;
}

RunList video_runs(const VideoMask& video, const SchemeConfig& cfg) {
  cfg.validate();
  require_video(cfg);
  detail::check_dims(cfg, video.height(), video.width());
  if (video.num_frames() != cfg.frames) {
    throw InvalidArgument("video has " + std::to_string(video.num_frames()) + " frames, scheme expects " +
                          std::to_string(cfg.frames));
  }
  for (const auto& f : video.frames()) detail::check_labels_within(f.labels(), cfg.num_classes);
  RunList runs;
  if (cfg.scheme == Scheme::kFlat3DC) {
    // Runs stop at frame boundaries so each frame's runs form a block.
    const auto frame_len = static_cast<std::int64_t>(cfg.height) * cfg.width;
    const auto vec = flatten_3d(video, FlattenOrder::kVideo3DC);
    runs.vector_length = static_cast<std::int64_t>(vec.size());
    for (int t = 0; t < cfg.frames; ++t) {
      const auto frame = extract_runs(std::span<const Label>(vec).subspan(static_cast<std::size_t>(t * frame_len),
                                                                          static_cast<std::size_t>(frame_len)));
      for (auto r : frame.runs) {
        r.start += t * frame_len;
        runs.runs.push_back(r);
      }
    }
  } else if (is_flat(cfg.scheme)) {
    runs = extract_runs(flatten_3d(video, flat_order(cfg.scheme)));
  } else {
    // Re-declare the class count so composite digits use the configured base.
    std::vector<LabelMask> frames;
    for (const auto& f : video.frames()) frames.push_back(f.with_classes(cfg.num_classes));
    runs = extract_runs(flatten_2d(collapse_tac(VideoMask(std::move(frames))), cfg.flatten));
  }
  runs = split_runs(runs, cfg.effective_max_len());
  if (cfg.shuffled) runs = shuffle_runs(runs, cfg.seed);
  return runs;
}

TokenSequence encode_video(const VideoMask& video, const SchemeConfig& cfg) {
  require_video(cfg);
  const SequenceGrammar grammar(cfg);
  const auto runs = video_runs(video, cfg);
  const auto max_len = cfg.effective_max_len();
  TokenSequence seq{cfg, {}};
  std::vector<std::int64_t> v;
  for (const auto& r : runs.runs) {
    v.clear();
    switch (cfg.scheme) {
      case Scheme::kFlat3DC:
      case Scheme::kFlat3DF:
        v.push_back(r.start);
        v.push_back(r.length - 1);
        if (cfg.num_classes > 1) v.push_back(r.cls - 1);
        break;
      case Scheme::kTac:
        detail::push_start(cfg, r.start, v);
        v.push_back(r.length - 1);
        v.push_back(r.cls - 1);
        break;
      default:  // LTAC
        detail::push_start(cfg, r.start, v);
        v.push_back(static_cast<std::int64_t>(r.cls - 1) * max_len + (r.length - 1));
        break;
    }
    detail::emit_group(grammar, v, seq.ids);
  }
  return seq;
}

VideoMask decode_video(const TokenSequence& tokens, ReconstructMode mode) {
  const auto& cfg = tokens.config;
  require_video(cfg);
  const SequenceGrammar grammar(cfg);
  const auto groups = parse(grammar, tokens.ids, mode);
  const auto max_len = cfg.effective_max_len();
  const auto k = static_cast<std::size_t>(detail::start_slot_count(cfg));
  RunList runs;
  runs.vector_length = cfg.vector_length();
  for (const auto& g : groups) {
    Run r;
    switch (cfg.scheme) {
      case Scheme::kFlat3DC:
      case Scheme::kFlat3DF:
        r.start = g.values[0];
        r.length = g.values[1] + 1;
        r.cls = cfg.num_classes > 1 ? static_cast<Label>(g.values[2] + 1) : 1;
        break;
      case Scheme::kTac:
        r.start = detail::read_start(cfg, g);
        r.length = g.values[k] + 1;
        r.cls = static_cast<Label>(g.values[k + 1] + 1);
        break;
      default:
        r.start = detail::read_start(cfg, g);
        r.length = g.values[k] % max_len + 1;
        r.cls = static_cast<Label>(g.values[k] / max_len + 1);
        break;
    }
    runs.runs.push_back(r);
  }
  const auto vec = runs_to_vector(runs, runs.vector_length, mode);
  if (is_flat(cfg.scheme)) {
    return unflatten_3d(vec, cfg.frames, cfg.height, cfg.width, cfg.num_classes, flat_order(cfg.scheme));
  }
  const auto composite_classes = static_cast<int>(tac_class_count(cfg.num_classes, cfg.frames));
  const auto composite = unflatten_2d(vec, cfg.height, cfg.width, composite_classes, cfg.flatten);
  return expand_tac(composite, cfg.frames, cfg.num_classes);
}

}  // namespace rlemask
