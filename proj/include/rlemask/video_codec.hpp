#pragma once

#include "rlemask/mask.hpp"
#include "rlemask/runs.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask {

// Video config: a SchemeConfig whose scheme is one of FLAT_3DC, FLAT_3DF,
// TAC or LTAC, with `frames` = N.
SchemeConfig make_video_config(Scheme scheme, int side, int num_classes, int frames,
                               StartMode start_mode = StartMode::k1D, int specials = 0);

// FLAT_*: runs over the 3D-flattened vector, (start, length[, class]).
// TAC: runs over the composite mask, (start, length, composite - 1).
// LTAC: (start, (composite - 1) * max_len + length - 1).
TokenSequence encode_video(const VideoMask& video, const SchemeConfig& cfg);
VideoMask decode_video(const TokenSequence& tokens, ReconstructMode mode = ReconstructMode::kStrict);

// Runs in tokenized order (split to max_len, shuffled if configured); for TAC
// and LTAC the classes are composite labels.
RunList video_runs(const VideoMask& video, const SchemeConfig& cfg);

}  // namespace rlemask
