#include "rlemask/mask.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "rlemask/error.hpp"

namespace rlemask {

namespace {

void check_dims(int height, int width, int num_classes) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("mask dimensions must be positive, got " + std::to_string(height) + "x" +
                          std::to_string(width));
  }
  if (num_classes < 1) throw InvalidArgument("class count must be >= 1");
}

void check_labels(std::span<const Label> labels, int num_classes) {
  for (Label v : labels) {
    if (v < 0 || v > num_classes) {
      throw InvalidArgument("label " + std::to_string(v) + " outside 0.." + std::to_string(num_classes));
    }
  }
}

}  // namespace

LabelMask::LabelMask(int height, int width, int num_classes)
    : height_(height), width_(width), num_classes_(num_classes) {
  check_dims(height, width, num_classes);
  labels_.assign(static_cast<std::size_t>(height) * width, 0);
}

LabelMask::LabelMask(int height, int width, int num_classes, std::vector<Label> labels)
    : height_(height), width_(width), num_classes_(num_classes), labels_(std::move(labels)) {
  check_dims(height, width, num_classes);
  if (labels_.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidArgument("label count " + std::to_string(labels_.size()) + " does not match " +
                          std::to_string(height) + "x" + std::to_string(width));
  }
  check_labels(labels_, num_classes);
}

void LabelMask::set(int y, int x, Label value) {
  if (value < 0 || value > num_classes_) {
    throw InvalidArgument("label " + std::to_string(value) + " outside 0.." + std::to_string(num_classes_));
  }
  labels_[index(y, x)] = value;
}

LabelMask LabelMask::with_classes(int num_classes) const {
  return LabelMask(height_, width_, num_classes, labels_);
}

void InstanceMask::validate() const {
  check_dims(height, width, num_classes);
  if (ids.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidArgument("instance id count does not match mask dimensions");
  }
  for (auto id : ids) {
    if (id < 0) throw InvalidArgument("negative instance id");
    if (id != 0 && !class_of.contains(id)) {
      throw InvalidArgument("instance " + std::to_string(id) + " has no class mapping");
    }
  }
  for (const auto& [id, cls] : class_of) {
    if (cls < 1 || cls > num_classes) {
      throw InvalidArgument("instance " + std::to_string(id) + " maps to class " + std::to_string(cls) +
                            " outside 1.." + std::to_string(num_classes));
    }
  }
}

LabelMask InstanceMask::to_label_mask() const {
  validate();
  std::vector<Label> labels(ids.size(), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != 0) labels[i] = class_of.at(ids[i]);
  }
  return LabelMask(height, width, num_classes, std::move(labels));
}

VideoMask::VideoMask(std::vector<LabelMask> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) throw InvalidArgument("video needs at least one frame");
  const auto& f0 = frames_.front();
  for (const auto& f : frames_) {
    if (f.height() != f0.height() || f.width() != f0.width() || f.num_classes() != f0.num_classes()) {
      throw InvalidArgument("video frames differ in dimensions or class count");
    }
  }
}

bool is_video_order(FlattenOrder order) noexcept {
  return order == FlattenOrder::kVideo3DC || order == FlattenOrder::kVideo3DF;
}

std::vector<Label> flatten_2d(const LabelMask& mask, FlattenOrder order) {
  if (is_video_order(order)) throw InvalidArgument("flatten_2d needs a 2D order");
  if (order == FlattenOrder::kRowMajor) return {mask.labels().begin(), mask.labels().end()};
  const int h = mask.height();
  const int w = mask.width();
  std::vector<Label> out(mask.size());
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) out[static_cast<std::size_t>(x) * h + y] = mask.at(y, x);
  }
  return out;
}

LabelMask unflatten_2d(std::span<const Label> vec, int height, int width, int num_classes,
                       FlattenOrder order) {
  if (is_video_order(order)) throw InvalidArgument("unflatten_2d needs a 2D order");
  if (vec.size() != static_cast<std::size_t>(height) * width) {
    throw InvalidArgument("vector length does not match mask dimensions");
  }
  if (order == FlattenOrder::kRowMajor) {
    return LabelMask(height, width, num_classes, std::vector<Label>(vec.begin(), vec.end()));
  }
  std::vector<Label> labels(vec.size());
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) {
      labels[static_cast<std::size_t>(y) * width + x] = vec[static_cast<std::size_t>(x) * height + y];
    }
  }
  return LabelMask(height, width, num_classes, std::move(labels));
}

std::vector<Label> flatten_3d(const VideoMask& video, FlattenOrder order) {
  if (!is_video_order(order)) throw InvalidArgument("flatten_3d needs a video order");
  const std::size_t n = static_cast<std::size_t>(video.num_frames());
  const std::size_t h = static_cast<std::size_t>(video.height());
  const std::size_t w = static_cast<std::size_t>(video.width());
  std::vector<Label> out(n * h * w);
  for (std::size_t t = 0; t < n; ++t) {
    const auto labels = video.frame(static_cast<int>(t)).labels();
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t idx =
            order == FlattenOrder::kVideo3DC ? t * h * w + y * w + x : t + n * y + n * h * x;
        out[idx] = labels[y * w + x];
      }
    }
  }
  return out;
}

VideoMask unflatten_3d(std::span<const Label> vec, int frames, int height, int width,
                       int num_classes, FlattenOrder order) {
  if (!is_video_order(order)) throw InvalidArgument("unflatten_3d needs a video order");
  if (frames < 1) throw InvalidArgument("video needs at least one frame");
  const std::size_t n = static_cast<std::size_t>(frames);
  const std::size_t h = static_cast<std::size_t>(height);
  const std::size_t w = static_cast<std::size_t>(width);
  if (vec.size() != n * h * w) throw InvalidArgument("vector length does not match video dimensions");
  std::vector<LabelMask> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Label> labels(h * w);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t idx =
            order == FlattenOrder::kVideo3DC ? t * h * w + y * w + x : t + n * y + n * h * x;
        labels[y * w + x] = vec[idx];
      }
    }
    out.emplace_back(height, width, num_classes, std::move(labels));
  }
  return VideoMask(std::move(out));
}

LabelMask subsample(const LabelMask& mask, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1 || mask.height() % out_height != 0 ||
      mask.width() % out_width != 0) {
    throw InvalidArgument("subsample needs integer pooling factors: " + std::to_string(mask.height()) +
                          "x" + std::to_string(mask.width()) + " -> " + std::to_string(out_height) +
                          "x" + std::to_string(out_width));
  }
  const int fy = mask.height() / out_height;
  const int fx = mask.width() / out_width;
  LabelMask out(out_height, out_width, mask.num_classes());
  std::vector<int> counts(static_cast<std::size_t>(mask.num_classes()) + 1);
  for (int oy = 0; oy < out_height; ++oy) {
    for (int ox = 0; ox < out_width; ++ox) {
      std::fill(counts.begin(), counts.end(), 0);
      for (int y = oy * fy; y < (oy + 1) * fy; ++y) {
        for (int x = ox * fx; x < (ox + 1) * fx; ++x) ++counts[static_cast<std::size_t>(mask.at(y, x))];
      }
      // Foreground against background first (ties to foreground), then the
      // modal foreground class; strict '>' keeps the smallest id on ties.
      Label best = 0;
      int best_count = 0;
      int foreground = 0;
      for (std::size_t c = 1; c < counts.size(); ++c) {
        foreground += counts[c];
        if (counts[c] > best_count) {
          best = static_cast<Label>(c);
          best_count = counts[c];
        }
      }
      if (foreground < counts[0]) best = 0;
      out.set(oy, ox, best);
    }
  }
  return out;
}

LabelMask upsample(const LabelMask& mask, int out_height, int out_width) {
  if (out_height % mask.height() != 0 || out_width % mask.width() != 0) {
    throw InvalidArgument("upsample needs integer replication factors");
  }
  const int fy = out_height / mask.height();
  const int fx = out_width / mask.width();
  std::vector<Label> labels(static_cast<std::size_t>(out_height) * out_width);
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      labels[static_cast<std::size_t>(y) * out_width + x] = mask.at(y / fy, x / fx);
    }
  }
  return LabelMask(out_height, out_width, mask.num_classes(), std::move(labels));
}

std::int64_t tac_class_count(int num_classes, int frames) {
  if (num_classes < 1 || frames < 1) throw InvalidArgument("TAC needs C >= 1 and N >= 1");
  std::int64_t power = 1;
  for (int t = 0; t < frames; ++t) {
    if (power > std::numeric_limits<Label>::max() / (num_classes + 1)) {
      throw CapacityError("(C+1)^N overflows for C=" + std::to_string(num_classes) +
                          ", N=" + std::to_string(frames));
    }
    power *= num_classes + 1;
  }
  return power - 1;
}

LabelMask collapse_tac(const VideoMask& video) {
  const int base = video.num_classes() + 1;
  const auto composite_classes = tac_class_count(video.num_classes(), video.num_frames());
  std::vector<Label> labels(video.frame(0).size(), 0);
  Label weight = 1;
  for (const auto& f : video.frames()) {
    const auto src = f.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] += src[i] * weight;
    weight *= base;
  }
  return LabelMask(video.height(), video.width(), static_cast<int>(composite_classes), std::move(labels));
}

VideoMask expand_tac(const LabelMask& composite, int frames, int num_classes) {
  const auto composite_classes = tac_class_count(num_classes, frames);
  const int base = num_classes + 1;
  std::vector<std::vector<Label>> per_frame(static_cast<std::size_t>(frames),
                                            std::vector<Label>(composite.size()));
  const auto src = composite.labels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] > composite_classes) throw InvalidArgument("composite label exceeds (C+1)^N - 1");
    Label rest = src[i];
    for (int t = 0; t < frames; ++t) {
      per_frame[static_cast<std::size_t>(t)][i] = rest % base;
      rest /= base;
    }
  }
  std::vector<LabelMask> out;
  out.reserve(per_frame.size());
  for (auto& labels : per_frame) {
    out.emplace_back(composite.height(), composite.width(), num_classes, std::move(labels));
  }
  return VideoMask(std::move(out));
}

}  // namespace rlemask
