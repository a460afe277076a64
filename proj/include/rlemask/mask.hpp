#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace rlemask {

using Label = std::int32_t;

// Dense H x W grid of class labels in 0..C, 0 being background.
class LabelMask {
 public:
  LabelMask() = default;
  // All-background mask.
  LabelMask(int height, int width, int num_classes);
  // Takes ownership of row-major labels; validates size and label range.
  LabelMask(int height, int width, int num_classes, std::vector<Label> labels);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int num_classes() const noexcept { return num_classes_; }
  std::size_t size() const noexcept { return labels_.size(); }

  Label at(int y, int x) const { return labels_[index(y, x)]; }
  void set(int y, int x, Label value);

  // Row-major storage.
  std::span<const Label> labels() const noexcept { return labels_; }

  // Same labels, different declared class count (must still bound the labels).
  LabelMask with_classes(int num_classes) const;

  bool operator==(const LabelMask& other) const = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int height_ = 0;
  int width_ = 0;
  int num_classes_ = 1;
  std::vector<Label> labels_;
};

// Per-pixel instance ids (0 = background) plus the class of every instance.
struct InstanceMask {
  int height = 0;
  int width = 0;
  int num_classes = 1;
  std::vector<std::int32_t> ids;  // row-major
  std::map<std::int32_t, Label> class_of;

  std::int32_t at(int y, int x) const { return ids[static_cast<std::size_t>(y) * width + x]; }

  // Throws InvalidArgument when an id lacks a class or a class is out of range.
  void validate() const;
  LabelMask to_label_mask() const;

  bool operator==(const InstanceMask& other) const = default;
};

class VideoMask {
 public:
  VideoMask() = default;
  explicit VideoMask(std::vector<LabelMask> frames);

  int num_frames() const noexcept { return static_cast<int>(frames_.size()); }
  int height() const { return frames_.front().height(); }
  int width() const { return frames_.front().width(); }
  int num_classes() const { return frames_.front().num_classes(); }
  const LabelMask& frame(int t) const { return frames_.at(static_cast<std::size_t>(t)); }
  const std::vector<LabelMask>& frames() const noexcept { return frames_; }

  bool operator==(const VideoMask& other) const = default;

 private:
  std::vector<LabelMask> frames_;
};

enum class FlattenOrder { kRowMajor, kColumnMajor, kVideo3DC, kVideo3DF };

bool is_video_order(FlattenOrder order) noexcept;

// ROW_MAJOR index = y*W + x, COLUMN_MAJOR index = x*H + y.
std::vector<Label> flatten_2d(const LabelMask& mask, FlattenOrder order);
LabelMask unflatten_2d(std::span<const Label> vec, int height, int width, int num_classes,
                       FlattenOrder order);

// 3D-C index = t*H*W + y*W + x; 3D-F index = t + N*y + N*H*x (time fastest).
std::vector<Label> flatten_3d(const VideoMask& video, FlattenOrder order);
VideoMask unflatten_3d(std::span<const Label> vec, int frames, int height, int width,
                       int num_classes, FlattenOrder order);

// Block-majority pooling in two stages: the block is foreground when its
// foreground pixels are at least as many as its background pixels, and then
// takes its most frequent foreground class (smallest id on ties).
LabelMask subsample(const LabelMask& mask, int out_height, int out_width);
inline LabelMask subsample(const LabelMask& mask, int side) { return subsample(mask, side, side); }

// Nearest replication by integer factors; inverse shape of subsample.
LabelMask upsample(const LabelMask& mask, int out_height, int out_width);

// Composite label = sum_t c_t * (C+1)^t with frame 0 as the least significant
// digit. The result has (C+1)^N - 1 declared classes.
LabelMask collapse_tac(const VideoMask& video);
VideoMask expand_tac(const LabelMask& composite, int frames, int num_classes);

// (C+1)^N - 1; throws CapacityError when it does not fit a Label.
std::int64_t tac_class_count(int num_classes, int frames);

}  // namespace rlemask
