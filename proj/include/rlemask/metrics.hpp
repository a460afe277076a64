#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rlemask/mask.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask {

// counts[i][j]: pixels of true class i predicted as class j, over 0..C.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const noexcept { return num_classes_; }
  std::uint64_t at(int truth, int predicted) const { return counts_[index(truth, predicted)]; }
  void add(int truth, int predicted, std::uint64_t n = 1) { counts_[index(truth, predicted)] += n; }
  std::uint64_t truth_total(int cls) const;      // t_i
  std::uint64_t predicted_total(int cls) const;  // sum_j n_ji
  std::uint64_t total() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t index(int i, int j) const;

  int num_classes_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix accumulate(const LabelMask& gt, const LabelMask& pred, ConfusionMatrix cm);

struct ClassSelection {
  bool include_background = true;
  std::vector<Label> classes;  // explicit list; overrides include_background when non-empty
};

// kNormalized divides the t-weighted IoU sum by sum_k t_k; kPerClassInverse
// multiplies it by sum_k 1/t_k instead.
enum class FwPrecision { kNormalized, kPerClassInverse };

struct ClassMetrics {
  Label cls = 0;
  std::uint64_t truth = 0;      // t_i
  std::uint64_t predicted = 0;  // sum_j n_ji
  double recall = 0.0;          // n_ii / t_i
  double precision = 0.0;       // per-class IoU
  double dice = 0.0;
  bool recall_defined = false;
  bool precision_defined = false;  // dice shares the IoU's zero-denominator condition
};

struct SegMetrics {
  std::vector<ClassMetrics> per_class;
  double rec = 0.0;
  double prec = 0.0;
  double dice = 0.0;
  double fw_rec = 0.0;
  double fw_prec = 0.0;
  FwPrecision fw_variant = FwPrecision::kNormalized;
  std::vector<Label> excluded;  // classes left out of a mean for a zero denominator
};

SegMetrics compute_metrics(const ConfusionMatrix& cm, const ClassSelection& selection = {},
                           FwPrecision fw_variant = FwPrecision::kNormalized);

struct ConcentrationMae {
  std::vector<double> per_image;
  double median = 0.0;
};

// Per image |fraction of `cls` pixels in gt - same in pred|; median over images.
ConcentrationMae concentration_mae(std::span<const LabelMask> gt, std::span<const LabelMask> pred, Label cls);

// Token count of a static or class-wise encoding of `mask`.
std::int64_t sequence_length(const LabelMask& mask, const SchemeConfig& cfg);

struct SeqLengthStats {
  std::vector<std::int64_t> lengths;
  double mean = 0.0;
  std::int64_t max = 0;
  std::vector<std::int64_t> thresholds;
  std::vector<double> pct_exceeding;  // percent of lengths strictly above each threshold
};

SeqLengthStats summarize_lengths(std::vector<std::int64_t> lengths, std::span<const std::int64_t> thresholds);
SeqLengthStats seq_length_stats(std::span<const LabelMask> masks, const SchemeConfig& cfg,
                                std::span<const std::int64_t> thresholds);

// Metrics of nearest-upsampled(subsample(mask)) against the mask itself.
SegMetrics subsample_quality(const LabelMask& mask, int out_height, int out_width,
                             const ClassSelection& selection = {});

}  // namespace rlemask
