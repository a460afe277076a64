#include "rlemask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rlemask/error.hpp"
#include "rlemask/static_codec.hpp"
#include "rlemask/structured_codec.hpp"

namespace rlemask {

ConfusionMatrix::ConfusionMatrix(int num_classes) : num_classes_(num_classes) {
  if (num_classes < 1) throw InvalidArgument("confusion matrix needs C >= 1");
  const auto n = static_cast<std::size_t>(num_classes) + 1;
  counts_.assign(n * n, 0);
}

std::size_t ConfusionMatrix::index(int i, int j) const {
  if (i < 0 || j < 0 || i > num_classes_ || j > num_classes_) {
    throw InvalidArgument("class pair (" + std::to_string(i) + ", " + std::to_string(j) + ") outside 0.." +
                          std::to_string(num_classes_));
  }
  return static_cast<std::size_t>(i) * (static_cast<std::size_t>(num_classes_) + 1) + static_cast<std::size_t>(j);
}

std::uint64_t ConfusionMatrix::truth_total(int cls) const {
  std::uint64_t s = 0;
  for (int j = 0; j <= num_classes_; ++j) s += at(cls, j);
  return s;
}

std::uint64_t ConfusionMatrix::predicted_total(int cls) const {
  std::uint64_t s = 0;
  for (int i = 0; i <= num_classes_; ++i) s += at(i, cls);
  return s;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.num_classes_ != num_classes_) throw InvalidArgument("confusion matrices differ in class count");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

ConfusionMatrix accumulate(const LabelMask& gt, const LabelMask& pred, ConfusionMatrix cm) {
  if (gt.height() != pred.height() || gt.width() != pred.width()) {
    throw InvalidArgument("ground truth is " + std::to_string(gt.height()) + "x" + std::to_string(gt.width()) +
                          ", prediction is " + std::to_string(pred.height()) + "x" + std::to_string(pred.width()));
  }
  const auto g = gt.labels();
  const auto p = pred.labels();
  for (std::size_t i = 0; i < g.size(); ++i) cm.add(g[i], p[i]);
  return cm;
}

SegMetrics compute_metrics(const ConfusionMatrix& cm, const ClassSelection& selection, FwPrecision fw_variant) {
  if (cm.total() == 0) throw UndefinedMetrics("confusion matrix is empty");
  std::vector<Label> classes = selection.classes;
  if (classes.empty()) {
    for (Label c = selection.include_background ? 0 : 1; c <= cm.num_classes(); ++c) classes.push_back(c);
  }
  if (classes.empty()) throw InvalidArgument("class selection is empty");

  SegMetrics out;
  out.fw_variant = fw_variant;
  double rec_sum = 0, prec_sum = 0, dice_sum = 0;
  int rec_n = 0, prec_n = 0;
  double diag_sum = 0, truth_sum = 0, weighted_iou = 0, inverse_truth = 0;
  for (Label c : classes) {
    ClassMetrics m;
    m.cls = c;
    const auto nii = static_cast<double>(cm.at(c, c));
    m.truth = cm.truth_total(c);
    m.predicted = cm.predicted_total(c);
    const auto t = static_cast<double>(m.truth);
    const auto col = static_cast<double>(m.predicted);
    if (m.truth > 0) {
      m.recall = nii / t;
      m.recall_defined = true;
      rec_sum += m.recall;
      ++rec_n;
      inverse_truth += 1.0 / t;
    }
    if (m.truth + m.predicted > 0) {
      m.precision = nii / (t + col - nii);
      m.dice = 2.0 * nii / (t + col);
      m.precision_defined = true;
      prec_sum += m.precision;
      dice_sum += m.dice;
      ++prec_n;
      weighted_iou += t * m.precision;
    }
    if (!m.recall_defined || !m.precision_defined) out.excluded.push_back(c);
    diag_sum += nii;
    truth_sum += t;
    out.per_class.push_back(m);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.rec = rec_n > 0 ? rec_sum / rec_n : nan;
  out.prec = prec_n > 0 ? prec_sum / prec_n : nan;
  out.dice = prec_n > 0 ? dice_sum / prec_n : nan;
  out.fw_rec = truth_sum > 0 ? diag_sum / truth_sum : nan;
  if (truth_sum > 0) {
    out.fw_prec = fw_variant == FwPrecision::kNormalized ? weighted_iou / truth_sum : inverse_truth * weighted_iou;
  } else {
    out.fw_prec = nan;
  }
  return out;
}

ConcentrationMae concentration_mae(std::span<const LabelMask> gt, std::span<const LabelMask> pred, Label cls) {
  if (gt.empty()) throw UndefinedMetrics("no image pairs for concentration MAE");
  if (gt.size() != pred.size()) throw InvalidArgument("ground truth and prediction counts differ");
  auto fraction = [cls](const LabelMask& m) {
    const auto l = m.labels();
    return static_cast<double>(std::count(l.begin(), l.end(), cls)) / static_cast<double>(l.size());
  };
  ConcentrationMae out;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (gt[i].height() != pred[i].height() || gt[i].width() != pred[i].width()) {
      throw InvalidArgument("image pair " + std::to_string(i) + " differs in size");
    }
    out.per_image.push_back(std::abs(fraction(gt[i]) - fraction(pred[i])));
  }
  auto sorted = out.per_image;
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  out.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return out;
}

std::int64_t sequence_length(const LabelMask& mask, const SchemeConfig& cfg) {
  if (cfg.scheme == Scheme::kClassWise) return static_cast<std::int64_t>(encode_cw(mask, cfg).ids.size());
  return static_cast<std::int64_t>(encode_static(mask, cfg).ids.size());
}

SeqLengthStats summarize_lengths(std::vector<std::int64_t> lengths, std::span<const std::int64_t> thresholds) {
  if (lengths.empty()) throw InvalidArgument("sequence statistics need at least one mask");
  SeqLengthStats out;
  out.lengths = std::move(lengths);
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  double sum = 0;
  for (auto l : out.lengths) {
    sum += static_cast<double>(l);
    out.max = std::max(out.max, l);
  }
  out.mean = sum / static_cast<double>(out.lengths.size());
  for (auto th : thresholds) {
    const auto above = std::count_if(out.lengths.begin(), out.lengths.end(), [th](std::int64_t l) { return l > th; });
    out.pct_exceeding.push_back(100.0 * static_cast<double>(above) / static_cast<double>(out.lengths.size()));
  }
  return out;
}

SeqLengthStats seq_length_stats(std::span<const LabelMask> masks, const SchemeConfig& cfg,
                                std::span<const std::int64_t> thresholds) {
  std::vector<std::int64_t> lengths;
  lengths.reserve(masks.size());
  for (const auto& m : masks) lengths.push_back(sequence_length(m, cfg));
  return summarize_lengths(std::move(lengths), thresholds);
}

SegMetrics subsample_quality(const LabelMask& mask, int out_height, int out_width, const ClassSelection& selection) {
  const auto restored = upsample(subsample(mask, out_height, out_width), mask.height(), mask.width());
  return compute_metrics(accumulate(mask, restored, ConfusionMatrix(mask.num_classes())), selection);
}

}  // namespace rlemask
