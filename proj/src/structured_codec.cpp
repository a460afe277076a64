#include "rlemask/structured_codec.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <string>

#include "codec_util.hpp"
#include "rlemask/error.hpp"
#include "rlemask/grammar.hpp"

namespace rlemask {

namespace {

void emit_binary_runs(const SequenceGrammar& grammar, const SchemeConfig& cfg, const std::vector<Label>& binary,
                      std::uint64_t shuffle_seed, std::vector<TokenId>& out) {
  auto runs = split_runs(extract_runs(binary), cfg.effective_max_len());
  if (cfg.shuffled) runs = shuffle_runs(runs, shuffle_seed);
  std::vector<std::int64_t> v;
  for (const auto& r : runs.runs) {
    v.clear();
    detail::push_start(cfg, r.start, v);
    v.push_back(r.length - 1);
    detail::emit_group(grammar, v, out);
  }
}

Run run_of(const SchemeConfig& cfg, const ParsedGroup& g, Label cls) {
  const auto k = static_cast<std::size_t>(detail::start_slot_count(cfg));
  return Run{detail::read_start(cfg, g), g.values[k] + 1, cls, 0};
}

}  // namespace

TokenSequence encode_cw(const LabelMask& mask, const SchemeConfig& cfg) {
  if (cfg.scheme != Scheme::kClassWise) throw InvalidArgument("encode_cw needs the cw scheme");
  const SequenceGrammar grammar(cfg);
  detail::check_dims(cfg, mask.height(), mask.width());
  const auto vec = flatten_2d(mask, cfg.flatten);
  detail::check_labels_within(vec, cfg.num_classes);
  TokenSequence seq{cfg, {}};
  std::vector<Label> binary(vec.size());
  for (Label c = 1; c <= cfg.num_classes; ++c) {
    std::transform(vec.begin(), vec.end(), binary.begin(), [c](Label v) { return v == c ? 1 : 0; });
    emit_binary_runs(grammar, cfg, binary, cfg.seed + static_cast<std::uint64_t>(c), seq.ids);
    seq.ids.push_back(grammar.layout().id_of(SegmentKind::kSeparator, c - 1));
  }
  return seq;
}

LabelMask decode_cw(const TokenSequence& tokens, ReconstructMode mode) {
  const auto& cfg = tokens.config;
  if (cfg.scheme != Scheme::kClassWise) throw InvalidArgument("decode_cw needs the cw scheme");
  const SequenceGrammar grammar(cfg);
  const auto groups = parse(grammar, tokens.ids, mode);
  RunList runs;
  runs.vector_length = cfg.vector_length();
  Label cls = 1;
  std::vector<Run> pending;
  for (const auto& g : groups) {
    if (g.terminator) {
      runs.runs.insert(runs.runs.end(), pending.begin(), pending.end());
      pending.clear();
      ++cls;
      continue;
    }
    pending.push_back(run_of(cfg, g, cls));
  }
  // Runs after the last separator have no class: dropped (lenient only;
  // strict parsing rejects them).
  const auto vec = runs_to_vector(runs, runs.vector_length, mode);
  return unflatten_2d(vec, cfg.height, cfg.width, cfg.num_classes, cfg.flatten);
}

std::vector<std::int32_t> instance_order(const InstanceMask& mask, FlattenOrder flatten, InstanceOrder order) {
  mask.validate();
  std::vector<std::int32_t> ids;
  for (const auto& [id, cls] : mask.class_of) ids.push_back(id);
  // First flattened index of every instance.
  std::vector<Label> as_labels(mask.ids.begin(), mask.ids.end());
  const int max_id = ids.empty() ? 1 : std::max(1, ids.back());
  const auto vec = flatten_2d(LabelMask(mask.height, mask.width, max_id, std::move(as_labels)), flatten);
  std::map<std::int32_t, std::size_t> first;
  for (std::size_t i = 0; i < vec.size(); ++i) {
    if (vec[i] != 0) first.emplace(vec[i], i);
  }
  // Mapped instances that own no pixel carry no runs and are skipped.
  std::erase_if(ids, [&first](std::int32_t id) { return !first.contains(id); });
  std::sort(ids.begin(), ids.end(), [&first](std::int32_t a, std::int32_t b) { return first[a] < first[b]; });
  if (order.shuffled) {
    std::mt19937_64 rng(order.seed);
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[static_cast<std::size_t>(rng() % i)]);
  }
  return ids;
}

TokenSequence encode_iw(const InstanceMask& mask, const SchemeConfig& cfg, InstanceOrder order) {
  if (cfg.scheme != Scheme::kInstanceWise) throw InvalidArgument("encode_iw needs the iw scheme");
  const SequenceGrammar grammar(cfg);
  detail::check_dims(cfg, mask.height, mask.width);
  mask.validate();
  for (const auto& [id, cls] : mask.class_of) {
    if (cls > cfg.num_classes) {
      throw InvalidArgument("instance class " + std::to_string(cls) + " exceeds configured class count");
    }
  }
  std::vector<Label> as_labels(mask.ids.begin(), mask.ids.end());
  const int max_id = mask.class_of.empty() ? 1 : std::max(1, mask.class_of.rbegin()->first);
  const auto vec = flatten_2d(LabelMask(mask.height, mask.width, max_id, std::move(as_labels)), cfg.flatten);
  TokenSequence seq{cfg, {}};
  std::vector<Label> binary(vec.size());
  for (const auto id : instance_order(mask, cfg.flatten, order)) {
    std::transform(vec.begin(), vec.end(), binary.begin(), [id](Label v) { return v == id ? 1 : 0; });
    emit_binary_runs(grammar, cfg, binary, cfg.seed + static_cast<std::uint64_t>(id), seq.ids);
    seq.ids.push_back(grammar.layout().id_of(SegmentKind::kClass, mask.class_of.at(id) - 1));
  }
  return seq;
}

PanopticMask decode_iw(const TokenSequence& tokens, ReconstructMode mode) {
  const auto& cfg = tokens.config;
  if (cfg.scheme != Scheme::kInstanceWise) throw InvalidArgument("decode_iw needs the iw scheme");
  const SequenceGrammar grammar(cfg);
  const auto groups = parse(grammar, tokens.ids, mode);
  RunList runs;
  runs.vector_length = cfg.vector_length();
  InstanceMask inst;
  inst.height = cfg.height;
  inst.width = cfg.width;
  inst.num_classes = cfg.num_classes;
  std::int32_t next_id = 1;
  std::vector<Run> pending;
  for (const auto& g : groups) {
    if (g.terminator) {
      for (auto r : pending) {
        r.cls = next_id;  // reconstruct instance ids first, classes via the mapping
        runs.runs.push_back(r);
      }
      pending.clear();
      inst.class_of[next_id] = static_cast<Label>(g.values[0] + 1);
      ++next_id;
      continue;
    }
    pending.push_back(run_of(cfg, g, 0));
  }
  const auto vec = runs_to_vector(runs, runs.vector_length, mode);
  const auto ids_grid = unflatten_2d(vec, cfg.height, cfg.width, std::max(1, next_id - 1), cfg.flatten);
  inst.ids.assign(ids_grid.labels().begin(), ids_grid.labels().end());
  auto labels = inst.to_label_mask();
  return PanopticMask{std::move(labels), std::move(inst)};
}

std::vector<double> token_weights(const TokenSequence& tokens, bool equalize) {
  const auto& cfg = tokens.config;
  if (!is_structured_scheme(cfg.scheme)) {
    throw InvalidArgument("token weights apply to cw/iw sequences, got " + std::string(to_string(cfg.scheme)));
  }
  std::vector<double> weights(tokens.ids.size(), 1.0);
  if (!equalize) return weights;
  const auto layout = build_layout(cfg);
  const auto terminator = cfg.scheme == Scheme::kClassWise ? SegmentKind::kSeparator : SegmentKind::kClass;
  std::size_t coordinates = 0;
  for (std::size_t i = 0; i < tokens.ids.size(); ++i) {
    const auto kind = layout.locate(tokens.ids[i]).kind;
    if (kind == terminator) {
      weights[i] = static_cast<double>(std::max<std::size_t>(coordinates, 1));
      coordinates = 0;
    } else if (kind != SegmentKind::kSpecial) {
      ++coordinates;
    }
  }
  return weights;
}

}  // namespace rlemask
