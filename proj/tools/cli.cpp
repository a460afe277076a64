#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "rlemask/error.hpp"
#include "rlemask/io.hpp"
#include "rlemask/metrics.hpp"
#include "rlemask/noise.hpp"
#include "rlemask/patch.hpp"
#include "rlemask/static_codec.hpp"
#include "rlemask/structured_codec.hpp"
#include "rlemask/video_codec.hpp"
#include "rlemask/vocab_planner.hpp"

namespace rlemask::cli {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string scheme = "lac";
  int mask_size = 0;  // 0: keep the input size
  int classes = 1;
  int frames = 0;     // 0: every frame of the input
  std::string start_mode = "1d";
  std::string flatten = "row";
  std::uint64_t seed = 0;
  int specials = 0;
  std::string format = "text";
};

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Rows of cells printed either as CSV or as a left-aligned text table.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& out, bool csv) const {
    if (csv) {
      print_csv_row(out, header_);
      for (const auto& r : rows_) print_csv_row(out, r);
      return;
    }
    std::vector<std::size_t> width(header_.size());
    for (std::size_t c = 0; c < header_.size(); ++c) {
      width[c] = header_[c].size();
      for (const auto& r : rows_) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t c = 0; c < r.size(); ++c) {
        s += r[c];
        if (c + 1 < r.size()) s += std::string(width[c] - r[c].size() + 2, ' ');
      }
      out << s << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  static void print_csv_row(std::ostream& out, const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (row[c].find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : row[c]) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        out << quoted << '"';
      } else {
        out << row[c];
      }
    }
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

SchemeConfig base_config(const Globals& g) {
  SchemeConfig cfg;
  cfg.scheme = parse_scheme(g.scheme);
  cfg.num_classes = g.classes;
  cfg.start_mode = parse_start_mode(g.start_mode);
  cfg.flatten = parse_flatten(g.flatten);
  cfg.seed = g.seed;
  cfg.specials = g.specials;
  return cfg;
}

LabelMask resize_to(const LabelMask& mask, int side) {
  if (side <= 0 || (mask.height() == side && mask.width() == side)) return mask;
  return subsample(mask, side, side);
}

LabelMask load_mask(const fs::path& path, const Globals& g) { return resize_to(io::read_mask(path, g.classes), g.mask_size); }

VideoMask load_video(const fs::path& dir, const Globals& g) {
  const auto video = io::read_video(dir, g.classes);
  if (g.frames > video.num_frames()) {
    throw InvalidArgument("requested " + std::to_string(g.frames) + " frames but " + dir.string() + " holds " +
                          std::to_string(video.num_frames()));
  }
  const int n = g.frames > 0 ? g.frames : video.num_frames();
  std::vector<LabelMask> frames;
  for (int t = 0; t < n; ++t) frames.push_back(resize_to(video.frame(t), g.mask_size));
  return VideoMask(std::move(frames));
}

InstanceMask resize_instances(const InstanceMask& mask, int side) {
  if (side <= 0 || (mask.height == side && mask.width == side)) return mask;
  throw InvalidArgument("instance masks cannot be subsampled; resize them before encoding");
}

// A dataset argument is either one mask file or a directory of them.
std::vector<fs::path> dataset_files(const fs::path& p) {
  if (fs::is_directory(p)) return io::list_mask_files(p);
  if (!fs::exists(p)) throw IoError(p.string() + " does not exist");
  return {p};
}

struct EncodeOptions {
  std::int64_t max_len = 0;
  bool shuffle = false;
  std::int64_t limit = 0;
};

TokenSequence encode_input(const fs::path& input, const Globals& g, const EncodeOptions& opt) {
  auto cfg = base_config(g);
  cfg.max_len = opt.max_len;
  cfg.vocab_limit = opt.limit;
  cfg.shuffled = opt.shuffle && cfg.scheme != Scheme::kInstanceWise;
  if (is_video_scheme(cfg.scheme)) {
    const auto video = load_video(input, g);
    cfg.height = video.height();
    cfg.width = video.width();
    cfg.frames = video.num_frames();
    return encode_video(video, cfg);
  }
  if (cfg.scheme == Scheme::kInstanceWise) {
    const auto inst = resize_instances(io::read_instance_mask(input, g.classes), g.mask_size);
    cfg.height = inst.height;
    cfg.width = inst.width;
    return encode_iw(inst, cfg, InstanceOrder{opt.shuffle, g.seed});
  }
  const auto mask = load_mask(input, g);
  cfg.height = mask.height();
  cfg.width = mask.width();
  if (cfg.scheme == Scheme::kClassWise) return encode_cw(mask, cfg);
  return encode_static(mask, cfg);
}

// Same partition into instances and same class per pixel, ignoring id values.
bool same_panoptic(const InstanceMask& a, const InstanceMask& b) {
  if (a.height != b.height || a.width != b.width || a.ids.size() != b.ids.size()) return false;
  std::map<std::int32_t, std::int32_t> fwd, bwd;
  for (std::size_t i = 0; i < a.ids.size(); ++i) {
    const auto x = a.ids[i];
    const auto y = b.ids[i];
    if ((x == 0) != (y == 0)) return false;
    if (x == 0) continue;
    if (a.class_of.at(x) != b.class_of.at(y)) return false;
    if (fwd.emplace(x, y).first->second != y) return false;
    if (bwd.emplace(y, x).first->second != x) return false;
  }
  return true;
}

std::size_t count_mismatches(std::span<const Label> a, std::span<const Label> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
  return n;
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("bad ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

ClassSelection make_selection(bool no_background, const std::string& classes) {
  ClassSelection sel;
  sel.include_background = !no_background;
  for (auto c : parse_int_list(classes, "class")) sel.classes.push_back(static_cast<Label>(c));
  return sel;
}

void add_summary_row(Table& t, const std::string& key, const SegMetrics& m) {
  t.add({key, fmt_double(m.rec), fmt_double(m.prec), fmt_double(m.dice), fmt_double(m.fw_rec), fmt_double(m.fw_prec)});
}

// Class colors for visualizations; background is near black.
constexpr std::array<std::array<std::uint8_t, 3>, 10> kPalette{{
    {20, 20, 20},
    {230, 25, 75},
    {60, 180, 75},
    {0, 130, 200},
    {255, 225, 25},
    {245, 130, 48},
    {145, 30, 180},
    {70, 240, 240},
    {240, 50, 230},
    {170, 110, 40},
}};

std::array<std::uint8_t, 3> class_color(Label c) {
  if (c == 0) return kPalette[0];
  return kPalette[1 + static_cast<std::size_t>(c - 1) % (kPalette.size() - 1)];
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run-length mask tokenization toolkit", "rlemask"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--scheme", g.scheme, "Encoding scheme")->capture_default_str();
  app.add_option("--mask-size", g.mask_size, "Subsample inputs to SxS (0 keeps the input size)")->capture_default_str();
  app.add_option("--classes", g.classes, "Number of foreground classes C")->capture_default_str();
  app.add_option("--frames", g.frames, "Video length N (0: all frames)")->capture_default_str();
  app.add_option("--start-mode", g.start_mode, "1d or 2d start tokens")->capture_default_str();
  app.add_option("--flatten", g.flatten, "row or col flattening")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for shuffling, augmentation and noise")->capture_default_str();
  app.add_option("--specials", g.specials, "Reserved special tokens (id 0 ends the sequence)")->capture_default_str();
  app.add_option("--output-format", g.format, "Report format")->check(CLI::IsMember({"csv", "text"}))->capture_default_str();

  // encode
  auto* encode = app.add_subcommand("encode", "Encode a mask (or video directory) into a token file");
  fs::path enc_in, enc_out;
  EncodeOptions enc_opt;
  encode->add_option("input", enc_in, "Mask file, instance PNG or frame directory")->required();
  encode->add_option("-o,--output", enc_out, "Token file (stdout when omitted)");
  encode->add_option("--max-len", enc_opt.max_len, "Run length cap (0: scheme default)");
  encode->add_flag("--shuffle", enc_opt.shuffle, "Shuffle run (or instance) order using --seed");
  encode->add_option("--limit", enc_opt.limit, "Fail when the vocabulary exceeds this size (0: no limit)");

  // decode
  auto* decode = app.add_subcommand("decode", "Decode a token file back into a mask");
  fs::path dec_in, dec_out;
  bool dec_lenient = false;
  decode->add_option("input", dec_in, "Token file")->required();
  decode->add_option("-o,--output", dec_out, "Mask file, instance PNG or frame directory")->required();
  decode->add_flag("--lenient", dec_lenient, "Repair malformed sequences instead of failing");

  // roundtrip
  auto* roundtrip = app.add_subcommand("roundtrip", "Encode, decode and compare against the input");
  fs::path rt_in;
  EncodeOptions rt_opt;
  roundtrip->add_option("input", rt_in, "Mask file, instance PNG or frame directory")->required();
  roundtrip->add_option("--max-len", rt_opt.max_len, "Run length cap (0: scheme default)");
  roundtrip->add_flag("--shuffle", rt_opt.shuffle, "Shuffle run (or instance) order using --seed");

  // vocab
  auto* vocab = app.add_subcommand("vocab", "Vocabulary breakdown and video-length feasibility");
  bool vocab_feasibility = false;
  bool vocab_table = false;
  std::int64_t vocab_limit = kDefaultVocabLimit;
  vocab->add_flag("--feasibility", vocab_feasibility, "Largest N with V < limit for --scheme");
  vocab->add_flag("--table", vocab_table, "Feasibility for every video scheme at sides 80/160 and C=1,2");
  vocab->add_option("--limit", vocab_limit, "Vocabulary limit")->capture_default_str();

  // stats
  auto* stats = app.add_subcommand("stats", "Sequence length statistics over a mask set");
  fs::path stats_in;
  std::string stats_thresholds;
  std::string stats_schemes;
  bool stats_per_image = false;
  stats->add_option("input", stats_in, "Mask file or directory")->required();
  stats->add_option("--thresholds", stats_thresholds, "Comma-separated length thresholds");
  stats->add_option("--schemes", stats_schemes, "Comma-separated schemes (default: --scheme)");
  stats->add_flag("--per-image", stats_per_image, "List the length of every mask instead");

  // patchify
  auto* patchify_cmd = app.add_subcommand("patchify", "Cut a mask into sliding-window patches");
  fs::path pf_in, pf_dir;
  int pf_patch = 0, pf_stride = 0;
  bool pf_augment = false;
  patchify_cmd->add_option("input", pf_in, "Mask file")->required();
  patchify_cmd->add_option("--patch", pf_patch, "Patch side P")->required();
  patchify_cmd->add_option("--stride", pf_stride, "Window stride (default P)");
  patchify_cmd->add_option("--out-dir", pf_dir, "Directory for patches and manifest.json")->required();
  patchify_cmd->add_flag("--augment", pf_augment, "Apply a seeded random rotation/flip to every patch");

  // recompose
  auto* recompose_cmd = app.add_subcommand("recompose", "Stitch patches listed in a manifest back together");
  fs::path rc_manifest, rc_out, rc_dir;
  std::string rc_combiner = "vote";
  recompose_cmd->add_option("--manifest", rc_manifest, "Manifest written by patchify")->required();
  recompose_cmd->add_option("-o,--output", rc_out, "Output mask file")->required();
  recompose_cmd->add_option("--patch-dir", rc_dir, "Read patch files from here (default: manifest directory)");
  recompose_cmd->add_option("--combiner", rc_combiner, "vote, last, or, and, min or max")->capture_default_str();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "Segmentation metrics of predictions against ground truth");
  fs::path mt_gt, mt_pred;
  bool mt_no_bg = false, mt_per_class = false;
  std::string mt_classes, mt_fw = "normalized";
  int mt_conc = 0;
  metrics_cmd->add_option("--gt", mt_gt, "Ground-truth mask file or directory")->required();
  metrics_cmd->add_option("--pred", mt_pred, "Predicted mask file or directory (matched by file name)")->required();
  metrics_cmd->add_flag("--no-background", mt_no_bg, "Leave class 0 out of the means");
  metrics_cmd->add_option("--select", mt_classes, "Comma-separated classes to average over");
  metrics_cmd->add_flag("--per-class", mt_per_class, "Also print the per-class table");
  metrics_cmd->add_option("--fw-variant", mt_fw, "normalized or per-class-inverse")
      ->check(CLI::IsMember({"normalized", "per-class-inverse"}))
      ->capture_default_str();
  metrics_cmd->add_option("--concentration-class", mt_conc, "Also report the concentration MAE of this class");

  // subsample-quality
  auto* sq = app.add_subcommand("subsample-quality", "Degradation from subsampling then upsampling");
  fs::path sq_in;
  std::string sq_sizes;
  bool sq_no_bg = false;
  sq->add_option("input", sq_in, "Mask file or directory")->required();
  sq->add_option("--sizes", sq_sizes, "Comma-separated target sides")->required();
  sq->add_flag("--no-background", sq_no_bg, "Leave class 0 out of the means");

  // noise
  auto* noise = app.add_subcommand("noise", "Robustness of a scheme to token corruption");
  fs::path nz_in;
  std::string nz_mode = "drop-run", nz_repair = "none";
  std::size_t nz_count = 1, nz_trials = 100;
  std::int64_t nz_radius = 1;
  int nz_repair_radius = 1;
  bool nz_per_trial = false;
  noise->add_option("input", nz_in, "Mask file")->required();
  noise->add_option("--mode", nz_mode, "drop-run, drop-token or perturb-token")->capture_default_str();
  noise->add_option("--count", nz_count, "Units corrupted per trial")->capture_default_str();
  noise->add_option("--radius", nz_radius, "Perturbation radius in ids")->capture_default_str();
  noise->add_option("--trials", nz_trials, "Number of trials")->capture_default_str();
  noise->add_option("--repair", nz_repair, "none, close or open")
      ->check(CLI::IsMember({"none", "close", "open"}))
      ->capture_default_str();
  noise->add_option("--repair-radius", nz_repair_radius, "Repair window radius")->capture_default_str();
  noise->add_flag("--per-trial", nz_per_trial, "Print every trial");

  // viz
  auto* viz = app.add_subcommand("viz", "Render a mask as a color PNG");
  fs::path vz_in, vz_out;
  bool vz_runs = false;
  int vz_scale = 4;
  viz->add_option("input", vz_in, "Mask file")->required();
  viz->add_option("-o,--output", vz_out, "Output PNG")->required();
  viz->add_flag("--runs", vz_runs, "Shade alternate runs and mark run starts");
  viz->add_option("--scale", vz_scale, "Pixel magnification")->check(CLI::Range(1, 64))->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  const bool csv = g.format == "csv";
  try {
    if (*encode) {
      const auto tokens = encode_input(enc_in, g, enc_opt);
      if (enc_out.empty()) {
        io::write_tokens(out, tokens);
      } else {
        io::write_tokens(enc_out, tokens);
      }
    } else if (*decode) {
      const auto tokens = io::read_tokens(dec_in);
      const auto mode = dec_lenient ? ReconstructMode::kLenient : ReconstructMode::kStrict;
      const auto scheme = tokens.config.scheme;
      if (is_video_scheme(scheme)) {
        io::write_video(dec_out, decode_video(tokens, mode));
      } else if (scheme == Scheme::kInstanceWise) {
        io::write_instance_mask(dec_out, decode_iw(tokens, mode).instances);
      } else if (scheme == Scheme::kClassWise) {
        io::write_mask(dec_out, decode_cw(tokens, mode));
      } else {
        io::write_mask(dec_out, decode_static(tokens, mode));
      }
    } else if (*roundtrip) {
      const auto tokens = encode_input(rt_in, g, rt_opt);
      // Through the text format as well, so the file layer is covered.
      std::stringstream buf;
      io::write_tokens(buf, tokens);
      const auto reread = io::read_tokens(buf);
      if (!(reread == tokens)) throw Error("token file round trip altered the sequence");
      std::size_t mismatched = 0;
      std::size_t pixels = 0;
      const auto scheme = tokens.config.scheme;
      if (is_video_scheme(scheme)) {
        const auto original = load_video(rt_in, g);
        const auto decoded = decode_video(reread);
        for (int t = 0; t < original.num_frames(); ++t) {
          mismatched += count_mismatches(original.frame(t).labels(), decoded.frame(t).labels());
          pixels += original.frame(t).size();
        }
      } else if (scheme == Scheme::kInstanceWise) {
        const auto original = io::read_instance_mask(rt_in, g.classes);
        const auto decoded = decode_iw(reread);
        const auto labels = original.to_label_mask();
        mismatched = count_mismatches(labels.labels(), decoded.labels.labels());
        if (mismatched == 0 && !same_panoptic(original, decoded.instances)) mismatched = 1;
        pixels = labels.size();
      } else {
        const auto original = load_mask(rt_in, g);
        const auto decoded = scheme == Scheme::kClassWise ? decode_cw(reread) : decode_static(reread);
        mismatched = count_mismatches(original.labels(), decoded.labels());
        pixels = original.size();
      }
      Table t({"scheme", "tokens", "vocab", "pixels", "mismatched"});
      t.add({std::string(to_string(scheme)), std::to_string(tokens.ids.size()),
             std::to_string(build_layout(tokens.config).total()), std::to_string(pixels), std::to_string(mismatched)});
      t.print(out, csv);
      if (mismatched != 0) {
        err << "roundtrip mismatch: " << mismatched << " pixels differ\n";
        return kValidation;
      }
    } else if (*vocab) {
      const auto start_mode = parse_start_mode(g.start_mode);
      const int side = g.mask_size > 0 ? g.mask_size : 80;
      if (vocab_feasibility || vocab_table) {
        Table t({"scheme", "side", "classes", "limit", "max_frames", "vocab_at_max", "vocab_at_next",
                 "reference_frames", "discrepancy", "note"});
        auto add = [&](Scheme s, int sd, int c) {
          const auto f = max_feasible_frames(s, sd, c, vocab_limit, g.specials, start_mode);
          t.add({std::string(to_string(s)), std::to_string(sd), std::to_string(c), std::to_string(f.limit),
                 std::to_string(f.max_frames), std::to_string(f.vocab_at_max), std::to_string(f.vocab_at_next),
                 f.reference_frames ? std::to_string(*f.reference_frames) : "-", f.discrepancy ? "yes" : "no",
                 f.diagnostic.empty() ? "-" : f.diagnostic});
        };
        if (vocab_table) {
          for (auto s : {Scheme::kTac, Scheme::kLtac, Scheme::kFlat3DC, Scheme::kFlat3DF}) {
            for (int sd : {80, 160}) {
              for (int c : {1, 2}) add(s, sd, c);
            }
          }
        } else {
          add(parse_scheme(g.scheme), side, g.classes);
        }
        t.print(out, csv);
      } else {
        const auto b = vocab_breakdown(parse_scheme(g.scheme), side, g.classes, std::max(g.frames, 1), start_mode,
                                       g.specials);
        Table t({"segment", "offset", "size"});
        for (const auto& s : b.segments) {
          t.add({std::string(to_string(s.kind)), std::to_string(s.offset), std::to_string(s.size)});
        }
        t.add({"total", "", std::to_string(b.total)});
        t.print(out, csv);
        if (!csv) {
          out << "V = " << b.total << '\n';
          out << "feasible (V < " << vocab_limit << "): " << (b.total < vocab_limit ? "yes" : "no") << '\n';
        }
      }
    } else if (*stats) {
      const auto files = dataset_files(stats_in);
      if (files.empty()) throw IoError(stats_in.string() + " holds no masks");
      std::vector<LabelMask> masks;
      for (const auto& f : files) masks.push_back(load_mask(f, g));
      const auto thresholds = parse_int_list(stats_thresholds, "threshold");
      std::vector<std::string> names;
      {
        std::stringstream ss(stats_schemes.empty() ? g.scheme : stats_schemes);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (!item.empty()) names.push_back(item);
        }
      }
      auto config_for = [&](const std::string& name, const LabelMask& m) {
        auto cfg = base_config(g);
        cfg.scheme = parse_scheme(name);
        cfg.height = m.height();
        cfg.width = m.width();
        return cfg;
      };
      if (stats_per_image) {
        std::vector<std::string> header{"file"};
        header.insert(header.end(), names.begin(), names.end());
        Table t(header);
        for (std::size_t i = 0; i < masks.size(); ++i) {
          std::vector<std::string> row{files[i].filename().string()};
          for (const auto& n : names) row.push_back(std::to_string(sequence_length(masks[i], config_for(n, masks[i]))));
          t.add(row);
        }
        t.print(out, csv);
      } else {
        std::vector<std::string> header{"scheme", "images", "mean", "max"};
        for (auto th : thresholds) header.push_back("pct_gt_" + std::to_string(th));
        Table t(header);
        for (const auto& n : names) {
          std::vector<std::int64_t> lengths;
          for (const auto& m : masks) lengths.push_back(sequence_length(m, config_for(n, m)));
          const auto s = summarize_lengths(std::move(lengths), thresholds);
          std::vector<std::string> row{n, std::to_string(s.lengths.size()), fmt_double(s.mean), std::to_string(s.max)};
          for (auto p : s.pct_exceeding) row.push_back(fmt_double(p));
          t.add(row);
        }
        t.print(out, csv);
      }
    } else if (*patchify_cmd) {
      const auto mask = load_mask(pf_in, g);
      const int stride = pf_stride > 0 ? pf_stride : pf_patch;
      const auto grid = patchify(mask.height(), mask.width(), pf_patch, stride);
      fs::create_directories(pf_dir);
      io::PatchManifest manifest{mask.height(), mask.width(), mask.num_classes(), pf_patch, stride, g.seed, {}};
      std::mt19937_64 rng(g.seed);
      for (std::size_t i = 0; i < grid.windows.size(); ++i) {
        const Transform tf = pf_augment ? random_transform(rng) : Transform{};
        char name[32];
        std::snprintf(name, sizeof name, "patch_%05zu.png", i);
        io::write_mask(pf_dir / name, augment_patch(extract_patch(mask, grid.windows[i], pf_patch), tf));
        manifest.patches.push_back({name, grid.windows[i], tf});
      }
      io::write_manifest(pf_dir / "manifest.json", manifest);
      out << "wrote " << grid.windows.size() << " patches to " << pf_dir.string() << '\n';
    } else if (*recompose_cmd) {
      const auto manifest = io::read_manifest(rc_manifest);
      const auto dir = rc_dir.empty() ? rc_manifest.parent_path() : rc_dir;
      std::vector<PlacedPatch> placed;
      for (const auto& e : manifest.patches) {
        const auto patch = io::read_mask(dir / e.file, manifest.num_classes);
        if (patch.height() != manifest.patch || patch.width() != manifest.patch) {
          throw InvalidArgument(e.file + " is not " + std::to_string(manifest.patch) + "x" +
                                std::to_string(manifest.patch));
        }
        placed.push_back({augment_patch(patch, inverse(e.transform)), e.origin});
      }
      const auto result = recompose(placed, manifest.height, manifest.width, parse_combiner(rc_combiner));
      io::write_mask(rc_out, result.mask);
      Table t({"patches", "combiner", "uncovered"});
      t.add({std::to_string(placed.size()), rc_combiner, std::to_string(result.uncovered)});
      t.print(out, csv);
    } else if (*metrics_cmd) {
      const auto gt_files = dataset_files(mt_gt);
      std::vector<LabelMask> gts, preds;
      for (const auto& f : gt_files) {
        const auto pf = fs::is_directory(mt_pred) ? mt_pred / f.filename() : mt_pred;
        if (!fs::exists(pf)) throw IoError("no prediction for " + f.filename().string());
        gts.push_back(io::read_mask(f, g.classes));
        preds.push_back(io::read_mask(pf, g.classes));
        if (gts.back().height() != preds.back().height() || gts.back().width() != preds.back().width()) {
          throw InvalidArgument(f.filename().string() + ": prediction size differs from ground truth");
        }
      }
      ConfusionMatrix cm(g.classes);
      for (std::size_t i = 0; i < gts.size(); ++i) cm = accumulate(gts[i], preds[i], std::move(cm));
      const auto variant = mt_fw == "normalized" ? FwPrecision::kNormalized : FwPrecision::kPerClassInverse;
      const auto m = compute_metrics(cm, make_selection(mt_no_bg, mt_classes), variant);
      if (mt_per_class) {
        Table pc({"class", "truth", "predicted", "recall", "precision", "dice"});
        for (const auto& c : m.per_class) {
          pc.add({std::to_string(c.cls), std::to_string(c.truth), std::to_string(c.predicted),
                  c.recall_defined ? fmt_double(c.recall) : "nan", c.precision_defined ? fmt_double(c.precision) : "nan",
                  c.precision_defined ? fmt_double(c.dice) : "nan"});
        }
        pc.print(out, csv);
        if (!csv) out << '\n';
      }
      Table t({"images", "rec", "prec", "dice", "fw_rec", "fw_prec"});
      add_summary_row(t, std::to_string(gts.size()), m);
      t.print(out, csv);
      if (!m.excluded.empty() && !csv) {
        out << "excluded (zero denominator):";
        for (auto c : m.excluded) out << ' ' << c;
        out << '\n';
      }
      if (mt_conc > 0) {
        const auto c = concentration_mae(gts, preds, mt_conc);
        if (!csv) out << '\n';
        Table ct({"class", "concentration_mae_median"});
        ct.add({std::to_string(mt_conc), fmt_double(c.median)});
        ct.print(out, csv);
      }
    } else if (*sq) {
      const auto files = dataset_files(sq_in);
      if (files.empty()) throw IoError(sq_in.string() + " holds no masks");
      std::vector<LabelMask> masks;
      for (const auto& f : files) masks.push_back(io::read_mask(f, g.classes));
      const ClassSelection sel = make_selection(sq_no_bg, "");
      Table t({"size", "rec", "prec", "dice", "fw_rec", "fw_prec"});
      for (auto s : parse_int_list(sq_sizes, "size")) {
        ConfusionMatrix cm(g.classes);
        for (const auto& m : masks) {
          const auto restored = upsample(subsample(m, static_cast<int>(s), static_cast<int>(s)), m.height(), m.width());
          cm = accumulate(m, restored, std::move(cm));
        }
        add_summary_row(t, std::to_string(s), compute_metrics(cm, sel));
      }
      t.print(out, csv);
    } else if (*noise) {
      const auto mask = load_mask(nz_in, g);
      auto cfg = base_config(g);
      cfg.height = mask.height();
      cfg.width = mask.width();
      const CorruptionSpec spec{parse_corruption(nz_mode), nz_count, nz_radius};
      std::optional<RepairSpec> repair;
      if (nz_repair != "none") repair = RepairSpec{nz_repair == "close" ? MorphOp::kClose : MorphOp::kOpen, nz_repair_radius};
      const auto r = robustness_eval(mask, cfg, spec, nz_trials, g.seed, repair);
      if (nz_per_trial) {
        Table pt({"trial", "dice", "changed"});
        for (std::size_t i = 0; i < r.trials; ++i) {
          pt.add({std::to_string(i), fmt_double(r.dice[i]), std::to_string(r.changed[i])});
        }
        pt.print(out, csv);
        if (!csv) out << '\n';
      }
      Table t({"scheme", "mode", "count", "trials", "mean_dice", "min_dice", "mean_changed", "max_changed"});
      t.add({g.scheme, nz_mode, std::to_string(nz_count), std::to_string(r.trials), fmt_double(r.mean_dice),
             fmt_double(r.min_dice), fmt_double(r.mean_changed), std::to_string(r.max_changed)});
      t.print(out, csv);
    } else if (*viz) {
      const auto mask = load_mask(vz_in, g);
      const int h = mask.height(), w = mask.width();
      std::vector<std::uint8_t> rgb(static_cast<std::size_t>(h) * w * 3);
      auto paint = [&](int y, int x, std::array<std::uint8_t, 3> c) {
        std::copy(c.begin(), c.end(), rgb.begin() + (static_cast<std::ptrdiff_t>(y) * w + x) * 3);
      };
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) paint(y, x, class_color(mask.at(y, x)));
      }
      if (vz_runs) {
        auto cfg = base_config(g);
        cfg.height = h;
        cfg.width = w;
        const auto order = cfg.flatten;
        const auto runs = split_runs(extract_runs(flatten_2d(mask, order)), cfg.effective_max_len());
        auto to_yx = [&](std::int64_t i) {
          return order == FlattenOrder::kRowMajor ? std::pair<int, int>(static_cast<int>(i / w), static_cast<int>(i % w))
                                                  : std::pair<int, int>(static_cast<int>(i % h), static_cast<int>(i / h));
        };
        for (std::size_t k = 0; k < runs.runs.size(); ++k) {
          const auto& run = runs.runs[k];
          for (std::int64_t i = run.start; i < run.start + run.length; ++i) {
            auto c = class_color(run.cls);
            if (k % 2 == 1) {
              for (auto& ch : c) ch = static_cast<std::uint8_t>(ch * 3 / 5);
            }
            const auto [y, x] = to_yx(i);
            paint(y, x, c);
          }
          const auto [y, x] = to_yx(run.start);
          paint(y, x, {255, 255, 255});
        }
      }
      std::vector<std::uint8_t> scaled(rgb.size() * static_cast<std::size_t>(vz_scale * vz_scale));
      const int sw = w * vz_scale;
      for (int y = 0; y < h * vz_scale; ++y) {
        for (int x = 0; x < sw; ++x) {
          const auto src = (static_cast<std::size_t>(y / vz_scale) * w + x / vz_scale) * 3;
          const auto dst = (static_cast<std::size_t>(y) * sw + x) * 3;
          std::copy_n(rgb.begin() + static_cast<std::ptrdiff_t>(src), 3, scaled.begin() + static_cast<std::ptrdiff_t>(dst));
        }
      }
      io::write_rgb_png(vz_out, h * vz_scale, sw, scaled);
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kCapacity;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

}  // namespace rlemask::cli
