#include "rlemask/io.hpp"

#include <png.h>

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "rlemask/error.hpp"

namespace rlemask::io {

namespace {

using json = nlohmann::json;

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const fs::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

struct RawImage {
  int height = 0;
  int width = 0;
  int bit_depth = 0;
  std::vector<std::uint32_t> pixels;
};

RawImage read_png_gray(const fs::path& path) {
  auto file = open_file(path, "rb");
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(path.string() + " is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialization failed");
  }
  RawImage img;
  std::string error;
  std::vector<png_byte> data;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("corrupt PNG " + path.string());
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.bit_depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color != PNG_COLOR_TYPE_GRAY && color != PNG_COLOR_TYPE_PALETTE) {
    error = path.string() + ": masks must be single-channel (gray or palette) PNGs";
  } else if (img.bit_depth != 8 && img.bit_depth != 16) {
    error = path.string() + ": unsupported bit depth " + std::to_string(img.bit_depth);
  }
  if (!error.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(error);
  }
  const std::size_t stride = png_get_rowbytes(png, info);
  data.resize(stride * static_cast<std::size_t>(img.height));
  rows.resize(static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) rows[static_cast<std::size_t>(y)] = data.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  img.pixels.resize(static_cast<std::size_t>(img.height) * img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = img.bit_depth == 8 ? data[i] : (static_cast<std::uint32_t>(data[2 * i]) << 8) | data[2 * i + 1];
  }
  return img;
}

void write_png(const fs::path& path, int height, int width, int bit_depth, int color_type,
               const std::vector<png_byte>& data) {
  auto file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  const int channels = color_type == PNG_COLOR_TYPE_RGB ? 3 : 1;
  const std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data.data()) + stride * y;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

bool is_raw(const fs::path& path) { return path.extension() == ".raw"; }

RawImage read_raw_grid(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string magic;
  RawImage img;
  if (!(in >> magic >> img.height >> img.width) || magic != "RAWMASK" || img.height < 1 || img.width < 1) {
    throw IoError(path.string() + ": bad raw grid header");
  }
  in.get();  // single newline after the header
  std::vector<char> bytes(static_cast<std::size_t>(img.height) * img.width);
  if (!in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw IoError(path.string() + ": truncated raw grid");
  }
  img.bit_depth = 8;
  img.pixels.assign(bytes.size(), 0);
  for (std::size_t i = 0; i < bytes.size(); ++i) img.pixels[i] = static_cast<unsigned char>(bytes[i]);
  return img;
}

LabelMask to_label_mask(const RawImage& img, int num_classes, const fs::path& path) {
  std::vector<Label> labels(img.pixels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (img.pixels[i] > static_cast<std::uint32_t>(num_classes)) {
      throw IoError(path.string() + ": label " + std::to_string(img.pixels[i]) + " at pixel " + std::to_string(i) +
                    " exceeds class count " + std::to_string(num_classes));
    }
    labels[i] = static_cast<Label>(img.pixels[i]);
  }
  return LabelMask(img.height, img.width, num_classes, std::move(labels));
}

std::string next_value(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw IoError("token header lacks '" + key + "'");
  return it->second;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw IoError("token header: '" + key + "' is not an integer: " + text);
  }
}

}  // namespace

LabelMask read_mask(const fs::path& path, int num_classes) {
  const auto img = is_raw(path) ? read_raw_grid(path) : read_png_gray(path);
  if (img.bit_depth != 8) throw IoError(path.string() + ": class masks must be 8-bit");
  return to_label_mask(img, num_classes, path);
}

void write_mask(const fs::path& path, const LabelMask& mask) {
  std::vector<png_byte> data(mask.size());
  const auto labels = mask.labels();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (labels[i] > 255) throw IoError("label " + std::to_string(labels[i]) + " does not fit an 8-bit mask");
    data[i] = static_cast<png_byte>(labels[i]);
  }
  if (is_raw(path)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string());
    out << "RAWMASK " << mask.height() << ' ' << mask.width() << '\n';
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("failed writing " + path.string());
    return;
  }
  write_png(path, mask.height(), mask.width(), 8, PNG_COLOR_TYPE_GRAY, data);
}

fs::path sidecar_path(const fs::path& path) { return fs::path(path.string() + ".json"); }

InstanceMask read_instance_mask(const fs::path& path, int num_classes) {
  const auto img = read_png_gray(path);
  if (img.bit_depth != 16) throw IoError(path.string() + ": instance masks must be 16-bit PNGs");
  const auto side = sidecar_path(path);
  std::ifstream in(side);
  if (!in) throw IoError("missing instance sidecar " + side.string());
  InstanceMask mask;
  mask.height = img.height;
  mask.width = img.width;
  mask.num_classes = num_classes;
  mask.ids.assign(img.pixels.begin(), img.pixels.end());
  try {
    const auto doc = json::parse(in);
    for (const auto& [id, cls] : doc.at("instances").items()) {
      mask.class_of[std::stoi(id)] = cls.get<Label>();
    }
  } catch (const std::exception& e) {
    throw IoError("bad instance sidecar " + side.string() + ": " + e.what());
  }
  try {
    mask.validate();
  } catch (const InvalidArgument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return mask;
}

void write_instance_mask(const fs::path& path, const InstanceMask& mask) {
  mask.validate();
  std::vector<png_byte> data(mask.ids.size() * 2);
  for (std::size_t i = 0; i < mask.ids.size(); ++i) {
    if (mask.ids[i] > 65535) throw IoError("instance id does not fit a 16-bit mask");
    data[2 * i] = static_cast<png_byte>(mask.ids[i] >> 8);
    data[2 * i + 1] = static_cast<png_byte>(mask.ids[i] & 0xff);
  }
  write_png(path, mask.height, mask.width, 16, PNG_COLOR_TYPE_GRAY, data);
  json doc;
  doc["instances"] = json::object();
  for (const auto& [id, cls] : mask.class_of) doc["instances"][std::to_string(id)] = cls;
  std::ofstream out(sidecar_path(path));
  if (!out) throw IoError("cannot write " + sidecar_path(path).string());
  out << doc.dump(2) << '\n';
}

std::vector<fs::path> list_mask_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".png" || ext == ".raw") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

VideoMask read_video(const fs::path& dir, int num_classes) {
  const auto files = list_mask_files(dir);
  if (files.empty()) throw IoError(dir.string() + " holds no frames");
  std::vector<LabelMask> frames;
  for (const auto& f : files) frames.push_back(read_mask(f, num_classes));
  try {
    return VideoMask(std::move(frames));
  } catch (const InvalidArgument& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
}

void write_video(const fs::path& dir, const VideoMask& video) {
  fs::create_directories(dir);
  for (int t = 0; t < video.num_frames(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d.png", t);
    write_mask(dir / name, video.frame(t));
  }
}

void write_rgb_png(const fs::path& path, int height, int width, const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(height) * width * 3) throw InvalidArgument("RGB buffer size mismatch");
  write_png(path, height, width, 8, PNG_COLOR_TYPE_RGB, rgb);
}

std::string format_token_header(const SchemeConfig& cfg) {
  const auto layout = build_layout(cfg);
  std::ostringstream h;
  h << kTokenMagic << ' ' << kTokenVersion << " scheme=" << to_string(cfg.scheme) << " height=" << cfg.height
    << " width=" << cfg.width << " classes=" << cfg.num_classes << " frames=" << cfg.frames
    << " start=" << to_string(cfg.start_mode) << " flatten=" << to_string(cfg.flatten) << " max_len=";
  if (cfg.max_len == 0) {
    h << "auto";
  } else {
    h << cfg.max_len;
  }
  h << " specials=" << cfg.specials << " order=" << (cfg.shuffled ? "shuffled" : "canonical") << " seed=" << cfg.seed
    << " limit=" << cfg.vocab_limit << " tac_digits=frame0_lsd vocab=" << layout.total();
  return h.str();
}

SchemeConfig parse_token_header(const std::string& line) {
  std::istringstream in(line);
  std::string magic, version;
  in >> magic >> version;
  if (magic != kTokenMagic) throw IoError("not a token file (missing '" + std::string(kTokenMagic) + "')");
  if (version != std::to_string(kTokenVersion)) throw IoError("unsupported token file version '" + version + "'");
  std::map<std::string, std::string> kv;
  std::string field;
  while (in >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw IoError("malformed token header field '" + field + "'");
    kv[field.substr(0, eq)] = field.substr(eq + 1);
  }
  SchemeConfig cfg;
  try {
    cfg.scheme = parse_scheme(next_value(kv, "scheme"));
    cfg.start_mode = parse_start_mode(next_value(kv, "start"));
    cfg.flatten = parse_flatten(next_value(kv, "flatten"));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("token header: ") + e.what());
  }
  cfg.height = static_cast<int>(to_int("height", next_value(kv, "height")));
  cfg.width = static_cast<int>(to_int("width", next_value(kv, "width")));
  cfg.num_classes = static_cast<int>(to_int("classes", next_value(kv, "classes")));
  cfg.frames = static_cast<int>(to_int("frames", next_value(kv, "frames")));
  const auto max_len = next_value(kv, "max_len");
  cfg.max_len = max_len == "auto" ? 0 : to_int("max_len", max_len);
  cfg.specials = static_cast<int>(to_int("specials", next_value(kv, "specials")));
  const auto order = next_value(kv, "order");
  if (order != "canonical" && order != "shuffled") throw IoError("token header: unknown order '" + order + "'");
  cfg.shuffled = order == "shuffled";
  cfg.seed = static_cast<std::uint64_t>(std::stoull(next_value(kv, "seed")));
  cfg.vocab_limit = to_int("limit", next_value(kv, "limit"));
  if (next_value(kv, "tac_digits") != "frame0_lsd") throw IoError("token header: unsupported TAC digit order");
  const auto vocab = to_int("vocab", next_value(kv, "vocab"));
  std::int64_t expected = 0;
  try {
    expected = build_layout(cfg).total();
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("token header: ") + e.what());
  }
  if (vocab != expected) {
    throw IoError("token header declares vocab=" + std::to_string(vocab) + " but the scheme yields " +
                  std::to_string(expected));
  }
  return cfg;
}

void write_tokens(std::ostream& out, const TokenSequence& tokens) {
  out << format_token_header(tokens.config) << '\n';
  for (std::size_t i = 0; i < tokens.ids.size(); ++i) {
    if (i) out << ' ';
    out << tokens.ids[i];
  }
  out << '\n';
}

TokenSequence read_tokens(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("empty token file");
  TokenSequence seq{parse_token_header(header), {}};
  const auto vocab = build_layout(seq.config).total();
  std::string word;
  while (in >> word) {
    const auto id = to_int("token", word);
    if (id < 0 || id >= vocab) throw IoError("token id " + word + " outside vocabulary of " + std::to_string(vocab));
    seq.ids.push_back(static_cast<TokenId>(id));
  }
  return seq;
}

void write_tokens(const fs::path& path, const TokenSequence& tokens) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string());
  write_tokens(out, tokens);
  if (!out) throw IoError("failed writing " + path.string());
}

TokenSequence read_tokens(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_tokens(in);
}

void write_manifest(const fs::path& path, const PatchManifest& m) {
  json doc;
  doc["version"] = 1;
  doc["height"] = m.height;
  doc["width"] = m.width;
  doc["classes"] = m.num_classes;
  doc["patch"] = m.patch;
  doc["stride"] = m.stride;
  doc["seed"] = m.seed;
  doc["patches"] = json::array();
  for (const auto& e : m.patches) {
    doc["patches"].push_back({{"file", e.file},
                              {"top", e.origin.top},
                              {"left", e.origin.left},
                              {"transform",
                               {{"rot90", e.transform.rot90},
                                {"flip_h", e.transform.flip_h},
                                {"flip_v", e.transform.flip_v}}}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << doc.dump(2) << '\n';
}

PatchManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  PatchManifest m;
  try {
    const auto doc = json::parse(in);
    if (doc.at("version").get<int>() != 1) throw IoError("unsupported manifest version");
    m.height = doc.at("height").get<int>();
    m.width = doc.at("width").get<int>();
    m.num_classes = doc.at("classes").get<int>();
    m.patch = doc.at("patch").get<int>();
    m.stride = doc.at("stride").get<int>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& p : doc.at("patches")) {
      const auto& t = p.at("transform");
      m.patches.push_back({p.at("file").get<std::string>(),
                           {p.at("top").get<int>(), p.at("left").get<int>()},
                           {t.at("rot90").get<int>(), t.at("flip_h").get<bool>(), t.at("flip_v").get<bool>()}});
    }
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError("bad manifest " + path.string() + ": " + e.what());
  }
  return m;
}

}  // namespace rlemask::io
