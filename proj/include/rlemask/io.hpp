#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rlemask/mask.hpp"
#include "rlemask/patch.hpp"
#include "rlemask/scheme.hpp"

namespace rlemask::io {

namespace fs = std::filesystem;

// Class masks: single-channel 8-bit PNG (gray or palette indices), pixel =
// class id; or the raw grid format "RAWMASK <h> <w>\n" + h*w label bytes
// (".raw"). Labels above `num_classes` raise IoError.
LabelMask read_mask(const fs::path& path, int num_classes);
void write_mask(const fs::path& path, const LabelMask& mask);

// Instance masks: 16-bit gray PNG of instance ids plus a JSON sidecar
// "<path>.json" of the form {"instances": {"<id>": <class>, ...}}.
InstanceMask read_instance_mask(const fs::path& path, int num_classes);
void write_instance_mask(const fs::path& path, const InstanceMask& mask);
fs::path sidecar_path(const fs::path& path);

// Videos: a directory of frame files (.png or .raw) in lexicographic order.
VideoMask read_video(const fs::path& dir, int num_classes);
void write_video(const fs::path& dir, const VideoMask& video);

// Mask files under `dir` (.png/.raw), sorted by path.
std::vector<fs::path> list_mask_files(const fs::path& dir);

void write_rgb_png(const fs::path& path, int height, int width, const std::vector<std::uint8_t>& rgb);

// Token files: one header line that fully determines the scheme config,
// then the ids separated by single spaces on one line.
inline constexpr const char* kTokenMagic = "rlemask-tokens";
inline constexpr int kTokenVersion = 1;

std::string format_token_header(const SchemeConfig& cfg);
SchemeConfig parse_token_header(const std::string& line);
void write_tokens(std::ostream& out, const TokenSequence& tokens);
TokenSequence read_tokens(std::istream& in);
void write_tokens(const fs::path& path, const TokenSequence& tokens);
TokenSequence read_tokens(const fs::path& path);

// Patch manifests (JSON): grid geometry, seed, and per patch its file,
// origin and augmentation transform.
struct ManifestEntry {
  std::string file;  // relative to the manifest's directory
  Origin origin;
  Transform transform;
};

struct PatchManifest {
  int height = 0;
  int width = 0;
  int num_classes = 1;
  int patch = 0;
  int stride = 0;
  std::uint64_t seed = 0;
  std::vector<ManifestEntry> patches;
};

void write_manifest(const fs::path& path, const PatchManifest& manifest);
PatchManifest read_manifest(const fs::path& path);

}  // namespace rlemask::io
