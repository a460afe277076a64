#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "rlemask/error.hpp"
#include "rlemask/io.hpp"
#include "rlemask/static_codec.hpp"
#include "rlemask/video_codec.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/tempdir.hpp"

using namespace rlemask;
using fixtures::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

}  // namespace

TEST_CASE("mask files round trip") {
  TempDir dir;
  std::mt19937_64 rng(81);
  for (int i = 0; i < 30; ++i) {
    const int c = testgen::uniform(rng, 1, 20);
    const auto m = testgen::random_mask(rng, testgen::uniform(rng, 1, 40), testgen::uniform(rng, 1, 40), c);
    for (const char* ext : {".png", ".raw"}) {
      const auto p = dir / ("m" + std::to_string(i) + ext);
      io::write_mask(p, m);
      CHECK(io::read_mask(p, c) == m);
    }
  }
}

TEST_CASE("label range and format errors") {
  TempDir dir;
  const LabelMask high(2, 2, 255, std::vector<Label>{0, 255, 1, 2});
  io::write_mask(dir / "high.png", high);
  CHECK_THROWS_AS(io::read_mask(dir / "high.png", 2), IoError);
  CHECK(io::read_mask(dir / "high.png", 255) == high);
  io::write_mask(dir / "high.raw", high);
  CHECK_THROWS_AS(io::read_mask(dir / "high.raw", 2), IoError);
  CHECK_THROWS_AS(io::read_mask(dir / "missing.png", 2), IoError);
  spit(dir / "junk.png", "not a png");
  CHECK_THROWS_AS(io::read_mask(dir / "junk.png", 2), IoError);
  spit(dir / "short.raw", "RAWMASK 2 2\n\x01");
  CHECK_THROWS_AS(io::read_mask(dir / "short.raw", 2), IoError);
  spit(dir / "bad.raw", "RAWGRID 2 2\n\x01\x01\x01\x01");
  CHECK_THROWS_AS(io::read_mask(dir / "bad.raw", 2), IoError);
  CHECK_THROWS_AS(io::read_mask(dir / "mask.bmp", 2), IoError);
  // 16-bit instance PNGs are not class masks.
  InstanceMask im;
  im.height = 1;
  im.width = 2;
  im.num_classes = 1;
  im.ids = {0, 300};
  im.class_of = {{300, 1}};
  io::write_instance_mask(dir / "inst.png", im);
  CHECK_THROWS_AS(io::read_mask(dir / "inst.png", 2), IoError);
}

TEST_CASE("instance masks and sidecars") {
  TempDir dir;
  std::mt19937_64 rng(82);
  for (int i = 0; i < 10; ++i) {
    auto m = testgen::random_instances(rng, 12, 9, 3, 6);
    // Ids beyond 8 bits survive the 16-bit container.
    InstanceMask wide = m;
    wide.class_of.clear();
    for (auto& id : wide.ids) id = id == 0 ? 0 : id + 1000;
    for (const auto& [id, cls] : m.class_of) wide.class_of[id + 1000] = cls;
    const auto p = dir / ("i" + std::to_string(i) + ".png");
    io::write_instance_mask(p, wide);
    CHECK(io::sidecar_path(p) == std::filesystem::path(p.string() + ".json"));
    CHECK(io::read_instance_mask(p, 3) == wide);
  }
  const auto p = dir / "i0.png";
  CHECK_THROWS_AS(io::read_instance_mask(p, 1), IoError);
  std::filesystem::remove(io::sidecar_path(p));
  CHECK_THROWS_AS(io::read_instance_mask(p, 3), IoError);
  spit(io::sidecar_path(p), "{\"instances\": {}}");
  CHECK_THROWS_AS(io::read_instance_mask(p, 3), IoError);
  spit(io::sidecar_path(p), "{broken");
  CHECK_THROWS_AS(io::read_instance_mask(p, 3), IoError);
}

TEST_CASE("video directories") {
  TempDir dir;
  std::mt19937_64 rng(83);
  const auto v = testgen::random_video(rng, 6, 2, 3);
  io::write_video(dir / "clip", v);
  CHECK(io::list_mask_files(dir / "clip").size() == 3);
  const auto back = io::read_video(dir / "clip", 2);
  CHECK(back.num_frames() == 3);
  CHECK(back == v);
  // Lexicographic order decides the frame index.
  std::filesystem::create_directories(dir / "raw");
  io::write_mask(dir / "raw" / "b.raw", v.frame(1));
  io::write_mask(dir / "raw" / "a.raw", v.frame(0));
  io::write_mask(dir / "raw" / "c.raw", v.frame(2));
  spit(dir / "raw" / "notes.txt", "ignored");
  CHECK(io::read_video(dir / "raw", 2) == v);
  std::filesystem::create_directories(dir / "empty");
  CHECK_THROWS_AS(io::read_video(dir / "empty", 2), IoError);
  CHECK_THROWS_AS(io::read_video(dir / "nowhere", 2), IoError);
  io::write_mask(dir / "raw" / "d.raw", LabelMask(3, 3, 2));
  CHECK_THROWS_AS(io::read_video(dir / "raw", 2), IoError);
}

TEST_CASE("token files round trip byte-identically") {
  TempDir dir;
  std::mt19937_64 rng(84);
  for (int i = 0; i < 40; ++i) {
    const int side = testgen::uniform(rng, 1, 12), c = testgen::uniform(rng, 1, 3);
    const auto m = testgen::random_mask(rng, side, side, c);
    auto cfg = make_config(i % 2 ? Scheme::kLac : Scheme::kNaiveMc, side, c, 1,
                           i % 3 ? StartMode::k1D : StartMode::k2D, testgen::uniform(rng, 0, 3));
    cfg.flatten = i % 4 ? FlattenOrder::kRowMajor : FlattenOrder::kColumnMajor;
    cfg.shuffled = i % 5 == 0;
    cfg.seed = static_cast<std::uint64_t>(i) * 977;
    cfg.max_len = i % 6 == 0 ? side * side : 0;
    cfg.vocab_limit = i % 7 == 0 ? 1000000 : 0;
    const auto t = encode_static(m, cfg);
    const auto p = dir / "t.txt";
    io::write_tokens(p, t);
    const auto back = io::read_tokens(p);
    CHECK(back == t);
    const auto bytes = slurp(p);
    io::write_tokens(p, back);
    CHECK(slurp(p) == bytes);
    CHECK(io::parse_token_header(io::format_token_header(cfg)) == cfg);
  }
  const auto vcfg = make_video_config(Scheme::kLtac, 4, 2, 3);
  CHECK(io::parse_token_header(io::format_token_header(vcfg)) == vcfg);
  std::stringstream empty;
  io::write_tokens(empty, TokenSequence{vcfg, {}});
  CHECK(io::read_tokens(empty).ids.empty());
}

TEST_CASE("token file errors") {
  const auto cfg = make_config(Scheme::kLac, 4, 2);
  const auto header = io::format_token_header(cfg);
  CHECK(header.rfind("rlemask-tokens 1 ", 0) == 0);
  auto bump = header;
  bump.replace(bump.find(" 1 "), 3, " 2 ");
  CHECK_THROWS_AS(io::parse_token_header(bump), IoError);
  CHECK_THROWS_AS(io::parse_token_header("something else"), IoError);
  auto wrong_vocab = header;
  wrong_vocab.replace(wrong_vocab.find("vocab="), std::string::npos, "vocab=7");
  CHECK_THROWS_AS(io::parse_token_header(wrong_vocab), IoError);
  auto bad_scheme = header;
  bad_scheme.replace(bad_scheme.find("scheme=lac"), 10, "scheme=lzw");
  CHECK_THROWS_AS(io::parse_token_header(bad_scheme), IoError);
  std::stringstream out_of_range(header + "\n0 1 99\n");
  CHECK_THROWS_AS(io::read_tokens(out_of_range), IoError);
  std::stringstream not_number(header + "\n0 x\n");
  CHECK_THROWS_AS(io::read_tokens(not_number), IoError);
  CHECK_THROWS_AS(io::read_tokens(std::filesystem::path("/nonexistent/t.txt")), IoError);
}

TEST_CASE("patch manifests") {
  TempDir dir;
  io::PatchManifest m;
  m.height = 10;
  m.width = 12;
  m.num_classes = 3;
  m.patch = 4;
  m.stride = 3;
  m.seed = 18446744073709551615ull;
  m.patches = {{"p0.png", {0, 0}, {1, true, false}}, {"p1.png", {6, 8}, {0, false, true}}};
  io::write_manifest(dir / "manifest.json", m);
  const auto back = io::read_manifest(dir / "manifest.json");
  CHECK(back.height == 10);
  CHECK(back.width == 12);
  CHECK(back.num_classes == 3);
  CHECK(back.patch == 4);
  CHECK(back.stride == 3);
  CHECK(back.seed == m.seed);
  REQUIRE(back.patches.size() == 2);
  CHECK(back.patches[1].file == "p1.png");
  CHECK(back.patches[1].origin == Origin{6, 8});
  CHECK(back.patches[0].transform == Transform{1, true, false});
  spit(dir / "bad.json", "{\"version\": 9}");
  CHECK_THROWS_AS(io::read_manifest(dir / "bad.json"), IoError);
  CHECK_THROWS_AS(io::read_manifest(dir / "none.json"), IoError);
}

TEST_CASE("rgb output") {
  TempDir dir;
  io::write_rgb_png(dir / "x.png", 2, 3, std::vector<std::uint8_t>(18, 7));
  CHECK(std::filesystem::file_size(dir / "x.png") > 0);
  CHECK_THROWS_AS(io::write_rgb_png(dir / "y.png", 2, 3, std::vector<std::uint8_t>(5, 7)), InvalidArgument);
}
