#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "rlemask/io.hpp"
#include "rlemask/metrics.hpp"
#include "rlemask/static_codec.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace rlemask;
using fixtures::TempDir;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

TEST_CASE("vocab prints the vocabulary size") {
  const auto r = run({"vocab", "--scheme", "lac", "--mask-size", "80", "--classes", "2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("V = 6560") != std::string::npos);
  const auto n = run({"--scheme", "naive_mc", "--mask-size", "80", "--classes", "2", "vocab"});
  CHECK(n.out.find("V = 6482") != std::string::npos);
  const auto csv = run({"--scheme", "lac", "--mask-size", "80", "--classes", "2", "--output-format", "csv", "vocab"});
  const auto rows = csv_rows(csv.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"segment", "offset", "size"});
  CHECK(rows[3] == std::vector<std::string>{"total", "", "6560"});
}

TEST_CASE("vocab feasibility") {
  const auto r = run({"--scheme", "tac", "--mask-size", "160", "--classes", "2", "--output-format", "csv", "vocab",
                      "--feasibility"});
  CHECK(r.code == cli::kOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][4] == "max_frames");
  CHECK(rows[1][4] == "7");
  CHECK(rows[1][7] == "6");
  CHECK(rows[1][8] == "yes");
  const auto table = run({"--output-format", "csv", "vocab", "--table"});
  CHECK(table.code == cli::kOk);
  CHECK(csv_rows(table.out).size() > 8);
  CHECK(run({"--scheme", "lac", "vocab", "--feasibility"}).code == cli::kValidation);
  CHECK(run({"--scheme", "ltac", "--mask-size", "160", "--classes", "10", "--frames", "30", "vocab"}).code ==
        cli::kCapacity);
}

TEST_CASE("roundtrip and encode/decode on files") {
  TempDir dir;
  std::mt19937_64 rng(91);
  const auto m = testgen::random_mask(rng, 12, 10, 3, testgen::Style::kBlobs);
  io::write_mask(dir / "m.png", m);
  for (const char* s : {"naive_mc", "lac", "bac", "bac_lac", "diff_mc", "split_stream", "cw"}) {
    std::vector<std::string> args{"--scheme", s, "--classes", "3", "--output-format", "csv"};
    if (std::string(s) == "split_stream") args.insert(args.end(), {"--start-mode", "2d"});
    args.insert(args.end(), {"roundtrip", (dir / "m.png").string()});
    const auto r = run(args);
    CAPTURE(s);
    CHECK(r.code == cli::kOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].back() == "0");
  }
  const auto enc = run({"--scheme", "lac", "--classes", "3", "encode", (dir / "m.png").string(), "-o",
                        (dir / "m.tok").string()});
  CHECK(enc.code == cli::kOk);
  auto cfg = make_config(Scheme::kLac, 1, 3);
  cfg.height = 12;
  cfg.width = 10;
  CHECK(io::read_tokens(dir / "m.tok") == encode_static(m, cfg));
  CHECK(run({"decode", (dir / "m.tok").string(), "-o", (dir / "back.png").string()}).code == cli::kOk);
  CHECK(io::read_mask(dir / "back.png", 3) == m);
  // Subsampled input: the round trip is against the subsampled mask.
  const auto sq = testgen::random_mask(rng, 12, 12, 3);
  io::write_mask(dir / "sq.png", sq);
  CHECK(run({"--mask-size", "6", "--classes", "3", "roundtrip", (dir / "sq.png").string()}).code == cli::kOk);
  CHECK(run({"--mask-size", "6", "--classes", "3", "encode", (dir / "sq.png").string(), "-o",
             (dir / "sq.tok").string()})
            .code == cli::kOk);
  CHECK(io::read_tokens(dir / "sq.tok") == encode_static(subsample(sq, 6), make_config(Scheme::kLac, 6, 3)));
  // 12x10 has no integer factor down to 5x5.
  CHECK(run({"--mask-size", "5", "--classes", "3", "roundtrip", (dir / "m.png").string()}).code == cli::kValidation);
}

TEST_CASE("video and instance round trips") {
  TempDir dir;
  std::mt19937_64 rng(92);
  io::write_video(dir / "clip", testgen::random_video(rng, 8, 2, 3));
  for (const char* s : {"flat_3dc", "flat_3df", "tac", "ltac"}) {
    CAPTURE(s);
    CHECK(run({"--scheme", s, "--classes", "2", "roundtrip", (dir / "clip").string()}).code == cli::kOk);
  }
  io::write_instance_mask(dir / "inst.png", testgen::random_instances(rng, 9, 9, 2, 5));
  CHECK(run({"--scheme", "iw", "--classes", "2", "roundtrip", (dir / "inst.png").string()}).code == cli::kOk);
  CHECK(run({"--scheme", "iw", "--classes", "2", "--seed", "3", "roundtrip", (dir / "inst.png").string(),
             "--shuffle"})
            .code == cli::kOk);
}

TEST_CASE("exit codes") {
  TempDir dir;
  io::write_mask(dir / "m.png", LabelMask(4, 4, 2, std::vector<Label>(16, 2)));
  CHECK(run({"roundtrip", (dir / "nope.png").string()}).code == cli::kIo);
  CHECK(run({"--classes", "1", "roundtrip", (dir / "m.png").string()}).code == cli::kIo);
  CHECK(run({"--scheme", "nope", "--classes", "2", "roundtrip", (dir / "m.png").string()}).code == cli::kValidation);
  CHECK(run({"--scheme", "naive_bin", "--classes", "2", "roundtrip", (dir / "m.png").string()}).code ==
        cli::kValidation);
  CHECK(run({"--classes", "2", "encode", (dir / "m.png").string(), "--limit", "5"}).code == cli::kCapacity);
  CHECK(run({"--bogus-flag"}).code == cli::kValidation);
  CHECK(run({}).code == cli::kValidation);
  const auto tok = dir / "bad.tok";
  {
    std::ofstream out(tok);
    out << io::format_token_header(make_config(Scheme::kLac, 4, 2)) << "\n0 0\n";
  }
  const auto strict = run({"decode", tok.string(), "-o", (dir / "o.png").string()});
  CHECK(strict.code == cli::kValidation);
  CHECK_FALSE(strict.err.empty());
  CHECK(run({"decode", tok.string(), "-o", (dir / "o.png").string(), "--lenient"}).code == cli::kOk);
  const auto help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("roundtrip") != std::string::npos);
}

TEST_CASE("stats matches a brute-force count") {
  TempDir dir;
  std::mt19937_64 rng(93);
  std::vector<LabelMask> masks;
  for (int i = 0; i < 6; ++i) {
    masks.push_back(testgen::random_mask(rng, 16, 16, 2));
    char name[32];
    std::snprintf(name, sizeof name, "m%02d.png", i);
    io::write_mask(dir / name, masks.back());
  }
  const auto r = run({"--classes", "2", "--output-format", "csv", "stats", dir.path().string(), "--thresholds",
                      "10,40", "--schemes", "lac,naive_mc,bac"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"scheme", "images", "mean", "max", "pct_gt_10", "pct_gt_40"});
  const std::vector<Scheme> schemes{Scheme::kLac, Scheme::kNaiveMc, Scheme::kBac};
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    double sum = 0;
    std::int64_t mx = 0;
    int over10 = 0, over40 = 0;
    for (const auto& m : masks) {
      const auto n = oracle::token_count(m, schemes[s]);
      sum += double(n);
      mx = std::max(mx, n);
      over10 += n > 10;
      over40 += n > 40;
    }
    const auto& row = rows[s + 1];
    CHECK(row[0] == to_string(schemes[s]));
    CHECK(row[1] == "6");
    CHECK(row[2] == fixed(sum / 6));
    CHECK(row[3] == std::to_string(mx));
    CHECK(row[4] == fixed(100.0 * over10 / 6));
    CHECK(row[5] == fixed(100.0 * over40 / 6));
  }
  const auto per = run({"--classes", "2", "--output-format", "csv", "stats", dir.path().string(), "--per-image"});
  CHECK(csv_rows(per.out).size() == 7);
}

TEST_CASE("patchify then recompose") {
  TempDir dir;
  std::mt19937_64 rng(94);
  const auto m = testgen::random_mask(rng, 20, 18, 2, testgen::Style::kBlobs);
  io::write_mask(dir / "m.png", m);
  for (bool augment : {false, true}) {
    std::vector<std::string> args{"--classes", "2", "--seed", "5", "patchify", (dir / "m.png").string(),
                                  "--patch", "8", "--stride", "5", "--out-dir", (dir / "patches").string()};
    if (augment) args.push_back("--augment");
    REQUIRE(run(args).code == cli::kOk);
    const auto manifest = io::read_manifest(dir / "patches" / "manifest.json");
    CHECK(manifest.patches.size() == patchify(20, 18, 8, 5).windows.size());
    for (const char* c : {"vote", "last", "or", "and", "min", "max"}) {
      const auto r = run({"recompose", "--manifest", (dir / "patches" / "manifest.json").string(), "-o",
                          (dir / "back.png").string(), "--combiner", c});
      CHECK(r.code == cli::kOk);
      CHECK(io::read_mask(dir / "back.png", 2) == m);
    }
  }
}

TEST_CASE("metrics, subsample quality, noise and viz") {
  TempDir dir;
  const auto gt = fixtures::grid({{1, 1}, {0, 2}}, 2), pred = fixtures::grid({{1, 2}, {0, 2}}, 2);
  io::write_mask(dir / "gt.png", gt);
  io::write_mask(dir / "pred.png", pred);
  const auto r = run({"--classes", "2", "--output-format", "csv", "metrics", "--gt", (dir / "gt.png").string(),
                      "--pred", (dir / "pred.png").string(), "--per-class"});
  REQUIRE(r.code == cli::kOk);
  const auto expected = compute_metrics(oracle::confusion(gt, pred));
  CHECK(r.out.find(fixed(expected.rec)) != std::string::npos);
  CHECK(r.out.find(fixed(expected.fw_prec)) != std::string::npos);
  CHECK(run({"--classes", "2", "metrics", "--gt", (dir / "gt.png").string(), "--pred",
             (dir / "missing.png").string()})
            .code == cli::kIo);

  const auto sq = run({"--classes", "2", "--output-format", "csv", "subsample-quality", (dir / "gt.png").string(),
                       "--sizes", "1,2"});
  REQUIRE(sq.code == cli::kOk);
  const auto rows = csv_rows(sq.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2][1] == fixed(1.0));

  const auto nz = run({"--classes", "2", "--output-format", "csv", "noise", (dir / "gt.png").string(), "--count",
                       "0", "--trials", "3"});
  REQUIRE(nz.code == cli::kOk);
  CHECK(nz.out.find(fixed(1.0)) != std::string::npos);
  CHECK(run({"--classes", "2", "noise", (dir / "gt.png").string(), "--mode", "explode"}).code == cli::kValidation);

  CHECK(run({"--classes", "2", "viz", (dir / "gt.png").string(), "-o", (dir / "viz.png").string(), "--runs"}).code ==
        cli::kOk);
  CHECK(std::filesystem::file_size(dir / "viz.png") > 0);
}
