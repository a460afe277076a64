#include <doctest.h>

#include "rlemask/error.hpp"
#include "rlemask/vocab_planner.hpp"
#include "support/oracles.hpp"

using namespace rlemask;

namespace {

std::int64_t sum_segments(const VocabBreakdown& b) {
  std::int64_t total = 0;
  for (const auto& s : b.segments) total += s.size;
  return total;
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Largest N with V < limit by direct formula evaluation, searched up to 64.
int formula_max(Scheme s, std::int64_t side, int c, std::int64_t limit) {
  int best = 0;
  for (int n = 1; n <= 64; ++n) {
    std::int64_t v = 0;
    const std::int64_t k = ipow(c + 1, n) - 1;
    if (s == Scheme::kTac) v = side * side + side + k;
    if (s == Scheme::kLtac) v = side * side + side * k;
    if (s == Scheme::kFlat3DC || s == Scheme::kFlat3DF) v = n * side * side + side + (c > 1 ? c : 0);
    if (v >= limit) break;
    best = n;
  }
  return best;
}

}  // namespace

TEST_CASE("breakdown examples") {
  CHECK(vocab_breakdown(Scheme::kLac, 80, 2).total == 6560);
  CHECK(vocab_breakdown(Scheme::kNaiveMc, 80, 2).total == 6482);
  CHECK(vocab_breakdown(Scheme::kTac, 80, 1, 14).total == 22863);
  CHECK(vocab_breakdown(Scheme::kLtac, 80, 2, 5).total == 25760);
  CHECK(vocab_breakdown(Scheme::kLtac, 80, 2, 6).total == 64640);
  CHECK(vocab_breakdown(Scheme::kTac, 160, 2, 7).total == 27946);
  CHECK(vocab_breakdown(Scheme::kFlat3DC, 80, 1, 5).total == 32080);
  CHECK(vocab_breakdown(Scheme::kLac, 80, 80).total == 12800);
}

TEST_CASE("breakdown totals are segment sums and match enumeration") {
  const std::vector<Scheme> all{Scheme::kNaiveBin, Scheme::kNaiveMc, Scheme::kLac,     Scheme::kBac,
                                Scheme::kBacLac,   Scheme::kDiffBin, Scheme::kDiffMc,  Scheme::kSplitStream,
                                Scheme::kFlat3DC,  Scheme::kFlat3DF, Scheme::kTac,     Scheme::kLtac,
                                Scheme::kClassWise, Scheme::kInstanceWise};
  for (auto s : all) {
    for (int side : {1, 2, 5}) {
      for (int c : {1, 2, 3}) {
        for (int n : {1, 2, 3}) {
          for (int specials : {0, 2}) {
            for (bool two_d : {false, true}) {
              VocabBreakdown b;
              try {
                b = vocab_breakdown(s, side, c, n, two_d ? StartMode::k2D : StartMode::k1D, specials);
              } catch (const InvalidArgument&) {
                continue;
              }
              CAPTURE(to_string(s));
              CHECK(b.total == sum_segments(b));
              const int frames = is_video_scheme(s) ? n : 1;
              CHECK(b.total == oracle::enumerate_vocab(s, side, c, frames, two_d, specials));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("breakdown overflow") {
  CHECK_THROWS_AS(vocab_breakdown(Scheme::kLtac, 160, 10, 30), CapacityError);
  CHECK_THROWS_AS(vocab_breakdown(Scheme::kTac, 80, 255, 40), CapacityError);
}

TEST_CASE("feasibility limits reported for the standard sizes") {
  CHECK(max_feasible_frames(Scheme::kTac, 80, 1).max_frames == 14);
  CHECK(max_feasible_frames(Scheme::kTac, 80, 2).max_frames == 9);
  CHECK(max_feasible_frames(Scheme::kTac, 160, 1).max_frames == 12);
  CHECK(max_feasible_frames(Scheme::kLtac, 80, 1).max_frames == 8);
  CHECK(max_feasible_frames(Scheme::kLtac, 80, 2).max_frames == 5);
  CHECK(max_feasible_frames(Scheme::kFlat3DC, 80, 1).max_frames == 4);
  CHECK(max_feasible_frames(Scheme::kFlat3DF, 160, 1).max_frames == 1);

  const auto tac160 = max_feasible_frames(Scheme::kTac, 160, 2);
  CHECK(tac160.max_frames == 7);
  CHECK(tac160.vocab_at_max == 27946);
  REQUIRE(tac160.reference_frames.has_value());
  CHECK(*tac160.reference_frames == 6);
  CHECK(tac160.discrepancy);
  CHECK_FALSE(tac160.diagnostic.empty());

  const auto tac80 = max_feasible_frames(Scheme::kTac, 80, 1);
  CHECK(tac80.vocab_at_max == 22863);
  CHECK(tac80.vocab_at_next == 6400 + 80 + 32767);
  CHECK_FALSE(tac80.discrepancy);

  const auto flat = max_feasible_frames(Scheme::kFlat3DC, 80, 1);
  CHECK(flat.vocab_at_next == 32080);
  CHECK(flat.discrepancy);
}

TEST_CASE("reference limits") {
  CHECK(reference_frame_limit(Scheme::kTac, 80, 1) == 14);
  CHECK(reference_frame_limit(Scheme::kTac, 80, 2) == 9);
  CHECK(reference_frame_limit(Scheme::kTac, 160, 1) == 12);
  CHECK(reference_frame_limit(Scheme::kTac, 160, 2) == 6);
  CHECK(reference_frame_limit(Scheme::kLtac, 80, 1) == 8);
  CHECK(reference_frame_limit(Scheme::kLtac, 80, 2) == 5);
  CHECK(reference_frame_limit(Scheme::kFlat3DC, 80, 1) == 5);
  CHECK(reference_frame_limit(Scheme::kFlat3DC, 160, 1) == 1);
  CHECK_FALSE(reference_frame_limit(Scheme::kTac, 64, 1).has_value());
  // References apply only to the reported setting.
  CHECK_FALSE(max_feasible_frames(Scheme::kTac, 160, 2, kDefaultVocabLimit, 4).reference_frames.has_value());
}

TEST_CASE("strict limit boundary") {
  // Binary TAC at S=80, N=14 gives 22863: a limit of exactly that excludes it.
  CHECK(max_feasible_frames(Scheme::kTac, 80, 1, 22863).max_frames == 13);
  CHECK(max_feasible_frames(Scheme::kTac, 80, 1, 22864).max_frames == 14);
}

TEST_CASE("no feasible length") {
  const auto f = max_feasible_frames(Scheme::kTac, 80, 1, 100);
  CHECK(f.max_frames == 0);
  CHECK_FALSE(f.diagnostic.empty());
  CHECK_THROWS_AS(max_feasible_frames(Scheme::kLac, 80, 1), InvalidArgument);
}

TEST_CASE("planner agrees with the direct formula and is monotone") {
  for (auto s : {Scheme::kTac, Scheme::kLtac, Scheme::kFlat3DC}) {
    for (std::int64_t limit : {5000, 32000, 100000}) {
      int prev_side = 1 << 30;
      for (int side : {16, 32, 64, 80, 128, 160}) {
        int prev_c = 1 << 30;
        for (int c = 1; c <= 6; ++c) {
          const int n = max_feasible_frames(s, side, c, limit).max_frames;
          CAPTURE(to_string(s));
          CAPTURE(side);
          CAPTURE(c);
          CHECK(n == formula_max(s, side, c, limit));
          CHECK(n <= prev_c);
          prev_c = n;
        }
        const int n1 = max_feasible_frames(s, side, 1, limit).max_frames;
        CHECK(n1 <= prev_side);
        prev_side = n1;
      }
    }
  }
}
