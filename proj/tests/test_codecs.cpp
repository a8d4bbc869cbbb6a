#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "support/synth.hpp"
#include "uidx/codecs.hpp"

using namespace uidx;

namespace {

std::string bit_string(const std::vector<uint8_t>& bytes, uint64_t nbits) {
  std::string s;
  for (uint64_t i = 0; i < nbits; ++i) {
    s += ((bytes[i >> 3] >> (7 - (i & 7))) & 1) ? '1' : '0';
  }
  return s;
}

}  // namespace

TEST_CASE("vbyte single values match the chunk layout") {
  std::vector<uint8_t> out;
  vbyte_encode_one(1, out);
  CHECK(out == std::vector<uint8_t>{0x81});
  out.clear();
  vbyte_encode_one(0, out);
  CHECK(out == std::vector<uint8_t>{0x80});
  out.clear();
  vbyte_encode_one(300, out);  // 300 = 2*128 + 44, low chunk first
  CHECK(out == std::vector<uint8_t>{0x2C, 0x82});
}

TEST_CASE("vbyte layout equals the independent decomposition") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    uint64_t v = rng() >> (rng() % 40);
    std::vector<uint8_t> got;
    vbyte_encode_one(v, got);
    // oracle: successive 7-bit chunks, least significant first, high bit on
    // the final byte only
    std::vector<uint8_t> want;
    uint64_t x = v;
    do {
      want.push_back(static_cast<uint8_t>(x & 0x7F));
      x >>= 7;
    } while (x);
    want.back() |= 0x80;
    CHECK(got == want);
    size_t pos = 0;
    CHECK(vbyte_decode_one(got.data(), got.size(), pos) == v);
    CHECK(pos == got.size());
  }
}

TEST_CASE("vbyte truncation is detected") {
  std::vector<uint8_t> bytes{0x2C};  // missing terminator byte
  size_t pos = 0;
  CHECK_THROWS_AS(vbyte_decode_one(bytes.data(), bytes.size(), pos), Error);
}

TEST_CASE("rice hand-checked bit patterns") {
  BitWriter bw;
  rice_encode_one(1, 0, bw);
  CHECK(bit_string(bw.bytes(), bw.bit_count()) == "1");
  BitWriter bw2;
  rice_encode_one(7, 2, bw2);  // quotient 1, remainder 2
  CHECK(bit_string(bw2.bytes(), bw2.bit_count()) == "0110");
}

TEST_CASE("rice round-trips under every parameter") {
  std::mt19937_64 rng(22);
  for (unsigned b : {0u, 1u, 3u, 7u, 15u}) {
    auto lists = support::random_gap_lists(20, 200, rng);
    for (const auto& gaps : lists) {
      auto bytes = rice_encode(gaps, b);
      CHECK(rice_decode(bytes.data(), bytes.size(), gaps.size(), b) == gaps);
    }
  }
}

TEST_CASE("rice corrupt unary run is reported") {
  std::vector<uint8_t> zeros(1 << 22, 0);  // unary run past the limit
  CHECK_THROWS_AS(rice_decode(zeros.data(), zeros.size(), 1, 0), Error);
}

TEST_CASE("rice parameter picker follows the mean gap") {
  CHECK(rice_pick_b({1, 1, 1, 1}) == 0);
  CHECK(rice_pick_b({16, 16, 16, 16}) == 4);
  CHECK(rice_pick_b({1}) == 0);
}

TEST_CASE("rice-runs collapses 1-runs") {
  std::vector<uint64_t> gaps{5, 1, 1, 1, 7};
  // expected stream: rice codes for 5, then 1 and run length 3, then 7
  BitWriter expect;
  for (uint64_t v : {5, 1, 3, 7}) rice_encode_one(v, 2, expect);
  auto got = rice_runs_encode(gaps, 2);
  CHECK(got == expect.bytes());
  CHECK(rice_runs_decode(got.data(), got.size(), gaps.size(), 2) == gaps);
}

TEST_CASE("rice-runs single 1 is a run of length one") {
  std::vector<uint64_t> gaps{1};
  BitWriter expect;
  rice_encode_one(1, 0, expect);
  rice_encode_one(1, 0, expect);
  CHECK(rice_runs_encode(gaps, 0) == expect.bytes());
  auto got = rice_runs_encode(gaps, 0);
  CHECK(rice_runs_decode(got.data(), got.size(), 1, 0) == gaps);
}

TEST_CASE("rice-runs without 1-gaps is bit-identical to rice") {
  std::vector<uint64_t> gaps{5, 3, 9, 2, 140, 6};
  CHECK(rice_runs_encode(gaps, 3) == rice_encode(gaps, 3));
}

TEST_CASE("rice-runs never loses to rice on long runs") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 50; ++it) {
    // every 1-run has length >= 3
    std::vector<uint64_t> gaps;
    int blocks = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < blocks; ++i) {
      gaps.push_back(2 + rng() % 100);
      size_t run = 3 + rng() % 20;
      gaps.insert(gaps.end(), run, 1);
    }
    unsigned b = rice_pick_b(gaps);
    CHECK(rice_runs_encode(gaps, b).size() <= rice_encode(gaps, b).size());
  }
}

TEST_CASE("simple9 dense mode packs 28 unit gaps in one word") {
  std::vector<uint64_t> gaps(28, 1);
  auto words = simple9_encode(gaps);
  REQUIRE(words.size() == 1);
  CHECK((words[0] >> 28) == 0);  // densest mode
  CHECK(simple9_decode(words.data(), words.size(), 28) == gaps);
}

TEST_CASE("simple9 pair in the 2x14 mode") {
  std::vector<uint64_t> gaps{2, 3};
  auto words = simple9_encode(gaps);
  REQUIRE(words.size() == 1);
  CHECK((words[0] >> 28) == 7);  // 2x14 is the 8th densest mode
  CHECK(simple9_decode(words.data(), words.size(), 2) == gaps);
}

TEST_CASE("simple9 escape carries gaps past the 28-bit ceiling") {
  std::vector<uint64_t> gaps{uint64_t{1} << 28};
  auto words = simple9_encode(gaps);
  REQUIRE(words.size() == 2);
  CHECK((words[0] >> 28) == 8);                    // 1x28 slot
  CHECK((words[0] & 0x0FFFFFFF) == kSimple9Escape);
  CHECK(words[1] == (uint32_t{1} << 28));
  CHECK(simple9_decode(words.data(), words.size(), 1) == gaps);

  std::vector<uint64_t> top{(uint64_t{1} << 32) - 1};
  auto w2 = simple9_encode(top);
  CHECK(simple9_decode(w2.data(), w2.size(), 1) == top);
}

TEST_CASE("simple9 rejects zero gaps") {
  CHECK_THROWS_AS(simple9_encode({0}), Error);
}

TEST_CASE("all codecs round-trip randomized lists") {
  std::mt19937_64 rng(24);
  auto lists = support::random_gap_lists(500, 300, rng, /*huge_gaps=*/true);
  for (const auto& gaps : lists) {
    auto vb = vbyte_encode(gaps);
    CHECK(vbyte_decode(vb.data(), vb.size(), gaps.size()) == gaps);
    auto s9 = simple9_encode(gaps);
    CHECK(simple9_decode(s9.data(), s9.size(), gaps.size()) == gaps);
    unsigned b = rice_pick_b(gaps);
    auto rc = rice_encode(gaps, b);
    CHECK(rice_decode(rc.data(), rc.size(), gaps.size(), b) == gaps);
    auto rr = rice_runs_encode(gaps, b);
    CHECK(rice_runs_decode(rr.data(), rr.size(), gaps.size(), b) == gaps);
  }
}
