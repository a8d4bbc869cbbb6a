#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/synth.hpp"
#include "uidx/postings.hpp"

using namespace uidx;

namespace {

IngestResult ingest_text(const std::string& text, ParsingMode mode) {
  IngestConfig cfg;
  cfg.mode = mode;
  std::istringstream in(text);
  return ingest(in, cfg);
}

struct Built {
  IngestResult ing;
  PostingLists lists;
};

Built build_corpus(const support::CorpusSpec& spec, ParsingMode mode) {
  Built b;
  b.ing = ingest_text(support::versioned_corpus_text(spec), mode);
  b.lists = mode == ParsingMode::kNonPositional
                ? build_nonpositional(b.ing.corpus, b.ing.vocab)
                : build_positional(b.ing.corpus, b.ing.vocab);
  return b;
}

}  // namespace

TEST_CASE("representation names round-trip") {
  for (Repr r : all_reprs()) CHECK(parse_repr(repr_name(r)) == r);
  CHECK_THROWS_AS(parse_repr("nope"), Error);
}

TEST_CASE("non-positional lists are increasing doc ids") {
  auto res = ingest_text("x y\n\x01\nx\n\x01\nx z\n", ParsingMode::kNonPositional);
  auto lists = build_nonpositional(res.corpus, res.vocab);
  uint32_t x = res.vocab.lookup("x");
  CHECK(lists.lists[x] == std::vector<uint64_t>{1, 2, 3});
  CHECK(lists.universe == 3);
}

TEST_CASE("gap list example expands to the known absolute list") {
  std::vector<uint64_t> gaps{1, 2, 1, 2, 2, 2};
  CHECK(support::prefix_sums(gaps) ==
        std::vector<uint64_t>{1, 3, 4, 6, 8, 10});
}

TEST_CASE("positional lists give absolute word offsets") {
  auto res = ingest_text("w1 w2 w1 w2\n", ParsingMode::kPositional);
  auto lists = build_positional(res.corpus, res.vocab);
  CHECK(lists.lists[res.vocab.lookup("w1")] == std::vector<uint64_t>{1, 3});
  CHECK(lists.lists[res.vocab.lookup("w2")] == std::vector<uint64_t>{2, 4});
  CHECK(lists.universe == res.corpus.total_tokens);
}

TEST_CASE("posting lists match the brute-force oracles") {
  support::CorpusSpec spec;
  spec.seed = 51;
  for (ParsingMode mode : {ParsingMode::kNonPositional, ParsingMode::kPositional}) {
    Built b = build_corpus(spec, mode);
    auto oracle = mode == ParsingMode::kNonPositional
                      ? support::brute_nonpositional(b.ing.corpus, b.ing.vocab.size())
                      : support::brute_positional(b.ing.corpus, b.ing.vocab.size());
    for (uint32_t t = 1; t <= b.ing.vocab.size(); ++t) {
      CHECK(b.lists.lists[t] == oracle[t]);
    }
  }
}

TEST_CASE("hybrid threshold switches exactly at an eighth of the universe") {
  Vocabulary vocab;
  vocab.intern("a");
  vocab.intern("b");
  Corpus corpus;
  corpus.documents.resize(16);
  for (int i = 0; i < 16; ++i) corpus.documents[i].doc_id = i + 1;
  corpus.original_byte_size = 1;
  PostingLists lists;
  lists.universe = 16;  // threshold u/8 = 2
  lists.lists = {{}, {3, 9, 11}, {4, 16}};
  IndexImage img = materialize(lists, vocab, corpus, Repr::kHybridBitmap, {});
  CHECK(img.is_bitmap[1] == 1);  // length 3 > 2
  CHECK(img.is_bitmap[2] == 0);  // length 2 is not strictly above
  CHECK(img.decode_list(1) == std::vector<uint64_t>{3, 9, 11});
  CHECK(img.decode_list(2) == std::vector<uint64_t>{4, 16});
}

TEST_CASE("sampling step formulas") {
  CHECK(cm_step(4, 256) == 32);
  CHECK(st_step(1024, 16, 64) == 256);
}

TEST_CASE("domain samples over the worked example list") {
  // gamma = <1,3,4,6,8,10> compressed to two entries; step 4
  std::vector<std::vector<uint64_t>> gap_lists{
      {1, 2, 1, 2, 1, 4}, {2, 1, 4, 2, 2}, {1, 2, 1, 2, 2, 2}};
  RepairResult rr = repair_compress(gap_lists, true);
  STSamples s = st_samples_over_C(rr.lists, rr.grammar, 2, 4);
  CHECK(s.values == std::vector<uint64_t>{0, 0, 6});
  CHECK(s.ptrs == std::vector<uint64_t>{1, 1, 2});
}

TEST_CASE("domain samples of a single-terminal list") {
  RepairResult rr = repair_compress({{7}}, true);
  STSamples s = st_samples_over_C(rr.lists, rr.grammar, 0, 8);
  CHECK(s.values == std::vector<uint64_t>{0});
  CHECK(s.ptrs == std::vector<uint64_t>{1});
}

TEST_CASE("domain sample values equal expansion prefix sums") {
  std::mt19937_64 rng(52);
  auto gap_lists = support::random_gap_lists(8, 120, rng);
  gap_lists.push_back(gap_lists[0]);
  RepairResult rr = repair_compress(gap_lists, true);
  for (size_t li = 0; li < gap_lists.size(); ++li) {
    if (gap_lists[li].empty()) continue;
    STSamples s = st_samples_over_C(rr.lists, rr.grammar, li, 16);
    // prefix sum before each C entry, via full expansion
    std::vector<uint64_t> before{0};
    uint64_t from = rr.lists.list_ptr[li], to = rr.lists.list_ptr[li + 1];
    uint64_t acc = 0;
    for (uint64_t e = from; e < to; ++e) {
      for (uint64_t v : rr.grammar.expand(rr.lists.seq[e])) acc += v;
      before.push_back(acc);
    }
    for (size_t i = 0; i < s.values.size(); ++i) {
      CHECK(s.values[i] == before[s.ptrs[i] - 1]);
    }
  }
}

TEST_CASE("every representation decodes back to the brute-force lists") {
  support::CorpusSpec spec;
  spec.articles = 6;
  spec.versions = 8;
  spec.vocab = 120;
  spec.tokens_per_doc = 50;
  spec.mutation = 0.02;
  spec.seed = 53;
  for (ParsingMode mode : {ParsingMode::kNonPositional, ParsingMode::kPositional}) {
    Built b = build_corpus(spec, mode);
    for (Repr r : all_reprs()) {
      if (r == Repr::kRiceRuns && mode == ParsingMode::kPositional) continue;
      IndexImage img = materialize(b.lists, b.ing.vocab, b.ing.corpus, r, {});
      for (uint32_t t = 1; t <= b.ing.vocab.size(); ++t) {
        REQUIRE_MESSAGE(img.decode_list(t) == b.lists.lists[t],
                        "repr ", repr_name(r), " term ", t);
      }
    }
  }
}

TEST_CASE("positional sample values sit on the sampled elements") {
  support::CorpusSpec spec;
  spec.seed = 54;
  Built b = build_corpus(spec, ParsingMode::kNonPositional);
  IndexImage img = materialize(b.lists, b.ing.vocab, b.ing.corpus,
                               Repr::kVbyteCM, {});
  for (uint32_t t = 1; t <= b.ing.vocab.size(); ++t) {
    const CMSamples& s = img.cm[t];
    if (s.step == 0) continue;
    const auto& abs = b.lists.lists[t];
    for (size_t i = 0; i < s.values.size(); ++i) {
      CHECK(s.values[i] == abs[(i + 1) * s.step - 1]);
    }
  }
}

TEST_CASE("rice-runs is rejected for positional indexes") {
  support::CorpusSpec spec;
  spec.articles = 2;
  spec.versions = 2;
  Built b = build_corpus(spec, ParsingMode::kPositional);
  CHECK_THROWS_AS(
      materialize(b.lists, b.ing.vocab, b.ing.corpus, Repr::kRiceRuns, {}),
      Error);
}

TEST_CASE("images survive the disk round-trip for every representation") {
  support::CorpusSpec spec;
  spec.articles = 4;
  spec.versions = 6;
  spec.vocab = 80;
  spec.tokens_per_doc = 40;
  spec.seed = 55;
  Built b = build_corpus(spec, ParsingMode::kNonPositional);
  for (Repr r : all_reprs()) {
    IndexImage img = materialize(b.lists, b.ing.vocab, b.ing.corpus, r, {});
    std::vector<uint8_t> bytes = img.serialize();
    IndexImage back = IndexImage::deserialize(bytes);
    CHECK(back.repr == r);
    CHECK(back.universe == img.universe);
    for (uint32_t t = 1; t <= b.ing.vocab.size(); ++t) {
      REQUIRE_MESSAGE(back.decode_list(t) == b.lists.lists[t],
                      "repr ", repr_name(r), " term ", t);
    }
    // determinism: a fresh build serializes to the same bytes
    IndexImage again = materialize(b.lists, b.ing.vocab, b.ing.corpus, r, {});
    CHECK(again.serialize() == bytes);
  }
}

TEST_CASE("save and load through a file") {
  support::CorpusSpec spec;
  spec.articles = 2;
  spec.versions = 3;
  spec.seed = 56;
  Built b = build_corpus(spec, ParsingMode::kPositional);
  IndexImage img = materialize(b.lists, b.ing.vocab, b.ing.corpus,
                               Repr::kRepairSkip, {});
  std::string path = "test_image.uidx";
  img.save(path);
  IndexImage back = IndexImage::load(path);
  std::remove(path.c_str());
  CHECK(back.doc_starts == img.doc_starts);
  for (uint32_t t = 1; t <= b.ing.vocab.size(); ++t) {
    CHECK(back.decode_list(t) == b.lists.lists[t]);
  }
}

TEST_CASE("section sizes add up to the serialized size") {
  support::CorpusSpec spec;
  spec.seed = 57;
  Built b = build_corpus(spec, ParsingMode::kNonPositional);
  IndexImage img = materialize(b.lists, b.ing.vocab, b.ing.corpus, Repr::kRice, {});
  auto z = img.section_sizes();
  // five sections, each framed by a 12-byte tag+length header
  CHECK(z.total() + 5 * 12 == img.serialize().size());
}
