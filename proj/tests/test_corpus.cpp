#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "support/synth.hpp"
#include "uidx/corpus.hpp"
#include "uidx/postings.hpp"

using namespace uidx;

namespace {

IngestResult ingest_text(const std::string& text, ParsingMode mode,
                         std::vector<std::string> stopwords = {}) {
  IngestConfig cfg;
  cfg.mode = mode;
  cfg.stopwords = std::move(stopwords);
  std::istringstream in(text);
  return ingest(in, cfg);
}

}  // namespace

TEST_CASE("case folding builds a shared vocabulary") {
  auto res = ingest_text("A b\n\x01\nb c\n", ParsingMode::kNonPositional);
  REQUIRE(res.corpus.documents.size() == 2);
  CHECK(res.vocab.size() == 3);
  uint32_t a = res.vocab.lookup("a"), b = res.vocab.lookup("b"),
           c = res.vocab.lookup("c");
  CHECK(a != kAbsentTerm);
  CHECK(res.corpus.documents[0].tokens == std::vector<uint32_t>{a, b});
  CHECK(res.corpus.documents[1].tokens == std::vector<uint32_t>{b, c});
  CHECK(res.vocab.lookup("A") == kAbsentTerm);
}

TEST_CASE("stopwords are dropped in non-positional mode") {
  auto res = ingest_text("the cat\n", ParsingMode::kNonPositional, {"the"});
  uint32_t cat = res.vocab.lookup("cat");
  CHECK(res.corpus.documents[0].tokens == std::vector<uint32_t>{cat});
  CHECK(res.vocab.lookup("the") == kAbsentTerm);
}

TEST_CASE("positional doc starts leave room for one separator per boundary") {
  auto res = ingest_text("a b c d e\n\x01\nf g h i j\n\x01\nk l m n o\n",
                         ParsingMode::kPositional);
  REQUIRE(res.corpus.documents.size() == 3);
  CHECK(res.corpus.doc_starts == std::vector<uint64_t>{1, 7, 13});
  // oracle: doc start = previous start + token count + 1 separator
  uint64_t expect = 1;
  for (size_t d = 0; d < res.corpus.documents.size(); ++d) {
    CHECK(res.corpus.doc_starts[d] == expect);
    expect += res.corpus.documents[d].tokens.size() + 1;
  }
  CHECK(res.corpus.total_tokens == 17);  // 15 words + 2 separators
}

TEST_CASE("positional mode keeps separators as tokens") {
  auto res = ingest_text("One, two\n", ParsingMode::kPositional);
  // "One" ", " "two": single whitespace runs are omitted, longer runs kept
  CHECK(res.vocab.lookup("One") != kAbsentTerm);
  CHECK(res.vocab.lookup(", ") != kAbsentTerm);
  CHECK(res.vocab.lookup("one") == kAbsentTerm);  // no folding here
  CHECK(res.corpus.documents[0].tokens.size() == 3);
}

TEST_CASE("ingestion is deterministic") {
  support::CorpusSpec spec;
  spec.seed = 99;
  std::string text = support::versioned_corpus_text(spec);
  auto r1 = ingest_text(text, ParsingMode::kNonPositional);
  auto r2 = ingest_text(text, ParsingMode::kNonPositional);
  REQUIRE(r1.corpus.documents.size() == r2.corpus.documents.size());
  for (size_t i = 0; i < r1.corpus.documents.size(); ++i) {
    CHECK(r1.corpus.documents[i].tokens == r2.corpus.documents[i].tokens);
  }
  CHECK(r1.vocab.terms == r2.vocab.terms);
}

TEST_CASE("token counts and separators add up to total_tokens") {
  support::CorpusSpec spec;
  spec.articles = 4;
  spec.versions = 5;
  std::string text = support::versioned_corpus_text(spec);
  auto res = ingest_text(text, ParsingMode::kPositional);
  uint64_t sum = res.corpus.documents.size() - 1;  // separators
  for (const auto& d : res.corpus.documents) sum += d.tokens.size();
  CHECK(sum == res.corpus.total_tokens);
}

TEST_CASE("document frequency equals posting list length") {
  support::CorpusSpec spec;
  spec.seed = 3;
  auto res = ingest_text(support::versioned_corpus_text(spec),
                         ParsingMode::kNonPositional);
  auto lists = build_nonpositional(res.corpus, res.vocab);
  for (uint32_t t = 1; t <= res.vocab.size(); ++t) {
    CHECK(lists.lists[t].size() == res.vocab.doc_freq[t]);
  }
}

TEST_CASE("empty corpus is an error") {
  IngestConfig cfg;
  std::istringstream in("");
  CHECK_THROWS_AS(ingest(in, cfg), Error);
}

TEST_CASE("oversized documents are rejected") {
  IngestConfig cfg;
  cfg.max_doc_tokens = 3;
  std::istringstream in("a b c d e\n");
  CHECK_THROWS_AS(ingest(in, cfg), Error);
}

TEST_CASE("query parsing maps terms and flags unknowns") {
  auto res = ingest_text("alpha beta\n", ParsingMode::kNonPositional);
  std::istringstream q1("alpha beta\n");
  QuerySet qs = parse_queries(q1, QueryKind::kConjunctive, res.vocab);
  REQUIRE(qs.queries.size() == 1);
  CHECK(qs.queries[0].term_ids ==
        std::vector<uint32_t>{res.vocab.lookup("alpha"), res.vocab.lookup("beta")});

  std::istringstream q2("zzz-not-in-vocab\n");
  QuerySet qs2 = parse_queries(q2, QueryKind::kWordLowFreq, res.vocab);
  CHECK(qs2.queries[0].term_ids == std::vector<uint32_t>{kAbsentTerm});
}

TEST_CASE("query files keep order and cardinality") {
  auto res = ingest_text("w\n", ParsingMode::kNonPositional);
  std::string text;
  for (int i = 0; i < 1000; ++i) text += "t" + std::to_string(i) + "\n";
  std::istringstream in(text);
  QuerySet qs = parse_queries(in, QueryKind::kWordLowFreq, res.vocab);
  REQUIRE(qs.queries.size() == 1000);
  CHECK(qs.queries[0].terms[0] == "t0");
  CHECK(qs.queries[999].terms[0] == "t999");
}

TEST_CASE("malformed query lines name the line number") {
  auto res = ingest_text("w\n", ParsingMode::kNonPositional);
  std::istringstream in("w\n\nw\n");
  try {
    parse_queries(in, QueryKind::kWordLowFreq, res.vocab);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find('2') != std::string::npos);
  }
  std::istringstream arity("w\n");
  CHECK_THROWS_AS(parse_queries(arity, QueryKind::kConjunctive, res.vocab), Error);
}

TEST_CASE("vocabulary serialization round-trips") {
  auto res = ingest_text("alpha beta beta\n\x01\ngamma\n", ParsingMode::kNonPositional);
  std::vector<uint8_t> buf;
  res.vocab.serialize(buf);
  ByteReader r(buf);
  Vocabulary back = Vocabulary::deserialize(r);
  CHECK(back.terms == res.vocab.terms);
  CHECK(back.coll_freq == res.vocab.coll_freq);
  CHECK(back.doc_freq == res.vocab.doc_freq);
  CHECK(back.lookup("beta") == res.vocab.lookup("beta"));
}
