#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "uidx/common.hpp"
#include "uidx/io.hpp"

namespace uidx {

enum class ParsingMode : uint8_t { kNonPositional = 0, kPositional = 1 };

struct Vocabulary {
  std::vector<std::string> terms;  // index 0 unused; token ids are 1-based
  std::vector<uint64_t> coll_freq;
  std::vector<uint64_t> doc_freq;
  std::unordered_map<std::string, uint32_t> term_to_id;

  uint32_t size() const { return static_cast<uint32_t>(terms.size()) - 1; }
  uint32_t lookup(const std::string& term) const {
    auto it = term_to_id.find(term);
    return it == term_to_id.end() ? kAbsentTerm : it->second;
  }
  uint32_t intern(const std::string& term);

  void serialize(std::vector<uint8_t>& out) const;
  static Vocabulary deserialize(ByteReader& in);
};

struct Document {
  uint32_t doc_id = 0;  // 1-based, strictly increasing
  std::vector<uint32_t> tokens;
};

struct Corpus {
  ParsingMode mode = ParsingMode::kNonPositional;
  std::vector<Document> documents;
  std::vector<uint64_t> doc_starts;  // 1-based word offsets into the concatenation
  uint64_t total_tokens = 0;         // includes inter-document separators (positional)
  uint64_t original_byte_size = 0;
  // Positional mode only: reserved id of the inter-document separator token.
  uint32_t doc_sep_id = 0;
};

struct IngestConfig {
  ParsingMode mode = ParsingMode::kNonPositional;
  std::vector<std::string> stopwords;  // applied in non-positional mode only
  std::string record_delimiter = "\x01";
  uint64_t max_doc_tokens = 1u << 26;
};

// Reserved vocabulary entry for the separator placed between documents in
// positional mode; it can never be queried as a word.
extern const char* const kDocSeparatorTerm;

struct IngestResult {
  Corpus corpus;
  Vocabulary vocab;
};

/// Tokenize a document record stream into a corpus and vocabulary.
/// Records are delimited by a marker line (default a line containing only
/// \x01). Non-positional mode lowercases and drops stopwords; positional mode
/// keeps the original text, alternating word tokens and separator tokens
/// (maximal runs of non-word characters), omitting single-space separators.
IngestResult ingest(std::istream& raw, const IngestConfig& config);
IngestResult ingest_file(const std::string& path, const IngestConfig& config);

// Default 20 English stopwords (the count comes from the evaluation protocol;
// the words themselves are configuration).
std::vector<std::string> default_stopwords();
std::vector<std::string> load_stopwords(const std::string& path);

enum class QueryKind : uint8_t {
  kWordLowFreq = 0,
  kWordHighFreq = 1,
  kConjunctive = 2,
  kPhrase = 3,
};

struct Query {
  std::vector<std::string> terms;
  std::vector<uint32_t> term_ids;  // kAbsentTerm for unknown terms
};

struct QuerySet {
  QueryKind kind = QueryKind::kConjunctive;
  std::vector<Query> queries;
};

/// One query per line, terms whitespace-separated. Unknown terms map to the
/// absent-term sentinel; an empty line inside the file is a parse error that
/// names the line number.
QuerySet load_queries(const std::string& path, QueryKind kind, const Vocabulary& vocab);
QuerySet parse_queries(std::istream& in, QueryKind kind, const Vocabulary& vocab);

const char* query_kind_name(QueryKind kind);

}  // namespace uidx
