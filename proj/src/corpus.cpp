#include "uidx/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace uidx {

const char* const kDocSeparatorTerm = "\x01DOCSEP";

uint32_t Vocabulary::intern(const std::string& term) {
  auto it = term_to_id.find(term);
  if (it != term_to_id.end()) return it->second;
  if (terms.empty()) {
    terms.emplace_back();  // burn index 0
    coll_freq.push_back(0);
    doc_freq.push_back(0);
  }
  uint32_t id = static_cast<uint32_t>(terms.size());
  terms.push_back(term);
  coll_freq.push_back(0);
  doc_freq.push_back(0);
  term_to_id.emplace(term, id);
  return id;
}

void Vocabulary::serialize(std::vector<uint8_t>& out) const {
  uint32_t n = terms.empty() ? 0 : static_cast<uint32_t>(terms.size()) - 1;
  put_u32(out, n);
  for (uint32_t i = 1; i <= n; ++i) {
    put_u32(out, static_cast<uint32_t>(terms[i].size()));
    out.insert(out.end(), terms[i].begin(), terms[i].end());
    put_u64(out, coll_freq[i]);
    put_u64(out, doc_freq[i]);
  }
}

Vocabulary Vocabulary::deserialize(ByteReader& in) {
  Vocabulary v;
  uint32_t n = in.u32();
  v.terms.reserve(n + 1);
  v.terms.emplace_back();
  v.coll_freq.assign(1, 0);
  v.doc_freq.assign(1, 0);
  for (uint32_t i = 1; i <= n; ++i) {
    uint32_t len = in.u32();
    v.terms.push_back(in.str(len));
    v.coll_freq.push_back(in.u64());
    v.doc_freq.push_back(in.u64());
    v.term_to_id.emplace(v.terms.back(), i);
  }
  return v;
}

namespace {

bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

std::string to_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Non-positional token stream: lowercased words, stopwords dropped.
void tokenize_nonpositional(const std::string& text,
                            const std::unordered_set<std::string>& stop,
                            std::vector<std::string>& out) {
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_char(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    if (j > i) {
      std::string w = to_lower(text.substr(i, j - i));
      if (!stop.count(w)) out.push_back(std::move(w));
    }
    i = j;
  }
}

// Positional token stream: words and separators alternate; each maximal run of
// non-word characters is one separator token, except a run that is exactly one
// whitespace character, which is omitted (spaceless-words convention).
void tokenize_positional(const std::string& text, std::vector<std::string>& out) {
  size_t i = 0;
  while (i < text.size()) {
    size_t j = i;
    if (is_word_char(text[i])) {
      while (j < text.size() && is_word_char(text[j])) ++j;
      out.push_back(text.substr(i, j - i));
    } else {
      while (j < text.size() && !is_word_char(text[j])) ++j;
      std::string sep = text.substr(i, j - i);
      if (!(sep.size() == 1 && std::isspace(static_cast<unsigned char>(sep[0])))) {
        out.push_back(std::move(sep));
      }
    }
    i = j;
  }
}

}  // namespace

IngestResult ingest(std::istream& raw, const IngestConfig& config) {
  IngestResult res;
  res.corpus.mode = config.mode;
  std::unordered_set<std::string> stop(config.stopwords.begin(), config.stopwords.end());

  if (config.mode == ParsingMode::kPositional) {
    res.corpus.doc_sep_id = res.vocab.intern(kDocSeparatorTerm);
  }

  std::string line;
  std::string doc_text;
  std::vector<std::string> doc_tokens;
  uint64_t offset = 1;  // next absolute word position
  uint64_t bytes = 0;
  bool saw_any_line = false;

  auto flush_doc = [&]() {
    doc_tokens.clear();
    if (config.mode == ParsingMode::kNonPositional) {
      tokenize_nonpositional(doc_text, stop, doc_tokens);
    } else {
      tokenize_positional(doc_text, doc_tokens);
    }
    if (doc_tokens.size() > config.max_doc_tokens) {
      throw Error("document exceeds configured maximum token count");
    }
    Document doc;
    doc.doc_id = static_cast<uint32_t>(res.corpus.documents.size()) + 1;
    if (doc.doc_id > 1 && config.mode == ParsingMode::kPositional) {
      ++offset;  // inter-document separator token
      ++res.corpus.total_tokens;
    }
    res.corpus.doc_starts.push_back(offset);
    std::unordered_set<uint32_t> seen;
    for (const std::string& t : doc_tokens) {
      uint32_t id = res.vocab.intern(t);
      doc.tokens.push_back(id);
      ++res.vocab.coll_freq[id];
      if (seen.insert(id).second) ++res.vocab.doc_freq[id];
    }
    offset += doc.tokens.size();
    res.corpus.total_tokens += doc.tokens.size();
    res.corpus.documents.push_back(std::move(doc));
    doc_text.clear();
  };

  while (std::getline(raw, line)) {
    saw_any_line = true;
    bytes += line.size() + 1;
    if (line == config.record_delimiter) {
      flush_doc();
    } else {
      doc_text += line;
      doc_text += '\n';
    }
  }
  if (!doc_text.empty() || (saw_any_line && res.corpus.documents.empty())) flush_doc();

  if (res.corpus.documents.empty()) throw Error("empty corpus");
  res.corpus.original_byte_size = bytes;
  return res;
}

IngestResult ingest_file(const std::string& path, const IngestConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path);
  return ingest(in, config);
}

std::vector<std::string> default_stopwords() {
  return {"the", "of", "and", "a",  "in", "to",   "is",   "was",  "it",   "for",
          "on",  "as", "are", "be", "by", "with", "that", "this", "from", "at"};
}

std::vector<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file: " + path);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(to_lower(w));
  return out;
}

QuerySet parse_queries(std::istream& in, QueryKind kind, const Vocabulary& vocab) {
  QuerySet qs;
  qs.kind = kind;
  std::string line;
  size_t lineno = 0;
  bool word_kind = kind == QueryKind::kWordLowFreq || kind == QueryKind::kWordHighFreq;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    Query q;
    std::string term;
    while (ss >> term) {
      q.terms.push_back(term);
      q.term_ids.push_back(vocab.lookup(term));
    }
    if (q.terms.empty()) {
      throw Error("malformed query file: empty line " + std::to_string(lineno));
    }
    if (word_kind && q.terms.size() != 1) {
      throw Error("word query sets take exactly 1 term (line " +
                  std::to_string(lineno) + ")");
    }
    if (!word_kind && q.terms.size() < 2) {
      throw Error("conjunctive/phrase queries take >= 2 terms (line " +
                  std::to_string(lineno) + ")");
    }
    qs.queries.push_back(std::move(q));
  }
  return qs;
}

QuerySet load_queries(const std::string& path, QueryKind kind, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open query file: " + path);
  return parse_queries(in, kind, vocab);
}

const char* query_kind_name(QueryKind kind) {
  switch (kind) {
    case QueryKind::kWordLowFreq: return "word-low-freq";
    case QueryKind::kWordHighFreq: return "word-high-freq";
    case QueryKind::kConjunctive: return "conjunctive";
    case QueryKind::kPhrase: return "phrase";
  }
  return "?";
}

}  // namespace uidx
