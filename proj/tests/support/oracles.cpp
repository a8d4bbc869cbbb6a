#include "support/oracles.hpp"

#include <algorithm>
#include <unordered_set>

namespace support {

std::vector<std::vector<uint64_t>> brute_nonpositional(const uidx::Corpus& corpus,
                                                       uint32_t nterms) {
  std::vector<std::vector<uint64_t>> lists(nterms + 1);
  for (const auto& doc : corpus.documents) {
    std::unordered_set<uint32_t> seen;
    for (uint32_t t : doc.tokens) {
      if (seen.insert(t).second) lists[t].push_back(doc.doc_id);
    }
  }
  for (auto& l : lists) std::sort(l.begin(), l.end());
  return lists;
}

std::vector<uint32_t> concat_tokens(const uidx::Corpus& corpus) {
  std::vector<uint32_t> out;
  for (size_t d = 0; d < corpus.documents.size(); ++d) {
    if (d > 0) out.push_back(corpus.doc_sep_id);
    const auto& toks = corpus.documents[d].tokens;
    out.insert(out.end(), toks.begin(), toks.end());
  }
  return out;
}

std::vector<std::vector<uint64_t>> brute_positional(const uidx::Corpus& corpus,
                                                    uint32_t nterms) {
  std::vector<std::vector<uint64_t>> lists(nterms + 1);
  std::vector<uint32_t> toks = concat_tokens(corpus);
  for (size_t i = 0; i < toks.size(); ++i) lists[toks[i]].push_back(i + 1);
  return lists;
}

std::vector<uint64_t> set_intersect(const std::vector<std::vector<uint64_t>>& lists) {
  if (lists.empty()) return {};
  std::unordered_set<uint64_t> acc(lists[0].begin(), lists[0].end());
  for (size_t i = 1; i < lists.size(); ++i) {
    std::unordered_set<uint64_t> next;
    for (uint64_t v : lists[i]) {
      if (acc.count(v)) next.insert(v);
    }
    acc = std::move(next);
  }
  std::vector<uint64_t> out(acc.begin(), acc.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<uint64_t> scan_phrase(const std::vector<uint32_t>& tokens,
                                  const std::vector<uint32_t>& phrase) {
  std::vector<uint64_t> out;
  if (phrase.empty() || tokens.size() < phrase.size()) return out;
  for (size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    bool ok = true;
    for (size_t j = 0; j < phrase.size(); ++j) {
      if (tokens[i + j] != phrase[j]) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(i + 1);
  }
  return out;
}

uint64_t linear_rank(const std::vector<bool>& bits, bool b, uint64_t i) {
  uint64_t c = 0;
  for (uint64_t p = 0; p < i; ++p) {
    if (bits[p] == b) ++c;
  }
  return c;
}

uint64_t linear_select(const std::vector<bool>& bits, bool b, uint64_t j) {
  uint64_t c = 0;
  for (uint64_t p = 0; p < bits.size(); ++p) {
    if (bits[p] == b && ++c == j) return p + 1;
  }
  return 0;
}

std::vector<uint64_t> prefix_sums(const std::vector<uint64_t>& gaps) {
  std::vector<uint64_t> out(gaps.size());
  uint64_t s = 0;
  for (size_t i = 0; i < gaps.size(); ++i) {
    s += gaps[i];
    out[i] = s;
  }
  return out;
}

std::vector<BrutePhrase> brute_lzend(const std::vector<uint8_t>& text) {
  std::vector<BrutePhrase> phrases;
  std::vector<uint64_t> ends;  // 1-based
  uint64_t i = 1;
  uint64_t n = text.size();
  while (i <= n) {
    uint64_t cap = n - i;
    BrutePhrase ph;
    for (uint64_t l = cap; l >= 1 && ph.copy_len == 0; --l) {
      for (size_t p = 0; p < ends.size(); ++p) {
        uint64_t e = ends[p];
        if (e < l) continue;
        bool eq = true;
        for (uint64_t t = 0; t < l; ++t) {
          if (text[e - l + t] != text[i - 1 + t]) {
            eq = false;
            break;
          }
        }
        if (eq) {
          ph.copy_len = l;
          ph.source = static_cast<uint32_t>(p) + 1;
          break;  // smallest phrase id among the longest sources
        }
      }
    }
    ph.trailing = text[i - 1 + ph.copy_len];
    ends.push_back(i + ph.copy_len);
    phrases.push_back(ph);
    i += ph.copy_len + 1;
  }
  return phrases;
}

}  // namespace support
