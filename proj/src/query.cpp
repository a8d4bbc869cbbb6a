#include "uidx/query.hpp"

#include <algorithm>
#include <bit>

namespace uidx {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kAuto: return "auto";
    case Algorithm::kMerge: return "merge";
    case Algorithm::kSvs: return "svs";
    case Algorithm::kBys: return "bys";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kAuto, Algorithm::kMerge, Algorithm::kSvs,
                      Algorithm::kBys}) {
    if (name == algorithm_name(a)) return a;
  }
  throw Error("unknown algorithm '" + name + "' (valid: auto, merge, svs, bys)");
}

std::vector<Algorithm> valid_algorithms(Repr repr) {
  if (repr == Repr::kVbyteLzend) return {Algorithm::kMerge};
  if (repr_is_repair(repr)) return {Algorithm::kMerge, Algorithm::kSvs};
  return {Algorithm::kMerge, Algorithm::kSvs, Algorithm::kBys};
}

namespace {

void count_cmp(WorkCounters* wc, uint64_t by = 1) {
  if (wc) wc->comparisons += by;
}

}  // namespace

// ---- plain list algorithms -------------------------------------------------

std::vector<uint64_t> merge_intersect(const std::vector<uint64_t>& a,
                                      const std::vector<uint64_t>& b,
                                      WorkCounters* wc) {
  std::vector<uint64_t> out;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    count_cmp(wc);
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

namespace {

// First index >= base with v[idx] >= d, located by galloping then binary
// search inside the bracketed range.
size_t gallop_lower_bound(const std::vector<uint64_t>& v, size_t base, uint64_t d,
                          WorkCounters* wc) {
  size_t n = v.size();
  if (base >= n) return n;
  count_cmp(wc);
  if (v[base] >= d) return base;
  size_t off = 1;
  while (base + off < n && v[base + off] < d) {
    count_cmp(wc);
    off <<= 1;
  }
  size_t lo = base + (off >> 1) + 1;
  size_t hi = std::min(base + off, n - 1) + 1;  // exclusive
  auto it = std::lower_bound(v.begin() + static_cast<ptrdiff_t>(lo),
                             v.begin() + static_cast<ptrdiff_t>(hi), d);
  if (wc) wc->comparisons += static_cast<uint64_t>(std::bit_width(hi - lo + 1));
  return static_cast<size_t>(it - v.begin());
}

}  // namespace

std::vector<uint64_t> svs_intersect(const std::vector<uint64_t>& shorter,
                                    const std::vector<uint64_t>& longer,
                                    WorkCounters* wc, uint64_t merge_threshold) {
  if (shorter.size() > longer.size()) {
    return svs_intersect(longer, shorter, wc, merge_threshold);
  }
  if (longer.size() < merge_threshold * shorter.size()) {
    return merge_intersect(shorter, longer, wc);
  }
  std::vector<uint64_t> out;
  size_t base = 0;
  for (uint64_t d : shorter) {
    base = gallop_lower_bound(longer, base, d, wc);
    if (base >= longer.size()) break;
    if (longer[base] == d) {
      out.push_back(d);
      ++base;
    }
  }
  return out;
}

namespace {

void bys_rec(const std::vector<uint64_t>& a, size_t alo, size_t ahi,
             const std::vector<uint64_t>& b, size_t blo, size_t bhi,
             std::vector<uint64_t>& out, WorkCounters* wc) {
  if (alo >= ahi || blo >= bhi) return;
  // search the longer range for the median of the shorter
  bool a_short = (ahi - alo) <= (bhi - blo);
  const auto& s = a_short ? a : b;
  const auto& l = a_short ? b : a;
  size_t slo = a_short ? alo : blo, shi = a_short ? ahi : bhi;
  size_t llo = a_short ? blo : alo, lhi = a_short ? bhi : ahi;
  size_t mid = slo + (shi - slo) / 2;
  uint64_t v = s[mid];
  auto it = std::lower_bound(l.begin() + static_cast<ptrdiff_t>(llo),
                             l.begin() + static_cast<ptrdiff_t>(lhi), v);
  if (wc) wc->comparisons += static_cast<uint64_t>(std::bit_width(lhi - llo + 1));
  size_t pos = static_cast<size_t>(it - l.begin());
  bool found = pos < lhi && l[pos] == v;
  if (a_short) {
    bys_rec(a, slo, mid, b, llo, pos, out, wc);
  } else {
    bys_rec(a, llo, pos, b, slo, mid, out, wc);
  }
  if (found) out.push_back(v);
  size_t lnext = found ? pos + 1 : pos;
  if (a_short) {
    bys_rec(a, mid + 1, shi, b, lnext, lhi, out, wc);
  } else {
    bys_rec(a, lnext, lhi, b, mid + 1, shi, out, wc);
  }
}

}  // namespace

std::vector<uint64_t> bys_intersect(const std::vector<uint64_t>& a,
                                    const std::vector<uint64_t>& b,
                                    WorkCounters* wc) {
  std::vector<uint64_t> out;
  bys_rec(a, 0, a.size(), b, 0, b.size(), out, wc);
  return out;
}

std::vector<uint64_t> multi_intersect(std::vector<std::vector<uint64_t>> lists,
                                      Algorithm alg, WorkCounters* wc) {
  if (lists.size() < 2) throw Error("multi_intersect needs at least two lists");
  std::sort(lists.begin(), lists.end(),
            [](const auto& x, const auto& y) { return x.size() < y.size(); });
  std::vector<uint64_t> cand = std::move(lists[0]);
  for (size_t i = 1; i < lists.size() && !cand.empty(); ++i) {
    switch (alg) {
      case Algorithm::kMerge:
        cand = merge_intersect(cand, lists[i], wc);
        break;
      case Algorithm::kBys:
        cand = bys_intersect(cand, lists[i], wc);
        break;
      default:
        cand = svs_intersect(cand, lists[i], wc);
        break;
    }
  }
  return cand;
}

// ---- grammar skipping ------------------------------------------------------

namespace {

// Position just past the subtree rooted at pos (shape bit there must be 1).
uint64_t subtree_end(const Grammar& g, uint64_t pos) {
  uint64_t expected = 1;
  while (expected) {
    expected += g.shape.get(pos) ? 1 : static_cast<uint64_t>(-1);
    ++pos;
  }
  return pos;
}

}  // namespace

bool skip_search(const CompressedLists& lists, const Grammar& g,
                 size_t list_index, uint64_t d, SkipCursor& cursor,
                 WorkCounters* wc) {
  if (!g.has_skip) throw Error("skip_search requires the skipping grammar");
  uint64_t from = lists.list_ptr[list_index];
  uint64_t span = lists.list_ptr[list_index + 1] - from;
  uint64_t u = g.max_terminal;

  while (true) {
    if (!cursor.stack.empty()) {
      SkipFrame& fr = cursor.stack.back();
      if (fr.pending == 0) {
        cursor.stack.pop_back();
        continue;
      }
      uint64_t pos = fr.next_pos;
      count_cmp(wc);
      if (g.shape.get(pos)) {  // internal node with a phrase sum
        uint64_t sum = g.values[pos - 1];
        if (cursor.sum + sum <= d) {
          uint64_t end = subtree_end(g, pos);
          cursor.sum += sum;
          --fr.pending;
          fr.next_pos = end;
          if (cursor.sum == d) return true;
          continue;
        }
        --fr.pending;
        fr.next_pos = subtree_end(g, pos);
        cursor.stack.push_back({pos + 1, 2});
        continue;
      }
      uint64_t v = g.values[pos - 1];  // leaf: terminal or rule reference
      if (v <= u) {
        if (wc) ++wc->terminals;
        if (cursor.sum + v > d) return false;  // stay before this terminal
        cursor.sum += v;
        --fr.pending;
        fr.next_pos = pos + 1;
        if (cursor.sum == d) return true;
        continue;
      }
      uint64_t npos = v - u;
      uint64_t sum = g.values[npos - 1];
      if (cursor.sum + sum <= d) {
        cursor.sum += sum;
        --fr.pending;
        fr.next_pos = pos + 1;
        if (cursor.sum == d) return true;
        continue;
      }
      --fr.pending;
      fr.next_pos = pos + 1;
      cursor.stack.push_back({npos + 1, 2});
      continue;
    }

    if (cursor.entry >= span) return false;  // past the last value
    uint64_t sym = lists.seq[from + cursor.entry];
    if (wc) ++wc->c_entries;
    count_cmp(wc);
    if (sym <= u) {
      if (wc) ++wc->terminals;
      if (cursor.sum + sym > d) return false;  // entry stays unconsumed
      cursor.sum += sym;
      ++cursor.entry;
      if (cursor.sum == d) return true;
      continue;
    }
    uint64_t pos = sym - u;
    uint64_t sum = g.values[pos - 1];
    if (cursor.sum + sum <= d) {
      cursor.sum += sum;
      ++cursor.entry;
      if (cursor.sum == d) return true;
      continue;
    }
    ++cursor.entry;  // its content continues on the stack
    cursor.stack.push_back({pos + 1, 2});
  }
}

std::vector<uint64_t> repair_intersect(const std::vector<uint64_t>& candidate,
                                       const CompressedLists& lists,
                                       const Grammar& g, size_t list_index,
                                       const CMSamples* cm, const STSamples* st,
                                       WorkCounters* wc) {
  if (!g.has_skip) {
    std::vector<uint64_t> gaps = expand_list(lists, g, list_index);
    if (wc) {
      wc->terminals += gaps.size();
      wc->c_entries += lists.list_ptr[list_index + 1] - lists.list_ptr[list_index];
    }
    uint64_t s = 0;
    for (auto& v : gaps) {
      s += v;
      v = s;
    }
    return merge_intersect(candidate, gaps, wc);
  }

  std::vector<uint64_t> out;
  SkipCursor cur;
  size_t cm_base = 0;  // last positional sample already behind the cursor
  for (uint64_t d : candidate) {
    if (cur.stack.empty()) {
      if (st && st->step > 0 && !st->values.empty()) {
        uint64_t bucket = (d + st->step - 1) / st->step;
        if (bucket > st->values.size()) continue;  // beyond the last value
        uint64_t entry0 = st->ptrs[bucket - 1] - 1;  // 0-based
        if (entry0 > cur.entry) {
          cur.entry = entry0;
          cur.sum = st->values[bucket - 1];
        }
      } else if (cm && cm->step > 0 && !cm->values.empty()) {
        // furthest sample whose value is still < d, found by galloping; a
        // sample equal to d must not be jumped past or the probe misses it
        size_t off = 0;
        while (cm_base + off < cm->values.size() &&
               cm->values[cm_base + off] < d) {
          off = off ? off << 1 : 1;
          count_cmp(wc);
        }
        size_t hi = std::min(cm_base + off, cm->values.size());
        auto it = std::lower_bound(cm->values.begin() + static_cast<ptrdiff_t>(cm_base),
                                   cm->values.begin() + static_cast<ptrdiff_t>(hi), d);
        size_t s = static_cast<size_t>(it - cm->values.begin());
        if (s > 0) {
          cm_base = s - 1;
          uint64_t entry0 = static_cast<uint64_t>(s) * cm->step;  // entries consumed
          if (entry0 > cur.entry) {
            cur.entry = entry0;
            cur.sum = cm->values[s - 1];
          }
        }
      }
    }
    if (skip_search(lists, g, list_index, d, cur, wc)) out.push_back(d);
  }
  return out;
}

// ---- index-level entry points ----------------------------------------------

namespace {

Algorithm resolve(const IndexImage& img, Algorithm alg) {
  auto valid = valid_algorithms(img.repr);
  if (alg == Algorithm::kAuto) {
    return std::find(valid.begin(), valid.end(), Algorithm::kSvs) != valid.end()
               ? Algorithm::kSvs
               : Algorithm::kMerge;
  }
  if (std::find(valid.begin(), valid.end(), alg) == valid.end()) {
    std::string names = "auto";
    for (Algorithm a : valid) names += std::string(", ") + algorithm_name(a);
    throw Error(std::string("algorithm '") + algorithm_name(alg) +
                "' is not usable with representation '" + repr_name(img.repr) +
                "' (valid: " + names + ")");
  }
  return alg;
}

std::vector<uint64_t> expand_counted(const IndexImage& img, uint32_t term,
                                     WorkCounters* wc) {
  std::vector<uint64_t> abs = img.decode_list(term);
  if (wc && repr_is_repair(img.repr)) {
    wc->terminals += abs.size();
    if (img.repair_ix[term] != IndexImage::kNoList) {
      size_t li = img.repair_ix[term];
      wc->c_entries += img.clists.list_ptr[li + 1] - img.clists.list_ptr[li];
    }
  }
  return abs;
}

// Probe values against one term's list, whatever the representation; probes
// must be increasing. Returns the matching probe values.
std::vector<uint64_t> probe_term(const IndexImage& img, uint32_t term,
                                 const std::vector<uint64_t>& probes,
                                 Algorithm alg, WorkCounters* wc) {
  if (repr_is_repair(img.repr) && alg != Algorithm::kMerge) {
    size_t li = img.repair_ix[term];
    if (li == IndexImage::kNoList) return {};
    const CMSamples* cm =
        img.cm.empty() || img.cm[term].step == 0 ? nullptr : &img.cm[term];
    const STSamples* st =
        img.st.empty() || img.st[term].step == 0 ? nullptr : &img.st[term];
    return repair_intersect(probes, img.clists, img.grammar, li, cm, st, wc);
  }
  std::vector<uint64_t> list = expand_counted(img, term, wc);
  switch (alg) {
    case Algorithm::kMerge:
      return merge_intersect(probes, list, wc);
    case Algorithm::kBys:
      return bys_intersect(probes, list, wc);
    default:
      return svs_intersect(probes, list, wc);
  }
}

}  // namespace

std::vector<uint64_t> run_query(const IndexImage& img,
                                const std::vector<uint32_t>& term_ids,
                                Algorithm alg, WorkCounters* wc) {
  if (term_ids.empty()) throw Error("query has no terms");
  alg = resolve(img, alg);
  for (uint32_t t : term_ids) {
    if (t == kAbsentTerm || t > img.term_count()) return {};
  }
  if (term_ids.size() == 1) return expand_counted(img, term_ids[0], wc);

  std::vector<uint32_t> order(term_ids);
  std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
    return img.list_len[x] < img.list_len[y];
  });
  std::vector<uint64_t> cand = expand_counted(img, order[0], wc);
  for (size_t i = 1; i < order.size() && !cand.empty(); ++i) {
    if (order[i] == order[i - 1]) continue;
    cand = probe_term(img, order[i], cand, alg, wc);
  }
  return cand;
}

std::vector<uint64_t> phrase_query(const IndexImage& img,
                                   const std::vector<uint32_t>& term_ids,
                                   Algorithm alg, WorkCounters* wc) {
  if (img.mode != ParsingMode::kPositional) {
    throw Error("phrase queries need a positional index");
  }
  if (term_ids.empty()) throw Error("query has no terms");
  alg = resolve(img, alg);
  for (uint32_t t : term_ids) {
    if (t == kAbsentTerm || t > img.term_count()) return {};
  }
  size_t m = term_ids.size();
  if (m == 1) return expand_counted(img, term_ids[0], wc);

  size_t pivot = 0;
  for (size_t j = 1; j < m; ++j) {
    if (img.list_len[term_ids[j]] < img.list_len[term_ids[pivot]]) pivot = j;
  }
  std::vector<size_t> order;
  for (size_t j = 0; j < m; ++j) {
    if (j != pivot) order.push_back(j);
  }
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return img.list_len[term_ids[x]] < img.list_len[term_ids[y]];
  });

  // candidate values live in the pivot word's position domain
  std::vector<uint64_t> cand = expand_counted(img, term_ids[pivot], wc);
  for (size_t j : order) {
    if (cand.empty()) break;
    int64_t delta = static_cast<int64_t>(j) - static_cast<int64_t>(pivot);
    std::vector<uint64_t> probes;
    probes.reserve(cand.size());
    for (uint64_t q : cand) {
      int64_t p = static_cast<int64_t>(q) + delta;
      if (p >= 1 && p <= static_cast<int64_t>(img.universe)) {
        probes.push_back(static_cast<uint64_t>(p));
      }
    }
    std::vector<uint64_t> hit = probe_term(img, term_ids[j], probes, alg, wc);
    cand.clear();
    for (uint64_t p : hit) cand.push_back(static_cast<uint64_t>(
        static_cast<int64_t>(p) - delta));
  }
  // report positions of the first phrase word
  std::vector<uint64_t> out;
  out.reserve(cand.size());
  for (uint64_t q : cand) {
    int64_t p = static_cast<int64_t>(q) - static_cast<int64_t>(pivot);
    if (p >= 1) out.push_back(static_cast<uint64_t>(p));
  }
  return out;
}

std::vector<DocOffset> translate(const std::vector<uint64_t>& positions,
                                 const std::vector<uint64_t>& doc_starts,
                                 uint64_t total_tokens) {
  if (doc_starts.empty()) throw Error("translate needs the document start table");
  std::vector<DocOffset> out;
  out.reserve(positions.size());
  size_t doc = 0;  // 0-based index of the last translated document
  for (uint64_t p : positions) {
    if (p == 0 || p > total_tokens) {
      throw Error("position beyond the token universe");
    }
    // exponential search forward from the previous hit
    size_t off = 1;
    while (doc + off < doc_starts.size() && doc_starts[doc + off] <= p) off <<= 1;
    size_t lo = doc + (off >> 1);
    size_t hi = std::min(doc + off, doc_starts.size());
    auto it = std::upper_bound(doc_starts.begin() + static_cast<ptrdiff_t>(lo),
                               doc_starts.begin() + static_cast<ptrdiff_t>(hi), p);
    doc = static_cast<size_t>(it - doc_starts.begin()) - 1;
    out.push_back({doc + 1, p - doc_starts[doc] + 1});
  }
  return out;
}

}  // namespace uidx
