#include "uidx/postings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace uidx {

const char* repr_name(Repr r) {
  switch (r) {
    case Repr::kVbyte: return "vbyte";
    case Repr::kRice: return "rice";
    case Repr::kRiceRuns: return "rice-runs";
    case Repr::kSimple9: return "simple9";
    case Repr::kVbyteCM: return "vbyte-cm";
    case Repr::kVbyteST: return "vbyte-st";
    case Repr::kHybridBitmap: return "hybrid-bitmap";
    case Repr::kRepair: return "repair";
    case Repr::kRepairSkip: return "repair-skip";
    case Repr::kRepairSkipCM: return "repair-skip-cm";
    case Repr::kRepairSkipST: return "repair-skip-st";
    case Repr::kVbyteLzend: return "vbyte-lzend";
  }
  return "?";
}

std::vector<Repr> all_reprs() {
  return {Repr::kVbyte,        Repr::kRice,         Repr::kRiceRuns,
          Repr::kSimple9,      Repr::kVbyteCM,      Repr::kVbyteST,
          Repr::kHybridBitmap, Repr::kRepair,       Repr::kRepairSkip,
          Repr::kRepairSkipCM, Repr::kRepairSkipST, Repr::kVbyteLzend};
}

Repr parse_repr(const std::string& name) {
  for (Repr r : all_reprs()) {
    if (name == repr_name(r)) return r;
  }
  std::string valid;
  for (Repr r : all_reprs()) {
    if (!valid.empty()) valid += ", ";
    valid += repr_name(r);
  }
  throw Error("unknown representation '" + name + "' (valid: " + valid + ")");
}

// ---- list construction -----------------------------------------------------

PostingLists build_nonpositional(const Corpus& corpus, const Vocabulary& vocab) {
  PostingLists out;
  out.universe = corpus.documents.size();
  out.lists.assign(vocab.terms.size(), {});
  for (const Document& doc : corpus.documents) {
    std::vector<uint32_t> ids = doc.tokens;
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (uint32_t id : ids) out.lists[id].push_back(doc.doc_id);
  }
  return out;
}

PostingLists build_positional(const Corpus& corpus, const Vocabulary& vocab) {
  if (corpus.mode != ParsingMode::kPositional) {
    throw Error("positional lists need a positionally ingested corpus");
  }
  PostingLists out;
  out.universe = corpus.total_tokens;
  out.lists.assign(vocab.terms.size(), {});
  for (size_t di = 0; di < corpus.documents.size(); ++di) {
    uint64_t start = corpus.doc_starts[di];
    if (di > 0) out.lists[corpus.doc_sep_id].push_back(start - 1);
    const auto& toks = corpus.documents[di].tokens;
    for (size_t i = 0; i < toks.size(); ++i) {
      out.lists[toks[i]].push_back(start + i);
    }
  }
  for (auto& list : out.lists) std::sort(list.begin(), list.end());
  return out;
}

// ---- sampling --------------------------------------------------------------

uint32_t cm_step(uint32_t k, uint64_t list_len) {
  if (list_len < 2) return 0;
  uint32_t lg = static_cast<uint32_t>(std::bit_width(list_len - 1));  // ceil(log2)
  return k * lg;
}

uint64_t st_step(uint64_t universe, uint32_t B, uint64_t list_len) {
  if (list_len == 0) return 0;
  uint64_t ratio = (universe * B + list_len - 1) / list_len;  // ceil(uB/l)
  if (ratio <= 1) return 1;
  return uint64_t{1} << std::bit_width(ratio - 1);  // 2^ceil(log2)
}

void CMSamples::serialize(std::vector<uint8_t>& out) const {
  put_u32(out, step);
  put_u64(out, values.size());
  for (uint64_t v : values) put_u64(out, v);
  put_u8(out, offsets.empty() ? 0 : 1);
  for (uint64_t o : offsets) put_u64(out, o);
}

CMSamples CMSamples::deserialize(ByteReader& in) {
  CMSamples s;
  s.step = in.u32();
  uint64_t n = in.u64();
  s.values.resize(n);
  for (auto& v : s.values) v = in.u64();
  if (in.u8()) {
    s.offsets.resize(n);
    for (auto& o : s.offsets) o = in.u64();
  }
  return s;
}

void STSamples::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, step);
  put_u64(out, values.size());
  for (uint64_t v : values) put_u64(out, v);
  for (uint64_t p : ptrs) put_u64(out, p);
  put_u8(out, elems.empty() ? 0 : 1);
  for (uint64_t e : elems) put_u64(out, e);
}

STSamples STSamples::deserialize(ByteReader& in) {
  STSamples s;
  s.step = in.u64();
  uint64_t n = in.u64();
  s.values.resize(n);
  for (auto& v : s.values) v = in.u64();
  s.ptrs.resize(n);
  for (auto& p : s.ptrs) p = in.u64();
  if (in.u8()) {
    s.elems.resize(n);
    for (auto& e : s.elems) e = in.u64();
  }
  return s;
}

STSamples st_samples_over_C(const CompressedLists& lists, const Grammar& g,
                            size_t list_index, uint64_t step) {
  STSamples out;
  out.step = step;
  uint64_t from = lists.list_ptr[list_index];
  uint64_t to = lists.list_ptr[list_index + 1];
  if (from == to || step == 0) return out;
  // per-entry prefix sums of the expanded values
  std::vector<uint64_t> before;  // absolute value before each entry
  uint64_t s = 0;
  for (uint64_t e = from; e < to; ++e) {
    before.push_back(s);
    s += g.phrase_sum(lists.seq[e]);
  }
  uint64_t last = s;
  uint64_t nbuckets = (last + step - 1) / step;
  uint64_t entry = 0;  // 0-based within the span
  for (uint64_t b = 1; b <= nbuckets; ++b) {
    uint64_t threshold = (b - 1) * step;  // first value > threshold lives here
    while (entry + 1 < before.size() && before[entry + 1] <= threshold) ++entry;
    // before[entry] <= threshold < sum through entry, so the entry holds it
    out.values.push_back(before[entry]);
    out.ptrs.push_back(entry + 1);  // 1-based
  }
  return out;
}

// ---- materialize -----------------------------------------------------------

namespace {

std::vector<uint64_t> to_gaps(const std::vector<uint64_t>& abs) {
  std::vector<uint64_t> gaps(abs.size());
  uint64_t prev = 0;
  for (size_t i = 0; i < abs.size(); ++i) {
    gaps[i] = abs[i] - prev;
    prev = abs[i];
  }
  return gaps;
}

std::vector<uint64_t> to_abs(std::vector<uint64_t> gaps) {
  uint64_t s = 0;
  for (auto& g : gaps) {
    s += g;
    g = s;
  }
  return gaps;
}

CMSamples cm_samples_for_codec(const std::vector<uint64_t>& abs,
                               const std::vector<uint64_t>& gaps, uint32_t k) {
  CMSamples s;
  s.step = cm_step(k, abs.size());
  if (s.step == 0 || abs.size() < 2ull * s.step) {
    s.step = 0;
    return s;
  }
  uint64_t off = 0;
  std::vector<uint8_t> scratch;
  for (size_t i = 0; i < abs.size(); ++i) {
    scratch.clear();
    vbyte_encode_one(gaps[i], scratch);
    off += scratch.size();
    size_t pos = i + 1;  // 1-based
    if (pos % s.step == 0 && pos < abs.size()) {
      s.values.push_back(abs[i]);
      s.offsets.push_back(off);  // relative to the list's span start
    }
  }
  return s;
}

STSamples st_samples_for_codec(const std::vector<uint64_t>& abs,
                               const std::vector<uint64_t>& gaps,
                               uint64_t universe, uint32_t B) {
  STSamples s;
  s.step = st_step(universe, B, abs.size());
  if (abs.empty() || s.step == 0) return s;
  uint64_t nbuckets = (abs.back() + s.step - 1) / s.step;
  // byte offset where element i's code starts
  std::vector<uint64_t> code_off(abs.size() + 1, 0);
  std::vector<uint8_t> scratch;
  for (size_t i = 0; i < gaps.size(); ++i) {
    scratch.clear();
    vbyte_encode_one(gaps[i], scratch);
    code_off[i + 1] = code_off[i] + scratch.size();
  }
  size_t i = 0;
  for (uint64_t b = 1; b <= nbuckets; ++b) {
    uint64_t threshold = (b - 1) * s.step;
    while (i < abs.size() && abs[i] <= threshold) ++i;
    s.values.push_back(i == 0 ? 0 : abs[i - 1]);
    s.ptrs.push_back(code_off[i]);
    s.elems.push_back(i);
  }
  return s;
}

}  // namespace

IndexImage materialize(const PostingLists& lists, const Vocabulary& vocab,
                       const Corpus& corpus, Repr repr, const BuildParams& params) {
  if (repr == Repr::kRiceRuns && corpus.mode == ParsingMode::kPositional) {
    throw Error("rice-runs is a non-positional representation: 1-gap runs do "
                "not arise between word positions");
  }
  uint32_t nterms = vocab.size();
  if (lists.lists.size() != nterms + 1) throw Error("list table / vocabulary mismatch");

  IndexImage img;
  img.mode = corpus.mode;
  img.repr = repr;
  img.params = params;
  img.vocab = vocab;
  img.universe = lists.universe;
  img.doc_count = corpus.documents.size();
  img.total_tokens = corpus.total_tokens;
  img.original_byte_size = corpus.original_byte_size;
  if (corpus.mode == ParsingMode::kPositional) img.doc_starts = corpus.doc_starts;

  img.list_len.assign(nterms + 1, 0);
  img.list_off.assign(nterms + 2, 0);
  img.list_b.assign(nterms + 1, 0);
  img.is_bitmap.assign(nterms + 1, 0);
  img.repair_ix.assign(nterms + 1, IndexImage::kNoList);
  img.bitmap_ix.assign(nterms + 1, IndexImage::kNoList);
  for (uint32_t t = 1; t <= nterms; ++t) img.list_len[t] = lists.lists[t].size();

  bool wants_cm = repr == Repr::kVbyteCM || repr == Repr::kRepairSkipCM;
  bool wants_st = repr == Repr::kVbyteST || repr == Repr::kRepairSkipST;
  if (wants_cm) img.cm.resize(nterms + 1);
  if (wants_st) img.st.resize(nterms + 1);

  switch (repr) {
    case Repr::kVbyte:
    case Repr::kVbyteCM:
    case Repr::kVbyteST: {
      for (uint32_t t = 1; t <= nterms; ++t) {
        const auto& abs = lists.lists[t];
        auto gaps = to_gaps(abs);
        img.list_off[t] = img.payload.size();
        for (uint64_t g : gaps) vbyte_encode_one(g, img.payload);
        if (wants_cm) img.cm[t] = cm_samples_for_codec(abs, gaps, params.k);
        if (wants_st) {
          img.st[t] = st_samples_for_codec(abs, gaps, lists.universe, params.B);
        }
      }
      img.list_off[nterms + 1] = img.payload.size();
      break;
    }
    case Repr::kRice:
    case Repr::kRiceRuns: {
      for (uint32_t t = 1; t <= nterms; ++t) {
        auto gaps = to_gaps(lists.lists[t]);
        unsigned b = params.rice_b >= 0 ? static_cast<unsigned>(params.rice_b)
                                        : rice_pick_b(gaps);
        img.list_b[t] = static_cast<uint8_t>(b);
        img.list_off[t] = img.payload.size();
        auto bytes = repr == Repr::kRice ? rice_encode(gaps, b)
                                         : rice_runs_encode(gaps, b);
        img.payload.insert(img.payload.end(), bytes.begin(), bytes.end());
      }
      img.list_off[nterms + 1] = img.payload.size();
      break;
    }
    case Repr::kSimple9: {
      for (uint32_t t = 1; t <= nterms; ++t) {
        auto gaps = to_gaps(lists.lists[t]);
        img.list_off[t] = img.payload.size();
        for (uint32_t w : simple9_encode(gaps)) put_u32(img.payload, w);
      }
      img.list_off[nterms + 1] = img.payload.size();
      break;
    }
    case Repr::kHybridBitmap: {
      for (uint32_t t = 1; t <= nterms; ++t) {
        const auto& abs = lists.lists[t];
        img.list_off[t] = img.payload.size();
        if (abs.size() * 8 > lists.universe) {  // l > u/8
          img.is_bitmap[t] = 1;
          img.bitmap_ix[t] = img.bitmaps.size();
          std::vector<bool> bits(lists.universe, false);
          for (uint64_t v : abs) bits[v - 1] = true;
          img.bitmaps.emplace_back(bits);
        } else {
          for (uint64_t g : to_gaps(abs)) vbyte_encode_one(g, img.payload);
        }
      }
      img.list_off[nterms + 1] = img.payload.size();
      break;
    }
    case Repr::kRepair:
    case Repr::kRepairSkip:
    case Repr::kRepairSkipCM:
    case Repr::kRepairSkipST: {
      std::vector<std::vector<uint64_t>> gap_lists;
      std::vector<uint32_t> terms;
      for (uint32_t t = 1; t <= nterms; ++t) {
        if (lists.lists[t].empty()) continue;
        img.repair_ix[t] = gap_lists.size();
        terms.push_back(t);
        gap_lists.push_back(to_gaps(lists.lists[t]));
      }
      RepairResult rr = repair_compress(gap_lists, repr != Repr::kRepair);
      img.clists = std::move(rr.lists);
      img.grammar = std::move(rr.grammar);
      if (wants_cm) {
        for (size_t li = 0; li < terms.size(); ++li) {
          uint64_t span = img.clists.list_ptr[li + 1] - img.clists.list_ptr[li];
          uint32_t step = std::max<uint32_t>(1, cm_step(params.k, span));
          if (span < 2ull * step) continue;
          CMSamples& s = img.cm[terms[li]];
          s.step = step;
          uint64_t sum = 0;
          for (uint64_t e = 0; e < span; ++e) {
            sum += img.grammar.phrase_sum(
                img.clists.seq[img.clists.list_ptr[li] + e]);
            if ((e + 1) % step == 0 && e + 1 < span) s.values.push_back(sum);
          }
        }
      }
      if (wants_st) {
        for (size_t li = 0; li < terms.size(); ++li) {
          uint64_t step = st_step(lists.universe, params.B,
                                  lists.lists[terms[li]].size());
          img.st[terms[li]] = st_samples_over_C(img.clists, img.grammar, li, step);
        }
      }
      break;
    }
    case Repr::kVbyteLzend: {
      std::vector<std::vector<uint64_t>> gap_lists;
      for (uint32_t t = 1; t <= nterms; ++t) gap_lists.push_back(to_gaps(lists.lists[t]));
      img.lz = build_vbyte_lzend(gap_lists, params.ds);
      break;
    }
  }
  return img;
}

// ---- decoding --------------------------------------------------------------

std::vector<uint64_t> IndexImage::decode_gaps(uint32_t term) const {
  if (term == 0 || term > term_count()) return {};
  uint64_t count = list_len[term];
  if (count == 0) return {};
  switch (repr) {
    case Repr::kVbyte:
    case Repr::kVbyteCM:
    case Repr::kVbyteST:
      return vbyte_decode(payload.data() + list_off[term],
                          list_off[term + 1] - list_off[term], count);
    case Repr::kRice:
      return rice_decode(payload.data() + list_off[term],
                         list_off[term + 1] - list_off[term], count, list_b[term]);
    case Repr::kRiceRuns:
      return rice_runs_decode(payload.data() + list_off[term],
                              list_off[term + 1] - list_off[term], count,
                              list_b[term]);
    case Repr::kSimple9: {
      size_t nwords = (list_off[term + 1] - list_off[term]) / 4;
      std::vector<uint32_t> words(nwords);
      ByteReader r(payload.data() + list_off[term], nwords * 4);
      for (auto& w : words) w = r.u32();
      return simple9_decode(words.data(), nwords, count);
    }
    case Repr::kHybridBitmap: {
      if (!is_bitmap[term]) {
        return vbyte_decode(payload.data() + list_off[term],
                            list_off[term + 1] - list_off[term], count);
      }
      return to_gaps(decode_list(term));
    }
    case Repr::kRepair:
    case Repr::kRepairSkip:
    case Repr::kRepairSkipCM:
    case Repr::kRepairSkipST:
      return expand_list(clists, grammar, repair_ix[term]);
    case Repr::kVbyteLzend:
      return lz.fetch_list(term - 1);
  }
  throw Error("unreachable representation tag");
}

std::vector<uint64_t> IndexImage::decode_list(uint32_t term) const {
  if (repr == Repr::kHybridBitmap && term >= 1 && term <= term_count() &&
      is_bitmap[term]) {
    const BitVector& bv = bitmaps[bitmap_ix[term]];
    std::vector<uint64_t> abs;
    abs.reserve(list_len[term]);
    for (uint64_t j = 1; j <= bv.ones(); ++j) abs.push_back(bv.select1(j));
    return abs;
  }
  return to_abs(decode_gaps(term));
}

// ---- on-disk format --------------------------------------------------------

namespace {
constexpr uint32_t kSecVocab = 1;
constexpr uint32_t kSecDirectory = 2;
constexpr uint32_t kSecPayload = 3;
constexpr uint32_t kSecSamples = 4;
constexpr uint32_t kSecDocStarts = 5;
constexpr uint8_t kFormatVersion = 1;

struct Sections {
  std::vector<uint8_t> header, vocab, directory, payload, samples, doc_starts;
};

Sections build_sections(const IndexImage& img) {
  Sections s;
  s.header.push_back('U');
  s.header.push_back('I');
  s.header.push_back('D');
  s.header.push_back('X');
  put_u8(s.header, kFormatVersion);
  put_u8(s.header, static_cast<uint8_t>(img.mode));
  put_u8(s.header, static_cast<uint8_t>(img.repr));
  put_u32(s.header, img.params.k);
  put_u32(s.header, img.params.B);
  put_u32(s.header, static_cast<uint32_t>(img.params.rice_b));
  put_u32(s.header, img.params.ds);
  put_u64(s.header, img.universe);
  put_u64(s.header, img.doc_count);
  put_u64(s.header, img.total_tokens);
  put_u64(s.header, img.original_byte_size);

  img.vocab.serialize(s.vocab);

  uint32_t nterms = img.term_count();
  put_u32(s.directory, nterms);
  for (uint32_t t = 1; t <= nterms; ++t) {
    put_u64(s.directory, img.list_len[t]);
    put_u64(s.directory, img.list_off[t]);
    put_u8(s.directory, img.list_b[t]);
    put_u8(s.directory, img.is_bitmap[t]);
    put_u64(s.directory, img.repair_ix[t]);
  }
  put_u64(s.directory, img.list_off[nterms + 1]);

  if (repr_is_repair(img.repr)) {
    img.clists.serialize(s.payload);
    img.grammar.serialize(s.payload);
  } else if (img.repr == Repr::kVbyteLzend) {
    img.lz.serialize(s.payload);
  } else {
    put_u64(s.payload, img.payload.size());
    s.payload.insert(s.payload.end(), img.payload.begin(), img.payload.end());
    if (img.repr == Repr::kHybridBitmap) {
      put_u64(s.payload, img.bitmaps.size());
      for (const BitVector& bv : img.bitmaps) bv.serialize(s.payload);
    }
  }

  if (!img.cm.empty()) {
    for (uint32_t t = 1; t <= nterms; ++t) img.cm[t].serialize(s.samples);
  } else if (!img.st.empty()) {
    for (uint32_t t = 1; t <= nterms; ++t) img.st[t].serialize(s.samples);
  }

  put_u64(s.doc_starts, img.doc_starts.size());
  for (uint64_t v : img.doc_starts) put_u64(s.doc_starts, v);
  return s;
}

}  // namespace

std::vector<uint8_t> IndexImage::serialize() const {
  Sections s = build_sections(*this);
  std::vector<uint8_t> out = s.header;
  put_section(out, kSecVocab, s.vocab);
  put_section(out, kSecDirectory, s.directory);
  put_section(out, kSecPayload, s.payload);
  put_section(out, kSecSamples, s.samples);
  put_section(out, kSecDocStarts, s.doc_starts);
  return out;
}

IndexImage::SectionSizes IndexImage::section_sizes() const {
  Sections s = build_sections(*this);
  SectionSizes z;
  z.header = s.header.size();
  z.vocabulary = s.vocab.size();
  z.directory = s.directory.size();
  z.payload = s.payload.size();
  z.samples = s.samples.size();
  z.doc_starts = s.doc_starts.size();
  return z;
}

IndexImage IndexImage::deserialize(const std::vector<uint8_t>& bytes) {
  ByteReader in(bytes);
  if (in.str(4) != "UIDX") throw Error("not an index image (bad magic)");
  if (in.u8() != kFormatVersion) throw Error("unsupported index format version");
  IndexImage img;
  img.mode = static_cast<ParsingMode>(in.u8());
  img.repr = static_cast<Repr>(in.u8());
  img.params.k = in.u32();
  img.params.B = in.u32();
  img.params.rice_b = static_cast<int32_t>(in.u32());
  img.params.ds = in.u32();
  img.universe = in.u64();
  img.doc_count = in.u64();
  img.total_tokens = in.u64();
  img.original_byte_size = in.u64();

  {
    auto sec = get_section(in, kSecVocab);
    ByteReader r(sec);
    img.vocab = Vocabulary::deserialize(r);
  }
  uint32_t nterms;
  {
    auto sec = get_section(in, kSecDirectory);
    ByteReader r(sec);
    nterms = r.u32();
    img.list_len.assign(nterms + 1, 0);
    img.list_off.assign(nterms + 2, 0);
    img.list_b.assign(nterms + 1, 0);
    img.is_bitmap.assign(nterms + 1, 0);
    img.repair_ix.assign(nterms + 1, kNoList);
    img.bitmap_ix.assign(nterms + 1, kNoList);
    for (uint32_t t = 1; t <= nterms; ++t) {
      img.list_len[t] = r.u64();
      img.list_off[t] = r.u64();
      img.list_b[t] = r.u8();
      img.is_bitmap[t] = r.u8();
      img.repair_ix[t] = r.u64();
    }
    img.list_off[nterms + 1] = r.u64();
  }
  {
    auto sec = get_section(in, kSecPayload);
    ByteReader r(sec);
    if (repr_is_repair(img.repr)) {
      img.clists = CompressedLists::deserialize(r);
      img.grammar = Grammar::deserialize(r);
    } else if (img.repr == Repr::kVbyteLzend) {
      img.lz = VbyteLzendStore::deserialize(r);
    } else {
      uint64_t n = r.u64();
      img.payload.resize(n);
      if (n) r.bytes(img.payload.data(), n);
      if (img.repr == Repr::kHybridBitmap) {
        uint64_t nb = r.u64();
        img.bitmaps.reserve(nb);
        for (uint64_t i = 0; i < nb; ++i) img.bitmaps.push_back(BitVector::deserialize(r));
        uint64_t ix = 0;
        for (uint32_t t = 1; t <= nterms; ++t) {
          if (img.is_bitmap[t]) img.bitmap_ix[t] = ix++;
        }
      }
    }
  }
  {
    auto sec = get_section(in, kSecSamples);
    ByteReader r(sec);
    if (img.repr == Repr::kVbyteCM || img.repr == Repr::kRepairSkipCM) {
      img.cm.resize(nterms + 1);
      for (uint32_t t = 1; t <= nterms; ++t) img.cm[t] = CMSamples::deserialize(r);
    } else if (img.repr == Repr::kVbyteST || img.repr == Repr::kRepairSkipST) {
      img.st.resize(nterms + 1);
      for (uint32_t t = 1; t <= nterms; ++t) img.st[t] = STSamples::deserialize(r);
    }
  }
  {
    auto sec = get_section(in, kSecDocStarts);
    ByteReader r(sec);
    uint64_t n = r.u64();
    img.doc_starts.resize(n);
    for (auto& v : img.doc_starts) v = r.u64();
  }
  return img;
}

void IndexImage::save(const std::string& path) const {
  std::vector<uint8_t> bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write index file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing index file: " + path);
}

IndexImage IndexImage::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace uidx
