#include "uidx/lzend.hpp"

#include <algorithm>
#include <cstring>

#include "uidx/codecs.hpp"

namespace uidx {

LzEndParse lzend_parse(const std::vector<uint8_t>& bytes, uint32_t sample_period) {
  if (bytes.empty()) throw Error("lzend parse needs non-empty input");
  LzEndParse parse;
  parse.n = bytes.size();
  parse.sample_period = sample_period;
  uint64_t n = bytes.size();
  std::vector<uint64_t> fail;  // prefix function workspace, reused
  uint64_t i = 1;
  while (i <= n) {
    uint64_t cap = n - i;  // the trailing byte always exists
    uint64_t best_l = 0;
    uint32_t best_src = LzEndParse::kNoSource;
    if (cap > 0 && !parse.ends.empty()) {
      // The longest admissible copy ending at a prior phrase end e is the
      // longest prefix of T[i..i+cap-1] that is a suffix of T[1..e]: exactly
      // the matching automaton's state after scanning T[1..e]. One linear
      // matcher pass over the already parsed prefix covers every end.
      const uint8_t* pat = bytes.data() + (i - 1);
      fail.assign(cap, 0);
      for (uint64_t k = 1; k < cap; ++k) {
        uint64_t m = fail[k - 1];
        while (m > 0 && pat[k] != pat[m]) m = fail[m - 1];
        if (pat[k] == pat[m]) ++m;
        fail[k] = m;
      }
      uint64_t state = 0;
      size_t next_end = 0;
      for (uint64_t e = 1; e < i; ++e) {
        uint8_t c = bytes[e - 1];
        while (state > 0 && (state == cap || c != pat[state])) {
          state = fail[state - 1];
        }
        if (c == pat[state]) ++state;
        if (e == parse.ends[next_end]) {
          if (state > best_l) {
            best_l = state;
            best_src = static_cast<uint32_t>(next_end) + 1;
          }
          if (++next_end == parse.ends.size()) break;
        }
      }
    }
    parse.source.push_back(best_src);
    parse.trailing.push_back(bytes[i + best_l - 1]);
    parse.ends.push_back(i + best_l);
    i += best_l + 1;
  }
  return parse;
}

void LzEndParse::fill(uint8_t* dst, uint64_t map_offset, uint64_t i, uint64_t j) const {
  while (j >= i) {
    size_t p = static_cast<size_t>(
        std::lower_bound(ends.begin(), ends.end(), j) - ends.begin());
    uint64_t end_p = ends[p];
    uint64_t start_p = phrase_start(p);
    if (j == end_p) {
      dst[j - map_offset] = trailing[p];
      if (j == i) return;
      --j;
      continue;
    }
    uint64_t a = std::max(i, start_p);
    uint64_t source_end = ends[source[p] - 1];
    // copy region T[start_p .. end_p-1] mirrors the source suffix ending there
    uint64_t shift = source_end - (end_p - 1);
    fill(dst, map_offset + shift, a + shift, j + shift);
    if (a == i) return;
    j = a - 1;
  }
}

std::vector<uint8_t> LzEndParse::extract(uint64_t i, uint64_t j) const {
  if (i == 0 || i > j || j > n) throw Error("lzend extract range out of bounds");
  std::vector<uint8_t> out(j - i + 1);
  fill(out.data(), i, i, j);
  return out;
}

std::vector<uint8_t> LzEndParse::reconstruct() const {
  return extract(1, n);
}

void LzEndParse::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n);
  put_u64(out, source.size());
  put_u32(out, sample_period);
  // fixed-width source ids
  uint32_t maxs = 0;
  for (uint32_t s : source) maxs = std::max(maxs, s);
  int width = 1;
  while ((maxs >> width) != 0) ++width;
  put_u8(out, static_cast<uint8_t>(width));
  BitWriter bw;
  for (uint32_t s : source) bw.push_bits(s, width);
  put_u64(out, bw.bytes().size());
  out.insert(out.end(), bw.bytes().begin(), bw.bytes().end());
  out.insert(out.end(), trailing.begin(), trailing.end());
  SparseBitmap b(ends, n, sample_period);
  b.serialize(out);
}

LzEndParse LzEndParse::deserialize(ByteReader& in) {
  LzEndParse p;
  p.n = in.u64();
  uint64_t count = in.u64();
  p.sample_period = in.u32();
  int width = in.u8();
  uint64_t nbytes = in.u64();
  std::vector<uint8_t> buf(nbytes);
  if (nbytes) in.bytes(buf.data(), nbytes);
  BitReader br(buf);
  p.source.resize(count);
  for (auto& s : p.source) s = static_cast<uint32_t>(br.read_bits(width));
  p.trailing.resize(count);
  if (count) in.bytes(p.trailing.data(), count);
  SparseBitmap b = SparseBitmap::deserialize(in);
  p.ends = b.decode();
  return p;
}

// ---- VbyteLzendStore -------------------------------------------------------

VbyteLzendStore build_vbyte_lzend(const std::vector<std::vector<uint64_t>>& gap_lists,
                                  uint32_t sample_period) {
  VbyteLzendStore store;
  std::vector<uint8_t> stream;
  for (const auto& list : gap_lists) {
    store.byte_ptr.push_back(stream.size());
    store.list_len.push_back(list.size());
    for (uint64_t g : list) vbyte_encode_one(g, stream);
  }
  store.byte_ptr.push_back(stream.size());
  if (stream.empty()) throw Error("vbyte-lzend store needs at least one posting");
  store.parse = lzend_parse(stream, sample_period);
  return store;
}

std::vector<uint64_t> VbyteLzendStore::fetch_list(size_t word_index) const {
  uint64_t from = byte_ptr[word_index];
  uint64_t to = byte_ptr[word_index + 1];
  if (from == to) return {};
  std::vector<uint8_t> bytes = parse.extract(from + 1, to);
  return vbyte_decode(bytes.data(), bytes.size(), list_len[word_index]);
}

void VbyteLzendStore::serialize(std::vector<uint8_t>& out) const {
  parse.serialize(out);
  put_u64(out, list_len.size());
  for (size_t w = 0; w < list_len.size(); ++w) {
    put_u64(out, byte_ptr[w]);
    put_u64(out, list_len[w]);
  }
  put_u64(out, byte_ptr.back());
}

VbyteLzendStore VbyteLzendStore::deserialize(ByteReader& in) {
  VbyteLzendStore s;
  s.parse = LzEndParse::deserialize(in);
  uint64_t words = in.u64();
  s.byte_ptr.resize(words + 1);
  s.list_len.resize(words);
  for (uint64_t w = 0; w < words; ++w) {
    s.byte_ptr[w] = in.u64();
    s.list_len[w] = in.u64();
  }
  s.byte_ptr[words] = in.u64();
  return s;
}

}  // namespace uidx
