#include "uidx/codecs.hpp"

#include <cmath>

namespace uidx {

// ---- Vbyte -----------------------------------------------------------------

void vbyte_encode_one(uint64_t value, std::vector<uint8_t>& out) {
  while (value >= 128) {
    out.push_back(static_cast<uint8_t>(value & 0x7f));
    value >>= 7;
  }
  out.push_back(static_cast<uint8_t>(value | 0x80));
}

uint64_t vbyte_decode_one(const uint8_t* data, size_t size, size_t& pos) {
  uint64_t value = 0;
  int shift = 0;
  for (;;) {
    if (pos >= size) throw Error("truncated vbyte payload");
    uint8_t b = data[pos++];
    value |= static_cast<uint64_t>(b & 0x7f) << shift;
    if (b & 0x80) return value;
    shift += 7;
    if (shift > 63) throw Error("vbyte code too long");
  }
}

std::vector<uint8_t> vbyte_encode(const std::vector<uint64_t>& gaps) {
  std::vector<uint8_t> out;
  out.reserve(gaps.size() + gaps.size() / 4);
  for (uint64_t g : gaps) vbyte_encode_one(g, out);
  return out;
}

std::vector<uint64_t> vbyte_decode(const uint8_t* data, size_t size, uint64_t count) {
  std::vector<uint64_t> out;
  out.reserve(count);
  size_t pos = 0;
  for (uint64_t i = 0; i < count; ++i) out.push_back(vbyte_decode_one(data, size, pos));
  return out;
}

// ---- Rice ------------------------------------------------------------------

void rice_encode_one(uint64_t gap, unsigned b, BitWriter& bw) {
  if (gap == 0) throw Error("rice gaps must be >= 1");
  uint64_t x = gap - 1;
  uint64_t q = x >> b;
  for (uint64_t i = 0; i < q; ++i) bw.push(false);
  bw.push(true);
  if (b > 0) bw.push_bits(x & ((1ull << b) - 1), static_cast<int>(b));
}

uint64_t rice_decode_one(BitReader& br, unsigned b) {
  uint64_t q = 0;
  while (!br.read()) {
    if (++q > kRiceUnaryLimit) throw Error("corrupt rice stream: unary run too long");
  }
  uint64_t r = b > 0 ? br.read_bits(static_cast<int>(b)) : 0;
  return (q << b) + r + 1;
}

std::vector<uint8_t> rice_encode(const std::vector<uint64_t>& gaps, unsigned b) {
  BitWriter bw;
  for (uint64_t g : gaps) rice_encode_one(g, b, bw);
  return bw.take();
}

std::vector<uint64_t> rice_decode(const uint8_t* data, size_t size, uint64_t count,
                                  unsigned b) {
  BitReader br(data, size);
  std::vector<uint64_t> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) out.push_back(rice_decode_one(br, b));
  return out;
}

unsigned rice_pick_b(const std::vector<uint64_t>& gaps) {
  if (gaps.empty()) return 0;
  long double sum = 0;
  for (uint64_t g : gaps) sum += static_cast<long double>(g);
  long double mean = sum / gaps.size();
  if (mean < 2) return 0;
  unsigned b = static_cast<unsigned>(std::floor(std::log2(static_cast<double>(mean))));
  return b > 30 ? 30u : b;
}

// ---- Rice-Runs -------------------------------------------------------------

std::vector<uint8_t> rice_runs_encode(const std::vector<uint64_t>& gaps, unsigned b) {
  BitWriter bw;
  size_t i = 0;
  while (i < gaps.size()) {
    if (gaps[i] == 1) {
      size_t k = 0;
      while (i + k < gaps.size() && gaps[i + k] == 1) ++k;
      rice_encode_one(1, b, bw);
      rice_encode_one(k, b, bw);
      i += k;
    } else {
      rice_encode_one(gaps[i], b, bw);
      ++i;
    }
  }
  return bw.take();
}

std::vector<uint64_t> rice_runs_decode(const uint8_t* data, size_t size,
                                       uint64_t count, unsigned b) {
  BitReader br(data, size);
  std::vector<uint64_t> out;
  out.reserve(count);
  while (out.size() < count) {
    uint64_t x = rice_decode_one(br, b);
    if (x == 1) {
      uint64_t k = rice_decode_one(br, b);
      if (out.size() + k > count) throw Error("corrupt rice-runs stream: run overflow");
      out.insert(out.end(), k, 1);
    } else {
      out.push_back(x);
    }
  }
  return out;
}

// ---- Simple9 ---------------------------------------------------------------

namespace {
constexpr int kS9Count[9] = {28, 14, 9, 7, 5, 4, 3, 2, 1};
constexpr int kS9Bits[9] = {1, 2, 3, 4, 5, 7, 9, 14, 28};
}  // namespace

std::vector<uint32_t> simple9_encode(const std::vector<uint64_t>& gaps) {
  std::vector<uint32_t> out;
  size_t i = 0;
  while (i < gaps.size()) {
    if (gaps[i] == 0) throw Error("simple9 gaps must be >= 1");
    if (gaps[i] >= kSimple9Escape) {
      if (gaps[i] > 0xffffffffull) throw Error("simple9 gap exceeds 32 bits");
      out.push_back((8u << 28) | static_cast<uint32_t>(kSimple9Escape));
      out.push_back(static_cast<uint32_t>(gaps[i]));
      ++i;
      continue;
    }
    size_t remaining = gaps.size() - i;
    int sel = -1;
    for (int m = 0; m < 9; ++m) {
      size_t cap = static_cast<size_t>(kS9Count[m]);
      if (cap > remaining) continue;
      uint64_t limit = (kS9Bits[m] >= 28) ? kSimple9Escape
                                          : (1ull << kS9Bits[m]);
      bool ok = true;
      for (size_t j = 0; j < cap; ++j) {
        if (gaps[i + j] >= limit) { ok = false; break; }
      }
      if (ok) { sel = m; break; }
    }
    // the 1x28 mode always fits a non-escape value, so a selector exists
    size_t take = static_cast<size_t>(kS9Count[sel]);
    uint32_t word = static_cast<uint32_t>(sel) << 28;
    int shift = 28;
    for (size_t j = 0; j < take; ++j) {
      shift -= kS9Bits[sel];
      word |= static_cast<uint32_t>(gaps[i + j]) << shift;
    }
    out.push_back(word);
    i += take;
  }
  return out;
}

std::vector<uint64_t> simple9_decode(const uint32_t* words, size_t nwords,
                                     uint64_t count) {
  std::vector<uint64_t> out;
  out.reserve(count);
  size_t w = 0;
  while (out.size() < count) {
    if (w >= nwords) throw Error("truncated simple9 payload");
    uint32_t word = words[w++];
    int sel = static_cast<int>(word >> 28);
    if (sel > 8) throw Error("corrupt simple9 selector");
    if (sel == 8) {
      uint32_t v = word & 0x0fffffffu;
      if (v == kSimple9Escape) {
        if (w >= nwords) throw Error("truncated simple9 escape");
        out.push_back(words[w++]);
      } else {
        out.push_back(v);
      }
      continue;
    }
    int bits = kS9Bits[sel];
    int cnt = kS9Count[sel];
    int shift = 28;
    uint32_t mask = (1u << bits) - 1;
    for (int j = 0; j < cnt && out.size() < count; ++j) {
      shift -= bits;
      uint64_t v = (word >> shift) & mask;
      if (v == 0) break;  // zero-filled padding slot
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace uidx
