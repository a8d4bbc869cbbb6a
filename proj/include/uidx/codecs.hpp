#pragma once

#include <cstdint>
#include <vector>

#include "uidx/common.hpp"

namespace uidx {

// Bit streams are MSB-first within bytes.
class BitWriter {
 public:
  void push(bool bit) {
    if (fill_ == 0) buf_.push_back(0);
    if (bit) buf_.back() |= static_cast<uint8_t>(1u << (7 - fill_));
    fill_ = (fill_ + 1) & 7;
  }
  void push_bits(uint64_t value, int width) {
    for (int i = width - 1; i >= 0; --i) push((value >> i) & 1);
  }
  uint64_t bit_count() const { return buf_.size() * 8 - (fill_ ? 8 - fill_ : 0); }
  const std::vector<uint8_t>& bytes() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<uint8_t> buf_;
  unsigned fill_ = 0;
};

class BitReader {
 public:
  BitReader(const uint8_t* data, size_t size_bytes)
      : data_(data), nbits_(size_bytes * 8) {}
  explicit BitReader(const std::vector<uint8_t>& buf)
      : data_(buf.data()), nbits_(buf.size() * 8) {}

  bool read() {
    if (pos_ >= nbits_) throw Error("bit stream exhausted");
    bool b = (data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return b;
  }
  uint64_t read_bits(int width) {
    uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (read() ? 1 : 0);
    return v;
  }
  uint64_t position() const { return pos_; }

 private:
  const uint8_t* data_;
  uint64_t nbits_;
  uint64_t pos_ = 0;
};

// ---- Vbyte -----------------------------------------------------------------
// 7-bit chunks, least-significant chunk first; the final byte has its high
// bit set, all earlier bytes have it clear.

void vbyte_encode_one(uint64_t value, std::vector<uint8_t>& out);
uint64_t vbyte_decode_one(const uint8_t* data, size_t size, size_t& pos);

std::vector<uint8_t> vbyte_encode(const std::vector<uint64_t>& gaps);
std::vector<uint64_t> vbyte_decode(const uint8_t* data, size_t size, uint64_t count);

// ---- Rice ------------------------------------------------------------------
// Gap x >= 1 is coded as unary((x-1) >> b) followed by the low b bits of x-1.
// Unary q is q zeros followed by a one.

constexpr uint64_t kRiceUnaryLimit = 1ull << 24;

void rice_encode_one(uint64_t gap, unsigned b, BitWriter& bw);
uint64_t rice_decode_one(BitReader& br, unsigned b);

std::vector<uint8_t> rice_encode(const std::vector<uint64_t>& gaps, unsigned b);
std::vector<uint64_t> rice_decode(const uint8_t* data, size_t size, uint64_t count,
                                  unsigned b);

// Per-list parameter: floor(log2(mean gap)) clamped to [0, 30].
unsigned rice_pick_b(const std::vector<uint64_t>& gaps);

// ---- Rice-Runs -------------------------------------------------------------
// A maximal run of k gaps equal to 1 is coded as Rice(1) Rice(k); everything
// else is plain Rice.

std::vector<uint8_t> rice_runs_encode(const std::vector<uint64_t>& gaps, unsigned b);
std::vector<uint64_t> rice_runs_decode(const uint8_t* data, size_t size,
                                       uint64_t count, unsigned b);

// ---- Simple9 ---------------------------------------------------------------
// 32-bit words; selector in the top 4 bits, values 0..8 in density order
// (28x1, 14x2, 9x3, 7x4, 5x5, 4x7, 3x9, 2x14, 1x28). Gaps >= 2^28-1 use the
// escape value 2^28-1 in a 1x28 slot followed by one raw 32-bit word.

constexpr uint64_t kSimple9Escape = (1ull << 28) - 1;

std::vector<uint32_t> simple9_encode(const std::vector<uint64_t>& gaps);
std::vector<uint64_t> simple9_decode(const uint32_t* words, size_t nwords,
                                     uint64_t count);

}  // namespace uidx
