#pragma once

#include <cstdint>
#include <vector>

#include "uidx/common.hpp"
#include "uidx/io.hpp"

namespace uidx {

/// Plain bitvector with two-level rank directory (512-bit superblocks over
/// 64-bit words) and binary-search select. Positions are 1-based; immutable
/// once built.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(const std::vector<bool>& bits);

  uint64_t size() const { return n_; }
  bool get(uint64_t pos) const;  // pos in [1, n]

  // Number of b-bits in positions [1, i]; i may be 0.
  uint64_t rank1(uint64_t i) const;
  uint64_t rank0(uint64_t i) const { check_index(i); return i - rank1(i); }
  uint64_t rank(bool b, uint64_t i) const { return b ? rank1(i) : rank0(i); }

  // Smallest position i with rank_b(i) = j; j in [1, rank_b(n)].
  uint64_t select1(uint64_t j) const;
  uint64_t select0(uint64_t j) const;
  uint64_t select(bool b, uint64_t j) const { return b ? select1(j) : select0(j); }

  uint64_t ones() const { return ones_; }

  void serialize(std::vector<uint8_t>& out) const;
  static BitVector deserialize(ByteReader& in);

  bool operator==(const BitVector& o) const {
    return n_ == o.n_ && words_ == o.words_;
  }

 private:
  void build_directory();
  void check_index(uint64_t i) const {
    if (i > n_) throw Error("bitvector index out of range");
  }

  static constexpr uint64_t kSuperblockBits = 512;
  static constexpr uint64_t kWordsPerSuper = kSuperblockBits / 64;

  uint64_t n_ = 0;
  uint64_t ones_ = 0;
  std::vector<uint64_t> words_;
  std::vector<uint64_t> super_;   // cumulative ones before each superblock
  std::vector<uint16_t> block_;   // cumulative ones before each word, within superblock
};

/// Sparse set of 1-positions stored as Vbyte-coded gaps with regular absolute
/// samples. Supports the rank/select interface needed by LZ-End phrase
/// boundaries.
class SparseBitmap {
 public:
  SparseBitmap() = default;
  // positions: strictly increasing 1-based positions of the ones; n: length.
  SparseBitmap(const std::vector<uint64_t>& positions, uint64_t n,
               uint32_t sample_period = 32);

  uint64_t size() const { return n_; }
  uint64_t ones() const { return count_; }

  uint64_t select1(uint64_t j) const;          // j in [1, ones()]
  uint64_t rank1(uint64_t i) const;            // i in [0, n]
  std::vector<uint64_t> decode() const;

  void serialize(std::vector<uint8_t>& out) const;
  static SparseBitmap deserialize(ByteReader& in);

 private:
  uint64_t n_ = 0;
  uint64_t count_ = 0;
  uint32_t period_ = 32;
  std::vector<uint8_t> gaps_;           // Vbyte stream of gaps between ones
  std::vector<uint64_t> sample_pos_;    // absolute position of every period_-th one
  std::vector<uint64_t> sample_off_;    // byte offset into gaps_ for that one
};

}  // namespace uidx
