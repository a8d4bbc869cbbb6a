#pragma once

#include <cstdint>
#include <vector>

#include "uidx/bitvector.hpp"
#include "uidx/common.hpp"
#include "uidx/io.hpp"

namespace uidx {

/// LZ-End parse of a byte sequence. Phrase p copies the longest admissible
/// source (a substring ending at an earlier phrase's end) and appends one
/// explicit trailing byte. Phrase ends are kept both as a plain array (for
/// fast extraction) and serialized as a gap-coded sparse bitmap.
struct LzEndParse {
  static constexpr uint32_t kNoSource = 0;  // sources are 1-based phrase ids

  std::vector<uint32_t> source;     // per phrase: source phrase id or kNoSource
  std::vector<uint8_t> trailing;    // per phrase: explicit byte
  std::vector<uint64_t> ends;       // per phrase: 1-based end position
  uint64_t n = 0;                   // input length
  uint32_t sample_period = 32;      // sparse-bitmap sampling knob (ds)

  size_t phrase_count() const { return source.size(); }
  uint64_t phrase_start(size_t p) const {  // p is 0-based
    return p == 0 ? 1 : ends[p - 1] + 1;
  }

  /// Extract the original bytes in [i, j], 1-based inclusive.
  std::vector<uint8_t> extract(uint64_t i, uint64_t j) const;

  /// Expand every phrase in order (reconstruction identity check).
  std::vector<uint8_t> reconstruct() const;

  void serialize(std::vector<uint8_t>& out) const;
  static LzEndParse deserialize(ByteReader& in);

 private:
  void fill(uint8_t* dst, uint64_t dst_base, uint64_t i, uint64_t j) const;
};

/// Greedy left-to-right LZ-End parse. Among equally long admissible sources
/// the one with the smallest source-phrase id is taken.
LzEndParse lzend_parse(const std::vector<uint8_t>& bytes, uint32_t sample_period = 32);

/// Vbyte-coded gap lists concatenated and LZ-End-parsed as one sequence.
/// Per-word pointers address the original (uncompressed Vbyte) byte stream.
struct VbyteLzendStore {
  LzEndParse parse;
  std::vector<uint64_t> byte_ptr;  // size words+1, offsets into the Vbyte stream
  std::vector<uint64_t> list_len;  // uncompressed element counts

  std::vector<uint64_t> fetch_list(size_t word_index) const;

  void serialize(std::vector<uint8_t>& out) const;
  static VbyteLzendStore deserialize(ByteReader& in);
};

VbyteLzendStore build_vbyte_lzend(const std::vector<std::vector<uint64_t>>& gap_lists,
                                  uint32_t sample_period);

}  // namespace uidx
