#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "uidx/common.hpp"

namespace uidx {

// Little-endian primitives used by every serialized section.

inline void put_u8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<uint8_t>& buf)
      : data_(buf.data()), size_(buf.size()) {}

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
    return v;
  }
  void bytes(uint8_t* dst, size_t n) {
    need(n);
    std::memcpy(dst, data_ + pos_, n);
    pos_ += n;
  }
  std::string str(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  size_t remaining() const { return size_ - pos_; }
  size_t pos() const { return pos_; }

 private:
  void need(size_t n) const {
    if (pos_ + n > size_) throw Error("truncated input while deserializing");
  }
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

// Length-prefixed section framing: u32 tag, u64 byte length, payload.
inline void put_section(std::vector<uint8_t>& out, uint32_t tag,
                        const std::vector<uint8_t>& payload) {
  put_u32(out, tag);
  put_u64(out, payload.size());
  out.insert(out.end(), payload.begin(), payload.end());
}

inline std::vector<uint8_t> get_section(ByteReader& in, uint32_t expect_tag) {
  uint32_t tag = in.u32();
  if (tag != expect_tag) throw Error("unexpected section tag");
  uint64_t len = in.u64();
  std::vector<uint8_t> payload(len);
  if (len > 0) in.bytes(payload.data(), len);
  return payload;
}

}  // namespace uidx
