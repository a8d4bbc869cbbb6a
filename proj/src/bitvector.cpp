#include "uidx/bitvector.hpp"

#include <bit>

#include "uidx/codecs.hpp"

namespace uidx {

BitVector::BitVector(const std::vector<bool>& bits) : n_(bits.size()) {
  words_.assign((n_ + 63) / 64, 0);
  for (uint64_t p = 0; p < n_; ++p) {
    if (bits[p]) words_[p / 64] |= 1ull << (p % 64);
  }
  build_directory();
}

void BitVector::build_directory() {
  size_t nwords = words_.size();
  super_.assign((nwords + kWordsPerSuper - 1) / kWordsPerSuper + 1, 0);
  block_.assign(nwords, 0);
  uint64_t total = 0;
  for (size_t w = 0; w < nwords; ++w) {
    if (w % kWordsPerSuper == 0) super_[w / kWordsPerSuper] = total;
    block_[w] = static_cast<uint16_t>(total - super_[w / kWordsPerSuper]);
    total += std::popcount(words_[w]);
  }
  super_.back() = total;
  ones_ = total;
}

bool BitVector::get(uint64_t pos) const {
  if (pos == 0 || pos > n_) throw Error("bitvector index out of range");
  uint64_t p = pos - 1;
  return (words_[p / 64] >> (p % 64)) & 1;
}

uint64_t BitVector::rank1(uint64_t i) const {
  check_index(i);
  if (i == 0) return 0;
  uint64_t p = i - 1;  // last included bit, 0-based
  uint64_t w = p / 64;
  uint64_t r = super_[w / kWordsPerSuper] + block_[w];
  uint64_t mask = (p % 64 == 63) ? ~0ull : ((1ull << (p % 64 + 1)) - 1);
  return r + std::popcount(words_[w] & mask);
}

uint64_t BitVector::select1(uint64_t j) const {
  if (j == 0 || j > ones_) throw Error("select1 argument out of range");
  // superblock
  size_t lo = 0, hi = super_.size() - 1;
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (super_[mid] < j) lo = mid; else hi = mid;
  }
  uint64_t rem = j - super_[lo];
  size_t w = lo * kWordsPerSuper;
  size_t wend = std::min(words_.size(), w + kWordsPerSuper);
  while (w + 1 < wend && block_[w + 1] < rem) ++w;
  rem -= block_[w];
  uint64_t word = words_[w];
  for (int b = 0; b < 64; ++b) {
    if ((word >> b) & 1) {
      if (--rem == 0) return w * 64 + b + 1;
    }
  }
  throw Error("select1 internal error");
}

uint64_t BitVector::select0(uint64_t j) const {
  if (j == 0 || j > n_ - ones_) throw Error("select0 argument out of range");
  // binary search on rank0
  uint64_t lo = 1, hi = n_;
  while (lo < hi) {
    uint64_t mid = lo + (hi - lo) / 2;
    if (rank0(mid) < j) lo = mid + 1; else hi = mid;
  }
  return lo;
}

void BitVector::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n_);
  for (uint64_t w : words_) put_u64(out, w);
}

BitVector BitVector::deserialize(ByteReader& in) {
  BitVector bv;
  bv.n_ = in.u64();
  bv.words_.resize((bv.n_ + 63) / 64);
  for (auto& w : bv.words_) w = in.u64();
  bv.build_directory();
  return bv;
}

// ---- SparseBitmap ----------------------------------------------------------

SparseBitmap::SparseBitmap(const std::vector<uint64_t>& positions, uint64_t n,
                           uint32_t sample_period)
    : n_(n), count_(positions.size()), period_(sample_period ? sample_period : 32) {
  uint64_t prev = 0;
  for (size_t i = 0; i < positions.size(); ++i) {
    uint64_t p = positions[i];
    if (p <= prev || p > n) throw Error("sparse bitmap positions must be increasing");
    if (i % period_ == 0) {
      sample_pos_.push_back(p);
      sample_off_.push_back(gaps_.size());
    }
    vbyte_encode_one(p - prev, gaps_);
    prev = p;
  }
}

uint64_t SparseBitmap::select1(uint64_t j) const {
  if (j == 0 || j > count_) throw Error("sparse select1 out of range");
  size_t s = (j - 1) / period_;
  size_t pos = sample_off_[s];
  uint64_t idx = s * period_ + 1;
  size_t bpos = pos;
  uint64_t first = vbyte_decode_one(gaps_.data(), gaps_.size(), bpos);
  uint64_t value = sample_pos_[s];
  (void)first;
  while (idx < j) {
    value += vbyte_decode_one(gaps_.data(), gaps_.size(), bpos);
    ++idx;
  }
  return value;
}

uint64_t SparseBitmap::rank1(uint64_t i) const {
  if (i > n_) throw Error("sparse rank1 out of range");
  if (count_ == 0 || i == 0) return 0;
  // binary search over samples, then scan one block
  size_t lo = 0, hi = sample_pos_.size();
  while (lo < hi) {  // first sample with pos > i
    size_t mid = (lo + hi) / 2;
    if (sample_pos_[mid] <= i) lo = mid + 1; else hi = mid;
  }
  if (lo == 0) return 0;
  size_t s = lo - 1;
  size_t bpos = sample_off_[s];
  uint64_t value = 0;
  uint64_t r = s * period_;
  for (uint32_t k = 0; k < period_ && r < count_; ++k) {
    value += vbyte_decode_one(gaps_.data(), gaps_.size(), bpos);
    if (k == 0) value = sample_pos_[s];
    if (value > i) return r;
    ++r;
    if (bpos >= gaps_.size()) break;
  }
  return r;
}

std::vector<uint64_t> SparseBitmap::decode() const {
  std::vector<uint64_t> out;
  out.reserve(count_);
  size_t bpos = 0;
  uint64_t value = 0;
  for (uint64_t i = 0; i < count_; ++i) {
    value += vbyte_decode_one(gaps_.data(), gaps_.size(), bpos);
    out.push_back(value);
  }
  return out;
}

void SparseBitmap::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, n_);
  put_u64(out, count_);
  put_u32(out, period_);
  put_u64(out, gaps_.size());
  out.insert(out.end(), gaps_.begin(), gaps_.end());
  put_u64(out, sample_pos_.size());
  for (size_t i = 0; i < sample_pos_.size(); ++i) {
    put_u64(out, sample_pos_[i]);
    put_u64(out, sample_off_[i]);
  }
}

SparseBitmap SparseBitmap::deserialize(ByteReader& in) {
  SparseBitmap sb;
  sb.n_ = in.u64();
  sb.count_ = in.u64();
  sb.period_ = in.u32();
  uint64_t gbytes = in.u64();
  sb.gaps_.resize(gbytes);
  if (gbytes) in.bytes(sb.gaps_.data(), gbytes);
  uint64_t ns = in.u64();
  sb.sample_pos_.resize(ns);
  sb.sample_off_.resize(ns);
  for (uint64_t i = 0; i < ns; ++i) {
    sb.sample_pos_[i] = in.u64();
    sb.sample_off_[i] = in.u64();
  }
  return sb;
}

}  // namespace uidx
