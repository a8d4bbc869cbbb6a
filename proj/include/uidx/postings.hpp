#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uidx/bitvector.hpp"
#include "uidx/codecs.hpp"
#include "uidx/common.hpp"
#include "uidx/corpus.hpp"
#include "uidx/grammar.hpp"
#include "uidx/io.hpp"
#include "uidx/lzend.hpp"

namespace uidx {

enum class Repr : uint8_t {
  kVbyte = 0,
  kRice = 1,
  kRiceRuns = 2,
  kSimple9 = 3,
  kVbyteCM = 4,
  kVbyteST = 5,
  kHybridBitmap = 6,
  kRepair = 7,
  kRepairSkip = 8,
  kRepairSkipCM = 9,
  kRepairSkipST = 10,
  kVbyteLzend = 11,
};

const char* repr_name(Repr r);
Repr parse_repr(const std::string& name);
std::vector<Repr> all_reprs();

inline bool repr_is_repair(Repr r) {
  return r == Repr::kRepair || r == Repr::kRepairSkip ||
         r == Repr::kRepairSkipCM || r == Repr::kRepairSkipST;
}

struct BuildParams {
  uint32_t k = 4;        // CM sampling multiplier
  uint32_t B = 16;       // ST bucket load
  int rice_b = -1;       // forced Rice parameter, -1 = per-list automatic
  uint32_t ds = 32;      // sparse-bitmap / LZ-End sampling period
};

/// Absolute posting lists indexed by term id (entry 0 unused).
struct PostingLists {
  std::vector<std::vector<uint64_t>> lists;
  uint64_t universe = 0;
};

PostingLists build_nonpositional(const Corpus& corpus, const Vocabulary& vocab);
PostingLists build_positional(const Corpus& corpus, const Vocabulary& vocab);

/// Regular positional samples of one list: entry s covers list position
/// (s+1)*step; value = absolute list value there, offset = payload byte offset
/// where decoding of the following element resumes.
struct CMSamples {
  uint32_t step = 0;
  std::vector<uint64_t> values;
  std::vector<uint64_t> offsets;  // bytes for codec lists, empty for C entries

  void serialize(std::vector<uint8_t>& out) const;
  static CMSamples deserialize(ByteReader& in);
};

/// Domain samples of one list: the universe is cut into buckets of a
/// power-of-two step; bucket b covers values in ((b-1)*step, b*step]. Each
/// sample holds the state just before the first element larger than
/// (b-1)*step: absolute value, payload pointer, and elements consumed.
struct STSamples {
  uint64_t step = 0;
  std::vector<uint64_t> values;
  std::vector<uint64_t> ptrs;   // byte offset (codec) or 1-based C entry index
  std::vector<uint64_t> elems;  // elements before the sample point (codec only)

  void serialize(std::vector<uint8_t>& out) const;
  static STSamples deserialize(ByteReader& in);
};

uint32_t cm_step(uint32_t k, uint64_t list_len);
uint64_t st_step(uint64_t universe, uint32_t B, uint64_t list_len);

/// Domain samples over one list's span of C: pairs (absolute value preceding
/// the entry, 1-based entry index), one per bucket up to the list's last value.
STSamples st_samples_over_C(const CompressedLists& lists, const Grammar& g,
                            size_t list_index, uint64_t step);

/// A persisted index under one representation.
struct IndexImage {
  ParsingMode mode = ParsingMode::kNonPositional;
  Repr repr = Repr::kVbyte;
  BuildParams params;
  Vocabulary vocab;
  uint64_t universe = 0;
  uint64_t doc_count = 0;
  uint64_t total_tokens = 0;
  uint64_t original_byte_size = 0;
  std::vector<uint64_t> doc_starts;  // positional mode only

  // directory (per term id; entry 0 unused)
  std::vector<uint64_t> list_len;
  std::vector<uint64_t> list_off;   // byte offset into payload (codec forms)
  std::vector<uint8_t> list_b;      // per-list Rice parameter
  std::vector<uint8_t> is_bitmap;   // hybrid form
  std::vector<uint64_t> repair_ix;  // index into the grammar's list table, or kNoList

  static constexpr uint64_t kNoList = ~0ull;

  // payloads; exactly the ones the representation needs are populated
  std::vector<uint8_t> payload;
  std::vector<BitVector> bitmaps;        // hybrid, in term-id order
  std::vector<uint64_t> bitmap_ix;       // per term: index into bitmaps or kNoList
  CompressedLists clists;
  Grammar grammar;
  VbyteLzendStore lz;
  std::vector<CMSamples> cm;             // per term id
  std::vector<STSamples> st;             // per term id

  uint32_t term_count() const { return vocab.size(); }
  uint64_t length(uint32_t term) const { return term ? list_len[term] : 0; }

  /// Absolute values of one term's list, whatever the representation.
  std::vector<uint64_t> decode_list(uint32_t term) const;
  /// The d-gap form (first element absolute).
  std::vector<uint64_t> decode_gaps(uint32_t term) const;

  std::vector<uint8_t> serialize() const;
  static IndexImage deserialize(const std::vector<uint8_t>& bytes);
  void save(const std::string& path) const;
  static IndexImage load(const std::string& path);

  struct SectionSizes {
    uint64_t header = 0, vocabulary = 0, directory = 0, payload = 0,
             samples = 0, doc_starts = 0;
    uint64_t total() const {
      return header + vocabulary + directory + payload + samples + doc_starts;
    }
    // bytes that vary with the representation
    uint64_t representation() const { return payload + samples; }
  };
  SectionSizes section_sizes() const;
};

/// Encode the posting lists under one representation.
IndexImage materialize(const PostingLists& lists, const Vocabulary& vocab,
                       const Corpus& corpus, Repr repr, const BuildParams& params);

}  // namespace uidx
