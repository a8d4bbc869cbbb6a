#pragma once

#include <cstdint>
#include <vector>

#include "uidx/bitvector.hpp"
#include "uidx/common.hpp"
#include "uidx/io.hpp"

namespace uidx {

/// Re-Pair dictionary in compact forest form. The forest shape lives in a
/// bitmap (1 = internal node, 0 = leaf) traversed in preorder; leaf values
/// live in an aligned integer sequence. A nonterminal is identified by the
/// position of its 1 in the shape bitmap, and is written as
/// max_terminal + position wherever a symbol can also be a plain gap value.
///
/// Without skipping data the value sequence holds one entry per leaf,
/// addressed by rank0. With skipping data it holds one entry per bitmap
/// position: leaf values at 0s, phrase sums at 1s.
struct Grammar {
  BitVector shape;                 // R_B
  std::vector<uint64_t> values;    // R_S
  bool has_skip = false;
  uint64_t max_terminal = 0;       // u
  uint32_t rule_count = 0;

  bool is_terminal(uint64_t sym) const { return sym <= max_terminal; }
  uint64_t nt_position(uint64_t sym) const { return sym - max_terminal; }

  // Leaf value at a 0-position of the shape bitmap.
  uint64_t leaf_value(uint64_t pos) const {
    return has_skip ? values[pos - 1] : values[shape.rank0(pos) - 1];
  }

  /// Depth-first expansion of a terminal or nonterminal into gap values.
  void expand(uint64_t sym, std::vector<uint64_t>& out) const;
  std::vector<uint64_t> expand(uint64_t sym) const {
    std::vector<uint64_t> out;
    expand(sym, out);
    return out;
  }

  /// Sum of the terminals a symbol expands to. For a terminal this is the
  /// value itself; for nonterminals it requires the skipping variant.
  uint64_t phrase_sum(uint64_t sym) const;

  void serialize(std::vector<uint8_t>& out) const;
  static Grammar deserialize(ByteReader& in);
};

/// The reduced sequence C, concatenated over all lists, with separators
/// already stripped. list_ptr has one entry per list plus a final sentinel;
/// list_len stores uncompressed lengths.
struct CompressedLists {
  std::vector<uint64_t> seq;       // terminals and encoded nonterminals
  std::vector<uint64_t> list_ptr;  // size lists+1, entry offsets into seq
  std::vector<uint64_t> list_len;

  void serialize(std::vector<uint8_t>& out) const;
  static CompressedLists deserialize(ByteReader& in);
};

struct RepairResult {
  CompressedLists lists;
  Grammar grammar;
};

/// Re-Pair over the concatenation of all gap lists, with a unique separator
/// in front of each list so no phrase crosses a list boundary. Ties among
/// equally frequent pairs go to the pair with the smallest symbol sum, then
/// lexicographic (terminals order before nonterminals, nonterminals by
/// creation).
RepairResult repair_compress(const std::vector<std::vector<uint64_t>>& gap_lists,
                             bool with_skip);

/// Expand one list's span of C back into its gap list.
std::vector<uint64_t> expand_list(const CompressedLists& lists, const Grammar& g,
                                  size_t list_index);

}  // namespace uidx
