#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uidx/common.hpp"
#include "uidx/corpus.hpp"
#include "uidx/grammar.hpp"
#include "uidx/postings.hpp"

namespace uidx {

/// Per-query work instrumentation.
struct WorkCounters {
  uint64_t c_entries = 0;   // symbols touched in the reduced sequence
  uint64_t terminals = 0;   // terminal values expanded or compared
  uint64_t comparisons = 0;
};

enum class Algorithm : uint8_t { kAuto = 0, kMerge = 1, kSvs = 2, kBys = 3 };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

// ---- list-level algorithms -------------------------------------------------

std::vector<uint64_t> merge_intersect(const std::vector<uint64_t>& a,
                                      const std::vector<uint64_t>& b,
                                      WorkCounters* wc = nullptr);

/// Probe the longer list for each element of the shorter with exponential
/// search resuming from the last match. Falls back to merge when the length
/// ratio is below the threshold.
std::vector<uint64_t> svs_intersect(const std::vector<uint64_t>& shorter,
                                    const std::vector<uint64_t>& longer,
                                    WorkCounters* wc = nullptr,
                                    uint64_t merge_threshold = 20);

/// Binary search the longer list for the shorter list's median, recursing on
/// both halves.
std::vector<uint64_t> bys_intersect(const std::vector<uint64_t>& a,
                                    const std::vector<uint64_t>& b,
                                    WorkCounters* wc = nullptr);

/// Sort by length, then iteratively intersect the running candidate with the
/// next longer list; an empty candidate short-circuits.
std::vector<uint64_t> multi_intersect(std::vector<std::vector<uint64_t>> lists,
                                      Algorithm alg = Algorithm::kSvs,
                                      WorkCounters* wc = nullptr);

// ---- skipping over grammar-compressed lists --------------------------------

struct SkipFrame {
  uint64_t next_pos = 0;  // next shape-bitmap position to visit
  uint32_t pending = 0;   // sibling subtrees still to visit at this level
};

/// Resumable position inside one list's span of C. entry counts fully
/// consumed top-level entries; sum is the absolute value accumulated so far;
/// frames stay alive across probes so increasing targets keep descending
/// where the last probe stopped.
struct SkipCursor {
  uint64_t entry = 0;
  uint64_t sum = 0;
  std::vector<SkipFrame> stack;
};

/// One membership probe: advance the cursor until the accumulated sum reaches
/// d (found) or provably passes it (absent). Requires the skipping grammar.
bool skip_search(const CompressedLists& lists, const Grammar& g,
                 size_t list_index, uint64_t d, SkipCursor& cursor,
                 WorkCounters* wc = nullptr);

/// Intersect an uncompressed candidate with a grammar-compressed list.
/// Without skip sums the list is fully expanded and merged; with them each
/// candidate value becomes one skip_search probe, optionally fast-forwarded
/// by positional (cm) or domain (st) samples.
std::vector<uint64_t> repair_intersect(const std::vector<uint64_t>& candidate,
                                       const CompressedLists& lists,
                                       const Grammar& g, size_t list_index,
                                       const CMSamples* cm = nullptr,
                                       const STSamples* st = nullptr,
                                       WorkCounters* wc = nullptr);

// ---- index-level entry points ----------------------------------------------

/// Word lookup / conjunctive intersection over a loaded image. Results are
/// doc ids (non-positional) or absolute word positions (positional).
std::vector<uint64_t> run_query(const IndexImage& img,
                                const std::vector<uint32_t>& term_ids,
                                Algorithm alg = Algorithm::kAuto,
                                WorkCounters* wc = nullptr);

/// Positions of the first phrase word starting a full match.
std::vector<uint64_t> phrase_query(const IndexImage& img,
                                   const std::vector<uint32_t>& term_ids,
                                   Algorithm alg = Algorithm::kAuto,
                                   WorkCounters* wc = nullptr);

struct DocOffset {
  uint64_t doc = 0;     // 1-based document id
  uint64_t offset = 0;  // 1-based word offset inside the document
  bool operator==(const DocOffset&) const = default;
};

/// Map increasing absolute positions to (doc, offset) pairs by exponential
/// search from the previous hit.
std::vector<DocOffset> translate(const std::vector<uint64_t>& positions,
                                 const std::vector<uint64_t>& doc_starts,
                                 uint64_t total_tokens);

/// Algorithms usable with a representation; run_query rejects others with an
/// error naming this set.
std::vector<Algorithm> valid_algorithms(Repr repr);

}  // namespace uidx
