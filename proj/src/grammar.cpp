#include "uidx/grammar.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

#include "uidx/codecs.hpp"

namespace uidx {

namespace {

// Internal symbol space for the compressor: gap values stay as themselves,
// nonterminal r becomes kNtBase + r, separators are negative.
constexpr int64_t kNtBase = 1ll << 40;

struct PairKey {
  int64_t a, b;
  bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    uint64_t h = static_cast<uint64_t>(k.a) * 0x9e3779b97f4a7c15ull;
    h ^= static_cast<uint64_t>(k.b) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return static_cast<size_t>(h);
  }
};

struct PairRec {
  uint64_t count = 0;
  int64_t head = -1;
  int64_t tail = -1;
};

struct HeapEntry {
  uint64_t count;
  int64_t a, b;
};

struct HeapCmp {
  // max-heap on count; ties go to the pair with the smallest symbol sum,
  // then lexicographic
  bool operator()(const HeapEntry& x, const HeapEntry& y) const {
    if (x.count != y.count) return x.count < y.count;
    if (x.a + x.b != y.a + y.b) return x.a + x.b > y.a + y.b;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

class RepairRunner {
 public:
  explicit RepairRunner(const std::vector<std::vector<uint64_t>>& gap_lists) {
    size_t total = gap_lists.size();
    for (const auto& l : gap_lists) total += l.size();
    sym_.reserve(total);
    for (size_t li = 0; li < gap_lists.size(); ++li) {
      sym_.push_back(-static_cast<int64_t>(li) - 1);
      for (uint64_t g : gap_lists[li]) {
        if (g == 0) throw Error("repair input gaps must be positive");
        max_terminal_ = std::max(max_terminal_, g);
        sym_.push_back(static_cast<int64_t>(g));
      }
    }
    size_t n = sym_.size();
    prv_.resize(n);
    nxt_.resize(n);
    alive_.assign(n, 1);
    reg_.assign(n, 0);
    onext_.assign(n, -1);
    oprev_.assign(n, -1);
    for (size_t i = 0; i < n; ++i) {
      prv_[i] = static_cast<int64_t>(i) - 1;
      nxt_[i] = (i + 1 < n) ? static_cast<int64_t>(i) + 1 : -1;
    }
    for (size_t i = 0; i + 1 < n; ++i) register_occ(static_cast<int64_t>(i));
  }

  void run() {
    while (!heap_.empty()) {
      HeapEntry top = heap_.top();
      heap_.pop();
      auto it = pairs_.find({top.a, top.b});
      if (it == pairs_.end() || it->second.count < 2) continue;
      if (it->second.count != top.count) {
        if (it->second.count < top.count) {
          heap_.push({it->second.count, top.a, top.b});
        }
        continue;
      }
      replace_pair(top.a, top.b);
    }
  }

  uint64_t max_terminal() const { return max_terminal_; }
  const std::vector<std::pair<int64_t, int64_t>>& rules() const { return rules_; }

  // Final sequence with separators stripped; ptr[i] = offset of list i.
  void final_sequence(std::vector<int64_t>& seq, std::vector<uint64_t>& ptr) const {
    if (sym_.empty()) {
      ptr.push_back(0);
      return;
    }
    int64_t i = 0;
    while (i != -1 && !alive_[i]) i = nxt_[i];
    for (; i != -1; i = nxt_[i]) {
      if (sym_[i] < 0) {
        ptr.push_back(seq.size());
      } else {
        seq.push_back(sym_[i]);
      }
    }
    ptr.push_back(seq.size());
  }

 private:
  void register_occ(int64_t i) {
    int64_t j = nxt_[i];
    if (j == -1) return;
    int64_t a = sym_[i], b = sym_[j];
    if (a < 0 || b < 0) return;
    PairRec& rec = pairs_[{a, b}];
    oprev_[i] = rec.tail;
    onext_[i] = -1;
    if (rec.tail != -1) onext_[rec.tail] = i; else rec.head = i;
    rec.tail = i;
    ++rec.count;
    reg_[i] = 1;
    heap_.push({rec.count, a, b});
  }

  void unregister_occ(int64_t i) {
    if (!reg_[i]) return;
    int64_t a = sym_[i], b = sym_[nxt_[i]];
    auto it = pairs_.find({a, b});
    PairRec& rec = it->second;
    if (oprev_[i] != -1) onext_[oprev_[i]] = onext_[i]; else rec.head = onext_[i];
    if (onext_[i] != -1) oprev_[onext_[i]] = oprev_[i]; else rec.tail = oprev_[i];
    --rec.count;
    reg_[i] = 0;
    onext_[i] = oprev_[i] = -1;
  }

  void replace_pair(int64_t a, int64_t b) {
    int64_t s = kNtBase + static_cast<int64_t>(rules_.size());
    rules_.emplace_back(a, b);
    // snapshot: later replacements can invalidate entries (overlapping runs)
    std::vector<int64_t> occs;
    for (int64_t i = pairs_[{a, b}].head; i != -1; i = onext_[i]) occs.push_back(i);
    for (int64_t i : occs) {
      if (!alive_[i] || !reg_[i]) continue;
      int64_t j = nxt_[i];
      if (j == -1 || !alive_[j] || sym_[i] != a || sym_[j] != b) continue;
      int64_t l = prv_[i];
      int64_t r = nxt_[j];
      if (l != -1) unregister_occ(l);
      unregister_occ(i);
      unregister_occ(j);
      sym_[i] = s;
      alive_[j] = 0;
      nxt_[i] = r;
      if (r != -1) prv_[r] = i;
      if (l != -1) register_occ(l);
      register_occ(i);
    }
    pairs_.erase({a, b});
  }

  std::vector<int64_t> sym_;
  std::vector<int64_t> prv_, nxt_;
  std::vector<char> alive_, reg_;
  std::vector<int64_t> onext_, oprev_;
  std::unordered_map<PairKey, PairRec, PairKeyHash> pairs_;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCmp> heap_;
  std::vector<std::pair<int64_t, int64_t>> rules_;
  uint64_t max_terminal_ = 0;
};

// Emit the rule DAG as a preorder forest. Rules are visited in creation
// order; a rule that is referenced by a later rule is hoisted and emitted
// inline at its first encountered use, so every rule's tree appears exactly
// once.
struct ForestBuilder {
  const std::vector<std::pair<int64_t, int64_t>>& rules;
  uint64_t u;
  bool with_skip;
  const std::vector<uint64_t>& sums;  // per rule, used when with_skip

  std::vector<bool> shape;
  std::vector<uint64_t> values;
  std::vector<uint64_t> position;  // 1-based position of each rule's 1
  std::vector<char> emitted;

  void build() {
    size_t nr = rules.size();
    position.assign(nr, 0);
    emitted.assign(nr, 0);
    std::vector<std::vector<uint32_t>> users(nr);
    for (size_t r = 0; r < nr; ++r) {
      auto note = [&](int64_t child) {
        if (child >= kNtBase) users[child - kNtBase].push_back(static_cast<uint32_t>(r));
      };
      note(rules[r].first);
      note(rules[r].second);
    }
    for (size_t r = 0; r < nr; ++r) {
      if (emitted[r]) continue;
      size_t cur = r;
      for (;;) {
        size_t next = cur;
        for (uint32_t usr : users[cur]) {
          if (!emitted[usr]) { next = usr; break; }
        }
        if (next == cur) break;
        cur = next;
      }
      emit_tree(cur);
    }
  }

  void emit_tree(size_t root) {
    struct Frame {
      size_t rule;
      int child;  // 0 = left pending, 1 = right pending, 2 = done
    };
    std::vector<Frame> st;
    open_rule(root);
    st.push_back({root, 0});
    while (!st.empty()) {
      Frame& f = st.back();
      if (f.child == 2) {
        st.pop_back();
        continue;
      }
      int64_t child = f.child == 0 ? rules[f.rule].first : rules[f.rule].second;
      ++f.child;
      if (child < kNtBase) {
        shape.push_back(false);
        values.push_back(static_cast<uint64_t>(child));
      } else {
        size_t cr = static_cast<size_t>(child - kNtBase);
        if (!emitted[cr]) {
          open_rule(cr);
          st.push_back({cr, 0});
        } else {
          shape.push_back(false);
          values.push_back(u + position[cr]);
        }
      }
    }
  }

  void open_rule(size_t r) {
    emitted[r] = 1;
    position[r] = shape.size() + 1;
    shape.push_back(true);
    if (with_skip) values.push_back(sums[r]);
  }
};

void put_fixed_width(std::vector<uint8_t>& out, const std::vector<uint64_t>& vals) {
  uint64_t maxv = 0;
  for (uint64_t v : vals) maxv = std::max(maxv, v);
  int width = 1;
  while ((maxv >> width) != 0) ++width;
  put_u8(out, static_cast<uint8_t>(width));
  put_u64(out, vals.size());
  BitWriter bw;
  for (uint64_t v : vals) bw.push_bits(v, width);
  const auto& bytes = bw.bytes();
  out.insert(out.end(), bytes.begin(), bytes.end());
}

std::vector<uint64_t> get_fixed_width(ByteReader& in) {
  int width = in.u8();
  uint64_t count = in.u64();
  size_t nbytes = (count * width + 7) / 8;
  std::vector<uint8_t> buf(nbytes);
  if (nbytes) in.bytes(buf.data(), nbytes);
  BitReader br(buf);
  std::vector<uint64_t> vals(count);
  for (auto& v : vals) v = br.read_bits(width);
  return vals;
}

}  // namespace

void Grammar::expand(uint64_t sym, std::vector<uint64_t>& out) const {
  if (is_terminal(sym)) {
    out.push_back(sym);
    return;
  }
  struct Frame {
    uint64_t pos;        // next shape position to read
    uint64_t remaining;  // subtrees still to read at this frame
  };
  std::vector<Frame> st;
  uint64_t root = nt_position(sym);
  if (root == 0 || root > shape.size() || !shape.get(root)) {
    throw Error("invalid nonterminal position");
  }
  st.push_back({root, 1});
  while (!st.empty()) {
    Frame& f = st.back();
    if (f.remaining == 0) {
      st.pop_back();
      continue;
    }
    uint64_t pos = f.pos++;
    if (shape.get(pos)) {  // internal node: one subtree becomes two
      ++f.remaining;
      continue;
    }
    uint64_t v = leaf_value(pos);
    --f.remaining;
    if (is_terminal(v)) {
      out.push_back(v);
      continue;
    }
    uint64_t child = nt_position(v);
    if (child == 0 || child > shape.size() || !shape.get(child)) {
      throw Error("invalid nonterminal position");
    }
    st.push_back({child, 1});
  }
}

uint64_t Grammar::phrase_sum(uint64_t sym) const {
  if (is_terminal(sym)) return sym;
  if (!has_skip) throw Error("phrase sums require the skipping variant");
  uint64_t pos = nt_position(sym);
  if (pos == 0 || pos > shape.size() || !shape.get(pos)) {
    throw Error("invalid nonterminal position");
  }
  return values[pos - 1];
}

void Grammar::serialize(std::vector<uint8_t>& out) const {
  put_u64(out, max_terminal);
  put_u32(out, rule_count);
  put_u8(out, has_skip ? 1 : 0);
  shape.serialize(out);
  put_fixed_width(out, values);
}

Grammar Grammar::deserialize(ByteReader& in) {
  Grammar g;
  g.max_terminal = in.u64();
  g.rule_count = in.u32();
  g.has_skip = in.u8() != 0;
  g.shape = BitVector::deserialize(in);
  g.values = get_fixed_width(in);
  return g;
}

void CompressedLists::serialize(std::vector<uint8_t>& out) const {
  put_fixed_width(out, seq);
  put_fixed_width(out, list_ptr);
  put_fixed_width(out, list_len);
}

CompressedLists CompressedLists::deserialize(ByteReader& in) {
  CompressedLists c;
  c.seq = get_fixed_width(in);
  c.list_ptr = get_fixed_width(in);
  c.list_len = get_fixed_width(in);
  return c;
}

RepairResult repair_compress(const std::vector<std::vector<uint64_t>>& gap_lists,
                             bool with_skip) {
  RepairRunner runner(gap_lists);
  runner.run();
  const auto& rules = runner.rules();

  // phrase sums per rule; children are always created before their users
  std::vector<uint64_t> sums(rules.size(), 0);
  for (size_t r = 0; r < rules.size(); ++r) {
    auto part = [&](int64_t child) -> uint64_t {
      return child >= kNtBase ? sums[child - kNtBase]
                              : static_cast<uint64_t>(child);
    };
    sums[r] = part(rules[r].first) + part(rules[r].second);
  }

  uint64_t u = runner.max_terminal();
  ForestBuilder fb{rules, u, with_skip, sums, {}, {}, {}, {}};
  fb.build();

  RepairResult res;
  res.grammar.shape = BitVector(fb.shape);
  res.grammar.values = std::move(fb.values);
  res.grammar.has_skip = with_skip;
  res.grammar.max_terminal = u;
  res.grammar.rule_count = static_cast<uint32_t>(rules.size());

  std::vector<int64_t> seq;
  runner.final_sequence(seq, res.lists.list_ptr);
  res.lists.seq.reserve(seq.size());
  for (int64_t s : seq) {
    res.lists.seq.push_back(s >= kNtBase
                                ? u + fb.position[s - kNtBase]
                                : static_cast<uint64_t>(s));
  }
  res.lists.list_len.reserve(gap_lists.size());
  for (const auto& l : gap_lists) res.lists.list_len.push_back(l.size());
  return res;
}

std::vector<uint64_t> expand_list(const CompressedLists& lists, const Grammar& g,
                                  size_t list_index) {
  std::vector<uint64_t> out;
  out.reserve(lists.list_len[list_index]);
  for (uint64_t i = lists.list_ptr[list_index]; i < lists.list_ptr[list_index + 1];
       ++i) {
    g.expand(lists.seq[i], out);
  }
  return out;
}

}  // namespace uidx
