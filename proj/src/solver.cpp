#include "coins/solver.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstring>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace coins {

namespace {

// ------------------------------------------------------------- small utils

// True iff s > 3^t (t may be large; the product saturates safely).
bool exceeds_pow3(std::uint64_t s, int t) {
  std::uint64_t v = 1;
  while (t-- > 0) {
    if (v >= s) return false;  // 3^t only grows
    v *= 3;                    // s <= 2^64/3 here, so no overflow
  }
  return s > v;
}

void append_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>(v >> 8));
}

void append_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_u64(std::string& s, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

// --------------------------------------------------------- slot structure
//
// Within one set, call two coins interchangeable when exactly the same
// rest-of-tuple combinations of D appear with either of them. Swapping two
// such coins maps D onto itself, so any weighing is equivalent (up to that
// relabeling) to one using only the first few coins of each class. Coins in
// no member of D at all are known genuine; which of them pads a pan can
// never matter, so they pool into a single ballast class across sets.
//
// Interchangeability also factors D completely: whether a tuple belongs to
// D depends only on which class its pick falls in per set (swap one
// coordinate at a time), so D is exactly a union of class-product cells.
// build_slots checks that product form by cardinality and the solver leans
// on it for both weighing enumeration and canonical memo keys.

struct SlotStructure {
  // per set (0-based): each class as an ascending list of coin indices
  std::vector<std::vector<std::vector<std::uint16_t>>> classes;
  std::vector<CoinId> ballast;                       // pooled, sorted
  std::vector<std::vector<std::uint16_t>> cells;     // distinct class vectors
};

SlotStructure build_slots(const CandidateSet& d) {
  const Instance& inst = d.instance();
  std::size_t m = inst.set_count();
  std::vector<Candidate> members;
  members.reserve(d.size());
  std::vector<std::uint64_t> ranks = d.members();
  for (std::uint64_t r : ranks) members.push_back(d.decode(r));

  // Row-major strides, last set fastest (matches CandidateSet encoding).
  std::vector<std::uint64_t> stride(m, 1);
  for (std::size_t i = m; i-- > 1;)
    stride[i - 1] = stride[i] * inst.set_size(i + 1);

  SlotStructure s;
  s.classes.resize(m);
  std::vector<std::vector<std::uint16_t>> class_of(m);  // coin -> class id
  for (std::size_t i = 0; i < m; ++i) {
    // Fiber of coin c in set i: the member ranks with coordinate i erased.
    std::map<std::uint32_t, std::vector<std::uint64_t>> fiber;
    for (std::size_t k = 0; k < members.size(); ++k) {
      std::uint32_t c = members[k].pick[i];
      fiber[c].push_back(ranks[k] - std::uint64_t(c - 1) * stride[i]);
    }
    std::map<std::vector<std::uint64_t>, std::vector<std::uint16_t>> groups;
    for (auto& [coin, rest] : fiber) {
      std::sort(rest.begin(), rest.end());
      groups[rest].push_back(static_cast<std::uint16_t>(coin));
    }
    // Deterministic class order: by smallest coin index.
    std::vector<std::vector<std::uint16_t>> cls;
    for (auto& [rest, coins] : groups) cls.push_back(coins);
    std::sort(cls.begin(), cls.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    class_of[i].assign(inst.set_size(i + 1) + 1, 0xFFFF);
    for (std::size_t c = 0; c < cls.size(); ++c)
      for (std::uint16_t coin : cls[c])
        class_of[i][coin] = static_cast<std::uint16_t>(c);
    for (std::uint32_t coin = 1; coin <= inst.set_size(i + 1); ++coin)
      if (class_of[i][coin] == 0xFFFF)
        s.ballast.push_back(CoinId{static_cast<std::uint16_t>(i + 1),
                                   static_cast<std::uint16_t>(coin)});
    s.classes[i] = std::move(cls);
  }

  std::set<std::vector<std::uint16_t>> cells;
  for (const Candidate& x : members) {
    std::vector<std::uint16_t> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = class_of[i][x.pick[i]];
    cells.insert(std::move(v));
  }
  s.cells.assign(cells.begin(), cells.end());

  // Consistency of the product form: the cells must tile D exactly.
  std::uint64_t tiled = 0;
  for (const auto& v : s.cells) {
    std::uint64_t cell = 1;
    for (std::size_t i = 0; i < m; ++i) cell *= s.classes[i][v[i]].size();
    tiled += cell;
  }
  if (tiled != d.size())
    throw std::logic_error("interchange classes failed to tile the set");
  return s;
}

// ---------------------------------------------------------- canonical key
//
// Encode (set sizes, class sizes, cell tensor) minimally over the allowed
// relabelings: permuting classes within a set and permuting equal-size sets.
// A short color refinement prunes the permutations; if too many remain the
// key falls back to the exact mask form (prefix 'R'), which can only split
// memo classes, never merge wrong ones.

constexpr std::uint64_t kMaxLabelings = 10'000;

struct ClassRef {
  std::uint16_t set;   // 0-based
  std::uint16_t idx;   // class index within the set
};

std::string encode_canonical(
    const SlotStructure& s, const Instance& inst,
    const std::vector<std::size_t>& set_order,
    const std::vector<std::vector<std::uint16_t>>& class_rank) {
  std::string out;
  out.push_back('C');
  append_u16(out, static_cast<std::uint16_t>(set_order.size()));
  for (std::size_t i : set_order) {
    append_u32(out, inst.set_size(i + 1));
    append_u16(out, static_cast<std::uint16_t>(s.classes[i].size()));
    // class sizes in relabeled order
    std::vector<std::uint32_t> sizes(s.classes[i].size());
    for (std::size_t c = 0; c < s.classes[i].size(); ++c)
      sizes[class_rank[i][c]] = static_cast<std::uint32_t>(s.classes[i][c].size());
    for (std::uint32_t v : sizes) append_u32(out, v);
  }
  std::vector<std::vector<std::uint16_t>> cells;
  cells.reserve(s.cells.size());
  for (const auto& v : s.cells) {
    std::vector<std::uint16_t> w(set_order.size());
    for (std::size_t j = 0; j < set_order.size(); ++j)
      w[j] = class_rank[set_order[j]][v[set_order[j]]];
    cells.push_back(std::move(w));
  }
  std::sort(cells.begin(), cells.end());
  append_u64(out, cells.size());
  for (const auto& w : cells)
    for (std::uint16_t v : w) append_u16(out, v);
  return out;
}

std::string raw_key(const CandidateSet& d) {
  std::string out;
  out.push_back('R');
  append_u16(out, static_cast<std::uint16_t>(d.instance().set_count()));
  for (std::uint32_t n : d.instance().sizes()) append_u32(out, n);
  for (std::uint64_t w : d.mask_words()) append_u64(out, w);
  return out;
}

std::string canonical_key_impl(const CandidateSet& d, const SlotStructure& s,
                               bool* fell_back) {
  const Instance& inst = d.instance();
  std::size_t m = inst.set_count();

  // --- color refinement over classes ---------------------------------
  // color 0: class size. Each round appends, per class, the sorted list of
  // signatures of the cells it appears in (a cell's signature is the sorted
  // (set size, color) list of its other coordinates). All of it is invariant
  // under the allowed relabelings.
  std::vector<std::vector<std::uint32_t>> color(m);
  std::size_t total_classes = 0;
  for (std::size_t i = 0; i < m; ++i) {
    color[i].resize(s.classes[i].size());
    total_classes += s.classes[i].size();
  }
  {
    // Number the distinct class sizes in ascending order — discovery order
    // would leak the arbitrary class enumeration into the key.
    std::map<std::uint64_t, std::uint32_t> dense;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < s.classes[i].size(); ++c)
        dense.emplace(s.classes[i][c].size(), 0);
    std::uint32_t next = 0;
    for (auto& [size, col] : dense) col = next++;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < s.classes[i].size(); ++c)
        color[i][c] = dense.at(s.classes[i][c].size());
  }
  for (std::size_t round = 0, colors_before = 0; round < total_classes; ++round) {
    using Sig = std::pair<std::uint32_t, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>>;
    std::map<Sig, std::vector<ClassRef>> buckets;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c < s.classes[i].size(); ++c) {
        std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> sig;
        for (const auto& v : s.cells) {
          if (v[i] != c) continue;
          std::vector<std::pair<std::uint32_t, std::uint32_t>> cell_sig;
          for (std::size_t j = 0; j < m; ++j)
            if (j != i)
              cell_sig.emplace_back(inst.set_size(j + 1), color[j][v[j]]);
          std::sort(cell_sig.begin(), cell_sig.end());
          sig.push_back(std::move(cell_sig));
        }
        std::sort(sig.begin(), sig.end());
        buckets[{color[i][c], std::move(sig)}].push_back(
            {static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(c)});
      }
    std::uint32_t next = 0;
    for (auto& [sig, refs] : buckets) {
      for (ClassRef r : refs) color[r.set][r.idx] = next;
      ++next;
    }
    if (next == colors_before) break;  // stable
    colors_before = next;
  }

  // --- order classes within each set by color; collect tie blocks ------
  // perm[i][c] = rank of class c under the labeling being tried.
  std::vector<std::vector<std::uint16_t>> base_rank(m);
  std::vector<std::vector<std::vector<std::uint16_t>>> class_ties(m);
  std::uint64_t labelings = 1;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint16_t> order(s.classes[i].size());
    for (std::size_t c = 0; c < order.size(); ++c)
      order[c] = static_cast<std::uint16_t>(c);
    std::sort(order.begin(), order.end(), [&](std::uint16_t a, std::uint16_t b) {
      if (color[i][a] != color[i][b]) return color[i][a] < color[i][b];
      return a < b;
    });
    base_rank[i].resize(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos)
      base_rank[i][order[pos]] = static_cast<std::uint16_t>(pos);
    for (std::size_t lo = 0; lo < order.size();) {
      std::size_t hi = lo + 1;
      while (hi < order.size() && color[i][order[hi]] == color[i][order[lo]])
        ++hi;
      if (hi - lo > 1) {
        class_ties[i].push_back(
            std::vector<std::uint16_t>(order.begin() + lo, order.begin() + hi));
        for (std::size_t k = hi - lo; k > 1; --k) {
          labelings *= k;
          if (labelings > kMaxLabelings) break;
        }
      }
      if (labelings > kMaxLabelings) break;
      lo = hi;
    }
    if (labelings > kMaxLabelings) break;
  }

  // --- order sets by signature; collect set tie blocks -----------------
  std::vector<std::size_t> set_order(m);
  std::vector<std::vector<std::size_t>> set_ties;
  if (labelings <= kMaxLabelings) {
    std::vector<std::pair<std::vector<std::uint64_t>, std::size_t>> sig(m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::uint64_t> v;
      v.push_back(inst.set_size(i + 1));
      v.push_back(s.classes[i].size());
      std::vector<std::uint64_t> cols;
      for (std::size_t c = 0; c < s.classes[i].size(); ++c)
        cols.push_back((std::uint64_t(color[i][c]) << 32) |
                       s.classes[i][c].size());
      std::sort(cols.begin(), cols.end());
      v.insert(v.end(), cols.begin(), cols.end());
      sig[i] = {std::move(v), i};
    }
    std::sort(sig.begin(), sig.end());
    for (std::size_t pos = 0; pos < m; ++pos) set_order[pos] = sig[pos].second;
    for (std::size_t lo = 0; lo < m;) {
      std::size_t hi = lo + 1;
      while (hi < m && sig[hi].first == sig[lo].first) ++hi;
      if (hi - lo > 1) {
        std::vector<std::size_t> block;
        for (std::size_t k = lo; k < hi; ++k) block.push_back(k);  // positions
        set_ties.push_back(std::move(block));
        for (std::size_t k = hi - lo; k > 1; --k) {
          labelings *= k;
          if (labelings > kMaxLabelings) break;
        }
      }
      if (labelings > kMaxLabelings) break;
      lo = hi;
    }
  }

  if (labelings > kMaxLabelings) {
    if (fell_back) *fell_back = true;
    return raw_key(d);
  }

  // --- enumerate labelings: permutations within each tie block ---------
  // Class blocks permute which tied class gets which rank; set blocks
  // permute tied positions of the set order.
  struct Block {
    bool is_set_block;
    std::size_t set;                       // class blocks only
    std::vector<std::uint16_t> class_ids;  // class blocks: tied classes
    std::vector<std::size_t> positions;    // set blocks: tied positions
    std::vector<std::uint32_t> perm;       // current permutation of 0..k-1
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& tie : class_ties[i]) {
      Block b;
      b.is_set_block = false;
      b.set = i;
      b.class_ids = tie;
      b.perm.resize(tie.size());
      for (std::size_t k = 0; k < tie.size(); ++k)
        b.perm[k] = static_cast<std::uint32_t>(k);
      blocks.push_back(std::move(b));
    }
  for (const auto& tie : set_ties) {
    Block b;
    b.is_set_block = true;
    b.positions = tie;
    b.perm.resize(tie.size());
    for (std::size_t k = 0; k < tie.size(); ++k)
      b.perm[k] = static_cast<std::uint32_t>(k);
    blocks.push_back(std::move(b));
  }

  std::string best;
  std::vector<std::vector<std::uint16_t>> rank = base_rank;
  std::vector<std::size_t> order = set_order;
  while (true) {
    // apply current block permutations
    rank = base_rank;
    order = set_order;
    for (const Block& b : blocks) {
      if (b.is_set_block) {
        for (std::size_t k = 0; k < b.positions.size(); ++k)
          order[b.positions[k]] = set_order[b.positions[b.perm[k]]];
      } else {
        for (std::size_t k = 0; k < b.class_ids.size(); ++k)
          rank[b.set][b.class_ids[k]] = base_rank[b.set][b.class_ids[b.perm[k]]];
      }
    }
    std::string enc = encode_canonical(s, inst, order, rank);
    if (best.empty() || enc < best) best = std::move(enc);
    // odometer over blocks
    std::size_t bi = 0;
    for (; bi < blocks.size(); ++bi) {
      if (std::next_permutation(blocks[bi].perm.begin(), blocks[bi].perm.end()))
        break;
      // wrapped back to identity; carry to the next block
    }
    if (bi == blocks.size()) break;
  }
  return best;
}

// ------------------------------------------------------------ enumeration

struct Move {
  Weighing weigh;
  std::array<CandidateSet, 3> parts;
  std::vector<std::uint32_t> tuple;  // (pan, l0, r0, l1, r1, ..., lb, rb)
};

// Class-reduced move generation; see SlotStructure above for why per-class
// counts plus one ballast class cover every weighing that matters.
std::vector<Move> reduced_moves(const CandidateSet& d) {
  const Instance& inst = d.instance();
  SlotStructure s = build_slots(d);

  // Flatten classes for the count odometer.
  std::vector<const std::vector<std::uint16_t>*> cls;
  std::vector<std::uint16_t> cls_set;  // 1-based set of each class
  for (std::size_t i = 0; i < s.classes.size(); ++i)
    for (const auto& c : s.classes[i]) {
      cls.push_back(&c);
      cls_set.push_back(static_cast<std::uint16_t>(i + 1));
    }
  std::size_t C = cls.size();
  std::uint64_t bsz = s.ballast.size();

  std::vector<Move> moves;
  std::unordered_set<std::string> seen;  // literal partition dedup
  std::vector<std::uint32_t> l(C, 0), r(C, 0);

  auto emit = [&]() {
    std::uint64_t L = 0, R = 0;
    for (std::size_t c = 0; c < C; ++c) {
      L += l[c];
      R += r[c];
    }
    if (L + R == 0) return;
    std::uint64_t lb = L < R ? R - L : 0;
    std::uint64_t rb = R < L ? L - R : 0;
    if (lb + rb > bsz) return;
    // mirror dedup: keep the orientation whose count vector (l..., lb) is
    // not lexicographically above its mirror (r..., rb)
    int cmp = 0;
    for (std::size_t c = 0; c < C && cmp == 0; ++c)
      cmp = l[c] < r[c] ? -1 : (l[c] > r[c] ? 1 : 0);
    if (cmp == 0) cmp = lb < rb ? -1 : (lb > rb ? 1 : 0);
    if (cmp > 0) return;
    std::vector<CoinId> left, right;
    for (std::size_t c = 0; c < C; ++c) {
      for (std::uint32_t k = 0; k < l[c]; ++k)
        left.push_back(CoinId{cls_set[c], (*cls[c])[k]});
      for (std::uint32_t k = 0; k < r[c]; ++k)
        right.push_back(CoinId{cls_set[c], (*cls[c])[l[c] + k]});
    }
    for (std::uint64_t k = 0; k < lb; ++k) left.push_back(s.ballast[k]);
    for (std::uint64_t k = 0; k < rb; ++k) right.push_back(s.ballast[lb + k]);

    Weighing w = Weighing::make(inst, std::move(left), std::move(right));
    std::array<CandidateSet, 3> parts = partition(d, w);
    for (const CandidateSet& part : parts)
      if (part.size() == d.size()) return;  // no information on some outcome
    std::string sig;
    for (const CandidateSet& part : parts)
      for (std::uint64_t word : part.mask_words()) append_u64(sig, word);
    if (!seen.insert(std::move(sig)).second) return;
    std::vector<std::uint32_t> tuple;
    tuple.reserve(2 * C + 3);
    tuple.push_back(static_cast<std::uint32_t>(L + lb));  // pan size
    for (std::size_t c = 0; c < C; ++c) {
      tuple.push_back(l[c]);
      tuple.push_back(r[c]);
    }
    tuple.push_back(static_cast<std::uint32_t>(lb));
    tuple.push_back(static_cast<std::uint32_t>(rb));
    moves.push_back(Move{std::move(w), std::move(parts), std::move(tuple)});
  };

  // Odometer over (l_c, r_c) with l_c + r_c <= |class c|.
  auto rec = [&](auto&& self, std::size_t c) -> void {
    if (c == C) {
      emit();
      return;
    }
    std::uint32_t size = static_cast<std::uint32_t>(cls[c]->size());
    for (std::uint32_t lc = 0; lc <= size; ++lc)
      for (std::uint32_t rc = 0; lc + rc <= size; ++rc) {
        l[c] = lc;
        r[c] = rc;
        self(self, c + 1);
      }
    l[c] = r[c] = 0;
  };
  rec(rec, 0);

  std::stable_sort(moves.begin(), moves.end(),
                   [](const Move& a, const Move& b) { return a.tuple < b.tuple; });
  return moves;
}

// Raw move generation (debug mode): every disjoint equal-size pan pair up
// to mirror, no class reduction, no partition dedup. The no-progress filter
// stays — without it depth search would not terminate.
std::vector<Move> raw_moves(const CandidateSet& d) {
  const Instance& inst = d.instance();
  if (inst.total_coins() > 16)
    throw ModelError("raw enumeration is limited to 16 coins");
  std::vector<CoinId> coins;
  for (std::size_t s = 1; s <= inst.set_count(); ++s)
    for (std::uint32_t i = 1; i <= inst.set_size(s); ++i)
      coins.push_back(CoinId{static_cast<std::uint16_t>(s),
                             static_cast<std::uint16_t>(i)});
  int n = static_cast<int>(coins.size());
  std::vector<Move> moves;
  for (std::uint32_t lmask = 1; lmask < (1u << n); ++lmask) {
    int p = __builtin_popcount(lmask);
    if (2 * p > n) continue;
    for (std::uint32_t rmask = lmask + 1; rmask < (1u << n); ++rmask) {
      if ((rmask & lmask) || __builtin_popcount(rmask) != p) continue;
      std::vector<CoinId> l, r;
      for (int i = 0; i < n; ++i) {
        if (lmask & (1u << i)) l.push_back(coins[i]);
        if (rmask & (1u << i)) r.push_back(coins[i]);
      }
      Weighing w = Weighing::make(inst, std::move(l), std::move(r));
      std::array<CandidateSet, 3> parts = partition(d, w);
      bool trivial = false;
      for (const CandidateSet& part : parts)
        if (part.size() == d.size()) trivial = true;
      if (trivial) continue;
      moves.push_back(Move{std::move(w), std::move(parts),
                           {static_cast<std::uint32_t>(p), lmask, rmask}});
    }
  }
  std::stable_sort(moves.begin(), moves.end(),
                   [](const Move& a, const Move& b) { return a.tuple < b.tuple; });
  return moves;
}

// ----------------------------------------------------------------- search

struct SearchAbort {
  std::string reason;
};

class Search {
 public:
  Search(const SearchBudget& budget, const SolverOptions& options)
      : budget_(budget), options_(options),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(budget.time_limit_seconds))) {}

  SearchResult run(const CandidateSet& d);
  ArrowResult run_arrow(const ArrowSpec& spec);

  SearchStats stats;

 private:
  struct MemoEntry {
    int max_failed = -1;
    int min_success = INT_MAX;
  };

  void count_node() {
    ++stats.nodes;
    if (extracting_) return;
    if (stats.nodes > budget_.node_limit)
      throw SearchAbort{"node limit exceeded"};
    // A clock read costs nothing next to expanding a node (enumerating
    // weighings dominates), so check every time and trip promptly.
    if (std::chrono::steady_clock::now() > deadline_)
      throw SearchAbort{"time limit exceeded"};
  }

  std::vector<Move> moves(const CandidateSet& d) {
    auto mv = options_.use_class_reduction ? reduced_moves(d) : raw_moves(d);
    stats.weighings_tried += mv.size();
    return mv;
  }

  std::string key_of(const CandidateSet& d) {
    if (!options_.use_class_reduction) return raw_key(d);
    bool fell_back = false;
    SlotStructure s = build_slots(d);
    std::string key = canonical_key_impl(d, s, &fell_back);
    if (fell_back) ++stats.key_fallbacks;
    return key;
  }

  bool feasible(const CandidateSet& d, int b) {
    count_node();
    if (d.size() <= 1) return true;
    if (b <= 0) return false;
    if (exceeds_pow3(d.size(), b)) return false;

    std::string key;
    if (options_.use_memo) {
      key = key_of(d);
      auto it = memo_.find(key);
      if (it != memo_.end()) {
        if (it->second.min_success <= b) {
          ++stats.memo_hits;
          return true;
        }
        if (it->second.max_failed >= b) {
          ++stats.memo_hits;
          return false;
        }
      }
    }

    bool ok = false;
    for (const Move& mv : moves(d)) {
      if (!viable(mv, b)) continue;
      ok = true;
      for (int k : child_order(mv)) {
        if (!feasible(mv.parts[k], b - 1)) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    if (options_.use_memo) {
      // look up again: recursion may have rehashed the table
      MemoEntry& e = memo_[std::move(key)];
      if (ok)
        e.min_success = std::min(e.min_success, b);
      else
        e.max_failed = std::max(e.max_failed, b);
    }
    return ok;
  }

  // Parts that cannot fit in the remaining depth rule a move out at once.
  static bool viable(const Move& mv, int b) {
    for (const CandidateSet& part : mv.parts)
      if (exceeds_pow3(part.size(), b - 1)) return false;
    return true;
  }

  // Children largest first: the widest part fails soonest.
  static std::array<int, 3> child_order(const Move& mv) {
    std::array<int, 3> ord{0, 1, 2};
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
      return mv.parts[a].size() > mv.parts[b].size();
    });
    return ord;
  }

  StrategyTree extract(const CandidateSet& d, int b) {
    if (d.empty()) return StrategyTree::leaf(d.decode(0));
    if (d.size() == 1) return StrategyTree::leaf(d.sole_member());
    for (const Move& mv : moves(d)) {
      if (!viable(mv, b)) continue;
      bool ok = true;
      for (int k : child_order(mv))
        if (!feasible(mv.parts[k], b - 1)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      return StrategyTree::inner(mv.weigh, extract(mv.parts[0], b - 1),
                                 extract(mv.parts[1], b - 1),
                                 extract(mv.parts[2], b - 1));
    }
    throw std::logic_error("no move survived extraction after a proof");
  }

  // ---- arrow search ----
  const ArrowSpec* arrow_ = nullptr;
  int arrow_max_depth_ = 0;

  static bool profile_matches(const CandidateSet& d, const ArrowProfile& p) {
    if (d.size() > p.max_size) return false;
    if (d.size() <= 1) return true;  // empty or settled: every class is fine
    switch (p.kind) {
      case LeafClass::Kind::Singleton:
        return false;  // size > 1
      case LeafClass::Kind::OneRep:
        return is_one_representable(d).has_value();
      case LeafClass::Kind::TwoRep:
        return is_two_representable(d).has_value();
      case LeafClass::Kind::Unclassified:
        return true;  // size cap only
    }
    return false;
  }

  bool leaf_ok(const CandidateSet& d, int u) const {
    for (const ArrowProfile& p : arrow_->profiles)
      if (p.depth >= u && profile_matches(d, p)) return true;
    return false;
  }

  // Largest candidate count any subtree rooted at depth u can still settle.
  bool capacity_exceeded(const CandidateSet& d, int u) const {
    for (const ArrowProfile& p : arrow_->profiles)
      if (p.depth >= u && !exceeds_pow3_scaled(d.size(), p.max_size, p.depth - u))
        return false;
    return true;
  }

  // True iff s > cap * 3^t.
  static bool exceeds_pow3_scaled(std::uint64_t s, std::uint64_t cap, int t) {
    std::uint64_t v = cap;
    while (t-- > 0) {
      if (v >= s) return false;
      v *= 3;
    }
    return s > v;
  }

  bool arrow_ok(const CandidateSet& d, int u) {
    count_node();
    if (leaf_ok(d, u)) return true;
    if (u >= arrow_max_depth_) return false;
    if (capacity_exceeded(d, u)) return false;

    // Feasibility here is antitone in u: starting deeper leaves less room.
    // The entry reuses MemoEntry with flipped meanings: min_success holds
    // the deepest u proved workable, max_failed the shallowest u proved
    // impossible.
    std::string key;
    if (options_.use_memo) {
      key = key_of(d);
      auto it = arrow_memo_.find(key);
      if (it != arrow_memo_.end()) {
        if (it->second.max_failed != -1 && u >= it->second.max_failed) {
          ++stats.memo_hits;
          return false;
        }
        if (it->second.min_success != INT_MAX && u <= it->second.min_success) {
          ++stats.memo_hits;
          return true;
        }
      }
    }

    bool ok = false;
    for (const Move& mv : moves(d)) {
      ok = true;
      for (int k : child_order(mv))
        if (!arrow_ok(mv.parts[k], u + 1)) {
          ok = false;
          break;
        }
      if (ok) break;
    }
    if (options_.use_memo) {
      MemoEntry& e = arrow_memo_[std::move(key)];
      if (ok)
        e.min_success = e.min_success == INT_MAX ? u : std::max(e.min_success, u);
      else
        e.max_failed = e.max_failed == -1 ? u : std::min(e.max_failed, u);
    }
    return ok;
  }

  std::shared_ptr<const PrefixTree::Node> extract_arrow(const CandidateSet& d,
                                                        int u, int& next_id) {
    if (leaf_ok(d, u))
      return std::make_shared<const PrefixTree::Node>(
          PrefixTree::OpenLeaf{d, next_id++});
    for (const Move& mv : moves(d)) {
      bool ok = true;
      for (int k : child_order(mv))
        if (!arrow_ok(mv.parts[k], u + 1)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      PrefixTree::Inner in;
      in.weigh = mv.weigh;
      for (int k = 0; k < 3; ++k)
        in.child[k] = extract_arrow(mv.parts[k], u + 1, next_id);
      return std::make_shared<const PrefixTree::Node>(std::move(in));
    }
    throw std::logic_error("no move survived arrow extraction after a proof");
  }

  SearchBudget budget_;
  SolverOptions options_;
  std::chrono::steady_clock::time_point deadline_;
  bool extracting_ = false;
  std::unordered_map<std::string, MemoEntry> memo_;
  std::unordered_map<std::string, MemoEntry> arrow_memo_;
};

SearchResult Search::run(const CandidateSet& d) {
  auto t0 = std::chrono::steady_clock::now();
  SearchResult res;
  res.info_bound = ternary_information_bound(d.size());
  res.proved_above = res.info_bound - 1;  // pigeonhole: below is impossible
  int max_depth =
      budget_.max_depth < 0 ? res.info_bound + 2 : budget_.max_depth;
  res.status = SearchResult::Status::Infeasible;
  res.depth = max_depth;
  try {
    for (int b = res.info_bound; b <= max_depth; ++b) {
      if (feasible(d, b)) {
        extracting_ = true;
        StrategyTree tree = extract(d, b);
        res.status = SearchResult::Status::Optimal;
        res.depth = b;
        res.tree = std::move(tree);
        break;
      }
      res.proved_above = b;
    }
  } catch (const SearchAbort& abort) {
    res.status = SearchResult::Status::Exhausted;
    res.depth = -1;
    res.note = abort.reason;
  }
  stats.memo_entries = memo_.size() + arrow_memo_.size();
  stats.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  res.stats = stats;
  return res;
}

ArrowResult Search::run_arrow(const ArrowSpec& spec) {
  auto t0 = std::chrono::steady_clock::now();
  ArrowResult res;
  if (spec.profiles.empty())
    throw ModelError("arrow search needs at least one leaf profile");
  for (const ArrowProfile& p : spec.profiles) {
    if (p.depth < 0) throw ModelError("arrow profile depth must be >= 0");
    if (p.max_size < 1) throw ModelError("arrow profile size cap must be >= 1");
  }
  arrow_ = &spec;
  arrow_max_depth_ = 0;
  for (const ArrowProfile& p : spec.profiles)
    arrow_max_depth_ = std::max(arrow_max_depth_, p.depth);
  CandidateSet full = full_space(spec.instance);
  try {
    if (arrow_ok(full, 0)) {
      extracting_ = true;
      int next_id = 0;
      res.prefix = PrefixTree(extract_arrow(full, 0, next_id));
      res.status = SearchResult::Status::Optimal;
    } else {
      res.status = SearchResult::Status::Infeasible;
    }
  } catch (const SearchAbort& abort) {
    res.status = SearchResult::Status::Exhausted;
    res.note = abort.reason;
  }
  stats.memo_entries = memo_.size() + arrow_memo_.size();
  stats.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  res.stats = stats;
  return res;
}

}  // namespace

// ------------------------------------------------------------- public API

int ternary_information_bound(std::uint64_t s) {
  if (s == 0) throw ModelError("information bound of an empty set");
  int t = 0;
  std::uint64_t v = 1;
  while (v < s) {
    v *= 3;
    ++t;
  }
  return t;
}

SearchResult min_depth(const CandidateSet& d, const SearchBudget& budget,
                       const SolverOptions& options) {
  if (d.empty()) throw ModelError("cannot solve an empty candidate set");
  Search search(budget, options);
  return search.run(d);
}

SearchResult solve_exact(const Instance& inst, const SearchBudget& budget,
                         const SolverOptions& options) {
  return min_depth(full_space(inst), budget, options);
}

std::vector<Weighing> enumerate_weighings(const CandidateSet& d) {
  if (d.empty()) throw ModelError("cannot weigh an empty candidate set");
  std::vector<Weighing> out;
  for (Move& mv : reduced_moves(d)) out.push_back(std::move(mv.weigh));
  return out;
}

CanonicalKey canonical_key(const CandidateSet& d) {
  SlotStructure s = build_slots(d);
  return CanonicalKey{canonical_key_impl(d, s, nullptr)};
}

ArrowResult find_arrow(const ArrowSpec& spec, const SearchBudget& budget,
                       const SolverOptions& options) {
  Search search(budget, options);
  return search.run_arrow(spec);
}

StrategyTree complete_arrow(const PrefixTree& prefix) {
  if (!prefix.valid()) throw ModelError("cannot complete an empty prefix");
  std::vector<StrategyTree> closers;
  for (const PrefixTree::OpenLeaf* leaf : prefix.open_leaves()) {
    const CandidateSet& d = leaf->remaining;
    if (d.empty()) {
      closers.push_back(StrategyTree::leaf(d.decode(0)));  // unreachable slot
    } else if (d.size() == 1) {
      closers.push_back(StrategyTree::leaf(d.sole_member()));
    } else if (auto reps = is_one_representable(d)) {
      closers.push_back(close_one_representable(d, *reps));
    } else {
      throw ModelError("open leaf " + std::to_string(leaf->leaf_id) +
                       " (" + std::to_string(d.size()) +
                       " candidates) has no private coins; cannot close");
    }
  }
  return splice(prefix, closers);
}

}  // namespace coins
