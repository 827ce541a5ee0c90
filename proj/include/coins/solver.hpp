// Exact minimum-depth search for adaptive weighing strategies.
//
// Core question: the minimax depth f(D) — 0 when |D| <= 1, otherwise
// 1 + min over weighings w of max over the three outcomes of f(part).
// The search runs iterative deepening from the exact ternary information
// bound, with three reductions, each of which preserves f:
//
//   * interchange classes: within one set, coins that co-occur with exactly
//     the same rest-of-tuple combinations are exchangeable by a relabeling
//     that maps D onto itself, so pan contents only matter as per-class
//     counts; coins in no remaining candidate are known genuine and act as
//     one pooled ballast class;
//   * mirror symmetry: a weighing and its pan swap have mirrored outcomes;
//   * transposition memo: results are cached under a key canonical up to
//     within-set relabeling and reordering of equal-size sets.
//
// Everything the search returns is checkable from outside: optimal trees
// pass the independent verifier, and oracle_min_depth() reproduces the
// depths on small inputs with none of the reductions.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coins/model.hpp"
#include "coins/representability.hpp"
#include "coins/strategy.hpp"

namespace coins {

struct SearchBudget {
  int max_depth = -1;  // -1: information bound + 2
  std::uint64_t node_limit = 100'000'000;
  double time_limit_seconds = 60.0;
};

struct SolverOptions {
  bool use_memo = true;             // transposition table on canonical keys
  bool use_class_reduction = true;  // per-class pan counts (else raw pans)
};

struct SearchStats {
  std::uint64_t nodes = 0;          // search positions expanded
  std::uint64_t memo_hits = 0;
  std::uint64_t memo_entries = 0;
  std::uint64_t weighings_tried = 0;
  std::uint64_t key_fallbacks = 0;  // canonical keys that fell back to masks
  double seconds = 0.0;
};

struct SearchResult {
  enum class Status { Optimal, Infeasible, Exhausted };
  Status status = Status::Exhausted;
  // Optimal: the exact minimax depth. Infeasible: the largest depth proved
  // impossible (= the max_depth searched). Exhausted: meaningless (-1).
  int depth = -1;
  int info_bound = 0;    // smallest t with 3^t >= |D|, exact
  int proved_above = -1; // every depth <= this is proved impossible
  std::optional<StrategyTree> tree;  // Optimal only
  SearchStats stats;
  std::string note;  // Exhausted: which budget tripped
};

// Exact smallest t with 3^t >= s (s >= 1).
int ternary_information_bound(std::uint64_t s);

// Minimax depth of d with proof tree. Never returns a wrong value:
// budget pressure yields Exhausted.
SearchResult min_depth(const CandidateSet& d, const SearchBudget& budget = {},
                       const SolverOptions& options = {});

// min_depth over the instance's full candidate space.
SearchResult solve_exact(const Instance& inst, const SearchBudget& budget = {},
                         const SolverOptions& options = {});

// The weighings the search would try at d, deduplicated (per-class counts,
// mirror orientation, induced partition) and ordered by (pan size, count
// tuple). Weighings whose partition puts all of d in one part are useless
// and omitted.
std::vector<Weighing> enumerate_weighings(const CandidateSet& d);

// Canonical encoding of d up to within-set coin relabeling and reordering of
// equal-size sets: isomorphic sets get equal keys, non-isomorphic sets never
// collide. (A bounded refinement may give up on highly symmetric inputs and
// fall back to the exact mask form — still collision-free, just blind to the
// isomorphism.)
struct CanonicalKey {
  std::string bytes;
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};
CanonicalKey canonical_key(const CandidateSet& d);

// ------------------------------------------------------------------ arrows

// A reduction prefix: a tree of at most `depth` weighings after which every
// branch is small and structured enough to hand off — e.g. "after 3
// weighings, at most 4 candidates remain and each owns a private coin".
struct ArrowProfile {
  int depth = 0;                                       // prefix depth allowed
  LeafClass::Kind kind = LeafClass::Kind::OneRep;      // required leaf class
  std::uint64_t max_size = 1;  // leaf candidate-count cap (r / s by class)
};

struct ArrowSpec {
  Instance instance;
  std::vector<ArrowProfile> profiles;  // a leaf must satisfy at least one
};

struct ArrowResult {
  SearchResult::Status status = SearchResult::Status::Exhausted;
  std::optional<PrefixTree> prefix;  // Optimal only
  SearchStats stats;
  std::string note;
};

// Searches for a prefix tree in which every leaf at depth u satisfies some
// profile with depth >= u: the leaf's candidate set has the profile's class
// and at most max_size members. Infeasible means no such prefix exists.
ArrowResult find_arrow(const ArrowSpec& spec, const SearchBudget& budget = {},
                       const SolverOptions& options = {});

// Closes every open leaf of an arrow prefix (empty or singleton leaves
// directly, one-representable leaves by ternary search over private coins)
// and splices the results into a complete, verifier-ready strategy. Throws
// ModelError if some leaf is not closable.
StrategyTree complete_arrow(const PrefixTree& prefix);

// ------------------------------------------------------------------ oracle

// Ground-truth minimax depth by plain exhaustive recursion: every raw pan
// pair (up to mirror), no interchange classes, no memo, no canonical keys;
// the only cuts are the pigeonhole bound 3^t >= |D| and skipping weighings
// that leave some outcome with all of D. Deliberately slow and simple;
// rejects |D| > 12 or instances with more than 12 coins.
int oracle_min_depth(const CandidateSet& d);

}  // namespace coins
