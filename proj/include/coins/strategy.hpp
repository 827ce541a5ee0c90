// Adaptive weighing strategies: tree type, on-disk format, verifier.
//
// The verifier is deliberately independent of the search: it walks every
// candidate of the instance through outcome() alone and checks that the leaf
// it lands on names exactly that candidate.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coins/model.hpp"

namespace coins {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::size_t byte_pos = 0)
      : std::runtime_error(what), byte_pos(byte_pos) {}
  std::size_t byte_pos;  // 0 when unknown
};

// ----------------------------------------------------------------- tree

class StrategyTree {
 public:
  struct Leaf {
    Candidate answer;
    friend bool operator==(const Leaf&, const Leaf&) = default;
  };
  struct Inner;
  using Node = std::variant<Leaf, Inner>;
  struct Inner {
    Weighing weigh;
    // children indexed by Outcome: [left_heavy, balanced, right_heavy]
    std::array<std::shared_ptr<const Node>, 3> child;
    friend bool operator==(const Inner& a, const Inner& b) {
      if (!(a.weigh == b.weigh)) return false;
      for (int i = 0; i < 3; ++i)
        if (!(*a.child[i] == *b.child[i])) return false;
      return true;
    }
  };

  StrategyTree() = default;
  explicit StrategyTree(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  static StrategyTree leaf(Candidate answer);
  static StrategyTree inner(Weighing w, StrategyTree left_heavy,
                            StrategyTree balanced, StrategyTree right_heavy);

  bool valid() const { return root_ != nullptr; }
  const Node& root() const { return *root_; }
  std::shared_ptr<const Node> root_ptr() const { return root_; }

  // Structural height: leaves-only tree has depth 0.
  int depth() const;
  std::uint64_t leaf_count() const;

  friend bool operator==(const StrategyTree& a, const StrategyTree& b) {
    if (!a.root_ || !b.root_) return a.root_ == b.root_;
    return *a.root_ == *b.root_;
  }

 private:
  std::shared_ptr<const Node> root_;
};

// ---------------------------------------------------------------- format

// Canonical text form (byte-stable):
//   inner: {"weigh":{"left":[...],"right":[...]},
//           "left_heavy":...,"balanced":...,"right_heavy":...}
//   leaf:  {"answer":{"s1":2,"s2":1}}
// Keys in exactly that order, pans sorted by (set, index), two-space indent.
std::string serialize(const StrategyTree& t);

// Strict structural parse; throws FormatError (with byte position where the
// underlying JSON parser provides one). Instance-independent: range checks
// happen in verify().
StrategyTree parse(const std::string& text);

// Smallest instance the tree can belong to: per set, the largest index used
// by any pan coin or answer. Returns nullopt for an empty tree.
std::optional<Instance> infer_instance(const StrategyTree& t);

// ---------------------------------------------------------------- verify

struct VerificationFailure {
  Candidate candidate;
  std::string path;    // e.g. "root/balanced/left_heavy"
  std::string reason;  // "answer names (2,1)" etc.
};

struct VerificationReport {
  bool structurally_valid = false;
  std::vector<std::string> structural_errors;

  bool sound = false;     // every reached leaf names its candidate
  bool complete = false;  // every candidate reaches a leaf
  int depth = 0;          // max weighings over all candidates
  bool meets_information_bound = false;  // depth >= ceil(log3 |S|) (warning-level)
  std::map<int, std::uint64_t> leaf_census;  // reachable leaves per depth
  std::uint64_t unreachable_leaves = 0;
  std::uint64_t failure_count = 0;           // total, even past the stored cap
  std::vector<VerificationFailure> failures;  // first 1000 at most

  bool ok() const { return structurally_valid && sound && complete; }
};

// Walks every candidate of inst through the tree; threads > 1 splits the
// candidate range (the report is identical either way).
VerificationReport verify(const StrategyTree& t, const Instance& inst,
                          unsigned threads = 1);

// Restricted check used for leaf closers: every member of d must reach a
// leaf naming it. Same walk, smaller domain.
VerificationReport verify_on(const StrategyTree& t, const CandidateSet& d);

// ---------------------------------------------------------------- splice

// Prefix tree whose leaves are unresolved candidate sets (what an arrow
// search produces).
class PrefixTree {
 public:
  struct OpenLeaf {
    CandidateSet remaining;
    int leaf_id = 0;  // preorder id, assigned by the producer
  };
  struct Inner;
  using Node = std::variant<OpenLeaf, Inner>;
  struct Inner {
    Weighing weigh;
    std::array<std::shared_ptr<const Node>, 3> child;
  };

  PrefixTree() = default;
  explicit PrefixTree(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  bool valid() const { return root_ != nullptr; }
  const Node& root() const { return *root_; }

  int depth() const;
  // Open leaves in preorder (left_heavy, balanced, right_heavy).
  std::vector<const OpenLeaf*> open_leaves() const;

 private:
  std::shared_ptr<const Node> root_;
};

// Replaces open leaf i by closers[i]. Every closer must identify every
// member of its leaf's candidate set (checked; throws ModelError on domain
// mismatch). Empty leaves take a placeholder answer.
StrategyTree splice(const PrefixTree& prefix,
                    const std::vector<StrategyTree>& closers);

}  // namespace coins
