// Core problem model: instances, candidates, weighings, outcomes.
//
// An instance is a list of disjoint coin sets; set i holds n_i coins and
// contains exactly one (strictly lighter) counterfeit. A candidate assigns
// one counterfeit index to every set; the candidate space is the full
// product. A weighing puts two disjoint, equally sized coin groups on a
// balance; the outcome names the heavier pan and is fully determined by how
// many counterfeits sit in each pan.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace coins {

using BigInt = boost::multiprecision::cpp_int;

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// ------------------------------------------------------------------ coins

// Coin "s<set>.<index>", both 1-based. Set 0 / index 0 are invalid.
struct CoinId {
  std::uint16_t set = 0;
  std::uint16_t index = 0;
  friend bool operator==(const CoinId&, const CoinId&) = default;
  friend auto operator<=>(const CoinId&, const CoinId&) = default;
};

std::string to_string(CoinId c);
// Parses "s2.13" style names. Returns nullopt on malformed input.
std::optional<CoinId> parse_coin(std::string_view text);

// --------------------------------------------------------------- instance

class Instance {
 public:
  // sizes[i] = number of coins in set i+1; every size must be >= 1.
  explicit Instance(std::vector<std::uint32_t> sizes);

  std::size_t set_count() const { return sizes_.size(); }
  std::uint32_t set_size(std::size_t set_1based) const;
  const std::vector<std::uint32_t>& sizes() const { return sizes_; }
  std::uint64_t total_coins() const { return total_coins_; }

  // |S| = product of set sizes, exact.
  BigInt candidate_count() const;

  bool contains(CoinId c) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<std::uint32_t> sizes_;
  std::uint64_t total_coins_ = 0;
};

// -------------------------------------------------------------- candidate

// One counterfeit index (1-based) per set.
struct Candidate {
  std::vector<std::uint32_t> pick;

  bool contains(CoinId c) const {
    return c.set >= 1 && c.set <= pick.size() && pick[c.set - 1] == c.index;
  }
  friend bool operator==(const Candidate&, const Candidate&) = default;
  friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

std::string to_string(const Candidate& x);  // "(3,1,4)"

// --------------------------------------------------------------- weighing

// Two disjoint coin groups of equal, nonzero size. Groups are kept sorted.
struct Weighing {
  std::vector<CoinId> left;
  std::vector<CoinId> right;

  // Validates: nonempty, equal sizes, all coins in range, no coin on both
  // pans (or twice on one), pan size at most floor(total coins / 2).
  static Weighing make(const Instance& inst, std::vector<CoinId> left,
                       std::vector<CoinId> right);

  Weighing swapped() const { return Weighing{right, left}; }
  friend bool operator==(const Weighing&, const Weighing&) = default;
};

enum class Outcome : std::uint8_t { LeftHeavy = 0, Balanced = 1, RightHeavy = 2 };

// LeftHeavy <-> RightHeavy; Balanced fixed.
Outcome opposite(Outcome o);
char outcome_char(Outcome o);  // 'L' / 'B' / 'R'
std::string_view outcome_name(Outcome o);  // "left_heavy" / ...

// Outcome of a weighing when `truth` is the real counterfeit assignment.
// Counterfeits are lighter, pans have equal size, so the pan holding fewer
// counterfeits is heavier: cL < cR => LeftHeavy, cL == cR => Balanced.
Outcome outcome(const Instance& inst, const Weighing& w, const Candidate& truth);

// ---------------------------------------------------------- candidate set

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t(1) << 24;

// Explicit membership mask over the row-major enumeration of the candidate
// product space. Row-major: last set varies fastest.
class CandidateSet {
 public:
  CandidateSet(Instance inst, bool fill);  // fill=true -> full space

  const Instance& instance() const { return inst_; }
  std::uint64_t space_size() const { return space_; }
  std::uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  bool contains(std::uint64_t rank) const;
  bool contains(const Candidate& x) const { return contains(encode(x)); }
  void add(std::uint64_t rank);
  void add(const Candidate& x) { add(encode(x)); }
  void remove(std::uint64_t rank);

  Candidate decode(std::uint64_t rank) const;
  std::uint64_t encode(const Candidate& x) const;

  // Ranks of all members, ascending.
  std::vector<std::uint64_t> members() const;
  void for_each_member(const std::function<void(std::uint64_t)>& fn) const;

  // The single member; precondition size() == 1.
  Candidate sole_member() const;
  // Lexicographically smallest member; precondition nonempty.
  Candidate first_member() const;

  const std::vector<std::uint64_t>& mask_words() const { return bits_; }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

 private:
  Instance inst_;
  std::uint64_t space_ = 0;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Full candidate space; throws ModelError{"instance too large for explicit
// model"} when the product exceeds `cap`.
CandidateSet full_space(const Instance& inst,
                        std::uint64_t cap = kDefaultEnumerationCap);

// Splits D by outcome: [LeftHeavy, Balanced, RightHeavy]. Sizes sum to |D|.
std::array<CandidateSet, 3> partition(const CandidateSet& d, const Weighing& w);

// ------------------------------------------------------------ coin classes

// Coins are equivalent iff their incidence vectors over D are identical
// (coin c is incident to candidate X iff c is one of X's counterfeits).
// The class of coins incident to nothing in D is "known genuine": under any
// member of D those coins weigh true, so they can serve as pan ballast.
struct CoinClass {
  std::vector<CoinId> coins;   // sorted
  std::uint64_t incidence = 0; // number of members of D incident to the class
  bool known_genuine = false;  // incidence == 0
};

// Classes ordered by (class size, lexicographic incidence signature).
std::vector<CoinClass> coin_classes(const CandidateSet& d);

}  // namespace coins
