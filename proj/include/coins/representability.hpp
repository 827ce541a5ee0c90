// Classifying what is left at a would-be leaf of a weighing strategy.
//
// A candidate set is one-representable when every remaining candidate owns a
// private coin: a coin of its own tuple that no other remaining candidate's
// tuple contains. Finding the light coin among those r private coins then
// settles everything in ceil(log3 r) further weighings.
//
// It is two-representable when every remaining candidate owns a private
// *pair* of its coins (no other candidate's tuple contains both). No closing
// cost is attached to that class here.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coins/model.hpp"
#include "coins/strategy.hpp"

namespace coins {

struct LeafClass {
  enum class Kind : std::uint8_t { Singleton, OneRep, TwoRep, Unclassified };
  Kind kind = Kind::Unclassified;
  std::uint64_t r = 0;  // OneRep: candidate count
  std::uint64_t t = 0;  // TwoRep: largest shared-coin group (0 = no such form)
  std::uint64_t s = 0;  // TwoRep: candidate count

  // "singleton" | "one-rep:<r>" | "two-rep:<t>x<s>" | "other"
  std::string to_string() const;

  friend bool operator==(const LeafClass&, const LeafClass&) = default;
};

// One entry per candidate: its private coin (size 1) or private pair
// (size 2, sorted), always drawn from the candidate's own tuple.
struct RepresentativeMap {
  std::map<Candidate, std::vector<CoinId>> reps;
};

// Returns the map with the lexicographically smallest private coin per
// candidate, or nullopt when some candidate has none.
std::optional<RepresentativeMap> is_one_representable(const CandidateSet& d);

// Returns the map with the lexicographically smallest private pair per
// candidate, or nullopt when some candidate has none. (Pairs are two
// distinct coins of the tuple, so single-set instances never qualify.)
std::optional<RepresentativeMap> is_two_representable(const CandidateSet& d);

// Singleton if |d|=1; else one-representable; else two-representable; else
// unclassified. Throws ModelError on an empty set.
LeafClass classify_leaf(const CandidateSet& d);

// Strategy of depth exactly ceil(log3 |d|) that identifies every member of
// d by ternary search over the private coins. reps must be a valid
// one-representable map for d (ModelError otherwise).
StrategyTree close_one_representable(const CandidateSet& d,
                                     const RepresentativeMap& reps);

}  // namespace coins
