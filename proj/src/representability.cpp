#include "coins/representability.hpp"

#include <algorithm>
#include <set>

namespace coins {

std::string LeafClass::to_string() const {
  switch (kind) {
    case Kind::Singleton:
      return "singleton";
    case Kind::OneRep:
      return "one-rep:" + std::to_string(r);
    case Kind::TwoRep:
      return "two-rep:" + std::to_string(t) + "x" + std::to_string(s);
    case Kind::Unclassified:
      return "other";
  }
  return "other";
}

namespace {

// counts[i][v] = how many members of d pick coin v+1 from set i+1.
std::vector<std::vector<std::uint32_t>> pick_counts(
    const CandidateSet& d, std::vector<Candidate>& members_out) {
  const Instance& inst = d.instance();
  std::vector<std::vector<std::uint32_t>> counts(inst.set_count());
  for (std::size_t i = 0; i < inst.set_count(); ++i)
    counts[i].assign(inst.set_size(i + 1), 0);
  members_out.clear();
  members_out.reserve(d.size());
  d.for_each_member([&](std::uint64_t rank) {
    Candidate x = d.decode(rank);
    for (std::size_t i = 0; i < x.pick.size(); ++i)
      ++counts[i][x.pick[i] - 1];
    members_out.push_back(std::move(x));
  });
  return counts;
}

}  // namespace

std::optional<RepresentativeMap> is_one_representable(const CandidateSet& d) {
  if (d.empty()) throw ModelError("empty candidate set has no class");
  std::vector<Candidate> members;
  auto counts = pick_counts(d, members);
  RepresentativeMap map;
  for (const Candidate& z : members) {
    std::optional<CoinId> rep;
    for (std::size_t i = 0; i < z.pick.size(); ++i)
      if (counts[i][z.pick[i] - 1] == 1) {
        rep = CoinId{static_cast<std::uint16_t>(i + 1),
                     static_cast<std::uint16_t>(z.pick[i])};
        break;  // sets ascend, so the first hit is the smallest coin
      }
    if (!rep) return std::nullopt;
    map.reps.emplace(z, std::vector<CoinId>{*rep});
  }
  return map;
}

std::optional<RepresentativeMap> is_two_representable(const CandidateSet& d) {
  if (d.empty()) throw ModelError("empty candidate set has no class");
  std::vector<Candidate> members;
  members.reserve(d.size());
  d.for_each_member(
      [&](std::uint64_t rank) { members.push_back(d.decode(rank)); });
  std::size_t m = d.instance().set_count();
  if (m < 2) return std::nullopt;  // a tuple holds one coin per set

  // pair_count[(i, v_i, j, v_j)] = members picking both coins (i < j).
  std::map<std::array<std::uint32_t, 4>, std::uint32_t> pair_count;
  for (const Candidate& z : members)
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        ++pair_count[{static_cast<std::uint32_t>(i), z.pick[i],
                      static_cast<std::uint32_t>(j), z.pick[j]}];

  RepresentativeMap map;
  for (const Candidate& z : members) {
    std::optional<std::pair<CoinId, CoinId>> rep;
    // (i asc, j asc) enumerates the tuple's pairs in lexicographic coin
    // order, so the first private pair is the smallest one.
    for (std::size_t i = 0; i + 1 < m && !rep; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (pair_count[{static_cast<std::uint32_t>(i), z.pick[i],
                        static_cast<std::uint32_t>(j), z.pick[j]}] == 1) {
          rep = {CoinId{static_cast<std::uint16_t>(i + 1),
                        static_cast<std::uint16_t>(z.pick[i])},
                 CoinId{static_cast<std::uint16_t>(j + 1),
                        static_cast<std::uint16_t>(z.pick[j])}};
          break;
        }
    if (!rep) return std::nullopt;
    map.reps.emplace(z, std::vector<CoinId>{rep->first, rep->second});
  }
  return map;
}

LeafClass classify_leaf(const CandidateSet& d) {
  if (d.empty()) throw ModelError("empty candidate set has no class");
  LeafClass c;
  if (d.size() == 1) {
    c.kind = LeafClass::Kind::Singleton;
    return c;
  }
  if (is_one_representable(d)) {
    c.kind = LeafClass::Kind::OneRep;
    c.r = d.size();
    return c;
  }
  if (is_two_representable(d)) {
    c.kind = LeafClass::Kind::TwoRep;
    c.s = d.size();
    // Shared-coin form parameter: a candidate belongs to the group of the
    // members sharing one of its coins, provided a private pair anchored on
    // that coin exists; its tightest such group has
    //   t_z = min over anchors i of |{members picking z's set-i coin}|
    // and the class reports t = max over members of t_z. Computed from pick
    // and pair counts only, so it cannot depend on set order or labeling.
    std::vector<Candidate> members;
    const auto counts = pick_counts(d, members);
    const std::size_t m = d.instance().set_count();
    std::map<std::array<std::uint32_t, 4>, std::uint32_t> pair_count;
    for (const Candidate& z : members)
      for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
          ++pair_count[{static_cast<std::uint32_t>(i), z.pick[i],
                        static_cast<std::uint32_t>(j), z.pick[j]}];
    for (const Candidate& z : members) {
      std::uint64_t t_z = 0;
      for (std::size_t i = 0; i < m; ++i) {
        bool anchors = false;
        for (std::size_t j = 0; j < m && !anchors; ++j) {
          if (j == i) continue;
          const std::size_t a = std::min(i, j), b = std::max(i, j);
          anchors = pair_count[{static_cast<std::uint32_t>(a), z.pick[a],
                                static_cast<std::uint32_t>(b), z.pick[b]}] == 1;
        }
        if (!anchors) continue;
        const std::uint64_t group = counts[i][z.pick[i] - 1];
        t_z = (t_z == 0) ? group : std::min(t_z, group);
      }
      c.t = std::max(c.t, t_z);
    }
    return c;
  }
  c.kind = LeafClass::Kind::Unclassified;
  c.s = d.size();
  return c;
}

StrategyTree close_one_representable(const CandidateSet& d,
                                     const RepresentativeMap& reps) {
  if (d.empty()) throw ModelError("cannot close an empty candidate set");
  // Validate the map: exactly d's members, private coins pairwise distinct
  // and drawn from the owner's tuple.
  if (reps.reps.size() != d.size())
    throw ModelError("representative map does not cover the candidate set");
  std::vector<Candidate> members;
  const auto counts = pick_counts(d, members);
  std::map<CoinId, Candidate> owner;
  for (const auto& [z, coins] : reps.reps) {
    if (!d.contains(z))
      throw ModelError("representative map names a candidate outside the set");
    if (coins.size() != 1)
      throw ModelError("closing needs exactly one private coin per candidate");
    if (!z.contains(coins[0]))
      throw ModelError("private coin " + to_string(coins[0]) +
                       " is not in its candidate's tuple");
    if (counts[coins[0].set - 1][coins[0].index - 1] != 1)
      throw ModelError("coin " + to_string(coins[0]) +
                       " is not private: several candidates contain it");
    if (!owner.emplace(coins[0], z).second)
      throw ModelError("private coin " + to_string(coins[0]) +
                       " is claimed twice");
  }

  std::vector<CoinId> pool;
  pool.reserve(owner.size());
  for (const auto& [coin, z] : owner) pool.push_back(coin);
  // std::map already yields the coins sorted by (set, index).

  const Instance& inst = d.instance();
  // Ternary search over the private coins: weigh a third against a third.
  // The light coin's pan dips, so the *other* pan reads heavy; balance means
  // the light coin sat aside.
  auto build = [&](auto&& self, std::size_t lo, std::size_t hi) -> StrategyTree {
    std::size_t n = hi - lo;
    // Two coins leave the aside group empty; that branch can never be
    // reached, but the tree still needs a leaf there.
    if (n == 0) return StrategyTree::leaf(d.first_member());
    if (n == 1) return StrategyTree::leaf(owner.at(pool[lo]));
    // Equal pans a = b, remainder aside: sizes (k,k,k) / (k,k,k+1) /
    // (k+1,k+1,k) keep every part within a third, so depth telescopes to
    // ceil(log3 n).
    std::size_t k = n / 3;
    std::size_t a = (n % 3 == 2) ? k + 1 : k;
    std::vector<CoinId> left(pool.begin() + lo, pool.begin() + lo + a);
    std::vector<CoinId> right(pool.begin() + lo + a, pool.begin() + lo + 2 * a);
    Weighing w = Weighing::make(inst, std::move(left), std::move(right));
    return StrategyTree::inner(std::move(w),
                               /*left_heavy=*/self(self, lo + a, lo + 2 * a),
                               /*balanced=*/self(self, lo + 2 * a, hi),
                               /*right_heavy=*/self(self, lo, lo + a));
  };
  return build(build, 0, pool.size());
}

}  // namespace coins
