// Brute-force reference for the solver. Everything here is as plain as
// possible on purpose: the solver's reductions are validated by agreement
// with this code, so this code must not share them.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "coins/model.hpp"
#include "coins/solver.hpp"

namespace coins {

namespace {

// All coins of the instance, in (set, index) order.
std::vector<CoinId> all_coins(const Instance& inst) {
  std::vector<CoinId> coins;
  coins.reserve(inst.total_coins());
  for (std::size_t s = 1; s <= inst.set_count(); ++s)
    for (std::uint32_t i = 1; i <= inst.set_size(s); ++i)
      coins.push_back(CoinId{static_cast<std::uint16_t>(s),
                             static_cast<std::uint16_t>(i)});
  return coins;
}

// Every weighing of the instance as a pair of disjoint equal-size coin
// subsets, mirrors skipped by requiring left mask < right mask.
std::vector<Weighing> raw_weighings(const Instance& inst) {
  std::vector<CoinId> coins = all_coins(inst);
  int n = static_cast<int>(coins.size());
  std::vector<Weighing> out;
  auto pans_from = [&](std::uint32_t lmask, std::uint32_t rmask) {
    std::vector<CoinId> l, r;
    for (int i = 0; i < n; ++i) {
      if (lmask & (1u << i)) l.push_back(coins[i]);
      if (rmask & (1u << i)) r.push_back(coins[i]);
    }
    out.push_back(Weighing::make(inst, std::move(l), std::move(r)));
  };
  for (std::uint32_t lmask = 1; lmask < (1u << n); ++lmask) {
    int p = __builtin_popcount(lmask);
    if (2 * p > n) continue;
    for (std::uint32_t rmask = lmask + 1; rmask < (1u << n); ++rmask) {
      if (rmask & lmask) continue;
      if (__builtin_popcount(rmask) != p) continue;
      pans_from(lmask, rmask);
    }
  }
  return out;
}

std::uint64_t pow3(int t) {
  std::uint64_t v = 1;
  while (t-- > 0) v *= 3;
  return v;
}

bool depth_suffices(const CandidateSet& d, int t,
                    const std::vector<Weighing>& weighings) {
  if (d.size() <= 1) return true;
  if (t <= 0) return false;
  if (d.size() > pow3(t)) return false;
  for (const Weighing& w : weighings) {
    auto parts = partition(d, w);
    // A weighing that can leave everything is no progress.
    if (parts[0].size() == d.size() || parts[1].size() == d.size() ||
        parts[2].size() == d.size())
      continue;
    bool all = true;
    for (const CandidateSet& part : parts)
      if (!depth_suffices(part, t - 1, weighings)) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

}  // namespace

int oracle_min_depth(const CandidateSet& d) {
  if (d.size() > 12)
    throw ModelError("oracle handles at most 12 candidates");
  if (d.instance().total_coins() > 12)
    throw ModelError("oracle handles at most 12 coins");
  if (d.empty()) throw ModelError("oracle needs at least one candidate");
  std::vector<Weighing> weighings = raw_weighings(d.instance());
  for (int t = 0;; ++t)
    if (depth_suffices(d, t, weighings)) return t;
}

}  // namespace coins
