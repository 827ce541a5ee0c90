#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "coins/model.hpp"

using namespace coins;

namespace {

CoinId coin(std::uint16_t set, std::uint16_t index) { return CoinId{set, index}; }

}  // namespace

TEST_CASE("coin names round-trip and reject malformed input") {
  CHECK(to_string(coin(2, 13)) == "s2.13");
  CHECK(parse_coin("s2.13") == coin(2, 13));
  CHECK(parse_coin("s1.1") == coin(1, 1));
  for (const char* bad : {"", "s", "s1", "s1.", ".1", "s0.1", "s1.0", "x1.2",
                          "s1.2x", "s 1.2", "s1..2", "s-1.2", "s1.+2"}) {
    CAPTURE(bad);
    CHECK(!parse_coin(bad).has_value());
  }
}

TEST_CASE("instance validates sizes and counts exactly") {
  const Instance inst({4, 4, 5});
  CHECK(inst.set_count() == 3);
  CHECK(inst.set_size(1) == 4);
  CHECK(inst.set_size(3) == 5);
  CHECK(inst.total_coins() == 13);
  CHECK(inst.candidate_count() == 80);
  CHECK(inst.contains(coin(3, 5)));
  CHECK(!inst.contains(coin(3, 6)));
  CHECK(!inst.contains(coin(4, 1)));
  CHECK(!inst.contains(coin(0, 1)));

  CHECK_THROWS_AS(Instance(std::vector<std::uint32_t>{}), ModelError);
  CHECK_THROWS_AS(Instance({3, 0, 2}), ModelError);

  // The count is exact far past 64 bits: 100^50 = 10^100.
  const Instance wide(std::vector<std::uint32_t>(50, 100));
  CHECK(wide.candidate_count().str() == "1" + std::string(100, '0'));
}

TEST_CASE("candidate membership follows the picked indices") {
  const Candidate x{{3, 1, 4}};
  CHECK(to_string(x) == "(3,1,4)");
  CHECK(x.contains(coin(1, 3)));
  CHECK(x.contains(coin(2, 1)));
  CHECK(x.contains(coin(3, 4)));
  CHECK(!x.contains(coin(1, 1)));
  CHECK(!x.contains(coin(4, 1)));
}

TEST_CASE("weighings demand equal disjoint in-range pans") {
  const Instance inst({3, 3});
  const auto w = Weighing::make(inst, {coin(1, 2), coin(1, 1)}, {coin(2, 1), coin(1, 3)});
  // Pans come back sorted.
  CHECK(w.left == std::vector<CoinId>{coin(1, 1), coin(1, 2)});
  CHECK(w.right == std::vector<CoinId>{coin(1, 3), coin(2, 1)});
  CHECK(w.swapped().left == w.right);

  CHECK_THROWS_AS(Weighing::make(inst, {}, {}), ModelError);
  CHECK_THROWS_AS(Weighing::make(inst, {coin(1, 1)}, {}), ModelError);
  CHECK_THROWS_AS(
      Weighing::make(inst, {coin(1, 1), coin(1, 2)}, {coin(2, 1)}), ModelError);
  // Same coin on both pans, or twice on one pan.
  CHECK_THROWS_AS(Weighing::make(inst, {coin(1, 1)}, {coin(1, 1)}), ModelError);
  CHECK_THROWS_AS(Weighing::make(inst, {coin(1, 1), coin(1, 1)},
                                 {coin(2, 1), coin(2, 2)}),
                  ModelError);
  // Out of range.
  CHECK_THROWS_AS(Weighing::make(inst, {coin(1, 4)}, {coin(2, 1)}), ModelError);
  CHECK_THROWS_AS(Weighing::make(inst, {coin(3, 1)}, {coin(2, 1)}), ModelError);
  // More than half the coins on one pan cannot be balanced by the rest.
  CHECK_THROWS_AS(
      Weighing::make(inst, {coin(1, 1), coin(1, 2), coin(1, 3), coin(2, 1)},
                     {coin(2, 2), coin(2, 3)}),
      ModelError);
}

TEST_CASE("outcome counts counterfeits per pan, lighter side loses") {
  const Instance inst({2, 2, 2});
  const auto w =
      Weighing::make(inst, {coin(1, 1), coin(2, 1)}, {coin(2, 2), coin(3, 1)});
  // Hand-evaluated truth table.
  CHECK(outcome(inst, w, Candidate{{1, 1, 1}}) == Outcome::RightHeavy);
  CHECK(outcome(inst, w, Candidate{{1, 1, 2}}) == Outcome::RightHeavy);
  CHECK(outcome(inst, w, Candidate{{1, 2, 1}}) == Outcome::LeftHeavy);
  CHECK(outcome(inst, w, Candidate{{1, 2, 2}}) == Outcome::Balanced);
  CHECK(outcome(inst, w, Candidate{{2, 1, 1}}) == Outcome::Balanced);
  CHECK(outcome(inst, w, Candidate{{2, 1, 2}}) == Outcome::RightHeavy);
  CHECK(outcome(inst, w, Candidate{{2, 2, 1}}) == Outcome::LeftHeavy);
  CHECK(outcome(inst, w, Candidate{{2, 2, 2}}) == Outcome::LeftHeavy);
}

TEST_CASE("swapping pans mirrors every outcome") {
  const Instance inst({3, 2, 2});
  const CandidateSet d = full_space(inst);
  const std::vector<Weighing> probes = {
      Weighing::make(inst, {coin(1, 1)}, {coin(1, 2)}),
      Weighing::make(inst, {coin(1, 1), coin(2, 2)}, {coin(3, 1), coin(1, 3)}),
      Weighing::make(inst, {coin(2, 1), coin(2, 2), coin(3, 2)},
                     {coin(1, 1), coin(1, 2), coin(1, 3)}),
  };
  for (const Weighing& w : probes) {
    const Weighing m = w.swapped();
    d.for_each_member([&](std::uint64_t rank) {
      const Candidate x = d.decode(rank);
      CHECK(outcome(inst, m, x) == opposite(outcome(inst, w, x)));
    });
  }
  CHECK(opposite(Outcome::Balanced) == Outcome::Balanced);
  CHECK(outcome_char(Outcome::LeftHeavy) == 'L');
  CHECK(outcome_char(Outcome::Balanced) == 'B');
  CHECK(outcome_char(Outcome::RightHeavy) == 'R');
}

TEST_CASE("candidate ranks are row-major with the last set fastest") {
  const Instance inst({2, 3});
  const CandidateSet d = full_space(inst);
  CHECK(d.space_size() == 6);
  CHECK(d.size() == 6);
  CHECK(d.decode(0) == Candidate{{1, 1}});
  CHECK(d.decode(1) == Candidate{{1, 2}});
  CHECK(d.decode(2) == Candidate{{1, 3}});
  CHECK(d.decode(3) == Candidate{{2, 1}});
  CHECK(d.decode(5) == Candidate{{2, 3}});
  for (std::uint64_t r = 0; r < 6; ++r) {
    CHECK(d.encode(d.decode(r)) == r);
  }
  CHECK(d.members() == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("membership editing keeps counts and members in step") {
  const Instance inst({2, 3});
  CandidateSet d(inst, false);
  CHECK(d.empty());
  d.add(Candidate{{2, 1}});
  d.add(4);
  d.add(4);  // idempotent
  CHECK(d.size() == 2);
  CHECK(d.contains(3));
  CHECK(d.contains(Candidate{{2, 2}}));
  CHECK(!d.contains(0));
  CHECK(d.first_member() == Candidate{{2, 1}});
  d.remove(3);
  CHECK(d.size() == 1);
  CHECK(d.sole_member() == Candidate{{2, 2}});
}

TEST_CASE("the explicit model refuses oversized products") {
  CHECK_NOTHROW(full_space(Instance({5, 16}), 80));
  CHECK_THROWS_AS(full_space(Instance({5, 21}), 100), ModelError);
  // Default cap admits 2^24 exactly.
  CHECK_NOTHROW(full_space(Instance({4096, 4096})));
  CHECK_THROWS_AS(full_space(Instance({4096, 4097})), ModelError);
  // The raw mask type itself draws a hard line at 2^28.
  CHECK_THROWS_AS(CandidateSet(Instance({1u << 15, 1u << 14}), false),
                  ModelError);
}

TEST_CASE("partition splits by outcome and loses nobody") {
  const Instance inst({2, 2, 2});
  const CandidateSet d = full_space(inst);
  const auto w =
      Weighing::make(inst, {coin(1, 1), coin(2, 1)}, {coin(2, 2), coin(3, 1)});
  const auto parts = partition(d, w);
  CHECK(parts[0].size() == 3);  // left heavy
  CHECK(parts[1].size() == 2);  // balanced
  CHECK(parts[2].size() == 3);  // right heavy
  CHECK(parts[0].contains(Candidate{{1, 2, 1}}));
  CHECK(parts[1].contains(Candidate{{2, 1, 1}}));
  CHECK(parts[2].contains(Candidate{{1, 1, 2}}));
  // Every candidate lands in exactly the part its outcome names.
  d.for_each_member([&](std::uint64_t rank) {
    const auto o = outcome(inst, w, d.decode(rank));
    CHECK(parts[static_cast<int>(o)].contains(rank));
  });
}

TEST_CASE("partition respects restricted membership") {
  const Instance inst({3, 2});
  CandidateSet d(inst, false);
  d.add(Candidate{{1, 1}});
  d.add(Candidate{{2, 1}});
  // s1.3 and s2.2 are counterfeit in no member: known genuine, pure ballast.
  const auto plain = Weighing::make(inst, {coin(1, 1)}, {coin(1, 2)});
  const auto ballasted = Weighing::make(inst, {coin(1, 1), coin(2, 2)},
                                        {coin(1, 2), coin(1, 3)});
  const auto a = partition(d, plain);
  const auto b = partition(d, ballasted);
  for (int i = 0; i < 3; ++i) {
    CHECK(a[i] == b[i]);
  }
}

TEST_CASE("coin classes group by incidence and flag the genuine pool") {
  const Instance inst({3, 2});
  CandidateSet d(inst, false);
  d.add(Candidate{{1, 1}});
  d.add(Candidate{{2, 1}});
  const auto classes = coin_classes(d);
  REQUIRE(classes.size() == 4);
  // Ordered by (class size, incidence signature); the two-coin genuine pool
  // comes last.
  std::set<std::vector<CoinId>> got;
  for (const auto& c : classes) {
    got.insert(c.coins);
  }
  CHECK(got.count({coin(1, 1)}) == 1);
  CHECK(got.count({coin(1, 2)}) == 1);
  CHECK(got.count({coin(2, 1)}) == 1);
  CHECK(got.count({coin(1, 3), coin(2, 2)}) == 1);
  int genuine = 0;
  for (const auto& c : classes) {
    if (c.known_genuine) {
      ++genuine;
      CHECK(c.coins == std::vector<CoinId>{coin(1, 3), coin(2, 2)});
      CHECK(c.incidence == 0);
    }
    if (c.coins == std::vector<CoinId>{coin(2, 1)}) {
      CHECK(c.incidence == 2);
    }
  }
  CHECK(genuine == 1);
}

TEST_CASE("full spaces give every coin its own class") {
  const auto classes = coin_classes(full_space(Instance({5, 16})));
  CHECK(classes.size() == 21);
  for (const auto& c : classes) {
    CHECK(c.coins.size() == 1);
    CHECK(!c.known_genuine);
  }
}
