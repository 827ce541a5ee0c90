#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "coins/bounds.hpp"

using namespace coins;

TEST_CASE("integer powers and ceilings are exact") {
  CHECK(ipow(BigInt(3), 0) == 1);
  CHECK(ipow(BigInt(3), 4) == 81);
  CHECK(ipow(BigInt(10), 30) == BigInt("1000000000000000000000000000000"));
  CHECK(ceil_rational(Rational(7, 2)) == 4);
  CHECK(ceil_rational(Rational(-7, 2)) == -3);
  CHECK(ceil_rational(Rational(4)) == 4);
  CHECK(ceil_rational(Rational(0)) == 0);
}

TEST_CASE("rational-vs-log comparisons never touch floating point") {
  CHECK(compare_rational_to_log3(Rational(2), Rational(9)) == 0);
  CHECK(compare_rational_to_log3(Rational(2), Rational(17, 2)) > 0);
  CHECK(compare_rational_to_log3(Rational(2), Rational(10)) < 0);
  CHECK(compare_rational_to_log3(Rational(-1), Rational(1, 3)) == 0);
  CHECK(compare_rational_to_log3(Rational(1, 2), Rational(17, 10)) > 0);
  // A razor-thin case: log3(28) = 3.03310...; 3.0331 sits just below it.
  CHECK(compare_rational_to_log3(Rational(30331, 10000), Rational(28)) < 0);
  CHECK(compare_rational_to_log3(Rational(30332, 10000), Rational(28)) > 0);
}

TEST_CASE("information floor over products of set sizes") {
  CHECK(info_lower_bound({1}) == 0);
  CHECK(info_lower_bound({2}) == 1);
  CHECK(info_lower_bound({5, 5}) == 3);     // 25 <= 27
  CHECK(info_lower_bound({4, 4, 5}) == 4);  // 80 <= 81
  CHECK(info_lower_bound({3, 3, 3, 3}) == 4);
  CHECK(info_lower_bound_pow(4, 7) == 9);   // 3^8 < 4^7 <= 3^9
  CHECK(info_lower_bound_pow(28, 14) == 43);
  CHECK(info_lower_bound_pow(76, 19) == 75);
  // Far beyond 64 bits: 100^50 = 10^100 needs 210 ternary splits.
  CHECK(info_lower_bound_pow(100, 50) == 210);
}

TEST_CASE("the per-size cost table is internally consistent") {
  const auto& table = mu_table();
  REQUIRE(table.size() == 81);
  for (const MuEntry& e : table) {
    CAPTURE(e.n);
    // mu(n) >= log3 n, exactly.
    CHECK(compare_rational_to_log3(e.mu, Rational(e.n)) >= 0);
    // k0 is mu's reduced denominator, and k0 * mu is integral.
    CHECK(denominator(e.mu) == e.k0);
    CHECK(denominator(Rational(e.mu * e.k0)) == 1);
  }
  CHECK(mu(27) == Rational(3));
  CHECK(k0(27) == 1);
  CHECK(mu(10) == Rational(17, 8));
  CHECK(k0(10) == 8);
  CHECK(mu(76) == Rational(75, 19));
  CHECK(k0(76) == 19);
  CHECK(mu(1) == Rational(0));
  CHECK_THROWS_AS(mu_entry(0), std::out_of_range);
  CHECK_THROWS_AS(mu_entry(82), std::out_of_range);
}

TEST_CASE("printed logarithms replicate except two known misprints") {
  std::set<int> mismatched;
  std::set<int> blank;
  for (int n = 1; n <= 81; ++n) {
    const auto ok = printed_log3_within_tolerance(n);
    if (!ok.has_value()) {
      blank.insert(n);
    } else if (!*ok) {
      mismatched.insert(n);
    }
  }
  CHECK(blank == std::set<int>{78, 79, 80});
  CHECK(mismatched == std::set<int>{8, 26});
}

TEST_CASE("display logarithms carry enough digits") {
  CHECK(log3_decimal(28, 12) == "3.0331032563");
  CHECK(log3_decimal(2, 12) == "0.630929753571");
  CHECK(log3_decimal(3, 6) == "1");
  CHECK(log3_decimal(81, 6) == "4");
  CHECK_THROWS_AS(log3_decimal(0, 6), std::invalid_argument);
}

TEST_CASE("table bounds scale the rate and grade their provenance") {
  const TableBound a = upper_bound_prop1(10, 16);
  CHECK(a.value == 34);  // 16 * 17/8
  CHECK(a.status == ClaimStatus::Derived);
  const TableBound b = upper_bound_prop1(27, 5);
  CHECK(b.value == 15);
  CHECK(b.status == ClaimStatus::Derived);
  const TableBound c = upper_bound_prop1(5, 2);
  CHECK(c.value == 3);
  CHECK(c.status == ClaimStatus::Derived);
  // 8 does not divide 5: the scaled ceiling stands on the claimed row alone.
  const TableBound d = upper_bound_prop1(13, 5);
  CHECK(d.value == 12);
  CHECK(d.status == ClaimStatus::PaperClaimed);
  CHECK_THROWS_AS(upper_bound_prop1(82, 1), std::out_of_range);
}

TEST_CASE("the ladder steps are the documented fractions") {
  const auto& ladder = lambda_ladder();
  const auto& d = ladder_d();
  REQUIRE(ladder.size() == 26);
  CHECK(ladder.front() == Rational(1));
  CHECK(ladder[1] == Rational(28, 27));
  CHECK(ladder[2] == Rational(10, 9));
  CHECK(ladder[3] == Rational(32, 27));
  CHECK(ladder.back() == Rational(3));
  const std::array<int, 26> expected_d = {27, 28, 30, 32, 33, 35, 36, 38, 40,
                                          42, 44, 46, 49, 51, 52, 54, 56, 58,
                                          61, 63, 66, 69, 70, 72, 76, 81};
  CHECK(d == expected_d);
  for (std::size_t i = 0; i < 26; ++i) {
    CHECK(Rational(27) * ladder[i] == Rational(d[i]));
    if (i > 0) {
      CHECK(ladder[i] > ladder[i - 1]);
    }
  }
}

TEST_CASE("large sizes reduce along the ladder") {
  const Reduction r100 = reduce_large_n(100);
  CHECK(r100.l == 4);
  CHECK(r100.lambda == Rational(100, 81));
  CHECK(r100.j == 5);
  CHECK(r100.d == 34);
  CHECK(r100.d_j == 35);

  const Reduction r243 = reduce_large_n(243);
  CHECK(r243.l == 4);
  CHECK(r243.j == 25);
  CHECK(r243.d == 81);
  CHECK(r243.d_j == 81);

  const Reduction r82 = reduce_large_n(82);
  CHECK(r82.l == 4);
  CHECK(r82.j == 1);
  CHECK(r82.d == 28);
  CHECK(r82.d_j == 28);

  CHECK_THROWS_AS(reduce_large_n(81), std::invalid_argument);
}

TEST_CASE("the general bound evaluates its ceiling exactly") {
  for (const EpsilonMode mode : {EpsilonMode::Paper, EpsilonMode::Derived}) {
    CAPTURE(static_cast<int>(mode));
    CHECK(upper_bound_prop2(27, 1, mode).value == 4);
    CHECK(upper_bound_prop2(81, 1, mode).value == 5);
    CHECK(upper_bound_prop2(100, 1, mode).value == 5);
    CHECK(upper_bound_prop2(100, 2, mode).value == 9);
    // k * (log3 n + eps) is exactly integral here in derived mode: the
    // ceiling must not round up past it.
    CHECK(upper_bound_prop2(28, 9, mode).value == 28);
    // Always at least the information floor.
    for (std::uint64_t n : {90ull, 500ull, 1000ull}) {
      for (std::uint64_t k : {1ull, 3ull, 10ull}) {
        const GeneralBound g = upper_bound_prop2(n, k, mode);
        CHECK(g.value >= info_lower_bound_pow(n, k));
        if (g.constructive.has_value()) {
          CHECK(*g.constructive >= info_lower_bound_pow(n, k));
        }
      }
    }
  }
  // Beyond the table, the ladder reduction yields a concrete recipe too.
  const GeneralBound g = upper_bound_prop2(100, 2, EpsilonMode::Paper);
  REQUIRE(g.constructive.has_value());
  CHECK(*g.constructive == 9);
}

TEST_CASE("the slack audit finds the worst ladder gap exactly") {
  const GapReport rep = gap_report();
  REQUIRE(rep.entries.size() == 25);
  CHECK(rep.argmax_i == 1);
  CHECK(rep.argmax_d == 28);
  CHECK(rep.epsilon_star_subtrahend == 28);
  CHECK(rep.epsilon_star_offset == Rational(28, 9));
  CHECK(rep.published_constant == Rational(19, 250));
  CHECK(rep.max_exceeds_constant);
  CHECK(rep.exceeding_d == std::vector<int>{28, 44});
  CHECK(rep.epsilon_star_decimal.substr(0, 13) == "0.07800785480");

  for (const GapEntry& e : rep.entries) {
    if (e.d == 33) {
      CHECK(e.floor_n == 33);
      CHECK(e.gap_decimal.substr(0, 12) == "0.0173416613");
      CHECK(!e.exceeds_constant);
    }
    if (e.d == 44) {
      CHECK(e.floor_n == 43);
      CHECK(e.gap_decimal.substr(0, 12) == "0.0764081155");
      CHECK(e.exceeds_constant);
    }
  }
}

TEST_CASE("status names render stably") {
  CHECK(to_string(ClaimStatus::PaperClaimed) == "PaperClaimed");
  CHECK(to_string(ClaimStatus::Verified) == "Verified");
  CHECK(to_string(ClaimStatus::Derived) == "Derived");
}
