// Exact bound calculus for multi-set light-coin search.
//
// Everything in this header decides inequalities with integer arithmetic.
// No floating-point value ever decides a bound: a comparison of a rational p/q
// against log3(a/b) is settled by comparing the integers 3^p * b^q and a^q.
// Decimal strings appear only as display artifacts, computed at 50-digit
// precision after the exact decision has been made.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace coins {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Provenance grade attached to a bound or recorded value.
//   PaperClaimed - asserted by the source claim table without a mechanical
//                  certificate in this codebase.
//   Verified     - backed by an artifact this codebase can check (a strategy
//                  tree or an exhaustion run).
//   Derived      - produced by a derivation rule from other graded facts.
enum class ClaimStatus : std::uint8_t { PaperClaimed, Verified, Derived };

std::string to_string(ClaimStatus s);

// base^exp over arbitrary-precision integers. exp is a plain machine count.
BigInt ipow(const BigInt& base, std::uint64_t exp);

// Sign of r - log3(x) for rational r and rational x > 0, decided exactly:
// returns -1, 0, or +1. Throws std::invalid_argument when x <= 0.
int compare_rational_to_log3(const Rational& r, const Rational& x);

// Exact ceiling of a rational.
long long ceil_rational(const Rational& r);

// Smallest t with 3^t >= product of the given set sizes (the number of
// weighings below which outcomes cannot distinguish all candidates).
long long info_lower_bound(const std::vector<std::uint32_t>& sizes);

// Same, for k identical sets of size n: smallest t with 3^t >= n^k.
long long info_lower_bound_pow(std::uint64_t n, std::uint64_t k);

// One row of the per-size cost table: for each set size n in 1..81 the
// table records an exact rational cost-per-set mu = v / k0, meaning "k0
// identical sets of size n are solvable in v weighings", plus the decimal
// log3(n) string printed in the source table (absent for 78..80).
struct MuEntry {
  int n = 0;
  Rational mu;
  long long k0 = 1;
  std::optional<std::string> log3_listed;
};

// The full table, indexed 0..80 for n = 1..81. Construction validates, for
// every row: mu >= log3(n) exactly, k0 >= 1, and mu * k0 integral.
const std::vector<MuEntry>& mu_table();

// Table lookups. Throw std::out_of_range unless 1 <= n <= 81.
const MuEntry& mu_entry(int n);
Rational mu(int n);
long long k0(int n);

// log3(n) rendered to `digits` significant decimal digits (display only).
std::string log3_decimal(std::uint64_t n, int digits = 12);

// Whether the printed log3 column of row n agrees with the recomputed value
// to within +/-0.001 (decided exactly). Empty when the row prints nothing.
std::optional<bool> printed_log3_within_tolerance(int n);

// ceil(k * mu(n)) — an upper bound on the weighings needed for k identical
// sets of size n, n <= 81. The grade is Derived when k0(n) divides k (the
// bound is then k/k0 repetitions of the recorded algorithm) and PaperClaimed
// otherwise (the source asserts those cases without exhibiting algorithms).
struct TableBound {
  long long value = 0;
  ClaimStatus status = ClaimStatus::Derived;
};
TableBound upper_bound_prop1(int n, long long k);

// The reduction ladder: 26 rationals 1 = lambda_0 < ... < lambda_25 = 3
// whose multiples d_i = 27 * lambda_i are the integer sizes 27..81 that the
// cost table covers densely enough to absorb any n > 81 after halving it
// down by factors of three.
const std::array<Rational, 26>& lambda_ladder();
const std::array<int, 26>& ladder_d();

// Decomposition of n > 81 as n = lambda * 3^l with lambda in (1, 3]:
//   l     - number of thirds peeled off (always >= 4 here);
//   lambda- the exact residue n / 3^l;
//   j     - least index with lambda <= lambda_j (so lambda_{j-1} < lambda);
//   d     - ceil(27 * lambda), the subset size reached after l-3 rounds;
//   d_j   - 27 * lambda_j, the table row that covers d (d <= d_j).
struct Reduction {
  int l = 0;
  Rational lambda;
  int j = 0;
  int d = 0;
  int d_j = 0;
};
Reduction reduce_large_n(std::uint64_t n);

// Additive slack used on top of log3(n) in the general upper bound.
//   Paper   - the published constant 19/250 = 0.076.
//   Derived - the exact worst ladder gap epsilon* computed by gap_report()
//             (which exceeds 0.076; the two are never silently swapped).
enum class EpsilonMode : std::uint8_t { Paper, Derived };

// ceil(k * (log3 n + epsilon)), decided exactly even when the argument is an
// integer. For n > 81 `constructive` also carries the explicit route
// k*(l-3) + upper_bound_prop1(d_j, k) obtained through reduce_large_n.
struct GeneralBound {
  long long value = 0;
  std::optional<long long> constructive;
};
GeneralBound upper_bound_prop2(std::uint64_t n, std::uint64_t k, EpsilonMode mode);

// One ladder gap: how far the table cost mu(d_i) sits above the information
// floor log3(d_{i-1} + 1) of the worst size funneled to row d_i.
struct GapEntry {
  int i = 0;                  // ladder index 1..25
  int d = 0;                  // d_i
  int floor_n = 0;            // d_{i-1} + 1
  Rational mu_d;              // mu(d_i)
  std::string gap_decimal;    // mu(d_i) - log3(floor_n), 50-digit display
  bool exceeds_constant = false;  // gap > 19/250, decided exactly
};

// The audit of all 25 ladder gaps.
struct GapReport {
  std::vector<GapEntry> entries;       // i = 1..25 in order
  int argmax_i = 0;                    // index of the largest gap (exact)
  int argmax_d = 0;                    // its d_i
  Rational epsilon_star_offset;        // epsilon* = offset - log3(subtrahend)
  std::uint64_t epsilon_star_subtrahend = 1;
  std::string epsilon_star_decimal;    // 50-digit display of epsilon*
  Rational published_constant;         // 19/250
  bool max_exceeds_constant = false;   // epsilon* > 19/250, decided exactly
  std::vector<int> exceeding_d;        // all d_i whose gap exceeds 19/250
};
GapReport gap_report();

}  // namespace coins
