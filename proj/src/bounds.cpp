#include "coins/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace coins {

namespace {

using Dec = boost::multiprecision::cpp_dec_float_50;

// Largest exponent accepted for an exact power comparison. Comparisons stay
// well below this in practice; the guard turns a runaway input into a clear
// error instead of an unbounded allocation.
constexpr std::uint64_t kMaxExponent = 1u << 24;

std::uint64_t checked_exponent(const BigInt& e, const char* what) {
  if (e < 0 || e > kMaxExponent) {
    throw std::invalid_argument(std::string(what) + ": exponent out of range");
  }
  return e.convert_to<std::uint64_t>();
}

// Smallest t with 3^t >= value (value >= 1).
long long smallest_pow3_at_least(const BigInt& value) {
  if (value <= 1) {
    return 0;
  }
  // Seed from the bit length (log3 x = log2 x * log3 2), then settle exactly.
  const double kLog3Of2 = 0.63092975357145743;
  long long t = static_cast<long long>(
      static_cast<double>(boost::multiprecision::msb(value)) * kLog3Of2);
  t = std::max<long long>(0, t - 2);
  BigInt pw = ipow(3, static_cast<std::uint64_t>(t));
  while (pw < value) {
    pw *= 3;
    ++t;
  }
  while (t > 0) {
    BigInt down = pw / 3;
    if (down >= value) {
      pw = down;
      --t;
    } else {
      break;
    }
  }
  return t;
}

// Digit-by-digit parse; BigInt's string constructor would read a leading
// zero (as in the fraction of "3.033") as an octal prefix.
BigInt parse_digits(const std::string& digits) {
  BigInt value = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("parse_digits: not a digit string");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

// Decimal string like "2.93" as an exact rational (digits over a power of ten).
Rational decimal_string_to_rational(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    return Rational(parse_digits(text));
  }
  const std::string whole = text.substr(0, dot);
  const std::string frac = text.substr(dot + 1);
  const BigInt num = parse_digits(whole) * ipow(10, frac.size()) + parse_digits(frac);
  return Rational(num, ipow(10, frac.size()));
}

std::string decimal_of(const Dec& value, int digits) {
  std::ostringstream out;
  out << std::setprecision(digits) << value;
  return out.str();
}

Dec log3_dec(const Dec& x) { return log(x) / log(Dec(3)); }

struct RawMuRow {
  int n;
  long long num;
  long long den;
  const char* printed;  // nullptr when the source table leaves the cell blank
};

// Per-size cost table: n, cost numerator/denominator, printed log3 column.
constexpr RawMuRow kMuRows[] = {
    {1, 0, 1, "0"},      {2, 2, 3, "0.631"},  {3, 1, 1, "1"},
    {4, 9, 7, "1.262"},  {5, 3, 2, "1.465"},  {6, 5, 3, "1.631"},
    {7, 9, 5, "1.771"},  {8, 21, 11, "1.891"}, {9, 2, 1, "2"},
    {10, 17, 8, "2.096"}, {11, 11, 5, "2.183"}, {12, 16, 7, "2.262"},
    {13, 19, 8, "2.335"}, {14, 22, 9, "2.402"}, {15, 5, 2, "2.465"},
    {16, 23, 9, "2.524"}, {17, 13, 5, "2.579"}, {18, 8, 3, "2.631"},
    {19, 19, 7, "2.680"}, {20, 11, 4, "2.727"}, {21, 14, 5, "2.771"},
    {22, 17, 6, "2.814"}, {23, 23, 8, "2.854"}, {24, 32, 11, "2.893"},
    {25, 3, 1, "2.93"},   {26, 3, 1, "2.96"},   {27, 3, 1, "3"},
    {28, 28, 9, "3.033"}, {29, 31, 10, "3.065"}, {30, 25, 8, "3.096"},
    {31, 19, 6, "3.126"}, {32, 19, 6, "3.155"}, {33, 16, 5, "3.183"},
    {34, 13, 4, "3.210"}, {35, 13, 4, "3.236"}, {36, 23, 7, "3.262"},
    {37, 10, 3, "3.287"}, {38, 10, 3, "3.311"}, {39, 27, 8, "3.335"},
    {40, 27, 8, "3.358"}, {41, 31, 9, "3.380"}, {42, 31, 9, "3.402"},
    {43, 7, 2, "3.424"},  {44, 7, 2, "3.445"},  {45, 7, 2, "3.465"},
    {46, 7, 2, "3.485"},  {47, 32, 9, "3.505"}, {48, 32, 9, "3.524"},
    {49, 32, 9, "3.543"}, {50, 18, 5, "3.561"}, {51, 18, 5, "3.579"},
    {52, 29, 8, "3.597"}, {53, 11, 3, "3.614"}, {54, 11, 3, "3.631"},
    {55, 37, 10, "3.648"}, {56, 37, 10, "3.664"}, {57, 26, 7, "3.680"},
    {58, 26, 7, "3.696"}, {59, 15, 4, "3.712"}, {60, 15, 4, "3.727"},
    {61, 15, 4, "3.742"}, {62, 19, 5, "3.757"}, {63, 19, 5, "3.771"},
    {64, 23, 6, "3.786"}, {65, 23, 6, "3.800"}, {66, 23, 6, "3.814"},
    {67, 31, 8, "3.827"}, {68, 31, 8, "3.841"}, {69, 31, 8, "3.854"},
    {70, 39, 10, "3.867"}, {71, 43, 11, "3.880"}, {72, 43, 11, "3.893"},
    {73, 47, 12, "3.905"}, {74, 75, 19, "3.918"}, {75, 75, 19, "3.930"},
    {76, 75, 19, "3.942"}, {77, 4, 1, "3.954"}, {78, 4, 1, nullptr},
    {79, 4, 1, nullptr},  {80, 4, 1, nullptr},  {81, 4, 1, "4"},
};

struct RawLambda {
  long long num;
  long long den;
};

constexpr RawLambda kLambdaRows[26] = {
    {1, 1},   {28, 27}, {10, 9},  {32, 27}, {11, 9},  {35, 27}, {4, 3},
    {38, 27}, {40, 27}, {14, 9},  {44, 27}, {46, 27}, {49, 27}, {17, 9},
    {52, 27}, {2, 1},   {56, 27}, {58, 27}, {61, 27}, {7, 3},   {22, 9},
    {23, 9},  {70, 27}, {8, 3},   {76, 27}, {3, 1},
};

// Slack epsilon = offset - log3(subtrahend) added to log3(n) per set in the
// general upper bound. The published mode uses a plain constant.
struct Epsilon {
  Rational offset;
  std::uint64_t subtrahend;
};

Epsilon epsilon_for(EpsilonMode mode) {
  if (mode == EpsilonMode::Paper) {
    return {Rational(19, 250), 1};
  }
  static const Epsilon derived = [] {
    const GapReport report = gap_report();
    return Epsilon{report.epsilon_star_offset, report.epsilon_star_subtrahend};
  }();
  return derived;
}

}  // namespace

std::string to_string(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::PaperClaimed:
      return "PaperClaimed";
    case ClaimStatus::Verified:
      return "Verified";
    case ClaimStatus::Derived:
      return "Derived";
  }
  return "unknown";
}

BigInt ipow(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp != 0) {
    if (exp & 1u) {
      result *= b;
    }
    exp >>= 1u;
    if (exp != 0) {
      b *= b;
    }
  }
  return result;
}

int compare_rational_to_log3(const Rational& r, const Rational& x) {
  if (x <= 0) {
    throw std::invalid_argument("compare_rational_to_log3: argument must be positive");
  }
  const BigInt p = numerator(r);
  const BigInt q = denominator(r);  // > 0 in canonical form
  const BigInt a = numerator(x);
  const BigInt b = denominator(x);
  // r vs log3(a/b)  <=>  3^p vs (a/b)^q, cleared of denominators.
  const std::uint64_t qe = checked_exponent(q, "compare_rational_to_log3");
  BigInt lhs;
  BigInt rhs;
  if (p >= 0) {
    const std::uint64_t pe = checked_exponent(p, "compare_rational_to_log3");
    lhs = ipow(3, pe) * ipow(b, qe);
    rhs = ipow(a, qe);
  } else {
    const std::uint64_t pe = checked_exponent(-p, "compare_rational_to_log3");
    lhs = ipow(b, qe);
    rhs = ipow(a, qe) * ipow(3, pe);
  }
  if (lhs < rhs) {
    return -1;
  }
  return lhs == rhs ? 0 : 1;
}

long long ceil_rational(const Rational& r) {
  const BigInt p = numerator(r);
  const BigInt q = denominator(r);
  BigInt d = p / q;  // truncates toward zero
  if (d * q < p) {
    ++d;
  }
  return d.convert_to<long long>();
}

long long info_lower_bound(const std::vector<std::uint32_t>& sizes) {
  BigInt product = 1;
  for (std::uint32_t n : sizes) {
    if (n == 0) {
      throw std::invalid_argument("info_lower_bound: set sizes must be positive");
    }
    product *= n;
  }
  return smallest_pow3_at_least(product);
}

long long info_lower_bound_pow(std::uint64_t n, std::uint64_t k) {
  if (n == 0) {
    throw std::invalid_argument("info_lower_bound_pow: n must be positive");
  }
  return smallest_pow3_at_least(ipow(BigInt(n), k));
}

const std::vector<MuEntry>& mu_table() {
  static const std::vector<MuEntry> table = [] {
    std::vector<MuEntry> rows;
    rows.reserve(81);
    for (const RawMuRow& raw : kMuRows) {
      MuEntry e;
      e.n = raw.n;
      e.mu = Rational(raw.num, raw.den);
      e.k0 = raw.den;
      if (raw.printed != nullptr) {
        e.log3_listed = std::string(raw.printed);
      }
      // Row invariants: the recorded cost is never below the information
      // floor, k0 is the (already reduced) denominator, and k0 sets cost an
      // integral number of weighings.
      if (e.k0 < 1 || denominator(e.mu) != e.k0) {
        throw std::logic_error("cost table row has a non-reduced ratio");
      }
      if (denominator(Rational(e.mu * e.k0)) != 1) {
        throw std::logic_error("cost table row is not integral at k0");
      }
      if (compare_rational_to_log3(e.mu, Rational(e.n)) < 0) {
        throw std::logic_error("cost table row sits below the information floor");
      }
      rows.push_back(std::move(e));
    }
    if (rows.size() != 81) {
      throw std::logic_error("cost table must cover sizes 1..81");
    }
    return rows;
  }();
  return table;
}

const MuEntry& mu_entry(int n) {
  if (n < 1 || n > 81) {
    throw std::out_of_range("mu_entry: size must be in 1..81");
  }
  return mu_table()[static_cast<std::size_t>(n - 1)];
}

Rational mu(int n) { return mu_entry(n).mu; }

long long k0(int n) { return mu_entry(n).k0; }

std::string log3_decimal(std::uint64_t n, int digits) {
  if (n == 0) {
    throw std::invalid_argument("log3_decimal: n must be positive");
  }
  return decimal_of(log3_dec(Dec(n)), digits);
}

std::optional<bool> printed_log3_within_tolerance(int n) {
  const MuEntry& entry = mu_entry(n);
  if (!entry.log3_listed.has_value()) {
    return std::nullopt;
  }
  const Rational printed = decimal_string_to_rational(*entry.log3_listed);
  const Rational tol(1, 1000);
  // |printed - log3 n| <= 1/1000, decided exactly on both sides.
  const bool not_low = compare_rational_to_log3(printed + tol, Rational(n)) >= 0;
  const bool not_high = compare_rational_to_log3(printed - tol, Rational(n)) <= 0;
  return not_low && not_high;
}

TableBound upper_bound_prop1(int n, long long k) {
  if (k < 1) {
    throw std::out_of_range("upper_bound_prop1: k must be positive");
  }
  const MuEntry& entry = mu_entry(n);
  TableBound bound;
  bound.value = ceil_rational(entry.mu * k);
  bound.status =
      (k % entry.k0 == 0) ? ClaimStatus::Derived : ClaimStatus::PaperClaimed;
  return bound;
}

const std::array<Rational, 26>& lambda_ladder() {
  static const std::array<Rational, 26> ladder = [] {
    std::array<Rational, 26> values;
    for (std::size_t i = 0; i < 26; ++i) {
      values[i] = Rational(kLambdaRows[i].num, kLambdaRows[i].den);
      if (i > 0 && !(values[i - 1] < values[i])) {
        throw std::logic_error("reduction ladder is not strictly increasing");
      }
    }
    if (values.front() != 1 || values.back() != 3) {
      throw std::logic_error("reduction ladder must run from 1 to 3");
    }
    return values;
  }();
  return ladder;
}

const std::array<int, 26>& ladder_d() {
  static const std::array<int, 26> values = [] {
    const auto& ladder = lambda_ladder();
    std::array<int, 26> d{};
    for (std::size_t i = 0; i < 26; ++i) {
      const Rational scaled = ladder[i] * 27;
      if (denominator(scaled) != 1) {
        throw std::logic_error("ladder rung times 27 must be an integer");
      }
      d[i] = static_cast<int>(numerator(scaled).convert_to<long long>());
      if (d[i] < 27 || d[i] > 81) {
        throw std::logic_error("ladder size outside the covered table range");
      }
    }
    return d;
  }();
  return values;
}

Reduction reduce_large_n(std::uint64_t n) {
  if (n <= 81) {
    throw std::invalid_argument("reduce_large_n: n must exceed 81");
  }
  Reduction red;
  BigInt pow3 = 1;
  while (pow3 * 3 < n) {
    pow3 *= 3;
    ++red.l;
  }
  red.lambda = Rational(BigInt(n), pow3);  // in (1, 3] by choice of l
  const auto& ladder = lambda_ladder();
  const auto& d_values = ladder_d();
  red.j = 0;
  for (int j = 1; j <= 25; ++j) {
    if (red.lambda <= ladder[static_cast<std::size_t>(j)]) {
      red.j = j;
      break;
    }
  }
  if (red.j == 0) {
    throw std::logic_error("residue escaped the reduction ladder");
  }
  red.d = static_cast<int>(ceil_rational(red.lambda * 27));
  red.d_j = d_values[static_cast<std::size_t>(red.j)];
  if (red.d > red.d_j) {
    throw std::logic_error("reduced size exceeds its covering ladder size");
  }
  return red;
}

GeneralBound upper_bound_prop2(std::uint64_t n, std::uint64_t k,
                               EpsilonMode mode) {
  if (n == 0 || k == 0) {
    throw std::invalid_argument("upper_bound_prop2: n and k must be positive");
  }
  const Epsilon eps = epsilon_for(mode);
  const BigInt p = numerator(eps.offset);
  const BigInt q = denominator(eps.offset);
  const std::uint64_t qe = checked_exponent(q, "upper_bound_prop2");
  if (k > kMaxExponent / qe) {
    throw std::invalid_argument("upper_bound_prop2: k too large for exact evaluation");
  }
  const std::uint64_t m = k * qe;  // shared exponent after clearing q
  const BigInt n_pow = ipow(BigInt(n), m);
  const BigInt s_pow = ipow(BigInt(eps.subtrahend), m);

  // t >= k*(log3 n + offset - log3 s)  <=>  3^(q*t - k*p) * s^(q*k) >= n^(q*k)
  const auto satisfied = [&](long long t) {
    const BigInt e = q * t - BigInt(k) * p;
    if (e >= 0) {
      return ipow(3, checked_exponent(e, "upper_bound_prop2")) * s_pow >= n_pow;
    }
    return s_pow >= n_pow * ipow(3, checked_exponent(-e, "upper_bound_prop2"));
  };

  const double estimate =
      static_cast<double>(k) *
      ((std::log(static_cast<double>(n)) -
        std::log(static_cast<double>(eps.subtrahend))) /
           std::log(3.0) +
       p.convert_to<double>() / q.convert_to<double>());
  long long t = std::max<long long>(
      0, static_cast<long long>(std::floor(estimate)) - 2);
  while (!satisfied(t)) {
    ++t;
  }
  while (t > 0 && satisfied(t - 1)) {
    --t;
  }

  GeneralBound bound;
  bound.value = t;
  if (n > 81) {
    const Reduction red = reduce_large_n(n);
    const TableBound table = upper_bound_prop1(red.d_j, static_cast<long long>(k));
    bound.constructive =
        static_cast<long long>(k) * (red.l - 3) + table.value;
  }
  return bound;
}

GapReport gap_report() {
  static const GapReport report = [] {
    GapReport rep;
    rep.published_constant = Rational(19, 250);
    const auto& ds = ladder_d();
    const Dec log3 = log(Dec(3));
    int best = 1;
    for (int i = 1; i <= 25; ++i) {
      GapEntry entry;
      entry.i = i;
      entry.d = ds[static_cast<std::size_t>(i)];
      entry.floor_n = ds[static_cast<std::size_t>(i - 1)] + 1;
      entry.mu_d = mu(entry.d);
      const Dec mu_dec = Dec(numerator(entry.mu_d).convert_to<long long>()) /
                         Dec(denominator(entry.mu_d).convert_to<long long>());
      entry.gap_decimal = decimal_of(mu_dec - log(Dec(entry.floor_n)) / log3, 50);
      entry.exceeds_constant =
          compare_rational_to_log3(entry.mu_d - rep.published_constant,
                                   Rational(entry.floor_n)) > 0;
      if (entry.exceeds_constant) {
        rep.exceeding_d.push_back(entry.d);
      }
      rep.entries.push_back(std::move(entry));
      if (i > 1) {
        // gap_i > gap_best  <=>  mu_i - mu_best > log3(floor_i / floor_best)
        const GapEntry& cur = rep.entries.back();
        const GapEntry& top = rep.entries[static_cast<std::size_t>(best - 1)];
        if (compare_rational_to_log3(
                cur.mu_d - top.mu_d,
                Rational(cur.floor_n, top.floor_n)) > 0) {
          best = i;
        }
      }
    }
    const GapEntry& winner = rep.entries[static_cast<std::size_t>(best - 1)];
    rep.argmax_i = best;
    rep.argmax_d = winner.d;
    rep.epsilon_star_offset = winner.mu_d;
    rep.epsilon_star_subtrahend = static_cast<std::uint64_t>(winner.floor_n);
    rep.epsilon_star_decimal = winner.gap_decimal;
    rep.max_exceeds_constant = winner.exceeds_constant;
    return rep;
  }();
  return report;
}

}  // namespace coins
