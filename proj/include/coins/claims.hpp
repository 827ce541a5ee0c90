// The recorded-results database and the rules that rederive bounds from it.
//
// A Fact records one claim about an instance: an exact number of weighings,
// an upper bound, or an "arrow" — an adaptive prefix of a given depth after
// which every outcome branch is a leaf of a stated representability class.
// The derivation engine recombines facts through four rules:
//   R1  disjoint sum: solving A and B side by side solves A ⊔ B, costs add;
//   R2  arrow closing: a depth-k arrow to one-representable leaves of at
//       most r candidates yields a bound k + ceil(log3 r);
//   R3  multi-profile arrows: the worst branch pays, so the bound is the
//       max of (depth_i + ceil(log3 r_i)) over the one-rep profiles;
//   R4  per-size cost table: ceil(k * mu(n)) for k sets of size n <= 81.
// Arrows with any two-representable profile yield no bound (their closing
// cost is not recorded anywhere in this codebase).
//
// The audit certifies every exact-value fact against the information floor
// with big-integer arithmetic, cross-checks the cost table against the facts
// it was distilled from, and lists the claims the rules cannot reproduce.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coins/bounds.hpp"
#include "coins/representability.hpp"

namespace coins {

// Malformed claims-database text.
struct ClaimsFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FactKind : std::uint8_t { ExactValue, UpperBound, Arrow };

std::string to_string(FactKind k);

// One arrow branch profile: after `depth` weighings, every branch is a leaf
// of the given class (OneRep with at most `profile.r` candidates, or TwoRep
// with groups of at most `profile.t` and at most `profile.s` candidates).
struct ArrowTarget {
  int depth = 0;
  LeafClass profile;

  friend bool operator==(const ArrowTarget&, const ArrowTarget&) = default;
};

struct Fact {
  std::string tag;                       // stable identifier, e.g. "eq14"
  std::vector<std::uint32_t> sets;       // subject sizes, as recorded
  // Present when the subject was recorded as "k sets of size n"; sets then
  // holds n repeated k times.
  std::optional<std::pair<std::uint32_t, std::uint32_t>> pair_form;
  FactKind kind = FactKind::ExactValue;
  long long value = 0;                   // exact value or upper bound
  std::vector<ArrowTarget> arrows;       // nonempty iff kind == Arrow
  ClaimStatus status = ClaimStatus::PaperClaimed;
  std::string provenance;                // claim tag or derivation trace

  friend bool operator==(const Fact&, const Fact&) = default;
};

// Subject sizes sorted ascending — the grouping key for audit and rules.
std::vector<std::uint32_t> canonical_subject(const Fact& f);

// The compiled-in database: 43 exact values and 17 arrows.
const std::vector<Fact>& builtin_claims();

// Canonical JSON rendering (two-space indent, trailing newline) and its
// inverse. load_claims throws ClaimsFormatError on malformed input.
std::string dump_claims(const std::vector<Fact>& db);
std::vector<Fact> load_claims(const std::string& json_text);

// Closure of db under R1..R4, breadth-limited to traces of at most 8
// ingredients. Returns db followed by the derived facts (status Derived or,
// for table bounds at k not divisible by k0, PaperClaimed), each carrying a
// human-readable trace in `provenance`. Rule inputs are the non-derived
// facts only, so rerunning on the output is idempotent.
std::vector<Fact> derive_bounds(const std::vector<Fact>& db);

// Audit of one exact-value fact.
struct ClaimCheck {
  std::string tag;
  std::vector<std::uint32_t> sets;
  long long value = 0;
  long long info_bound = 0;
  bool sound = false;     // value >= info_bound
  bool it_tight = false;  // value == info_bound
  std::optional<long long> best_derived;  // engine's best bound for the subject
  std::string best_trace;                 // trace achieving best_derived
  bool reproduced = false;                // best_derived == value
};

// Cross-check of one cost-table row against the database: mu(n) * k0(n)
// must equal the exact value recorded for k0(n) sets of size n, when the
// database has that record.
struct TableCrossCheck {
  int n = 0;
  long long k0 = 1;
  long long product = 0;
  std::optional<std::string> claim_tag;
  bool consistent = true;  // vacuously true when no claim exists
};

struct AuditReport {
  std::vector<ClaimCheck> exact_checks;       // database order
  std::vector<TableCrossCheck> table_checks;  // n = 1..81
  std::vector<std::string> not_reproduced;    // exact claims the rules miss
  // Exact claims where some derived bound lands strictly below the recorded
  // value — impossible if both are right, so flagged loudly.
  std::vector<std::string> below_claimed;
  bool all_sound = false;
  bool all_it_tight = false;
  bool table_consistent = false;
};

AuditReport audit_claims(const std::vector<Fact>& db);

// Renderings of the audit: an aligned human-readable table and JSON.
std::string audit_table(const AuditReport& report);
std::string audit_json(const AuditReport& report);

}  // namespace coins
