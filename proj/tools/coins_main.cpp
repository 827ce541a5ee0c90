// coins — exact solver, bound calculator, and strategy tool for the
// lighter-counterfeit identification game over several coin sets.
//
// Exit codes: 0 success / verified, 1 verification or audit failure,
// 2 usage error or malformed input, 3 search budget exhausted.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coins/bounds.hpp"
#include "coins/claims.hpp"
#include "coins/model.hpp"
#include "coins/representability.hpp"
#include "coins/solver.hpp"
#include "coins/strategy.hpp"

namespace {

using coins::Instance;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

// `n1,n2,...` or `n^k` (k sets of size n).
std::vector<std::uint32_t> parse_sizes(const std::string& text) {
  const auto parse_u32 = [&](const std::string& part) -> std::uint32_t {
    if (part.empty() || part.size() > 9) {
      throw std::invalid_argument("bad instance \"" + text + "\"");
    }
    std::uint32_t v = 0;
    for (const char c : part) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument("bad instance \"" + text + "\"");
      }
      v = v * 10 + static_cast<std::uint32_t>(c - '0');
    }
    if (v == 0) {
      throw std::invalid_argument("set sizes must be positive in \"" + text +
                                  "\"");
    }
    return v;
  };

  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    const std::uint32_t n = parse_u32(text.substr(0, caret));
    const std::uint32_t k = parse_u32(text.substr(caret + 1));
    if (k == 0 || k > 64) {
      throw std::invalid_argument("set count out of range in \"" + text +
                                  "\"");
    }
    return std::vector<std::uint32_t>(k, n);
  }

  std::vector<std::uint32_t> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = (comma == std::string::npos) ? text.size() : comma;
    sizes.push_back(parse_u32(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return sizes;
}

std::string sizes_text(const std::vector<std::uint32_t>& sizes) {
  std::ostringstream out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << (i ? "," : "") << sizes[i];
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.good()) {
    throw std::runtime_error("cannot write " + path);
  }
}

std::string status_text(coins::SearchResult::Status s) {
  switch (s) {
    case coins::SearchResult::Status::Optimal:
      return "optimal";
    case coins::SearchResult::Status::Infeasible:
      return "infeasible";
    case coins::SearchResult::Status::Exhausted:
      return "exhausted";
  }
  return "unknown";
}

std::string rational_text(const coins::Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

std::string coin_list(const std::vector<coins::CoinId>& coins) {
  std::ostringstream out;
  for (std::size_t i = 0; i < coins.size(); ++i) {
    out << (i ? " " : "") << to_string(coins[i]);
  }
  return out.str();
}

ordered_json stats_json(const coins::SearchStats& stats, bool with_timing) {
  ordered_json j;
  j["nodes"] = stats.nodes;
  j["memo_hits"] = stats.memo_hits;
  j["memo_entries"] = stats.memo_entries;
  j["weighings_tried"] = stats.weighings_tried;
  j["key_fallbacks"] = stats.key_fallbacks;
  if (with_timing) {
    j["seconds"] = stats.seconds;
  }
  return j;
}

// --------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string emit;
  int max_depth = -1;
  double time_limit = 60.0;
  std::uint64_t node_limit = 100'000'000;
  bool no_memo = false;
  bool no_class_reduction = false;
  bool json = false;
  bool no_timing = false;
};

int run_solve(const SolveArgs& args) {
  const Instance inst(parse_sizes(args.instance));
  coins::SearchBudget budget;
  budget.max_depth = args.max_depth;
  budget.time_limit_seconds = args.time_limit;
  budget.node_limit = args.node_limit;
  coins::SolverOptions options;
  options.use_memo = !args.no_memo;
  options.use_class_reduction = !args.no_class_reduction;

  const coins::SearchResult result = coins::solve_exact(inst, budget, options);
  const bool optimal = result.status == coins::SearchResult::Status::Optimal;

  std::string emitted;
  if (optimal && !args.emit.empty()) {
    write_file(args.emit, coins::serialize(*result.tree));
    emitted = args.emit;
  }

  if (args.json) {
    ordered_json j;
    j["instance"] = inst.sizes();
    j["information_floor"] = result.info_bound;
    j["status"] = status_text(result.status);
    if (optimal) {
      j["depth"] = result.depth;
    } else {
      j["depth"] = nullptr;
    }
    j["proved_above"] = result.proved_above;
    j["note"] = result.note;
    j["stats"] = stats_json(result.stats, !args.no_timing);
    if (!emitted.empty()) {
      j["emitted"] = emitted;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance: " << sizes_text(inst.sizes()) << "\n";
    std::cout << "information floor: " << result.info_bound << "\n";
    std::cout << "status: " << status_text(result.status) << "\n";
    if (optimal) {
      std::cout << "optimal depth: " << result.depth << "\n";
    } else {
      std::cout << "best known: every strategy needs more than "
                << result.proved_above << " weighings\n";
      if (!result.note.empty()) {
        std::cout << "note: " << result.note << "\n";
      }
    }
    std::cout << "nodes: " << result.stats.nodes
              << "  weighings tried: " << result.stats.weighings_tried
              << "  memo entries: " << result.stats.memo_entries << "\n";
    if (!args.no_timing) {
      std::cout << "time: " << std::fixed << std::setprecision(3)
                << result.stats.seconds << " s\n";
    }
    if (!emitted.empty()) {
      std::cout << "strategy written to " << emitted << "\n";
    }
  }
  return optimal ? kExitOk : kExitBudget;
}

// -------------------------------------------------------------- verify

struct VerifyArgs {
  std::string file;
  std::string instance;
  unsigned threads = 1;
  bool json = false;
};

int run_verify(const VerifyArgs& args) {
  const std::string text = read_file(args.file);
  const coins::StrategyTree tree = coins::parse(text);

  Instance inst({1});
  std::string source;
  if (!args.instance.empty()) {
    inst = Instance(parse_sizes(args.instance));
    source = "given";
  } else {
    const auto inferred = coins::infer_instance(tree);
    if (!inferred.has_value()) {
      throw coins::FormatError("cannot infer an instance from an empty tree");
    }
    inst = *inferred;
    source = "inferred";
  }

  const coins::VerificationReport rep = coins::verify(tree, inst, args.threads);

  if (args.json) {
    ordered_json j;
    j["file"] = args.file;
    j["instance"] = inst.sizes();
    j["instance_source"] = source;
    j["structurally_valid"] = rep.structurally_valid;
    j["structural_errors"] = rep.structural_errors;
    j["sound"] = rep.sound;
    j["complete"] = rep.complete;
    j["depth"] = rep.depth;
    j["meets_information_floor"] = rep.meets_information_bound;
    ordered_json census = ordered_json::object();
    for (const auto& [d, count] : rep.leaf_census) {
      census[std::to_string(d)] = count;
    }
    j["leaf_census"] = census;
    j["unreachable_leaves"] = rep.unreachable_leaves;
    j["failure_count"] = rep.failure_count;
    ordered_json failures = ordered_json::array();
    std::size_t shown = 0;
    for (const auto& f : rep.failures) {
      if (shown++ == 10) break;
      ordered_json row;
      row["candidate"] = to_string(f.candidate);
      row["path"] = f.path;
      row["reason"] = f.reason;
      failures.push_back(row);
    }
    j["failures"] = failures;
    j["verified"] = rep.ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "file: " << args.file << "\n";
    std::cout << "instance: " << sizes_text(inst.sizes()) << " (" << source
              << ")\n";
    if (!rep.structurally_valid) {
      std::cout << "structurally valid: NO\n";
      for (const auto& e : rep.structural_errors) {
        std::cout << "  error: " << e << "\n";
      }
    } else {
      std::cout << "structurally valid: yes\n";
      std::cout << "depth: " << rep.depth << "\n";
      std::cout << "sound: " << (rep.sound ? "yes" : "NO") << "\n";
      std::cout << "complete: " << (rep.complete ? "yes" : "NO") << "\n";
      std::cout << "meets information floor: "
                << (rep.meets_information_bound ? "yes" : "NO") << "\n";
      std::cout << "unreachable leaves: " << rep.unreachable_leaves << "\n";
      if (rep.failure_count > 0) {
        std::cout << "failures: " << rep.failure_count << "\n";
        std::size_t shown = 0;
        for (const auto& f : rep.failures) {
          if (shown++ == 10) break;
          std::cout << "  " << to_string(f.candidate) << " via " << f.path
                    << ": " << f.reason << "\n";
        }
      }
    }
    std::cout << "verdict: " << (rep.ok() ? "VERIFIED" : "REJECTED") << "\n";
  }

  if (!rep.structurally_valid) return kExitUsage;
  return rep.ok() ? kExitOk : kExitFailed;
}

// -------------------------------------------------------------- bounds

struct BoundsArgs {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  bool json = false;
};

int run_bounds(const BoundsArgs& args) {
  if (args.n == 0 || args.k == 0) {
    throw std::invalid_argument("bounds requires positive n and k");
  }
  const long long floor = coins::info_lower_bound_pow(args.n, args.k);

  std::optional<coins::TableBound> table;
  if (args.n <= 81) {
    table = coins::upper_bound_prop1(static_cast<int>(args.n),
                                     static_cast<long long>(args.k));
  }
  const coins::GeneralBound paper =
      coins::upper_bound_prop2(args.n, args.k, coins::EpsilonMode::Paper);
  const coins::GeneralBound derived =
      coins::upper_bound_prop2(args.n, args.k, coins::EpsilonMode::Derived);

  if (args.json) {
    ordered_json j;
    j["n"] = args.n;
    j["k"] = args.k;
    j["information_floor"] = floor;
    if (table.has_value()) {
      ordered_json t;
      t["value"] = table->value;
      t["status"] = coins::to_string(table->status);
      j["table_bound"] = t;
    } else {
      j["table_bound"] = nullptr;
    }
    const auto general = [](const coins::GeneralBound& g,
                            const std::string& eps) {
      ordered_json row;
      row["epsilon"] = eps;
      row["value"] = g.value;
      if (g.constructive.has_value()) {
        row["constructive"] = *g.constructive;
      } else {
        row["constructive"] = nullptr;
      }
      return row;
    };
    j["general_bound"] = ordered_json::object();
    j["general_bound"]["paper"] = general(paper, "19/250");
    j["general_bound"]["derived"] = general(derived, "28/9 - log3(28)");
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance: " << args.n << "^" << args.k << " (" << args.k
              << (args.k == 1 ? " set" : " sets") << " of size " << args.n
              << ")\n";
    std::cout << "information floor: " << floor << "\n";
    if (table.has_value()) {
      std::cout << "table bound (rate ceiling): " << table->value << "  ["
                << coins::to_string(table->status) << "]\n";
    } else {
      std::cout << "table bound (rate ceiling): n/a (table covers n <= 81)\n";
    }
    const auto show = [](const char* label, const coins::GeneralBound& g) {
      std::cout << label << g.value;
      if (g.constructive.has_value()) {
        std::cout << ", constructive route " << *g.constructive;
      }
      std::cout << "\n";
    };
    show("general bound, epsilon 19/250 (published): ", paper);
    show("general bound, epsilon 28/9 - log3(28) (certified): ", derived);
  }
  return kExitOk;
}

// --------------------------------------------------------------- table

int run_table(bool json) {
  const auto& rows = coins::mu_table();

  std::vector<int> mismatched;
  std::vector<int> blank;
  int printed_rows = 0;
  int within = 0;
  for (const auto& row : rows) {
    const auto ok = coins::printed_log3_within_tolerance(row.n);
    if (!ok.has_value()) {
      blank.push_back(row.n);
    } else {
      ++printed_rows;
      if (*ok) {
        ++within;
      } else {
        mismatched.push_back(row.n);
      }
    }
  }

  // Display-only delta between the listed decimal and the recomputed value.
  const auto delta_text = [](const coins::MuEntry& row) -> std::string {
    const double recomputed =
        std::log(static_cast<double>(row.n)) / std::log(3.0);
    const double listed = std::stod(*row.log3_listed);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.6f", listed - recomputed);
    return buf;
  };

  if (json) {
    ordered_json j;
    ordered_json out_rows = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json r;
      r["n"] = row.n;
      r["mu"] = rational_text(row.mu);
      r["k0"] = row.k0;
      r["log3"] = coins::log3_decimal(row.n, 12);
      const auto ok = coins::printed_log3_within_tolerance(row.n);
      if (row.log3_listed.has_value()) {
        r["printed"] = *row.log3_listed;
        r["delta"] = delta_text(row);
        r["within_tolerance"] = *ok;
      } else {
        r["printed"] = nullptr;
        r["delta"] = nullptr;
        r["within_tolerance"] = nullptr;
      }
      out_rows.push_back(r);
    }
    j["rows"] = out_rows;
    j["printed_rows"] = printed_rows;
    j["within_tolerance"] = within;
    j["mismatched"] = mismatched;
    j["blank"] = blank;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << std::left << std::setw(4) << "n" << std::setw(8) << "mu"
              << std::setw(5) << "k0" << std::setw(15) << "log3(n)"
              << std::setw(10) << "printed" << std::setw(11) << "delta"
              << "ok\n";
    for (const auto& row : rows) {
      std::cout << std::left << std::setw(4) << row.n << std::setw(8)
                << rational_text(row.mu) << std::setw(5) << row.k0
                << std::setw(15) << coins::log3_decimal(row.n, 12);
      if (row.log3_listed.has_value()) {
        const auto ok = coins::printed_log3_within_tolerance(row.n);
        std::cout << std::setw(10) << *row.log3_listed << std::setw(11)
                  << delta_text(row) << (*ok ? "yes" : "NO") << "\n";
      } else {
        std::cout << std::setw(10) << "-" << std::setw(11) << "-" << "-\n";
      }
    }
    std::cout << "rows with a listed value: " << printed_rows << "; within 0.001: "
              << within << "; mismatched:";
    for (const int n : mismatched) std::cout << " " << n;
    std::cout << "; blank:";
    for (const int n : blank) std::cout << " " << n;
    std::cout << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------- audit

int run_audit(const std::string& claims_path, bool json, bool with_gap) {
  std::vector<coins::Fact> db;
  if (claims_path.empty()) {
    db = coins::builtin_claims();
  } else {
    db = coins::load_claims(read_file(claims_path));
  }

  const coins::AuditReport rep = coins::audit_claims(db);
  const bool certified = rep.all_sound && rep.all_it_tight &&
                         rep.table_consistent && rep.below_claimed.empty();

  if (json) {
    ordered_json j = ordered_json::parse(coins::audit_json(rep));
    if (with_gap) {
      const coins::GapReport gap = coins::gap_report();
      ordered_json g;
      g["argmax_d"] = gap.argmax_d;
      g["epsilon_star"] = gap.epsilon_star_decimal;
      g["published_constant"] = rational_text(gap.published_constant);
      g["max_exceeds_constant"] = gap.max_exceeds_constant;
      g["exceeding_d"] = gap.exceeding_d;
      j["gap"] = g;
    }
    j["certified"] = certified;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << coins::audit_table(rep);
    if (with_gap) {
      const coins::GapReport gap = coins::gap_report();
      std::cout << "worst ladder gap: at d=" << gap.argmax_d << ", epsilon* = "
                << gap.epsilon_star_decimal.substr(0, 14) << "...\n";
      std::cout << "published slack constant "
                << rational_text(gap.published_constant) << " is "
                << (gap.max_exceeds_constant ? "EXCEEDED" : "not exceeded")
                << " (exact comparison); rows above it:";
      for (const int d : gap.exceeding_d) std::cout << " " << d;
      std::cout << "\n";
    }
    std::cout << "certified: " << (certified ? "yes" : "NO") << "\n";
  }
  return certified ? kExitOk : kExitFailed;
}

// --------------------------------------------------------------- arrow

struct ArrowArgs {
  std::string instance;
  std::vector<std::string> profiles;
  std::string emit;
  int max_depth = -1;
  double time_limit = 60.0;
  std::uint64_t node_limit = 100'000'000;
  bool json = false;
  bool no_timing = false;
};

coins::ArrowProfile parse_profile(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto colon = text.find(':', start);
    const auto end = (colon == std::string::npos) ? text.size() : colon;
    parts.push_back(text.substr(start, end - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  const auto bad = [&]() {
    throw std::invalid_argument(
        "bad profile \"" + text +
        "\" (expected depth:one-rep:r or depth:two-rep:t:s)");
  };
  if (parts.size() < 3) bad();
  coins::ArrowProfile p;
  try {
    p.depth = std::stoi(parts[0]);
  } catch (const std::exception&) {
    bad();
  }
  if (p.depth < 0) bad();
  if (parts[1] == "one-rep" && parts.size() == 3) {
    p.kind = coins::LeafClass::Kind::OneRep;
    p.max_size = std::stoull(parts[2]);
  } else if (parts[1] == "two-rep" && parts.size() == 4) {
    p.kind = coins::LeafClass::Kind::TwoRep;
    p.max_size = std::stoull(parts[3]);
  } else {
    bad();
  }
  if (p.max_size == 0) bad();
  return p;
}

std::string profile_text(const coins::ArrowProfile& p) {
  std::ostringstream out;
  out << "depth <= " << p.depth << ", "
      << (p.kind == coins::LeafClass::Kind::OneRep ? "one-rep" : "two-rep")
      << " leaves of at most " << p.max_size << " candidates";
  return out.str();
}

int run_arrow(const ArrowArgs& args) {
  coins::ArrowSpec spec{Instance(parse_sizes(args.instance)), {}};
  for (const auto& text : args.profiles) {
    spec.profiles.push_back(parse_profile(text));
  }
  coins::SearchBudget budget;
  budget.max_depth = args.max_depth;
  budget.time_limit_seconds = args.time_limit;
  budget.node_limit = args.node_limit;

  const coins::ArrowResult result = coins::find_arrow(spec, budget);
  const bool found = result.status == coins::SearchResult::Status::Optimal;

  // Close the prefix into a full strategy whenever the leaves allow it.
  std::optional<int> spliced_depth;
  bool spliced_verified = false;
  std::string close_note;
  std::string emitted;
  if (found) {
    try {
      const coins::StrategyTree full = coins::complete_arrow(*result.prefix);
      const coins::VerificationReport rep =
          coins::verify(full, spec.instance);
      spliced_depth = rep.depth;
      spliced_verified = rep.ok();
      if (!args.emit.empty()) {
        write_file(args.emit, coins::serialize(full));
        emitted = args.emit;
      }
    } catch (const coins::ModelError& e) {
      close_note = e.what();
    }
  }

  if (args.json) {
    ordered_json j;
    j["instance"] = spec.instance.sizes();
    ordered_json profs = ordered_json::array();
    for (const auto& p : spec.profiles) {
      ordered_json row;
      row["depth"] = p.depth;
      row["leaf"] =
          (p.kind == coins::LeafClass::Kind::OneRep ? "one-rep" : "two-rep");
      row["max_size"] = p.max_size;
      profs.push_back(row);
    }
    j["profiles"] = profs;
    j["status"] = found ? "found" : status_text(result.status);
    if (found) {
      j["prefix_depth"] = result.prefix->depth();
      j["open_leaves"] = result.prefix->open_leaves().size();
      if (spliced_depth.has_value()) {
        ordered_json s;
        s["depth"] = *spliced_depth;
        s["verified"] = spliced_verified;
        j["spliced"] = s;
      } else {
        j["spliced"] = nullptr;
      }
    }
    if (!result.note.empty()) j["note"] = result.note;
    if (!close_note.empty()) j["close_note"] = close_note;
    j["stats"] = stats_json(result.stats, !args.no_timing);
    if (!emitted.empty()) j["emitted"] = emitted;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance: " << sizes_text(spec.instance.sizes()) << "\n";
    for (const auto& p : spec.profiles) {
      std::cout << "profile: " << profile_text(p) << "\n";
    }
    if (found) {
      std::cout << "status: found (prefix depth " << result.prefix->depth()
                << ", " << result.prefix->open_leaves().size()
                << " open leaves)\n";
      if (spliced_depth.has_value()) {
        std::cout << "closed: full strategy of depth " << *spliced_depth
                  << ", "
                  << (spliced_verified ? "verified sound and complete"
                                       : "VERIFICATION FAILED")
                  << "\n";
      } else {
        std::cout << "closed: not automatically closable (" << close_note
                  << ")\n";
      }
      if (!emitted.empty()) {
        std::cout << "strategy written to " << emitted << "\n";
      }
    } else if (result.status == coins::SearchResult::Status::Infeasible) {
      std::cout << "status: impossible — no prefix of the requested shape "
                   "exists\n";
    } else {
      std::cout << "status: exhausted";
      if (!result.note.empty()) std::cout << " (" << result.note << ")";
      std::cout << "\n";
    }
    if (!args.no_timing) {
      std::cout << "time: " << std::fixed << std::setprecision(3)
                << result.stats.seconds << " s\n";
    }
  }

  if (found) {
    return (spliced_depth.has_value() && !spliced_verified) ? kExitFailed
                                                            : kExitOk;
  }
  return result.status == coins::SearchResult::Status::Infeasible
             ? kExitFailed
             : kExitBudget;
}

// ---------------------------------------------------------------- play

int run_play(const std::string& file) {
  const coins::StrategyTree tree = coins::parse(read_file(file));
  if (!tree.valid()) {
    throw coins::FormatError("empty strategy");
  }

  const coins::StrategyTree::Node* node = &tree.root();
  int step = 0;
  while (std::holds_alternative<coins::StrategyTree::Inner>(*node)) {
    const auto& inner = std::get<coins::StrategyTree::Inner>(*node);
    ++step;
    std::cout << "weighing " << step << "\n";
    std::cout << "  left pan:  " << coin_list(inner.weigh.left) << "\n";
    std::cout << "  right pan: " << coin_list(inner.weigh.right) << "\n";

    int pick = -1;
    while (pick < 0) {
      std::cout << "outcome [L/B/R]? " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        std::cerr << "unexpected end of input\n";
        return kExitUsage;
      }
      // Trim and accept a single letter, case-insensitive.
      std::size_t a = line.find_first_not_of(" \t\r");
      std::size_t b = line.find_last_not_of(" \t\r");
      const std::string t =
          (a == std::string::npos) ? "" : line.substr(a, b - a + 1);
      if (t.size() == 1) {
        const char c =
            static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
        if (c == 'L') pick = 0;
        if (c == 'B') pick = 1;
        if (c == 'R') pick = 2;
      }
      if (pick < 0) {
        std::cout << "please answer L (left heavy), B (balanced), or R "
                     "(right heavy)\n";
      }
    }
    node = inner.child[static_cast<std::size_t>(pick)].get();
  }

  const auto& leaf = std::get<coins::StrategyTree::Leaf>(*node);
  std::cout << "counterfeit coins:";
  for (std::size_t i = 0; i < leaf.answer.pick.size(); ++i) {
    std::cout << " s" << (i + 1) << "." << leaf.answer.pick[i];
  }
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "coins — exact weighing strategies for finding one lighter counterfeit "
      "in each of several coin sets"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Find a depth-optimal weighing strategy for an instance");
  solve->add_option("instance", solve_args.instance,
                    "Set sizes: n1,n2,... or n^k")->required();
  solve->add_option("--emit", solve_args.emit, "Write the strategy JSON here");
  solve->add_option("--max-depth", solve_args.max_depth,
                    "Depth cap (default: information floor + 2)");
  solve->add_option("--time-limit", solve_args.time_limit,
                    "Time budget in seconds (default 60)");
  solve->add_option("--node-limit", solve_args.node_limit,
                    "Search node budget (default 1e8)");
  solve->add_flag("--no-memo", solve_args.no_memo,
                  "Disable the transposition memo");
  solve->add_flag("--no-class-reduction", solve_args.no_class_reduction,
                  "Disable interchange-class weighing reduction");
  solve->add_flag("--json", solve_args.json, "Machine-readable output");
  solve->add_flag("--no-timing", solve_args.no_timing,
                  "Omit wall-clock fields (byte-stable output)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check a strategy file against every candidate");
  verify->add_option("file", verify_args.file, "Strategy JSON file")
      ->required();
  verify->add_option("--instance", verify_args.instance,
                     "Instance to verify against (default: inferred)");
  verify->add_option("--threads", verify_args.threads,
                     "Worker threads for the candidate walk (default 1)");
  verify->add_flag("--json", verify_args.json, "Machine-readable output");

  BoundsArgs bounds_args;
  CLI::App* bounds = app.add_subcommand(
      "bounds", "Exact lower and upper bounds for k sets of size n");
  bounds->add_option("n", bounds_args.n, "Set size")->required();
  bounds->add_option("k", bounds_args.k, "Number of sets")->required();
  bounds->add_flag("--json", bounds_args.json, "Machine-readable output");

  bool table_json = false;
  CLI::App* table = app.add_subcommand(
      "table", "Per-size cost table with recomputed logarithms, n = 1..81");
  table->add_flag("--json", table_json, "Machine-readable output");

  std::string audit_claims_path;
  bool audit_json_flag = false;
  bool audit_gap = false;
  CLI::App* audit = app.add_subcommand(
      "audit", "Certify recorded results against the information floor");
  audit->add_option("--claims", audit_claims_path,
                    "Claims database file (default: built-in records)");
  audit->add_flag("--json", audit_json_flag, "Machine-readable output");
  audit->add_flag("--gap", audit_gap,
                  "Append the ladder slack report (worst epsilon*)");

  ArrowArgs arrow_args;
  CLI::App* arrow = app.add_subcommand(
      "arrow",
      "Search for a reduction prefix whose branches are all representable");
  arrow->add_option("instance", arrow_args.instance,
                    "Set sizes: n1,n2,... or n^k")->required();
  arrow->add_option("--profile", arrow_args.profiles,
                    "depth:one-rep:r or depth:two-rep:t:s (repeatable)")
      ->required();
  arrow->add_option("--emit", arrow_args.emit,
                    "Write the closed full strategy JSON here");
  arrow->add_option("--max-depth", arrow_args.max_depth,
                    "Depth cap for the prefix search");
  arrow->add_option("--time-limit", arrow_args.time_limit,
                    "Time budget in seconds (default 60)");
  arrow->add_option("--node-limit", arrow_args.node_limit,
                    "Search node budget (default 1e8)");
  arrow->add_flag("--json", arrow_args.json, "Machine-readable output");
  arrow->add_flag("--no-timing", arrow_args.no_timing,
                  "Omit wall-clock fields (byte-stable output)");

  std::string play_file;
  CLI::App* play = app.add_subcommand(
      "play", "Execute a strategy interactively against a real balance");
  play->add_option("file", play_file, "Strategy JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (bounds->parsed()) return run_bounds(bounds_args);
    if (table->parsed()) return run_table(table_json);
    if (audit->parsed())
      return run_audit(audit_claims_path, audit_json_flag, audit_gap);
    if (arrow->parsed()) return run_arrow(arrow_args);
    if (play->parsed()) return run_play(play_file);
  } catch (const coins::FormatError& e) {
    std::cerr << "error: malformed strategy: " << e.what();
    if (e.byte_pos > 0) std::cerr << " (byte " << e.byte_pos << ")";
    std::cerr << "\n";
    return kExitUsage;
  } catch (const coins::ClaimsFormatError& e) {
    std::cerr << "error: malformed claims database: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
