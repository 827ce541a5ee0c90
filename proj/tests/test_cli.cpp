// End-to-end checks of the command-line binary. The harness provides the
// binary path in COINS_CLI_PATH and the data directory in COINS_DATA_DIR.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "coins/model.hpp"
#include "coins/strategy.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

std::string cli_path() {
  if (const char* p = std::getenv("COINS_CLI_PATH")) return p;
#ifdef COINS_CLI_PATH
  return COINS_CLI_PATH;
#else
  FAIL("COINS_CLI_PATH not set");
  return "";
#endif
}

std::string data_dir() {
  if (const char* p = std::getenv("COINS_DATA_DIR")) return p;
#ifdef COINS_DATA_DIR
  return COINS_DATA_DIR;
#else
  FAIL("COINS_DATA_DIR not set");
  return "";
#endif
}

RunResult run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = cli_path() + " " + args + " 2>&1";
  if (!stdin_text.empty()) {
    const std::string in_file =
        std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
        "/coins_cli_stdin.txt";
    std::ofstream out(in_file, std::ios::binary);
    out << stdin_text;
    out.close();
    cmd += " < " + in_file;
  } else {
    cmd += " < /dev/null";
  }
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  const char* t = std::getenv("TMPDIR");
  return std::string(t ? t : "/tmp") + "/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("solve emits a verifiable strategy and reports the exact depth") {
  const std::string emitted = temp_path("cli_fivefive.strategy.json");
  const RunResult solve =
      run("solve 5,5 --emit " + emitted + " --json --no-timing");
  CHECK(solve.exit_code == 0);
  const auto j = nlohmann::json::parse(solve.output);
  CHECK(j.at("status") == "optimal");
  CHECK(j.at("depth") == 3);
  CHECK(j.at("information_floor") == 3);
  CHECK(j.at("emitted") == emitted);

  const RunResult verify = run("verify " + emitted + " --json");
  CHECK(verify.exit_code == 0);
  const auto v = nlohmann::json::parse(verify.output);
  CHECK(v.at("verified") == true);
  CHECK(v.at("depth") == 3);
  CHECK(v.at("instance_source") == "inferred");
  CHECK(v.at("instance") == nlohmann::json::array({5, 5}));
}

TEST_CASE("identical invocations produce byte-identical output") {
  const RunResult a = run("solve 2,3 --json --no-timing");
  const RunResult b = run("solve 2,3 --json --no-timing");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  const RunResult c = run("table");
  const RunResult d = run("table");
  CHECK(c.exit_code == 0);
  CHECK(c.output == d.output);
}

TEST_CASE("bounds reproduces the exact floor and both slack modes") {
  const RunResult r = run("bounds 100 2 --json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("information_floor") == 9);
  CHECK(j.at("table_bound").is_null());
  CHECK(j.at("general_bound").at("paper").at("value") == 9);
  CHECK(j.at("general_bound").at("paper").at("constructive") == 9);
  CHECK(j.at("general_bound").at("derived").at("value") == 9);

  const RunResult t = run("bounds 10 16 --json");
  const auto jt = nlohmann::json::parse(t.output);
  CHECK(jt.at("table_bound").at("value") == 34);
  CHECK(jt.at("table_bound").at("status") == "Derived");
  CHECK(jt.at("information_floor") == 34);

  CHECK(run("bounds 0 2").exit_code == 2);
  CHECK(run("bounds 5").exit_code == 2);
}

TEST_CASE("table lists all 81 rows and flags the two misprints") {
  const RunResult r = run("table --json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("rows").size() == 81);
  CHECK(j.at("printed_rows") == 78);
  CHECK(j.at("within_tolerance") == 76);
  CHECK(j.at("mismatched") == nlohmann::json::array({8, 26}));
  CHECK(j.at("blank") == nlohmann::json::array({78, 79, 80}));
  const auto& row10 = j.at("rows").at(9);
  CHECK(row10.at("n") == 10);
  CHECK(row10.at("mu") == "17/8");
  CHECK(row10.at("k0") == 8);
  CHECK(row10.at("log3") == "2.09590327429");
  CHECK(row10.at("within_tolerance") == true);
}

TEST_CASE("audit certifies the built-in records and any equal file") {
  const RunResult builtin = run("audit --json");
  CHECK(builtin.exit_code == 0);
  const auto j = nlohmann::json::parse(builtin.output);
  CHECK(j.at("certified") == true);
  CHECK(j.at("all_sound") == true);
  CHECK(j.at("all_floor_tight") == true);
  CHECK(j.at("table_consistent") == true);
  CHECK(j.at("not_reproduced").size() == 14);

  const RunResult from_file =
      run("audit --claims " + data_dir() + "/claims.json --json");
  CHECK(from_file.exit_code == 0);
  CHECK(from_file.output == builtin.output);

  // A database claiming an impossible value must fail the audit.
  const std::string tampered = temp_path("cli_tampered_claims.json");
  std::string text = read_file(data_dir() + "/claims.json");
  const std::string needle = "\"value\": 12";  // the (13, 5) record
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(), "\"value\": 11");
  std::ofstream(tampered, std::ios::binary) << text;
  const RunResult bad = run("audit --claims " + tampered + " --json");
  CHECK(bad.exit_code == 1);
  const auto jb = nlohmann::json::parse(bad.output);
  CHECK(jb.at("certified") == false);
  CHECK(jb.at("all_sound") == false);

  // Malformed database file: usage error, not an audit verdict.
  const std::string broken = temp_path("cli_broken_claims.json");
  std::ofstream(broken, std::ios::binary) << "[{\"tag\": 1}]";
  CHECK(run("audit --claims " + broken).exit_code == 2);
}

TEST_CASE("audit --gap appends the certified slack comparison") {
  const RunResult r = run("audit --gap --json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("gap").at("argmax_d") == 28);
  CHECK(j.at("gap").at("published_constant") == "19/250");
  CHECK(j.at("gap").at("max_exceeds_constant") == true);
  CHECK(j.at("gap").at("exceeding_d") == nlohmann::json::array({28, 44}));
  const std::string eps = j.at("gap").at("epsilon_star");
  CHECK(eps.substr(0, 13) == "0.07800785480");
}

TEST_CASE("arrow finds a reduction prefix and closes it to a full strategy") {
  const std::string emitted = temp_path("cli_tens.strategy.json");
  const RunResult r = run("arrow 10,10 --profile 3:one-rep:4 --emit " +
                          emitted + " --json --no-timing");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("status") == "found");
  CHECK(j.at("prefix_depth") == 3);
  CHECK(j.at("spliced").at("verified") == true);
  CHECK(j.at("spliced").at("depth") == 5);

  const RunResult verify = run("verify " + emitted + " --instance 10,10");
  CHECK(verify.exit_code == 0);

  // An impossible profile is a definitive negative, not a budget problem.
  const RunResult no = run("arrow 10,10 --profile 1:one-rep:2 --json");
  CHECK(no.exit_code == 1);
  CHECK(nlohmann::json::parse(no.output).at("status") == "infeasible");

  CHECK(run("arrow 10,10 --profile nonsense").exit_code == 2);
}

TEST_CASE("budget exhaustion reports exit 3 and never a wrong claim") {
  const RunResult r = run("solve 8,10 --time-limit 0.0001 --json --no-timing");
  CHECK(r.exit_code == 3);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("status") == "exhausted");
  CHECK(j.at("depth").is_null());
  CHECK(j.at("note") == "time limit exceeded");

  const RunResult n = run("solve 8,10 --node-limit 1 --json --no-timing");
  CHECK(n.exit_code == 3);
  CHECK(nlohmann::json::parse(n.output).at("note") == "node limit exceeded");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("").exit_code == 2);
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("solve").exit_code == 2);
  CHECK(run("solve 0,3").exit_code == 2);
  CHECK(run("solve 4x5").exit_code == 2);
  CHECK(run("verify /nonexistent.strategy.json").exit_code == 2);
}

TEST_CASE("verification failures exit 1 with the offending candidates") {
  const std::string path = temp_path("cli_incomplete.strategy.json");
  std::ofstream(path, std::ios::binary) << "{\"answer\":{\"s1\":1}}";
  const RunResult r = run("verify " + path + " --instance 2 --json");
  CHECK(r.exit_code == 1);
  const auto j = nlohmann::json::parse(r.output);
  CHECK(j.at("verified") == false);
  CHECK(j.at("sound") == false);
  CHECK(j.at("failure_count").get<int>() >= 1);

  const std::string garbage = temp_path("cli_garbage.strategy.json");
  std::ofstream(garbage, std::ios::binary) << "not a strategy";
  CHECK(run("verify " + garbage).exit_code == 2);
}

TEST_CASE("play replays a strategy and lands on a consistent candidate") {
  const std::string emitted = temp_path("cli_play.strategy.json");
  REQUIRE(run("solve 5,5 --emit " + emitted).exit_code == 0);
  const coins::StrategyTree tree = coins::parse(read_file(emitted));
  const coins::Instance inst({5, 5});

  // Pretend the counterfeits are s1.3 and s2.4, answer every prompt with
  // the outcome a real balance would show, and demand the session ends by
  // announcing exactly that pair. Soundness of the emitted tree makes this
  // independent of the particular strategy the solver chose.
  const coins::Candidate truth{{3, 4}};
  std::string feed;
  const coins::StrategyTree::Node* node = &tree.root();
  while (std::holds_alternative<coins::StrategyTree::Inner>(*node)) {
    const auto& inner = std::get<coins::StrategyTree::Inner>(*node);
    const coins::Outcome o = coins::outcome(inst, inner.weigh, truth);
    feed += coins::outcome_char(o);
    feed += '\n';
    node = inner.child[static_cast<std::size_t>(o)].get();
  }
  REQUIRE(std::get<coins::StrategyTree::Leaf>(*node).answer == truth);

  const RunResult r = run("play " + emitted, feed);
  CHECK(r.exit_code == 0);
  const auto tail = r.output.rfind("counterfeit coins:");
  REQUIRE(tail != std::string::npos);
  CHECK(r.output.substr(tail) == "counterfeit coins: s1.3 s2.4\n");

  // Invalid responses are re-prompted, not fatal.
  const RunResult reprompt = run("play " + emitted, "x\n" + feed);
  CHECK(reprompt.exit_code == 0);
  CHECK(reprompt.output.find("please answer L") != std::string::npos);
  CHECK(reprompt.output.rfind("counterfeit coins: s1.3 s2.4\n") !=
        std::string::npos);

  // EOF mid-session aborts with a usage error.
  CHECK(run("play " + emitted, "B\n").exit_code == 2);

  // A depth-0 strategy prints its forced answer without reading anything.
  const std::string forced = temp_path("cli_forced.strategy.json");
  std::ofstream(forced, std::ios::binary) << "{\"answer\":{\"s1\":1}}";
  const RunResult f = run("play " + forced);
  CHECK(f.exit_code == 0);
  CHECK(f.output.find("counterfeit coins: s1.1") != std::string::npos);
}
