#include "coins/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace coins {

using ordered_json = nlohmann::ordered_json;

// ----------------------------------------------------------------- tree

StrategyTree StrategyTree::leaf(Candidate answer) {
  return StrategyTree(std::make_shared<const Node>(Leaf{std::move(answer)}));
}

StrategyTree StrategyTree::inner(Weighing w, StrategyTree left_heavy,
                                 StrategyTree balanced,
                                 StrategyTree right_heavy) {
  if (!left_heavy.valid() || !balanced.valid() || !right_heavy.valid())
    throw ModelError("inner node requires three child strategies");
  Inner in{std::move(w),
           {left_heavy.root_, balanced.root_, right_heavy.root_}};
  return StrategyTree(std::make_shared<const Node>(std::move(in)));
}

namespace {

int node_depth(const StrategyTree::Node& n) {
  if (std::holds_alternative<StrategyTree::Leaf>(n)) return 0;
  const auto& in = std::get<StrategyTree::Inner>(n);
  int d = 0;
  for (const auto& c : in.child) d = std::max(d, node_depth(*c));
  return d + 1;
}

std::uint64_t node_leaves(const StrategyTree::Node& n) {
  if (std::holds_alternative<StrategyTree::Leaf>(n)) return 1;
  const auto& in = std::get<StrategyTree::Inner>(n);
  std::uint64_t s = 0;
  for (const auto& c : in.child) s += node_leaves(*c);
  return s;
}

}  // namespace

int StrategyTree::depth() const {
  return root_ ? node_depth(*root_) : 0;
}

std::uint64_t StrategyTree::leaf_count() const {
  return root_ ? node_leaves(*root_) : 0;
}

// ---------------------------------------------------------------- format

namespace {

ordered_json answer_to_json(const Candidate& x) {
  ordered_json obj = ordered_json::object();
  for (std::size_t i = 0; i < x.pick.size(); ++i)
    obj["s" + std::to_string(i + 1)] = x.pick[i];
  return obj;
}

ordered_json pan_to_json(const std::vector<CoinId>& pan) {
  ordered_json arr = ordered_json::array();
  for (CoinId c : pan) arr.push_back(to_string(c));
  return arr;
}

ordered_json node_to_json(const StrategyTree::Node& n) {
  if (const auto* leaf = std::get_if<StrategyTree::Leaf>(&n)) {
    ordered_json obj = ordered_json::object();
    obj["answer"] = answer_to_json(leaf->answer);
    return obj;
  }
  const auto& in = std::get<StrategyTree::Inner>(n);
  ordered_json obj = ordered_json::object();
  ordered_json weigh = ordered_json::object();
  weigh["left"] = pan_to_json(in.weigh.left);
  weigh["right"] = pan_to_json(in.weigh.right);
  obj["weigh"] = std::move(weigh);
  obj["left_heavy"] = node_to_json(*in.child[0]);
  obj["balanced"] = node_to_json(*in.child[1]);
  obj["right_heavy"] = node_to_json(*in.child[2]);
  return obj;
}

}  // namespace

std::string serialize(const StrategyTree& t) {
  if (!t.valid()) throw ModelError("cannot serialize an empty strategy");
  return node_to_json(t.root()).dump(2) + "\n";
}

namespace {

[[noreturn]] void fail_format(const std::string& what) {
  throw FormatError(what);
}

void expect_keys(const ordered_json& obj,
                 std::initializer_list<const char*> keys,
                 const char* what) {
  if (!obj.is_object())
    fail_format(std::string(what) + ": expected an object");
  for (const char* k : keys)
    if (!obj.contains(k))
      fail_format(std::string(what) + ": missing key \"" + k + "\"");
  if (obj.size() != keys.size())
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (std::find_if(keys.begin(), keys.end(), [&](const char* k) {
            return it.key() == k;
          }) == keys.end())
        fail_format(std::string(what) + ": unexpected key \"" + it.key() +
                    "\"");
}

Candidate parse_answer(const ordered_json& obj, std::size_t& arity) {
  if (!obj.is_object() || obj.empty())
    fail_format("answer: expected a non-empty object of set picks");
  Candidate x;
  x.pick.assign(obj.size(), 0);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    if (key.size() < 2 || key[0] != 's')
      fail_format("answer: bad set key \"" + key + "\"");
    std::uint64_t set = 0;
    for (std::size_t i = 1; i < key.size(); ++i) {
      if (key[i] < '0' || key[i] > '9' || (i == 1 && key[i] == '0'))
        fail_format("answer: bad set key \"" + key + "\"");
      set = set * 10 + (key[i] - '0');
      if (set > x.pick.size()) break;
    }
    if (set < 1 || set > x.pick.size())
      fail_format("answer: set key \"" + key + "\" outside s1..s" +
                  std::to_string(x.pick.size()));
    if (x.pick[set - 1] != 0)
      fail_format("answer: duplicate set key \"" + key + "\"");
    if (!it.value().is_number_unsigned())
      fail_format("answer: value of \"" + key +
                  "\" must be a positive integer");
    std::uint64_t v = it.value().get<std::uint64_t>();
    if (v < 1 || v > 0xFFFFFFFFull)
      fail_format("answer: value of \"" + key + "\" out of range");
    x.pick[set - 1] = static_cast<std::uint32_t>(v);
  }
  if (arity == 0)
    arity = x.pick.size();
  else if (arity != x.pick.size())
    fail_format("answer: set count differs between leaves (" +
                std::to_string(x.pick.size()) + " vs " +
                std::to_string(arity) + ")");
  return x;
}

std::vector<CoinId> parse_pan(const ordered_json& arr, const char* side) {
  if (!arr.is_array())
    fail_format(std::string("weigh.") + side + ": expected an array of coins");
  std::vector<CoinId> pan;
  pan.reserve(arr.size());
  for (const auto& el : arr) {
    if (!el.is_string())
      fail_format(std::string("weigh.") + side + ": coins must be strings");
    auto c = parse_coin(el.get<std::string>());
    if (!c)
      fail_format(std::string("weigh.") + side + ": bad coin \"" +
                  el.get<std::string>() + "\" (want e.g. \"s2.13\")");
    pan.push_back(*c);
  }
  return pan;
}

std::shared_ptr<const StrategyTree::Node> parse_node(const ordered_json& obj,
                                                     std::size_t& arity,
                                                     int depth) {
  if (depth > 256) fail_format("strategy nests deeper than 256 weighings");
  if (!obj.is_object()) fail_format("node: expected an object");
  if (obj.contains("answer")) {
    expect_keys(obj, {"answer"}, "leaf");
    return std::make_shared<const StrategyTree::Node>(
        StrategyTree::Leaf{parse_answer(obj.at("answer"), arity)});
  }
  expect_keys(obj, {"weigh", "left_heavy", "balanced", "right_heavy"}, "node");
  const ordered_json& weigh = obj.at("weigh");
  expect_keys(weigh, {"left", "right"}, "weigh");
  std::vector<CoinId> left = parse_pan(weigh.at("left"), "left");
  std::vector<CoinId> right = parse_pan(weigh.at("right"), "right");

  // Local pan checks (sortedness is normalised, overlap and balance are
  // rejected); coin ranges are the verifier's job.
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  if (left.empty()) fail_format("weigh: empty pans");
  if (left.size() != right.size())
    fail_format("weigh: pans hold " + std::to_string(left.size()) + " vs " +
                std::to_string(right.size()) + " coins; they must match");
  if (std::adjacent_find(left.begin(), left.end()) != left.end() ||
      std::adjacent_find(right.begin(), right.end()) != right.end())
    fail_format("weigh: a pan lists the same coin twice");
  std::vector<CoinId> both;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::back_inserter(both));
  if (!both.empty())
    fail_format("weigh: coin " + to_string(both.front()) + " is in both pans");

  StrategyTree::Inner in;
  in.weigh = Weighing{std::move(left), std::move(right)};
  in.child[0] = parse_node(obj.at("left_heavy"), arity, depth + 1);
  in.child[1] = parse_node(obj.at("balanced"), arity, depth + 1);
  in.child[2] = parse_node(obj.at("right_heavy"), arity, depth + 1);
  return std::make_shared<const StrategyTree::Node>(std::move(in));
}

}  // namespace

StrategyTree parse(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  std::size_t arity = 0;
  return StrategyTree(parse_node(doc, arity, 0));
}

namespace {

void infer_walk(const StrategyTree::Node& n,
                std::vector<std::uint32_t>& sizes) {
  auto see = [&](std::size_t set_1based, std::uint32_t index) {
    if (sizes.size() < set_1based) sizes.resize(set_1based, 1);
    sizes[set_1based - 1] = std::max(sizes[set_1based - 1], index);
  };
  if (const auto* leaf = std::get_if<StrategyTree::Leaf>(&n)) {
    for (std::size_t i = 0; i < leaf->answer.pick.size(); ++i)
      see(i + 1, leaf->answer.pick[i]);
    return;
  }
  const auto& in = std::get<StrategyTree::Inner>(n);
  for (const auto& pan : {in.weigh.left, in.weigh.right})
    for (CoinId c : pan) see(c.set, c.index);
  for (const auto& c : in.child) infer_walk(*c, sizes);
}

}  // namespace

std::optional<Instance> infer_instance(const StrategyTree& t) {
  if (!t.valid()) return std::nullopt;
  std::vector<std::uint32_t> sizes;
  infer_walk(t.root(), sizes);
  if (sizes.empty()) return std::nullopt;
  return Instance(std::move(sizes));
}

// ---------------------------------------------------------------- verify

namespace {

// One candidate's walk. `trail` is reused across calls by the caller.
struct WalkOutcome {
  bool sound = false;
  std::string reason;  // empty when sound
};

WalkOutcome walk_candidate(const StrategyTree::Node& root,
                           const Instance& inst, const Candidate& truth,
                           std::string& trail) {
  trail.clear();
  const StrategyTree::Node* node = &root;
  while (const auto* in = std::get_if<StrategyTree::Inner>(node)) {
    Outcome o = outcome(inst, in->weigh, truth);
    trail.push_back(outcome_char(o));
    node = in->child[static_cast<int>(o)].get();
  }
  const auto& leaf = std::get<StrategyTree::Leaf>(*node);
  if (leaf.answer == truth) return {true, {}};
  return {false, "answer names " + to_string(leaf.answer)};
}

std::string pretty_path(const std::string& trail) {
  std::string p = "root";
  for (char c : trail) {
    p += '/';
    p += outcome_name(c == 'L'   ? Outcome::LeftHeavy
                      : c == 'B' ? Outcome::Balanced
                                 : Outcome::RightHeavy);
  }
  return p;
}

void structural_scan(const StrategyTree::Node& n, const Instance& inst,
                     std::vector<std::string>& errors) {
  if (errors.size() >= 16) return;  // enough to diagnose
  if (const auto* leaf = std::get_if<StrategyTree::Leaf>(&n)) {
    const Candidate& x = leaf->answer;
    if (x.pick.size() != inst.set_count()) {
      errors.push_back("answer " + to_string(x) + " picks from " +
                       std::to_string(x.pick.size()) + " sets; instance has " +
                       std::to_string(inst.set_count()));
      return;
    }
    for (std::size_t i = 0; i < x.pick.size(); ++i)
      if (x.pick[i] < 1 || x.pick[i] > inst.set_size(i + 1))
        errors.push_back("answer " + to_string(x) + " picks coin " +
                         std::to_string(x.pick[i]) + " from set s" +
                         std::to_string(i + 1) + " of size " +
                         std::to_string(inst.set_size(i + 1)));
    return;
  }
  const auto& in = std::get<StrategyTree::Inner>(n);
  for (const auto& pan : {in.weigh.left, in.weigh.right})
    for (CoinId c : pan)
      if (!inst.contains(c)) {
        errors.push_back("weighing uses coin " + to_string(c) +
                         " outside the instance");
        break;
      }
  for (const auto& c : in.child) structural_scan(*c, inst, errors);
}

struct WalkShare {
  std::unordered_set<std::string> reached;  // leaf positions as L/B/R trails
  std::vector<VerificationFailure> failures;
  std::uint64_t failure_count = 0;
  int max_depth = 0;
};

constexpr std::size_t kMaxStoredFailures = 1000;

void walk_range(const StrategyTree::Node& root, const CandidateSet& d,
                const std::vector<std::uint64_t>& ranks, std::size_t begin,
                std::size_t end, WalkShare& out) {
  std::string trail;
  for (std::size_t i = begin; i < end; ++i) {
    Candidate truth = d.decode(ranks[i]);
    WalkOutcome w = walk_candidate(root, d.instance(), truth, trail);
    out.max_depth = std::max<int>(out.max_depth, trail.size());
    out.reached.insert(trail);
    if (!w.sound) {
      ++out.failure_count;
      if (out.failures.size() < kMaxStoredFailures)
        out.failures.push_back({truth, pretty_path(trail), w.reason});
    }
  }
}

VerificationReport verify_impl(const StrategyTree& t, const CandidateSet& d,
                               unsigned threads) {
  VerificationReport rep;
  if (!t.valid()) {
    rep.structural_errors.push_back("empty strategy");
    return rep;
  }
  structural_scan(t.root(), d.instance(), rep.structural_errors);
  rep.structurally_valid = rep.structural_errors.empty();
  if (!rep.structurally_valid) return rep;

  std::vector<std::uint64_t> ranks = d.members();
  std::vector<WalkShare> shares;
  if (threads <= 1 || ranks.size() < 1024) {
    shares.resize(1);
    walk_range(t.root(), d, ranks, 0, ranks.size(), shares[0]);
  } else {
    unsigned n = std::min<unsigned>(
        threads, std::max(1u, std::thread::hardware_concurrency()));
    n = std::min<unsigned>(n, 64);
    shares.resize(n);
    std::vector<std::thread> pool;
    std::size_t chunk = (ranks.size() + n - 1) / n;
    for (unsigned i = 0; i < n; ++i) {
      std::size_t b = std::min<std::size_t>(i * chunk, ranks.size());
      std::size_t e = std::min<std::size_t>(b + chunk, ranks.size());
      pool.emplace_back([&, b, e, i] {
        walk_range(t.root(), d, ranks, b, e, shares[i]);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::unordered_set<std::string> reached;
  for (auto& s : shares) {
    for (auto& p : s.reached) reached.insert(p);
    for (auto& f : s.failures)
      if (rep.failures.size() < kMaxStoredFailures)
        rep.failures.push_back(std::move(f));
    rep.failure_count += s.failure_count;
    rep.depth = std::max(rep.depth, s.max_depth);
  }
  for (const auto& p : reached) ++rep.leaf_census[static_cast<int>(p.size())];
  rep.unreachable_leaves = t.leaf_count() - reached.size();
  rep.sound = rep.failure_count == 0;
  rep.complete = true;  // total trees: every candidate reaches some leaf

  // Smallest t with 3^t >= |d|: no correct strategy on d can be shallower.
  BigInt need = 1;
  int bound = 0;
  while (need < d.size()) {
    need *= 3;
    ++bound;
  }
  rep.meets_information_bound = rep.ok() && rep.depth == bound;
  return rep;
}

}  // namespace

VerificationReport verify(const StrategyTree& t, const Instance& inst,
                          unsigned threads) {
  return verify_impl(t, full_space(inst), threads);
}

VerificationReport verify_on(const StrategyTree& t, const CandidateSet& d) {
  return verify_impl(t, d, 1);
}

// ---------------------------------------------------------------- splice

namespace {

int prefix_depth(const PrefixTree::Node& n) {
  if (std::holds_alternative<PrefixTree::OpenLeaf>(n)) return 0;
  const auto& in = std::get<PrefixTree::Inner>(n);
  int d = 0;
  for (const auto& c : in.child) d = std::max(d, prefix_depth(*c));
  return d + 1;
}

void collect_open(const PrefixTree::Node& n,
                  std::vector<const PrefixTree::OpenLeaf*>& out) {
  if (const auto* leaf = std::get_if<PrefixTree::OpenLeaf>(&n)) {
    out.push_back(leaf);
    return;
  }
  for (const auto& c : std::get<PrefixTree::Inner>(n).child)
    collect_open(*c, out);
}

std::shared_ptr<const StrategyTree::Node> splice_node(
    const PrefixTree::Node& n, const std::vector<StrategyTree>& closers,
    std::size_t& next) {
  if (const auto* leaf = std::get_if<PrefixTree::OpenLeaf>(&n)) {
    std::size_t i = next++;
    const CandidateSet& dom = leaf->remaining;
    if (dom.empty()) {
      // No candidate can reach this branch; park a placeholder answer.
      return std::make_shared<const StrategyTree::Node>(
          StrategyTree::Leaf{dom.decode(0)});
    }
    const StrategyTree& closer = closers[i];
    if (!closer.valid())
      throw ModelError("closer " + std::to_string(i) + " is empty");
    VerificationReport rep = verify_on(closer, dom);
    if (!rep.ok())
      throw ModelError("closer " + std::to_string(i) +
                       " does not resolve its " + std::to_string(dom.size()) +
                       " remaining candidates");
    return closer.root_ptr();
  }
  const auto& in = std::get<PrefixTree::Inner>(n);
  StrategyTree::Inner out;
  out.weigh = in.weigh;
  for (int k = 0; k < 3; ++k)
    out.child[k] = splice_node(*in.child[k], closers, next);
  return std::make_shared<const StrategyTree::Node>(std::move(out));
}

}  // namespace

int PrefixTree::depth() const { return root_ ? prefix_depth(*root_) : 0; }

std::vector<const PrefixTree::OpenLeaf*> PrefixTree::open_leaves() const {
  std::vector<const OpenLeaf*> out;
  if (root_) collect_open(*root_, out);
  return out;
}

StrategyTree splice(const PrefixTree& prefix,
                    const std::vector<StrategyTree>& closers) {
  if (!prefix.valid()) throw ModelError("cannot splice an empty prefix");
  std::size_t open = prefix.open_leaves().size();
  if (closers.size() != open)
    throw ModelError("prefix has " + std::to_string(open) + " open leaves; " +
                     std::to_string(closers.size()) + " closers supplied");
  std::size_t next = 0;
  return StrategyTree(splice_node(prefix.root(), closers, next));
}

}  // namespace coins
