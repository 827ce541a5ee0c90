#include "coins/model.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace coins {

// ------------------------------------------------------------------ coins

std::string to_string(CoinId c) {
  return "s" + std::to_string(c.set) + "." + std::to_string(c.index);
}

std::optional<CoinId> parse_coin(std::string_view text) {
  if (text.size() < 4 || text[0] != 's') return std::nullopt;
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot < 2 || dot + 1 >= text.size())
    return std::nullopt;
  auto parse_u16 = [](std::string_view s) -> std::optional<std::uint16_t> {
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    if (v == 0 || v > 0xffff) return std::nullopt;
    // reject leading zeros so names round-trip exactly
    if (s.size() > 1 && s[0] == '0') return std::nullopt;
    return static_cast<std::uint16_t>(v);
  };
  auto set = parse_u16(text.substr(1, dot - 1));
  auto idx = parse_u16(text.substr(dot + 1));
  if (!set || !idx) return std::nullopt;
  return CoinId{*set, *idx};
}

// --------------------------------------------------------------- instance

Instance::Instance(std::vector<std::uint32_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw ModelError("instance needs at least one set");
  for (auto n : sizes_) {
    if (n == 0) throw ModelError("set sizes must be positive");
    if (n > 0xFFFF)
      throw ModelError("set sizes above 65535 have unnameable coins");
    total_coins_ += n;
  }
}

std::uint32_t Instance::set_size(std::size_t set_1based) const {
  if (set_1based == 0 || set_1based > sizes_.size())
    throw ModelError("set number out of range");
  return sizes_[set_1based - 1];
}

BigInt Instance::candidate_count() const {
  BigInt p = 1;
  for (auto n : sizes_) p *= n;
  return p;
}

bool Instance::contains(CoinId c) const {
  return c.set >= 1 && c.set <= sizes_.size() && c.index >= 1 &&
         c.index <= sizes_[c.set - 1];
}

// -------------------------------------------------------------- candidate

std::string to_string(const Candidate& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.pick.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x.pick[i]);
  }
  return s + ")";
}

// --------------------------------------------------------------- weighing

Weighing Weighing::make(const Instance& inst, std::vector<CoinId> left,
                        std::vector<CoinId> right) {
  if (left.empty() || left.size() != right.size())
    throw ModelError("pans must be nonempty and equally sized");
  if (left.size() > inst.total_coins() / 2)
    throw ModelError("pan larger than half the coin supply");
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  auto check = [&](const std::vector<CoinId>& pan) {
    for (std::size_t i = 0; i < pan.size(); ++i) {
      if (!inst.contains(pan[i]))
        throw ModelError("coin " + to_string(pan[i]) + " out of range");
      if (i && pan[i] == pan[i - 1])
        throw ModelError("coin " + to_string(pan[i]) + " repeated in a pan");
    }
  };
  check(left);
  check(right);
  std::vector<CoinId> both;
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                        std::back_inserter(both));
  if (!both.empty())
    throw ModelError("coin " + to_string(both.front()) + " on both pans");
  return Weighing{std::move(left), std::move(right)};
}

Outcome opposite(Outcome o) {
  switch (o) {
    case Outcome::LeftHeavy: return Outcome::RightHeavy;
    case Outcome::RightHeavy: return Outcome::LeftHeavy;
    default: return Outcome::Balanced;
  }
}

char outcome_char(Outcome o) {
  switch (o) {
    case Outcome::LeftHeavy: return 'L';
    case Outcome::Balanced: return 'B';
    default: return 'R';
  }
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::LeftHeavy: return "left_heavy";
    case Outcome::Balanced: return "balanced";
    default: return "right_heavy";
  }
}

Outcome outcome(const Instance& inst, const Weighing& w, const Candidate& truth) {
  if (truth.pick.size() != inst.set_count())
    throw ModelError("candidate arity does not match instance");
  int cl = 0, cr = 0;
  for (const CoinId& c : w.left) cl += truth.contains(c) ? 1 : 0;
  for (const CoinId& c : w.right) cr += truth.contains(c) ? 1 : 0;
  if (cl < cr) return Outcome::LeftHeavy;   // fewer counterfeits = heavier pan
  if (cl > cr) return Outcome::RightHeavy;
  return Outcome::Balanced;
}

// ---------------------------------------------------------- candidate set

CandidateSet::CandidateSet(Instance inst, bool fill) : inst_(std::move(inst)) {
  // Hard ceiling on any explicit mask; full_space() applies the configurable
  // (usually tighter) enumeration cap on top of this.
  constexpr std::uint64_t kHardCap = std::uint64_t(1) << 28;
  std::uint64_t space = 1;
  for (auto n : inst_.sizes()) {
    if (space > kHardCap / n)
      throw ModelError("instance too large for explicit model");
    space *= n;
  }
  space_ = space;
  bits_.assign((space_ + 63) / 64, 0);
  if (fill) {
    for (std::uint64_t r = 0; r < space_; ++r) bits_[r >> 6] |= 1ull << (r & 63);
    count_ = space_;
  }
}

bool CandidateSet::contains(std::uint64_t rank) const {
  if (rank >= space_) throw ModelError("candidate rank out of range");
  return (bits_[rank >> 6] >> (rank & 63)) & 1u;
}

void CandidateSet::add(std::uint64_t rank) {
  if (rank >= space_) throw ModelError("candidate rank out of range");
  std::uint64_t& word = bits_[rank >> 6];
  std::uint64_t bit = 1ull << (rank & 63);
  if (!(word & bit)) {
    word |= bit;
    ++count_;
  }
}

void CandidateSet::remove(std::uint64_t rank) {
  if (rank >= space_) throw ModelError("candidate rank out of range");
  std::uint64_t& word = bits_[rank >> 6];
  std::uint64_t bit = 1ull << (rank & 63);
  if (word & bit) {
    word &= ~bit;
    --count_;
  }
}

Candidate CandidateSet::decode(std::uint64_t rank) const {
  if (rank >= space_) throw ModelError("candidate rank out of range");
  const auto& sizes = inst_.sizes();
  Candidate x;
  x.pick.assign(sizes.size(), 1);
  for (std::size_t i = sizes.size(); i-- > 0;) {
    x.pick[i] = static_cast<std::uint32_t>(rank % sizes[i]) + 1;
    rank /= sizes[i];
  }
  return x;
}

std::uint64_t CandidateSet::encode(const Candidate& x) const {
  const auto& sizes = inst_.sizes();
  if (x.pick.size() != sizes.size())
    throw ModelError("candidate arity does not match instance");
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (x.pick[i] == 0 || x.pick[i] > sizes[i])
      throw ModelError("candidate index out of range");
    rank = rank * sizes[i] + (x.pick[i] - 1);
  }
  return rank;
}

std::vector<std::uint64_t> CandidateSet::members() const {
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(count_));
  for_each_member([&](std::uint64_t r) { out.push_back(r); });
  return out;
}

void CandidateSet::for_each_member(
    const std::function<void(std::uint64_t)>& fn) const {
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    std::uint64_t word = bits_[w];
    while (word) {
      unsigned bit = static_cast<unsigned>(__builtin_ctzll(word));
      fn((std::uint64_t(w) << 6) | bit);
      word &= word - 1;
    }
  }
}

Candidate CandidateSet::sole_member() const {
  if (count_ != 1) throw ModelError("sole_member on non-singleton set");
  return first_member();
}

Candidate CandidateSet::first_member() const {
  if (count_ == 0) throw ModelError("first_member on empty set");
  for (std::size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w])
      return decode((std::uint64_t(w) << 6) |
                    static_cast<unsigned>(__builtin_ctzll(bits_[w])));
  throw ModelError("corrupt candidate set");
}

CandidateSet full_space(const Instance& inst, std::uint64_t cap) {
  BigInt count = inst.candidate_count();
  if (count > cap) throw ModelError("instance too large for explicit model");
  return CandidateSet(inst, /*fill=*/true);
}

std::array<CandidateSet, 3> partition(const CandidateSet& d, const Weighing& w) {
  const Instance& inst = d.instance();
  std::array<CandidateSet, 3> parts{CandidateSet(inst, false),
                                    CandidateSet(inst, false),
                                    CandidateSet(inst, false)};
  d.for_each_member([&](std::uint64_t rank) {
    Candidate x = d.decode(rank);
    parts[static_cast<std::size_t>(outcome(inst, w, x))].add(rank);
  });
  return parts;
}

// ------------------------------------------------------------ coin classes

std::vector<CoinClass> coin_classes(const CandidateSet& d) {
  const Instance& inst = d.instance();
  auto ranks = d.members();
  // Incidence signature of a coin: the sorted list of member positions whose
  // candidate holds the coin. Memberships are discovered by decoding each
  // member once.
  std::map<CoinId, std::vector<std::uint32_t>> incidence;
  for (std::size_t i = 1; i <= inst.set_count(); ++i)
    for (std::uint32_t j = 1; j <= inst.set_size(i); ++j)
      incidence[CoinId{static_cast<std::uint16_t>(i),
                       static_cast<std::uint16_t>(j)}] = {};
  for (std::uint32_t pos = 0; pos < ranks.size(); ++pos) {
    Candidate x = d.decode(ranks[pos]);
    for (std::size_t i = 0; i < x.pick.size(); ++i)
      incidence[CoinId{static_cast<std::uint16_t>(i + 1),
                       static_cast<std::uint16_t>(x.pick[i])}]
          .push_back(pos);
  }
  std::map<std::vector<std::uint32_t>, CoinClass> by_signature;
  for (auto& [coin, sig] : incidence) {
    CoinClass& cls = by_signature[sig];
    cls.coins.push_back(coin);  // map iteration yields coins sorted already
    cls.incidence = sig.size();
    cls.known_genuine = sig.empty();
  }
  std::vector<std::pair<std::vector<std::uint32_t>, CoinClass>> rows;
  rows.reserve(by_signature.size());
  for (auto& [sig, cls] : by_signature) rows.emplace_back(sig, std::move(cls));
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second.coins.size() != b.second.coins.size())
      return a.second.coins.size() < b.second.coins.size();
    return a.first < b.first;
  });
  std::vector<CoinClass> out;
  out.reserve(rows.size());
  for (auto& [sig, cls] : rows) out.push_back(std::move(cls));
  return out;
}

}  // namespace coins
