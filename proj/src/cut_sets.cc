/// @file cut_sets.cc
/// Bottom-up minimal cut set computation over shared-subtree DAGs.

#include "resha/cut_sets.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <tuple>

namespace resha {

namespace {

using Word = std::uint64_t;

/// A family of event sets as fixed-width bitsets over ranked events.
class Family {
 public:
  explicit Family(std::size_t width) : width_(width) {}

  std::size_t size() const { return count_; }
  std::size_t width() const { return width_; }
  const Word* set(std::size_t i) const { return words_.data() + i * width_; }

  void add(const Word* s) { words_.insert(words_.end(), s, s + width_), ++count_; }

  void add_singleton(std::size_t bit) {
    std::size_t start = words_.size();
    words_.resize(start + width_, 0);
    words_[start + bit / 64] |= Word{1} << (bit % 64);
    ++count_;
  }

  static int order(const Word* s, std::size_t width) {
    int n = 0;
    for (std::size_t w = 0; w < width; ++w) n += std::popcount(s[w]);
    return n;
  }

  /// Removes duplicates and every set that contains another set.
  void minimize() {
    std::vector<std::size_t> idx(count_);
    std::vector<int> orders(count_);
    for (std::size_t i = 0; i < count_; ++i) {
      idx[i] = i;
      orders[i] = order(set(i), width_);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (orders[a] != orders[b]) return orders[a] < orders[b];
      return std::lexicographical_compare(set(a), set(a) + width_, set(b), set(b) + width_);
    });
    std::vector<Word> kept;
    std::size_t kept_count = 0;
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const Word* s = set(idx[pos]);
      bool absorbed = false;
      for (std::size_t k = 0; k < kept_count && !absorbed; ++k) {
        const Word* small = kept.data() + k * width_;
        bool subset = true;
        for (std::size_t w = 0; w < width_ && subset; ++w) subset = (small[w] & ~s[w]) == 0;
        absorbed = subset;
      }
      if (absorbed) continue;
      kept.insert(kept.end(), s, s + width_);
      ++kept_count;
    }
    words_ = std::move(kept);
    count_ = kept_count;
  }

  /// Pairwise unions, dropping sets above `max_order`.
  static Family product(const Family& a, const Family& b, std::optional<int> max_order) {
    Family out(a.width_);
    std::vector<Word> u(a.width_);
    for (std::size_t i = 0; i < a.count_; ++i) {
      for (std::size_t j = 0; j < b.count_; ++j) {
        for (std::size_t w = 0; w < a.width_; ++w) u[w] = a.set(i)[w] | b.set(j)[w];
        if (max_order && order(u.data(), a.width_) > *max_order) continue;
        out.add(u.data());
      }
    }
    out.minimize();
    return out;
  }

  void append(const Family& other) {
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    count_ += other.count_;
  }

 private:
  std::size_t width_;
  std::size_t count_ = 0;
  std::vector<Word> words_;
};

bool event_less(const std::pair<EventCategory, std::string>& a,
                const std::pair<EventCategory, std::string>& b) {
  return a < b;
}

}  // namespace

std::vector<CutSet> CutSetCollection::of_order(int order) const {
  std::vector<CutSet> out;
  for (const CutSet& s : sets)
    if (static_cast<int>(s.size()) == order) out.push_back(s);
  return out;
}

void canonicalize(CutSetCollection& c) {
  auto key = [&](const std::string& id) {
    auto it = c.categories.find(id);
    return std::make_pair(it == c.categories.end() ? EventCategory::kHwStochastic : it->second, id);
  };
  auto member_less = [&](const std::string& a, const std::string& b) {
    return event_less(key(a), key(b));
  };
  for (CutSet& s : c.sets) {
    std::sort(s.begin(), s.end(), member_less);
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  std::sort(c.sets.begin(), c.sets.end(), [&](const CutSet& a, const CutSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), member_less);
  });
  c.sets.erase(std::unique(c.sets.begin(), c.sets.end()), c.sets.end());
  c.order_index.clear();
  for (const CutSet& s : c.sets) ++c.order_index[static_cast<int>(s.size())];
}

CutSetCollection minimal_cut_sets(const FaultTree& ft, std::optional<int> max_order) {
  std::vector<std::size_t> order = ft.bottom_up_order();

  // Rank events by (category, id) so bit order is output order.
  std::vector<std::pair<std::pair<EventCategory, std::string>, std::size_t>> events;
  for (std::size_t i : order)
    if (!ft.node(i).is_gate()) events.push_back({{ft.node(i).event().category, ft.node(i).id}, i});
  std::sort(events.begin(), events.end());
  std::vector<std::size_t> bit_of(ft.nodes().size(), 0);
  for (std::size_t b = 0; b < events.size(); ++b) bit_of[events[b].second] = b;
  const std::size_t width = std::max<std::size_t>(1, (events.size() + 63) / 64);

  std::vector<std::optional<Family>> memo(ft.nodes().size());
  std::vector<std::size_t> pending_parents(ft.nodes().size(), 0);
  for (std::size_t i : order)
    if (ft.node(i).is_gate())
      for (std::size_t c : ft.node(i).gate().children) ++pending_parents[c];

  for (std::size_t i : order) {
    const Node& n = ft.node(i);
    Family f(width);
    if (!n.is_gate()) {
      if (!max_order || *max_order >= 1) f.add_singleton(bit_of[i]);
    } else if (n.gate().op == GateOp::kOr) {
      for (std::size_t c : n.gate().children) f.append(*memo[c]);
      f.minimize();
    } else if (!n.gate().children.empty()) {
      f = *memo[n.gate().children.front()];
      for (std::size_t k = 1; k < n.gate().children.size(); ++k)
        f = Family::product(f, *memo[n.gate().children[k]], max_order);
    }
    memo[i] = std::move(f);
    // Release child families nobody else needs.
    if (n.is_gate())
      for (std::size_t c : n.gate().children)
        if (--pending_parents[c] == 0 && c != ft.root()) memo[c].reset();
  }

  CutSetCollection out;
  out.truncation_order = max_order;
  for (const auto& [key, index] : events) out.categories.emplace(key.second, key.first);
  const Family& top = *memo[ft.root()];
  for (std::size_t s = 0; s < top.size(); ++s) {
    CutSet set;
    const Word* bits = top.set(s);
    for (std::size_t b = 0; b < events.size(); ++b)
      if (bits[b / 64] >> (b % 64) & 1) set.push_back(events[b].first.second);
    out.sets.push_back(std::move(set));
  }
  canonicalize(out);
  return out;
}

FirstOrderCutSets first_order_cut_sets(const CutSetCollection& c) {
  FirstOrderCutSets out;
  for (const CutSet& s : c.sets) {
    if (s.size() != 1) continue;
    auto it = c.categories.find(s.front());
    bool software = it != c.categories.end() && is_software(it->second);
    (software ? out.software : out.hardware).push_back(s.front());
  }
  return out;
}

CutSetCollection brute_force_oracle(const FaultTree& ft) {
  std::vector<std::size_t> order = ft.bottom_up_order();
  std::vector<std::size_t> events;
  for (std::size_t i : order)
    if (!ft.node(i).is_gate()) events.push_back(i);
  std::sort(events.begin(), events.end());
  const int n = static_cast<int>(events.size());
  if (n > kOracleMaxEvents)
    throw OracleLimitError("brute-force oracle supports at most " +
                           std::to_string(kOracleMaxEvents) + " basic events, tree has " +
                           std::to_string(n));

  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<char> satisfied(total, 0);
  std::vector<char> value(ft.nodes().size(), 0);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    for (int b = 0; b < n; ++b) value[events[b]] = (mask >> b) & 1;
    for (std::size_t i : order) {
      const Node& node = ft.node(i);
      if (!node.is_gate()) continue;
      const auto& kids = node.gate().children;
      bool v;
      if (node.gate().op == GateOp::kAnd) {
        v = !kids.empty();
        for (std::size_t k : kids) v = v && value[k];
      } else {
        v = false;
        for (std::size_t k : kids) v = v || value[k];
      }
      value[i] = v;
    }
    satisfied[mask] = value[ft.root()];
  }

  CutSetCollection out;
  for (std::size_t i : events) out.categories.emplace(ft.node(i).id, ft.node(i).event().category);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    if (!satisfied[mask]) continue;
    bool minimal = true;
    for (int b = 0; b < n && minimal; ++b)
      if ((mask >> b & 1) && satisfied[mask ^ (std::uint32_t{1} << b)]) minimal = false;
    if (!minimal) continue;
    CutSet set;
    for (int b = 0; b < n; ++b)
      if (mask >> b & 1) set.push_back(ft.node(events[b]).id);
    out.sets.push_back(std::move(set));
  }
  canonicalize(out);
  return out;
}

}  // namespace resha
