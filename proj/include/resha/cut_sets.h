/// @file cut_sets.h
/// Minimal cut sets of monotone fault trees.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resha/fault_tree.h"

namespace resha {

using CutSet = std::vector<std::string>;

struct CutSetCollection {
  /// Sorted by (order, member-wise (category, id)); members likewise sorted.
  std::vector<CutSet> sets;
  std::map<int, int> order_index;  ///< order -> number of sets
  std::optional<int> truncation_order;
  std::map<std::string, EventCategory> categories;

  std::vector<CutSet> of_order(int order) const;
  bool operator==(const CutSetCollection&) const = default;
};

/// Bottom-up minimization over the DAG with per-node memoization. OR gates
/// unite their children's families, AND gates take the product; both absorb
/// supersets. With `max_order`, exactly the minimal sets of order <= k.
/// @throws FaultTreeError on a cycle.
CutSetCollection minimal_cut_sets(const FaultTree& ft, std::optional<int> max_order = {});

struct FirstOrderCutSets {
  std::vector<std::string> hardware;
  std::vector<std::string> software;
};

/// Singleton sets split by category.
FirstOrderCutSets first_order_cut_sets(const CutSetCollection& c);

class OracleLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kOracleMaxEvents = 24;

/// Truth-table enumeration of all 2^n event assignments; keeps the
/// satisfying sets from which no single event can be removed.
/// @throws OracleLimitError above kOracleMaxEvents basic events.
CutSetCollection brute_force_oracle(const FaultTree& ft);

/// Orders sets and members canonically and rebuilds the order index.
void canonicalize(CutSetCollection& c);

}  // namespace resha
