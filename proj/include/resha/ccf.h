/// @file ccf.h
/// Software common cause failure detection, classification and injection.
///
/// Type 1: components commanded by the same controller.
/// Type 2: a shared internal upstream component or resource.
/// Type 3: a shared resource external to the controller.
/// Type 4: a shared common design (or location) across divisions.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resha/fault_tree.h"
#include "resha/model.h"
#include "resha/stpa.h"

namespace resha {

class CcfError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CcfGroup {
  std::string id;
  int ccf_type = 4;
  RedundancyLevel scope = RedundancyLevel::kSystem;
  /// Design class id (Type 4), upstream component id (Type 2), shared
  /// resource id (Type 3) or controller id (Type 1).
  std::string trigger;
  /// Instance ids for Type 4, affected component ids otherwise.
  std::vector<std::string> members;
  std::optional<FailureMode> failure_type;
  /// Components carrying the defect (one per division for replicated designs).
  std::vector<std::string> origins;
  bool operator==(const CcfGroup&) const = default;
};

/// Detects Type 4, 2, 3 and 1 groups, in that rule order. Type 2 groups whose
/// upstream components share a design class are emitted once.
std::vector<CcfGroup> detect_ccf_groups(const FaultTree& ft, const SystemModel& model,
                                        const std::vector<UcaUifInstance>& instances);

/// Maps a trigger id to its CCF type from the model facts. `hint` resolves a
/// trigger that matches more than one rule.
/// @throws CcfError if the trigger is ambiguous without a usable hint, or
///         matches no rule.
int classify_ccf_type(const std::string& trigger, const SystemModel& model,
                      std::optional<int> hint = std::nullopt);

/// Adds one shared ccf basic event per group next to each member's
/// independent failure.
/// @throws CcfError if a member location is not in the tree.
FaultTree inject_ccf_events(const FaultTree& ft, const std::vector<CcfGroup>& groups);

/// Digital components reachable downstream of `component` within its division.
std::vector<std::string> digital_dependents(const ModelIndex& index, const std::string& component);

}  // namespace resha
