/// @file stpa.h
/// Control structure extraction and UCA/UIF enumeration.

#pragma once

#include <string>
#include <vector>

#include "resha/model.h"

namespace resha {

enum class Flavor { kUca, kUif };

std::string_view to_string(Flavor flavor);

struct ControlNode {
  std::string component;
  std::string division;  ///< Empty for shared components.
  /// Redundancy levels of the groups this node participates in.
  std::vector<RedundancyLevel> redundancy;
  bool operator==(const ControlNode&) const = default;
};

struct ControlEdge {
  std::string link;
  std::string source;
  std::string target;
  bool operator==(const ControlEdge&) const = default;
};

/// Components that can alter the state of others, plus the operator.
struct ControlStructure {
  std::vector<ControlNode> nodes;
  std::vector<ControlEdge> control_edges;
  std::vector<ControlEdge> info_edges;
  /// Links in declaration order (sources of candidates).
  std::vector<std::string> links;

  bool contains(std::string_view component) const;
};

/// One failure-mode candidate bound to a link.
struct UcaUifInstance {
  std::string id;  ///< "<link>/<type>/<division>"
  Flavor flavor = Flavor::kUif;
  FailureMode type = FailureMode::A;
  std::string owner;
  std::string link;
  std::string division;
  std::vector<std::string> hazards;
  StpaCategory stpa_category = StpaCategory::kMissing;
  bool operator==(const UcaUifInstance&) const = default;
};

std::string instance_id(std::string_view link, FailureMode type, std::string_view division);

/// Keeps only link sources and the operator. Links targeting excluded
/// components are still recorded as edges of their source.
ControlStructure extract_control_structure(const SystemModel& model);

/// All seven types for every link, in link declaration order.
std::vector<UcaUifInstance> enumerate_candidates(const ControlStructure& cs,
                                                 const SystemModel& model);

/// Candidates whose type is declared applicable on their link, with hazards
/// attached, sorted by (division, owner, type, link).
/// @throws ModelError "applicable instance lacks hazard link".
std::vector<UcaUifInstance> apply_applicability(const std::vector<UcaUifInstance>& candidates,
                                                const SystemModel& model);

/// Losses reachable from an instance through its hazards, sorted.
std::vector<std::string> traced_losses(const UcaUifInstance& instance, const SystemModel& model);

}  // namespace resha
