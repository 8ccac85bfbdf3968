/// @file report.h
/// Guidance generation and machine-readable exports.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resha/ccf.h"
#include "resha/cut_sets.h"
#include "resha/fault_tree.h"
#include "resha/model.h"
#include "resha/stpa.h"

namespace resha {

inline constexpr std::string_view kSchema = "resha/1";

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-diverse design shared by a set of divisions.
struct DiversityFinding {
  std::vector<std::string> divisions;
  std::vector<std::string> design_classes;
  std::vector<std::string> diversity_tags;
  std::vector<std::string> groups;  ///< Type 4 group ids.
  std::string text;
};

/// A component whose failure modes corrupt several dependents.
struct CouplingFinding {
  std::string trigger;
  std::vector<std::string> origins;
  std::vector<std::string> dependents;
  std::vector<std::string> groups;  ///< Type 2 group ids.
  std::string text;
};

struct CauseEntry {
  FailureMode type;
  std::string cause;
};

struct SpofEntry {
  std::string event;
  bool software = true;
  std::string narrative;
};

struct GuidanceReport {
  std::vector<DiversityFinding> diversity_findings;
  std::vector<CouplingFinding> coupling_findings;
  std::vector<CauseEntry> cause_map;  ///< One entry per failure mode type.
  std::vector<SpofEntry> spof_summary;
};

/// Latent-fault cause category for a failure mode type.
std::string_view cause_category(FailureMode mode);

GuidanceReport generate_guidance(const std::vector<CcfGroup>& groups,
                                 const CutSetCollection& cut_sets, const SystemModel& model);

// JSON artifacts. Every document carries "schema": "resha/1".

std::string export_ft(const FaultTree& ft);
/// @throws FormatError on malformed documents.
FaultTree import_ft(std::string_view json);

std::string export_instances(const std::vector<UcaUifInstance>& instances);
std::vector<UcaUifInstance> import_instances(std::string_view json);

std::string export_ccf_json(const std::vector<CcfGroup>& groups);
std::vector<CcfGroup> import_ccf_json(std::string_view json);

std::string export_cut_sets_json(const CutSetCollection& c);

// CSV artifacts.

std::string export_cut_sets_csv(const CutSetCollection& c);
std::string export_ccf_csv(const std::vector<CcfGroup>& groups);
std::string export_traceability_csv(const std::vector<UcaUifInstance>& instances,
                                    const SystemModel& model);

}  // namespace resha
