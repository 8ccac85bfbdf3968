/// @file pipeline.h
/// The seven-stage analysis run end to end, summary rendering and golden
/// record verification.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resha/ccf.h"
#include "resha/cut_sets.h"
#include "resha/fault_tree.h"
#include "resha/model.h"
#include "resha/report.h"
#include "resha/stpa.h"

namespace resha {

/// The model failed validation; analysis cannot proceed.
class ValidationFailed : public std::runtime_error {
 public:
  explicit ValidationFailed(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct PipelineOptions {
  bool include_hw_design = false;
  std::optional<int> max_order;
};

/// Every stage artifact of one run.
struct Analysis {
  PipelineOptions options;
  SystemModel model;  ///< Expanded.
  ControlStructure control_structure;
  std::vector<UcaUifInstance> candidates;
  std::vector<UcaUifInstance> instances;  ///< Applicable only.
  FaultTree hardware_tree;
  FaultTree integrated_tree;
  std::vector<CcfGroup> groups;
  FaultTree tree;  ///< Integrated tree with CCF events.
  CutSetCollection cut_sets;
  GuidanceReport guidance;
};

/// validate -> expand -> synthesize -> stpa -> integrate -> ccf -> cut sets
/// -> guidance.
/// @throws ValidationFailed, or the stage error of the failing stage.
Analysis analyze(const SystemModel& model, const PipelineOptions& options = {});

/// Counts shown in the summary, derived from the stage artifacts.
struct SummaryCounts {
  int divisions = 0;
  int components = 0;
  int digital_components = 0;
  BranchCensus census;
  int candidates = 0;
  int ucas = 0;
  int uifs = 0;
  int software_events = 0;
  int unresolved_software_branches = 0;
  int ccf_by_type[5] = {0, 0, 0, 0, 0};
  int cut_sets = 0;
  int first_order_software = 0;
  int first_order_hardware = 0;
};

SummaryCounts summary_counts(const Analysis& a);

std::string render_summary_text(const Analysis& a);
std::string render_summary_markdown(const Analysis& a);

/// Artifact file names written by write_artifacts().
inline const std::vector<std::string> kArtifactFiles = {
    "ft.json", "cutsets.csv", "ccf.csv", "traceability.csv", "summary.md", "summary.txt"};

/// Writes kArtifactFiles into `out_dir`, creating it if needed.
void write_artifacts(const Analysis& a, const std::filesystem::path& out_dir);

struct FieldDiff {
  std::string field;
  std::string expected;
  std::string actual;
};

struct GoldenReport {
  std::vector<FieldDiff> diffs;
  bool pass() const { return diffs.empty(); }
};

/// Compares a model's analysis against a golden record document.
GoldenReport verify_golden(const SystemModel& model, std::string_view golden_json);
/// File-based convenience overload.
GoldenReport verify_golden(const std::string& model_path, const std::string& golden_path);

}  // namespace resha
