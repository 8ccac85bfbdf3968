/// @file pipeline.cc

#include "resha/pipeline.h"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "resha/dsl.h"

namespace resha {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string first_message(const ValidationReport& report) {
  std::string msg = "model failed validation with " + std::to_string(report.violations.size()) +
                    " violation(s)";
  if (!report.violations.empty()) msg += "; first: " + report.violations.front().str();
  return msg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

ValidationFailed::ValidationFailed(ValidationReport report)
    : std::runtime_error(first_message(report)), report_(std::move(report)) {}

Analysis analyze(const SystemModel& model, const PipelineOptions& options) {
  ValidationReport report = validate_model(model);
  if (!report.ok()) throw ValidationFailed(std::move(report));

  Analysis a;
  a.options = options;
  a.model = expand_replication(model);
  a.hardware_tree = synthesize_hardware_ft(a.model, {options.include_hw_design});
  a.control_structure = extract_control_structure(a.model);
  a.candidates = enumerate_candidates(a.control_structure, a.model);
  a.instances = apply_applicability(a.candidates, a.model);
  a.integrated_tree = integrate_software(a.hardware_tree, a.instances);
  a.groups = detect_ccf_groups(a.integrated_tree, a.model, a.instances);
  a.tree = inject_ccf_events(a.integrated_tree, a.groups);
  a.cut_sets = minimal_cut_sets(a.tree, options.max_order);
  a.guidance = generate_guidance(a.groups, a.cut_sets, a.model);
  return a;
}

SummaryCounts summary_counts(const Analysis& a) {
  SummaryCounts s;
  s.divisions = static_cast<int>(a.model.divisions.size());
  ModelIndex index(a.model);
  for (const Component* c : index.components()) {
    ++s.components;
    if (c->tech == Tech::kDigital) ++s.digital_components;
  }
  s.census = branch_census(a.tree);
  s.candidates = static_cast<int>(a.candidates.size());
  for (const UcaUifInstance& i : a.instances) (i.flavor == Flavor::kUca ? s.ucas : s.uifs)++;
  for (std::size_t n : a.tree.bottom_up_order()) {
    const Node& node = a.tree.node(n);
    if (node.is_gate()) {
      if (node.gate().role == GateRole::kSoftware && node.gate().unresolved)
        ++s.unresolved_software_branches;
    } else if (node.event().category == EventCategory::kSwUca ||
               node.event().category == EventCategory::kSwUif) {
      ++s.software_events;
    }
  }
  for (const CcfGroup& g : a.groups) ++s.ccf_by_type[g.ccf_type];
  s.cut_sets = static_cast<int>(a.cut_sets.sets.size());
  FirstOrderCutSets first = first_order_cut_sets(a.cut_sets);
  s.first_order_software = static_cast<int>(first.software.size());
  s.first_order_hardware = static_cast<int>(first.hardware.size());
  return s;
}

std::string render_summary_text(const Analysis& a) {
  SummaryCounts s = summary_counts(a);
  std::ostringstream os;
  os << "RESHA hazard analysis: " << a.model.name << "\n";
  os << "Top event: " << a.model.top_event << "\n\n";
  os << "Stage 1: Hardware representation\n";
  os << "  Divisions: " << s.divisions << "\n";
  os << "  Components: " << s.components << " (" << s.digital_components << " digital)\n\n";
  os << "Stage 2: Hardware fault tree\n";
  os << "  Hardware stochastic basic events: " << s.census.hw_stochastic_events << "\n";
  os << "  Dependency failure branches: " << s.census.dependency_branches << "\n";
  os << "  Software design failure branches: " << s.census.sw_design_branches << "\n";
  os << "  Hardware design failure branches: " << s.census.hw_design_branches << "\n\n";
  os << "Stage 3: UCA/UIF identification\n";
  os << "  Candidates: " << s.candidates << "\n";
  os << "  Applicable UCAs: " << s.ucas << "\n";
  os << "  Applicable UIFs: " << s.uifs << "\n\n";
  os << "Stage 4: Integrated fault tree\n";
  os << "  Software basic events: " << s.software_events << "\n";
  os << "  Unresolved software branches: " << s.unresolved_software_branches << "\n\n";
  os << "Stage 5: Software CCF identification\n";
  for (int t = 1; t <= 4; ++t) os << "  Type " << t << " sCCF: " << s.ccf_by_type[t] << "\n";
  os << "\nStage 6: Minimal cut sets\n";
  os << "  Minimal cut sets: " << s.cut_sets;
  if (a.cut_sets.truncation_order) os << " (order <= " << *a.cut_sets.truncation_order << ")";
  os << "\n";
  for (const auto& [order, count] : a.cut_sets.order_index)
    os << "  Order " << order << ": " << count << "\n";
  os << "  First-order software cut sets: " << s.first_order_software << "\n";
  os << "  First-order hardware cut sets: " << s.first_order_hardware << "\n\n";
  os << "Stage 7: Guidance\n";
  os << "  Diversity findings: " << a.guidance.diversity_findings.size() << "\n";
  for (const DiversityFinding& f : a.guidance.diversity_findings) os << "    - " << f.text << "\n";
  os << "  Coupling findings: " << a.guidance.coupling_findings.size() << "\n";
  for (const CouplingFinding& f : a.guidance.coupling_findings) os << "    - " << f.text << "\n";
  os << "  Latent fault causes:\n";
  for (const CauseEntry& c : a.guidance.cause_map)
    os << "    " << to_char(c.type) << ": " << c.cause << "\n";
  os << "  Single points of failure:\n";
  for (const SpofEntry& e : a.guidance.spof_summary)
    os << "    " << e.event << ": " << e.narrative << "\n";
  return os.str();
}

std::string render_summary_markdown(const Analysis& a) {
  SummaryCounts s = summary_counts(a);
  std::ostringstream os;
  os << "# RESHA hazard analysis: " << a.model.name << "\n\n";
  os << "Top event: *" << a.model.top_event << "*\n\n";
  os << "## Stage 1: Hardware representation\n\n";
  os << "- Divisions: " << s.divisions << "\n";
  os << "- Components: " << s.components << " (" << s.digital_components << " digital)\n\n";
  os << "## Stage 2: Hardware fault tree\n\n";
  os << "| Branch | Count |\n|---|---|\n";
  os << "| Hardware stochastic basic events | " << s.census.hw_stochastic_events << " |\n";
  os << "| Dependency failure branches | " << s.census.dependency_branches << " |\n";
  os << "| Software design failure branches | " << s.census.sw_design_branches << " |\n";
  os << "| Hardware design failure branches | " << s.census.hw_design_branches << " |\n\n";
  os << "## Stage 3: UCA/UIF identification\n\n";
  os << "- Candidates: " << s.candidates << "\n";
  os << "- Applicable UCAs: " << s.ucas << "\n";
  os << "- Applicable UIFs: " << s.uifs << "\n\n";
  os << "## Stage 4: Integrated fault tree\n\n";
  os << "- Software basic events: " << s.software_events << "\n";
  os << "- Unresolved software branches: " << s.unresolved_software_branches << "\n\n";
  os << "## Stage 5: Software CCF identification\n\n";
  for (int t = 1; t <= 4; ++t) os << "- Type " << t << " sCCF: " << s.ccf_by_type[t] << "\n";
  os << "\n## Stage 6: Minimal cut sets\n\n";
  os << "- Minimal cut sets: " << s.cut_sets << "\n";
  os << "- First-order software cut sets: " << s.first_order_software << "\n";
  os << "- First-order hardware cut sets: " << s.first_order_hardware << "\n\n";
  os << "| Order | Count |\n|---|---|\n";
  for (const auto& [order, count] : a.cut_sets.order_index)
    os << "| " << order << " | " << count << " |\n";
  os << "\n## Stage 7: Guidance\n\n### Diversity\n\n";
  for (const DiversityFinding& f : a.guidance.diversity_findings) os << "- " << f.text << "\n";
  os << "\n### Coupling\n\n";
  for (const CouplingFinding& f : a.guidance.coupling_findings) os << "- " << f.text << "\n";
  os << "\n### Latent fault causes\n\n| Type | Cause category |\n|---|---|\n";
  for (const CauseEntry& c : a.guidance.cause_map)
    os << "| " << to_char(c.type) << " | " << c.cause << " |\n";
  os << "\n### Single points of failure\n\n| Event | Narrative |\n|---|---|\n";
  for (const SpofEntry& e : a.guidance.spof_summary)
    os << "| `" << e.event << "` | " << e.narrative << " |\n";
  return os.str();
}

void write_artifacts(const Analysis& a, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_file(out_dir / "ft.json", export_ft(a.tree));
  write_file(out_dir / "cutsets.csv", export_cut_sets_csv(a.cut_sets));
  write_file(out_dir / "ccf.csv", export_ccf_csv(a.groups));
  write_file(out_dir / "traceability.csv", export_traceability_csv(a.instances, a.model));
  write_file(out_dir / "summary.md", render_summary_markdown(a));
  write_file(out_dir / "summary.txt", render_summary_text(a));
}

// ---------------------------------------------------------------------------
// Golden records

namespace {

struct DivisionCounts {
  int candidates = 0;
  int uca = 0;
  int calculator_uif = 0;
  int alarm_uif = 0;
};

std::map<std::string, DivisionCounts> per_division(const Analysis& a) {
  ModelIndex index(a.model);
  std::map<std::string, DivisionCounts> out;
  for (const Division& d : a.model.divisions) out[d.id];
  for (const UcaUifInstance& i : a.candidates) ++out[i.division].candidates;
  for (const UcaUifInstance& i : a.instances) {
    DivisionCounts& c = out[i.division];
    const Component* owner = index.component(i.owner);
    if (i.flavor == Flavor::kUca) ++c.uca;
    else if (owner && owner->kind == ComponentKind::kCalculator) ++c.calculator_uif;
    else if (owner && owner->kind == ComponentKind::kAlarm) ++c.alarm_uif;
  }
  return out;
}

}  // namespace

GoldenReport verify_golden(const SystemModel& model, std::string_view golden_json) {
  GoldenReport report;
  json golden;
  try {
    golden = json::parse(golden_json);
  } catch (const json::parse_error& e) {
    report.diffs.push_back({"golden", "valid JSON", e.what()});
    return report;
  }
  auto check = [&](const std::string& field, const json& expected, const json& actual) {
    if (!expected.is_null() && expected != actual)
      report.diffs.push_back({field, expected.dump(), actual.dump()});
  };

  Analysis a;
  try {
    a = analyze(model);
  } catch (const ValidationFailed& e) {
    report.diffs.push_back({"validation", "0 violations",
                            std::to_string(e.report().violations.size()) + " violations"});
    return report;
  } catch (const std::exception& e) {
    report.diffs.push_back({"analysis", "success", e.what()});
    return report;
  }
  SummaryCounts s = summary_counts(a);

  if (golden.contains("census")) {
    const json& c = golden["census"];
    BranchCensus census = branch_census(a.hardware_tree);
    check("census.hw_stochastic_events", c.value("hw_stochastic_events", json()),
          census.hw_stochastic_events);
    check("census.dependency_branches", c.value("dependency_branches", json()),
          census.dependency_branches);
    check("census.sw_design_branches", c.value("sw_design_branches", json()),
          census.sw_design_branches);
    check("census.hw_design_branches", c.value("hw_design_branches", json()),
          census.hw_design_branches);
  }
  if (golden.contains("divisions")) check("divisions", golden["divisions"], s.divisions);

  auto divisions = per_division(a);
  for (const auto& [id, counts] : divisions) {
    if (id.empty()) continue;
    if (golden.contains("candidates_per_division"))
      check("candidates_per_division." + id, golden["candidates_per_division"], counts.candidates);
    if (golden.contains("instances_per_division")) {
      const json& e = golden["instances_per_division"];
      check("instances_per_division." + id + ".uca", e.value("uca", json()), counts.uca);
      check("instances_per_division." + id + ".calculator_uif", e.value("calculator_uif", json()),
            counts.calculator_uif);
      check("instances_per_division." + id + ".alarm_uif", e.value("alarm_uif", json()),
            counts.alarm_uif);
    }
  }
  if (golden.contains("ccf")) {
    const json& c = golden["ccf"];
    for (int t = 1; t <= 4; ++t) {
      std::string key = "type" + std::to_string(t);
      check("ccf." + key, c.value(key, json()), s.ccf_by_type[t]);
    }
  }
  if (golden.contains("first_order_software_cut_sets"))
    check("first_order_software_cut_sets", golden["first_order_software_cut_sets"],
          s.first_order_software);

  if (golden.contains("first_order_software_triggers")) {
    std::set<std::string> triggers;
    std::map<std::string, const CcfGroup*> groups;
    for (const CcfGroup& g : a.groups) groups.emplace(g.id, &g);
    for (const std::string& e : first_order_cut_sets(a.cut_sets).software)
      if (auto it = groups.find(e); it != groups.end()) triggers.insert(it->second->trigger);
    for (const json& entry : golden["first_order_software_triggers"]) {
      std::string trigger = entry.value("trigger", "");
      if (!triggers.count(trigger))
        report.diffs.push_back({"first_order_software_triggers." + trigger,
                                "first-order CCF event (" + entry.value("description", "") + ")",
                                "absent"});
    }
  }
  return report;
}

GoldenReport verify_golden(const std::string& model_path, const std::string& golden_path) {
  return verify_golden(load_model(model_path), read_file(golden_path));
}

}  // namespace resha
