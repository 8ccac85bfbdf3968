// resha: command-line front end. Each stage can run alone with JSON
// artifacts chained between invocations, or all at once via `pipeline`.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "CLI11.hpp"
#include "resha/dsl.h"
#include "resha/pipeline.h"

namespace fs = std::filesystem;
using namespace resha;

namespace {

enum Exit { kOk = 0, kViolations = 1, kError = 2 };

struct Options {
  std::string model;
  std::string out_dir;
  std::string format;
  std::string tree;
  std::string instances;
  std::string groups;
  std::string golden;
  bool include_hw_design = false;
  std::optional<int> max_order;
};

bool use_color() { return !std::getenv("RESHA_NO_COLOR") && isatty(STDERR_FILENO); }

void report_error(const std::string& msg) {
  if (use_color())
    std::cerr << "\033[31merror:\033[0m " << msg << "\n";
  else
    std::cerr << "error: " << msg << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes to out_dir/name when --out-dir is set, otherwise to stdout.
void emit(const Options& o, const std::string& name, const std::string& content) {
  if (o.out_dir.empty()) {
    std::cout << content;
    return;
  }
  fs::create_directories(o.out_dir);
  fs::path path = fs::path(o.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

// Parses and validates; returns the expanded model. Violations go to stderr.
std::optional<SystemModel> load_valid(const Options& o) {
  SystemModel model = load_model(o.model);
  ValidationReport report = validate_model(model);
  if (!report.ok()) {
    for (const Violation& v : report.violations) report_error(v.str());
    return std::nullopt;
  }
  return expand_replication(model);
}

std::vector<UcaUifInstance> instances_for(const Options& o, const SystemModel& model) {
  if (!o.instances.empty()) return import_instances(read_file(o.instances));
  ControlStructure cs = extract_control_structure(model);
  return apply_applicability(enumerate_candidates(cs, model), model);
}

std::string require_format(const Options& o, std::initializer_list<const char*> allowed,
                           const char* fallback) {
  if (o.format.empty()) return fallback;
  for (const char* f : allowed)
    if (o.format == f) return o.format;
  throw std::runtime_error("format '" + o.format + "' not supported by this command");
}

int cmd_validate(const Options& o) {
  SystemModel model = load_model(o.model);
  ValidationReport report = validate_model(model);
  for (const Violation& v : report.violations) report_error(v.str());
  if (!report.ok()) return kViolations;
  std::cout << "ok: " << o.model << "\n";
  return kOk;
}

int cmd_stpa(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  std::vector<UcaUifInstance> instances = instances_for(o, *model);
  if (require_format(o, {"json", "csv"}, "json") == "csv")
    emit(o, "traceability.csv", export_traceability_csv(instances, *model));
  else
    emit(o, "instances.json", export_instances(instances));
  return kOk;
}

int cmd_synth(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  require_format(o, {"json"}, "json");
  emit(o, "ft_hw.json", export_ft(synthesize_hardware_ft(*model, {o.include_hw_design})));
  return kOk;
}

FaultTree hardware_tree_for(const Options& o, const SystemModel& model) {
  if (!o.tree.empty()) return import_ft(read_file(o.tree));
  return synthesize_hardware_ft(model, {o.include_hw_design});
}

int cmd_integrate(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  require_format(o, {"json"}, "json");
  FaultTree ft = integrate_software(hardware_tree_for(o, *model), instances_for(o, *model));
  emit(o, "ft_sw.json", export_ft(ft));
  return kOk;
}

int cmd_ccf(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  std::vector<UcaUifInstance> instances = instances_for(o, *model);
  FaultTree integrated = o.tree.empty()
                             ? integrate_software(synthesize_hardware_ft(*model, {o.include_hw_design}),
                                                  instances)
                             : import_ft(read_file(o.tree));
  std::vector<CcfGroup> groups = detect_ccf_groups(integrated, *model, instances);
  if (require_format(o, {"json", "csv"}, "json") == "csv")
    emit(o, "ccf.csv", export_ccf_csv(groups));
  else
    emit(o, "ccf.json", export_ccf_json(groups));
  if (!o.out_dir.empty()) emit(o, "ft.json", export_ft(inject_ccf_events(integrated, groups)));
  return kOk;
}

// The final tree: --tree (optionally injected with --groups) or a full run.
FaultTree final_tree_for(const Options& o, const SystemModel& model) {
  if (o.tree.empty()) {
    Analysis a = analyze(model, {o.include_hw_design, o.max_order});
    return a.tree;
  }
  FaultTree ft = import_ft(read_file(o.tree));
  if (!o.groups.empty()) ft = inject_ccf_events(ft, import_ccf_json(read_file(o.groups)));
  return ft;
}

int cmd_cutsets(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  CutSetCollection c = minimal_cut_sets(final_tree_for(o, *model), o.max_order);
  if (require_format(o, {"json", "csv"}, "csv") == "json")
    emit(o, "cutsets.json", export_cut_sets_json(c));
  else
    emit(o, "cutsets.csv", export_cut_sets_csv(c));
  return kOk;
}

int cmd_report(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  Analysis a = analyze(*model, {o.include_hw_design, o.max_order});
  if (!o.instances.empty()) a.instances = import_instances(read_file(o.instances));
  if (!o.groups.empty()) a.groups = import_ccf_json(read_file(o.groups));
  if (!o.tree.empty()) a.tree = import_ft(read_file(o.tree));
  a.cut_sets = minimal_cut_sets(a.tree, o.max_order);
  a.guidance = generate_guidance(a.groups, a.cut_sets, a.model);
  if (require_format(o, {"md"}, "") == "md")
    emit(o, "summary.md", render_summary_markdown(a));
  else
    emit(o, "summary.txt", render_summary_text(a));
  return kOk;
}

int cmd_pipeline(const Options& o) {
  auto model = load_valid(o);
  if (!model) return kViolations;
  Analysis a = analyze(*model, {o.include_hw_design, o.max_order});
  if (!o.out_dir.empty()) write_artifacts(a, o.out_dir);
  std::cout << render_summary_text(a);
  return kOk;
}

int cmd_verify(const Options& o) {
  GoldenReport r = verify_golden(o.model, o.golden);
  for (const FieldDiff& d : r.diffs)
    std::cout << "FAIL " << d.field << ": expected " << d.expected << ", got " << d.actual
              << "\n";
  if (r.pass()) std::cout << "PASS " << o.golden << "\n";
  return r.pass() ? kOk : kViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RESHA hazard analysis toolkit"};
  app.require_subcommand(1);
  Options o;
  int (*selected)(const Options&) = nullptr;

  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("model", o.model, "model file (.resha)")->required();
    sub->add_option("--out-dir", o.out_dir, "write artifacts into this directory");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "md"}));
    sub->add_flag("--include-hw-design", o.include_hw_design, "add hardware design branches");
    sub->add_option("--max-order", o.max_order, "truncate cut sets above this order")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tree", o.tree, "fault tree JSON from an earlier stage");
    sub->add_option("--instances", o.instances, "UCA/UIF instances JSON");
    sub->add_option("--groups", o.groups, "CCF groups JSON");
    sub->callback([&selected, fn] { selected = fn; });
    return sub;
  };
  add("validate", "check a model against every invariant", cmd_validate);
  add("stpa", "enumerate applicable UCAs and UIFs", cmd_stpa);
  add("synth", "synthesize the hardware fault tree", cmd_synth);
  add("integrate", "attach software events to the fault tree", cmd_integrate);
  add("ccf", "detect software common cause failure groups", cmd_ccf);
  add("cutsets", "compute minimal cut sets", cmd_cutsets);
  add("report", "render the analysis summary", cmd_report);
  add("pipeline", "run every stage and write all artifacts", cmd_pipeline);
  CLI::App* verify = add("verify", "compare a model's results with a golden record", cmd_verify);
  verify->add_option("golden", o.golden, "golden record JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }
  try {
    return selected(o);
  } catch (const ValidationFailed& e) {
    for (const Violation& v : e.report().violations) report_error(v.str());
    return kViolations;
  } catch (const std::exception& e) {
    report_error(e.what());
    return kError;
  }
}
