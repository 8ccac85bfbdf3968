/// @file report.cc

#include "resha/report.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace resha {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out + "\n";
}

json parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != kSchema)
    throw FormatError("document is not a " + std::string(kSchema) + " artifact");
  return doc;
}

template <class T>
T require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

FailureMode require_mode(const json& obj, const char* key) {
  auto mode = parse_failure_mode(require<std::string>(obj, key));
  if (!mode) throw FormatError(std::string("bad failure mode in '") + key + "'");
  return *mode;
}

}  // namespace

std::string_view cause_category(FailureMode mode) {
  switch (mode) {
    case FailureMode::A:
    case FailureMode::B:
      return "programming-stage defect: output variable unassigned after calculation, or "
             "setpoint variable under or over the ideal limit";
    case FailureMode::F:
    case FailureMode::G:
      return "inappropriate boundary conditions of the module, or an incorrect process model "
             "producing unreliable output";
    case FailureMode::C:
    case FailureMode::D:
    case FailureMode::E:
      return "timing or sequencing defect: no cause category established, analyst review "
             "required";
  }
  return "";
}

GuidanceReport generate_guidance(const std::vector<CcfGroup>& groups,
                                 const CutSetCollection& cut_sets, const SystemModel& model) {
  ModelIndex index(model);
  GuidanceReport report;
  for (FailureMode mode : kAllFailureModes)
    report.cause_map.push_back({mode, std::string(cause_category(mode))});

  // One diversity finding per set of divisions sharing a design.
  std::map<std::vector<std::string>, std::size_t> by_divisions;
  for (const CcfGroup& g : groups) {
    if (g.ccf_type != 4) continue;
    std::set<std::string> divs;
    for (const std::string& o : g.origins) {
      const std::string& d = index.division_of(o);
      divs.insert(d.empty() ? "shared" : d);
    }
    std::vector<std::string> key(divs.begin(), divs.end());
    auto [it, fresh] = by_divisions.try_emplace(key, report.diversity_findings.size());
    if (fresh) report.diversity_findings.push_back({key, {}, {}, {}, {}});
    DiversityFinding& f = report.diversity_findings[it->second];
    f.groups.push_back(g.id);
    if (std::find(f.design_classes.begin(), f.design_classes.end(), g.trigger) ==
        f.design_classes.end()) {
      f.design_classes.push_back(g.trigger);
      const DesignClass* dc = index.design_class(g.trigger);
      std::string tag = dc && !dc->diversity_tag.empty() ? dc->diversity_tag : g.trigger;
      if (std::find(f.diversity_tags.begin(), f.diversity_tags.end(), tag) ==
          f.diversity_tags.end())
        f.diversity_tags.push_back(tag);
    }
  }
  for (DiversityFinding& f : report.diversity_findings) {
    f.text = "Divisions " + join(f.divisions, ", ") + " share " +
             std::to_string(f.design_classes.size()) + " software design class(es) (" +
             join(f.design_classes, ", ") + "), giving " + std::to_string(f.groups.size()) +
             " Type 4 sCCF(s). Introduce design diversity between these divisions.";
  }

  // One coupling finding per Type 2 trigger.
  std::map<std::string, std::size_t> by_trigger;
  for (const CcfGroup& g : groups) {
    if (g.ccf_type != 2) continue;
    auto [it, fresh] = by_trigger.try_emplace(g.trigger, report.coupling_findings.size());
    if (fresh) report.coupling_findings.push_back({g.trigger, g.origins, g.members, {}, {}});
    report.coupling_findings[it->second].groups.push_back(g.id);
  }
  for (CouplingFinding& f : report.coupling_findings) {
    f.text = f.trigger + " feeds " + std::to_string(f.dependents.size()) +
             " digital module(s) (" + join(f.dependents, ", ") + "); " +
             std::to_string(f.groups.size()) +
             " Type 2 sCCF(s). Reduce the interdependency or add independent checks of its output.";
  }

  std::map<std::string, const CcfGroup*> group_by_id;
  for (const CcfGroup& g : groups) group_by_id.emplace(g.id, &g);
  FirstOrderCutSets first = first_order_cut_sets(cut_sets);
  auto narrate = [&](const std::string& event, bool software) {
    SpofEntry e{event, software, {}};
    auto it = group_by_id.find(event);
    if (it == group_by_id.end()) {
      e.narrative = "basic event " + event + " alone causes the top event";
      return e;
    }
    const CcfGroup& g = *it->second;
    std::string mode = g.failure_type ? std::string(" type ") + to_char(*g.failure_type) + " (" +
                                            std::string(describe(*g.failure_type)) + ")"
                                      : std::string();
    switch (g.ccf_type) {
      case 4:
        e.narrative = "latent defect in shared design " + g.trigger + mode + " fails " +
                      join(g.origins, " and ") + " together";
        break;
      case 2:
        e.narrative = "defect in " + join(g.origins, "/") + mode + " corrupts dependents " +
                      join(g.members, ", ");
        break;
      case 3:
        e.narrative = "loss of external resource " + g.trigger + " fails " + join(g.members, ", ");
        break;
      default:
        e.narrative = "controller " + g.trigger + " commands " + join(g.members, ", ") +
                      " into a common failure";
    }
    return e;
  };
  for (const std::string& id : first.software) report.spof_summary.push_back(narrate(id, true));
  for (const std::string& id : first.hardware) report.spof_summary.push_back(narrate(id, false));
  return report;
}

// ---------------------------------------------------------------------------
// Fault tree JSON

std::string export_ft(const FaultTree& ft) {
  json nodes = json::array();
  for (const Node& n : ft.nodes()) {
    json j{{"id", n.id}, {"label", n.label}};
    if (n.is_gate()) {
      const Gate& g = n.gate();
      j["kind"] = "gate";
      j["op"] = to_string(g.op);
      j["role"] = to_string(g.role);
      if (!g.component.empty()) j["component"] = g.component;
      if (g.unresolved) j["unresolved"] = true;
      json children = json::array();
      for (std::size_t c : g.children) children.push_back(ft.node(c).id);
      j["children"] = std::move(children);
    } else {
      j["kind"] = "event";
      j["category"] = to_string(n.event().category);
    }
    nodes.push_back(std::move(j));
  }
  json doc{
      {"schema", kSchema},
      {"root", ft.nodes().empty() ? std::string() : ft.node(ft.root()).id},
      {"metadata",
       {{"model", ft.metadata.model},
        {"top_event", ft.metadata.top_event},
        {"stages",
         {{"include_hw_design", ft.metadata.include_hw_design},
          {"software_integrated", ft.metadata.software_integrated},
          {"ccf_injected", ft.metadata.ccf_injected}}}}},
      {"nodes", std::move(nodes)},
  };
  return doc.dump(2) + "\n";
}

FaultTree import_ft(std::string_view text) {
  json doc = parse_document(text);
  FaultTree ft;
  const json& meta = doc.value("metadata", json::object());
  ft.metadata.model = meta.value("model", "");
  ft.metadata.top_event = meta.value("top_event", "");
  const json& stages = meta.value("stages", json::object());
  ft.metadata.include_hw_design = stages.value("include_hw_design", false);
  ft.metadata.software_integrated = stages.value("software_integrated", false);
  ft.metadata.ccf_injected = stages.value("ccf_injected", false);

  const json nodes = require<json>(doc, "nodes");
  if (!nodes.is_array()) throw FormatError("'nodes' must be an array");
  try {
    for (const json& n : nodes) {
      std::string id = require<std::string>(n, "id");
      std::string label = n.value("label", "");
      std::string kind = require<std::string>(n, "kind");
      if (kind == "gate") {
        auto op = parse_gate_op(require<std::string>(n, "op"));
        auto role = parse_gate_role(n.value("role", "generic"));
        if (!op || !role) throw FormatError("bad gate op or role in node '" + id + "'");
        std::size_t g = ft.add_gate(id, *op, *role, label, n.value("component", ""));
        ft.node(g).gate().unresolved = n.value("unresolved", false);
      } else if (kind == "event") {
        auto category = parse_event_category(require<std::string>(n, "category"));
        if (!category) throw FormatError("bad event category in node '" + id + "'");
        ft.add_event(id, *category, label);
      } else {
        throw FormatError("unknown node kind '" + kind + "'");
      }
    }
    for (const json& n : nodes) {
      if (n.at("kind") != "gate") continue;
      std::size_t g = *ft.find(n.at("id").get<std::string>());
      for (const json& c : n.value("children", json::array())) {
        auto child = ft.find(c.get<std::string>());
        if (!child) throw FormatError("unknown child '" + c.get<std::string>() + "'");
        ft.node(g).gate().children.push_back(*child);
      }
    }
  } catch (const FaultTreeError& e) {
    throw FormatError(e.what());
  }
  auto root = ft.find(require<std::string>(doc, "root"));
  if (!root || !ft.node(*root).is_gate()) throw FormatError("root must name a gate");
  ft.set_root(*root);
  return ft;
}

// ---------------------------------------------------------------------------
// Instances and CCF groups

std::string export_instances(const std::vector<UcaUifInstance>& instances) {
  json arr = json::array();
  for (const UcaUifInstance& i : instances) {
    arr.push_back({{"id", i.id},
                   {"flavor", to_string(i.flavor)},
                   {"type", std::string(1, to_char(i.type))},
                   {"owner", i.owner},
                   {"link", i.link},
                   {"division", i.division},
                   {"hazards", i.hazards},
                   {"stpa_category", to_string(i.stpa_category)}});
  }
  return json{{"schema", kSchema}, {"instances", std::move(arr)}}.dump(2) + "\n";
}

std::vector<UcaUifInstance> import_instances(std::string_view text) {
  json doc = parse_document(text);
  std::vector<UcaUifInstance> out;
  for (const json& j : require<json>(doc, "instances")) {
    UcaUifInstance i;
    i.id = require<std::string>(j, "id");
    std::string flavor = require<std::string>(j, "flavor");
    if (flavor != "UCA" && flavor != "UIF") throw FormatError("bad flavor '" + flavor + "'");
    i.flavor = flavor == "UCA" ? Flavor::kUca : Flavor::kUif;
    i.type = require_mode(j, "type");
    i.owner = require<std::string>(j, "owner");
    i.link = require<std::string>(j, "link");
    i.division = j.value("division", "");
    i.hazards = require<std::vector<std::string>>(j, "hazards");
    i.stpa_category = stpa_category(i.type);
    out.push_back(std::move(i));
  }
  return out;
}

std::string export_ccf_json(const std::vector<CcfGroup>& groups) {
  json arr = json::array();
  for (const CcfGroup& g : groups) {
    json j{{"id", g.id},
           {"type", g.ccf_type},
           {"scope", to_string(g.scope)},
           {"trigger", g.trigger},
           {"members", g.members},
           {"origins", g.origins}};
    j["failure_type"] = g.failure_type ? json(std::string(1, to_char(*g.failure_type))) : json();
    arr.push_back(std::move(j));
  }
  return json{{"schema", kSchema}, {"groups", std::move(arr)}}.dump(2) + "\n";
}

std::vector<CcfGroup> import_ccf_json(std::string_view text) {
  json doc = parse_document(text);
  std::vector<CcfGroup> out;
  for (const json& j : require<json>(doc, "groups")) {
    CcfGroup g;
    g.id = require<std::string>(j, "id");
    g.ccf_type = require<int>(j, "type");
    if (g.ccf_type < 1 || g.ccf_type > 4) throw FormatError("CCF type out of range");
    auto scope = parse_redundancy_level(require<std::string>(j, "scope"));
    if (!scope) throw FormatError("bad CCF scope");
    g.scope = *scope;
    g.trigger = require<std::string>(j, "trigger");
    g.members = require<std::vector<std::string>>(j, "members");
    g.origins = j.value("origins", std::vector<std::string>{});
    if (j.contains("failure_type") && !j.at("failure_type").is_null())
      g.failure_type = require_mode(j, "failure_type");
    out.push_back(std::move(g));
  }
  return out;
}

std::string export_cut_sets_json(const CutSetCollection& c) {
  json sets = json::array();
  for (const CutSet& s : c.sets) {
    json cats = json::array();
    for (const std::string& e : s) cats.push_back(to_string(c.categories.at(e)));
    sets.push_back({{"order", s.size()}, {"members", s}, {"categories", std::move(cats)}});
  }
  json orders = json::object();
  for (const auto& [order, count] : c.order_index) orders[std::to_string(order)] = count;
  json doc{{"schema", kSchema}, {"order_index", std::move(orders)}, {"sets", std::move(sets)}};
  doc["truncation_order"] = c.truncation_order ? json(*c.truncation_order) : json();
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV

std::string export_cut_sets_csv(const CutSetCollection& c) {
  std::string out = csv_row({"order", "members", "categories"});
  for (const CutSet& s : c.sets) {
    std::vector<std::string> cats;
    for (const std::string& e : s) cats.emplace_back(to_string(c.categories.at(e)));
    out += csv_row({std::to_string(s.size()), join(s, ";"), join(cats, ";")});
  }
  return out;
}

std::string export_ccf_csv(const std::vector<CcfGroup>& groups) {
  std::string out = csv_row({"group_id", "type", "scope", "trigger", "members", "failure_type"});
  for (const CcfGroup& g : groups) {
    out += csv_row({g.id, std::to_string(g.ccf_type), std::string(to_string(g.scope)), g.trigger,
                    join(g.members, ";"),
                    g.failure_type ? std::string(1, to_char(*g.failure_type)) : std::string()});
  }
  return out;
}

std::string export_traceability_csv(const std::vector<UcaUifInstance>& instances,
                                    const SystemModel& model) {
  std::string out =
      csv_row({"instance_id", "flavor", "type", "owner", "link", "hazards", "losses"});
  for (const UcaUifInstance& i : instances) {
    out += csv_row({i.id, std::string(to_string(i.flavor)), std::string(1, to_char(i.type)),
                    i.owner, i.link, join(i.hazards, ";"), join(traced_losses(i, model), ";")});
  }
  return out;
}

}  // namespace resha
