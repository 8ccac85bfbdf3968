/// @file fault_tree.cc

#include "resha/fault_tree.h"

#include <algorithm>
#include <array>
#include <functional>
#include <utility>

namespace resha {

namespace {

constexpr std::array<std::pair<EventCategory, std::string_view>, 6> kCategoryNames{{
    {EventCategory::kHwStochastic, "hw_stochastic"},
    {EventCategory::kHwDesign, "hw_design"},
    {EventCategory::kDependencyLeaf, "dependency_leaf"},
    {EventCategory::kSwUca, "sw_uca"},
    {EventCategory::kSwUif, "sw_uif"},
    {EventCategory::kCcf, "ccf"},
}};

constexpr std::array<std::pair<GateRole, std::string_view>, 6> kRoleNames{{
    {GateRole::kTop, "top"},
    {GateRole::kComponent, "component"},
    {GateRole::kDependency, "dependency"},
    {GateRole::kSoftware, "software"},
    {GateRole::kRedundancy, "redundancy"},
    {GateRole::kGeneric, "generic"},
}};

}  // namespace

std::string_view to_string(GateOp op) { return op == GateOp::kAnd ? "and" : "or"; }

std::string_view to_string(EventCategory category) {
  for (const auto& [c, name] : kCategoryNames)
    if (c == category) return name;
  return "?";
}

std::string_view to_string(GateRole role) {
  for (const auto& [r, name] : kRoleNames)
    if (r == role) return name;
  return "?";
}

std::optional<GateOp> parse_gate_op(std::string_view text) {
  if (text == "and") return GateOp::kAnd;
  if (text == "or") return GateOp::kOr;
  return std::nullopt;
}

std::optional<EventCategory> parse_event_category(std::string_view text) {
  for (const auto& [c, name] : kCategoryNames)
    if (name == text) return c;
  return std::nullopt;
}

std::optional<GateRole> parse_gate_role(std::string_view text) {
  for (const auto& [r, name] : kRoleNames)
    if (name == text) return r;
  return std::nullopt;
}

bool is_software(EventCategory category) {
  return category == EventCategory::kSwUca || category == EventCategory::kSwUif ||
         category == EventCategory::kCcf;
}

std::string fail_gate_id(std::string_view component) { return "G-" + std::string(component); }
std::string dependency_gate_id(std::string_view component) {
  return "DEP-" + std::string(component);
}
std::string software_gate_id(std::string_view component) { return "SW-" + std::string(component); }

// ---------------------------------------------------------------------------
// FaultTree

std::size_t FaultTree::add_gate(const std::string& id, GateOp op, GateRole role, std::string label,
                                std::string component) {
  if (by_id_.count(id)) throw FaultTreeError("duplicate fault tree node id '" + id + "'");
  Gate gate;
  gate.op = op;
  gate.role = role;
  gate.component = std::move(component);
  nodes_.push_back({id, std::move(label), std::move(gate)});
  by_id_.emplace(id, nodes_.size() - 1);
  return nodes_.size() - 1;
}

std::size_t FaultTree::add_event(const std::string& id, EventCategory category, std::string label) {
  if (by_id_.count(id)) throw FaultTreeError("duplicate fault tree node id '" + id + "'");
  nodes_.push_back({id, std::move(label), BasicEvent{category}});
  by_id_.emplace(id, nodes_.size() - 1);
  return nodes_.size() - 1;
}

void FaultTree::add_child(std::size_t gate, std::size_t child) {
  auto& children = nodes_.at(gate).gate().children;
  if (std::find(children.begin(), children.end(), child) == children.end())
    children.push_back(child);
}

std::optional<std::size_t> FaultTree::find(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> FaultTree::bottom_up_order() const {
  std::vector<std::size_t> order;
  if (nodes_.empty()) return order;
  std::vector<char> state(nodes_.size(), 0);  // 0 new, 1 on stack, 2 done
  // Iterative DFS; deep chains must not overflow the call stack.
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root_, 0}};
  state[root_] = 1;
  while (!stack.empty()) {
    auto& [index, next] = stack.back();
    const Node& n = nodes_[index];
    if (n.is_gate() && next < n.gate().children.size()) {
      std::size_t child = n.gate().children[next++];
      if (state[child] == 1)
        throw FaultTreeError("fault tree contains a cycle through '" + nodes_[child].id + "'");
      if (state[child] == 0) {
        state[child] = 1;
        stack.emplace_back(child, 0);
      }
      continue;
    }
    state[index] = 2;
    order.push_back(index);
    stack.pop_back();
  }
  return order;
}

std::vector<std::string> FaultTree::basic_events() const {
  std::vector<std::size_t> order = bottom_up_order();
  std::sort(order.begin(), order.end());
  std::vector<std::string> out;
  for (std::size_t i : order)
    if (!nodes_[i].is_gate()) out.push_back(nodes_[i].id);
  return out;
}

bool FaultTree::evaluate(const std::vector<char>& event_state) const {
  std::vector<char> value(nodes_.size(), 0);
  for (std::size_t i : bottom_up_order()) {
    const Node& n = nodes_[i];
    if (!n.is_gate()) {
      value[i] = i < event_state.size() && event_state[i];
      continue;
    }
    const Gate& g = n.gate();
    if (g.op == GateOp::kAnd) {
      value[i] = !g.children.empty() &&
                 std::all_of(g.children.begin(), g.children.end(),
                             [&](std::size_t c) { return value[c] != 0; });
    } else {
      value[i] = std::any_of(g.children.begin(), g.children.end(),
                             [&](std::size_t c) { return value[c] != 0; });
    }
  }
  return value[root_] != 0;
}

bool FaultTree::evaluate(const std::set<std::string>& failed) const {
  std::vector<char> state(nodes_.size(), 0);
  for (const std::string& id : failed)
    if (auto i = find(id)) state[*i] = 1;
  return evaluate(state);
}

std::map<std::size_t, std::vector<std::size_t>> FaultTree::parents() const {
  std::map<std::size_t, std::vector<std::size_t>> out;
  for (std::size_t i : bottom_up_order())
    if (nodes_[i].is_gate())
      for (std::size_t c : nodes_[i].gate().children) out[c].push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

class Synthesizer {
 public:
  Synthesizer(const SystemModel& model, const SynthesisOptions& options)
      : model_(model), index_(model), options_(options) {}

  FaultTree run() {
    const Component* op = index_.op();
    if (!op) throw FaultTreeError("model has no operator component");
    if (model_.top_event.empty()) throw FaultTreeError("model has no top event");
    tree_.metadata.model = model_.name;
    tree_.metadata.top_event = model_.top_event;
    tree_.metadata.include_hw_design = options_.include_hw_design;
    std::size_t top = tree_.add_gate("TOP", GateOp::kOr, GateRole::kTop, model_.top_event);
    tree_.set_root(top);
    for (std::size_t child : source_children(*op)) tree_.add_child(top, child);
    return std::move(tree_);
  }

 private:
  /// Children for a consumer's inputs, with redundancy groups combined.
  std::vector<std::size_t> source_children(const Component& consumer) {
    const auto& edges = index_.inputs(consumer.id);
    std::vector<std::size_t> out;
    std::vector<char> consumed(edges.size(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (consumed[i]) continue;
      const RedundancyGroup* group = group_of(edges[i].source);
      if (group) {
        // Members of this group among the consumer's inputs, in member order.
        std::vector<std::pair<std::string, std::vector<std::string>>> members;
        for (const std::string& m : group->members) members.push_back({m, {}});
        std::vector<std::size_t> taken;
        for (std::size_t j = i; j < edges.size(); ++j) {
          if (consumed[j] || group_of(edges[j].source) != group) continue;
          std::string key = member_key(*group, edges[j].source);
          for (auto& [m, sources] : members)
            if (m == key) sources.push_back(edges[j].source);
          taken.push_back(j);
        }
        std::size_t present = std::count_if(members.begin(), members.end(),
                                            [](const auto& m) { return !m.second.empty(); });
        if (present >= 2) {
          for (std::size_t j : taken) consumed[j] = 1;
          out.push_back(group_gate(*group, consumer, members));
          continue;
        }
      }
      consumed[i] = 1;
      out.push_back(fail(edges[i].source));
    }
    return out;
  }

  /// First declared group containing `component` directly or by division.
  const RedundancyGroup* group_of(const std::string& component) const {
    const std::string& division = index_.division_of(component);
    for (const RedundancyGroup& g : model_.redundancy_groups)
      for (const std::string& m : g.members)
        if (m == component || (!division.empty() && m == division)) return &g;
    return nullptr;
  }

  std::string member_key(const RedundancyGroup& g, const std::string& component) const {
    for (const std::string& m : g.members)
      if (m == component) return m;
    return index_.division_of(component);
  }

  std::size_t group_gate(const RedundancyGroup& g, const Component& consumer,
                         const std::vector<std::pair<std::string, std::vector<std::string>>>& members) {
    GateOp op = g.logic == GroupLogic::kAllMustFail ? GateOp::kAnd : GateOp::kOr;
    std::string id = "RG-" + g.id + "-" + consumer.id;
    std::string label = "redundancy group " + g.id + " (" + std::string(to_string(g.logic)) +
                        ") feeding " + consumer.id;
    std::size_t gate = tree_.add_gate(id, op, GateRole::kRedundancy, label);
    for (const auto& [member, sources] : members) {
      if (sources.empty()) continue;
      if (sources.size() == 1) {
        tree_.add_child(gate, fail(sources.front()));
        continue;
      }
      std::size_t sub = tree_.add_gate(id + "-" + member, GateOp::kOr, GateRole::kRedundancy,
                                       "member " + member + " of " + g.id + " fails");
      for (const std::string& s : sources) tree_.add_child(sub, fail(s));
      tree_.add_child(gate, sub);
    }
    return gate;
  }

  std::size_t fail(const std::string& id) {
    if (auto it = built_.find(id); it != built_.end()) return it->second;
    const Component& c = *index_.component(id);
    if (c.tech == Tech::kHuman) {
      std::size_t leaf = tree_.add_event("DEPLEAF-" + c.id, EventCategory::kDependencyLeaf,
                                         "input from " + c.id + " outside the analysis scope");
      built_.emplace(id, leaf);
      return leaf;
    }
    std::size_t gate =
        tree_.add_gate(fail_gate_id(c.id), GateOp::kOr, GateRole::kComponent, c.id + " fails", c.id);
    built_.emplace(id, gate);
    tree_.add_child(gate, tree_.add_event("HW-" + c.id, EventCategory::kHwStochastic,
                                          c.id + " hardware stochastic failure"));
    if (options_.include_hw_design)
      tree_.add_child(gate, tree_.add_event("HWD-" + c.id, EventCategory::kHwDesign,
                                            c.id + " hardware design failure"));
    if (!index_.inputs(c.id).empty()) {
      std::size_t dep = tree_.add_gate(dependency_gate_id(c.id), GateOp::kOr, GateRole::kDependency,
                                       c.id + " dependency failure", c.id);
      tree_.add_child(gate, dep);
      for (std::size_t child : source_children(c)) tree_.add_child(dep, child);
    }
    if (c.tech == Tech::kDigital) {
      std::size_t sw = tree_.add_gate(software_gate_id(c.id), GateOp::kOr, GateRole::kSoftware,
                                      c.id + " software design failure", c.id);
      tree_.node(sw).gate().unresolved = true;
      tree_.add_child(gate, sw);
    }
    return gate;
  }

  const SystemModel& model_;
  ModelIndex index_;
  SynthesisOptions options_;
  FaultTree tree_;
  std::map<std::string, std::size_t> built_;
};

}  // namespace

FaultTree synthesize_hardware_ft(const SystemModel& model, const SynthesisOptions& options) {
  return Synthesizer(model, options).run();
}

BranchCensus branch_census(const FaultTree& ft) {
  BranchCensus census;
  for (std::size_t i : ft.bottom_up_order()) {
    const Node& n = ft.node(i);
    if (n.is_gate()) {
      if (n.gate().role == GateRole::kDependency) ++census.dependency_branches;
      if (n.gate().role == GateRole::kSoftware) ++census.sw_design_branches;
    } else if (n.event().category == EventCategory::kHwStochastic) {
      ++census.hw_stochastic_events;
    } else if (n.event().category == EventCategory::kHwDesign) {
      ++census.hw_design_branches;
    }
  }
  return census;
}

FaultTree integrate_software(const FaultTree& ft, const std::vector<UcaUifInstance>& instances) {
  FaultTree out = ft;
  for (const UcaUifInstance& inst : instances) {
    auto gate = out.find(software_gate_id(inst.owner));
    if (!gate || !out.node(*gate).is_gate())
      throw FaultTreeError("instance owner '" + inst.owner + "' of '" + inst.id +
                           "' has no software branch in the tree");
    auto event = out.find(inst.id);
    if (!event) {
      std::string label = inst.owner + " " + std::string(to_string(inst.flavor)) + " type " +
                          to_char(inst.type) + ": " + std::string(describe(inst.type));
      event = out.add_event(
          inst.id, inst.flavor == Flavor::kUca ? EventCategory::kSwUca : EventCategory::kSwUif,
          std::move(label));
    }
    out.add_child(*gate, *event);
  }
  for (std::size_t i = 0; i < out.nodes().size(); ++i) {
    Node& n = out.node(i);
    if (n.is_gate() && n.gate().role == GateRole::kSoftware)
      n.gate().unresolved = n.gate().children.empty();
  }
  out.metadata.software_integrated = true;
  return out;
}

}  // namespace resha
