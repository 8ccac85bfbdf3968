/// @file model.cc
/// Model enumerations, validation and replication expansion.

#include "resha/model.h"

#include <algorithm>
#include <array>
#include <functional>
#include <queue>
#include <set>
#include <utility>

namespace resha {

namespace {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<ComponentKind, 11> kKindNames{{
    {ComponentKind::kController, "controller"},
    {ComponentKind::kSensor, "sensor"},
    {ComponentKind::kCalculator, "calculator"},
    {ComponentKind::kAlarm, "alarm"},
    {ComponentKind::kConverter, "converter"},
    {ComponentKind::kConditioner, "conditioner"},
    {ComponentKind::kPowerSupply, "power_supply"},
    {ComponentKind::kComms, "comms"},
    {ComponentKind::kDisplay, "display"},
    {ComponentKind::kTestPanel, "test_panel"},
    {ComponentKind::kOperator, "operator"},
}};

constexpr NameTable<Tech, 3> kTechNames{{
    {Tech::kDigital, "digital"},
    {Tech::kAnalog, "analog"},
    {Tech::kHuman, "human"},
}};

constexpr NameTable<LinkKind, 2> kLinkKindNames{{
    {LinkKind::kControlAction, "control_action"},
    {LinkKind::kInformationFlow, "info_flow"},
}};

constexpr NameTable<StpaCategory, 4> kCategoryNames{{
    {StpaCategory::kMissing, "missing"},
    {StpaCategory::kNotNeeded, "not_needed"},
    {StpaCategory::kTimingOrder, "timing_order"},
    {StpaCategory::kDurationMagnitude, "duration_magnitude"},
}};

constexpr NameTable<RedundancyLevel, 3> kLevelNames{{
    {RedundancyLevel::kSystem, "system"},
    {RedundancyLevel::kDivision, "division"},
    {RedundancyLevel::kModule, "module"},
}};

constexpr NameTable<GroupLogic, 2> kLogicNames{{
    {GroupLogic::kAllMustFail, "all_must_fail"},
    {GroupLogic::kAnyMisleads, "any_misleads"},
}};

constexpr NameTable<ResourceScope, 2> kScopeNames{{
    {ResourceScope::kInternal, "internal"},
    {ResourceScope::kExternal, "external"},
}};

template <class E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <class E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view text) {
  for (const auto& [e, name] : table)
    if (name == text) return e;
  return std::nullopt;
}

}  // namespace

std::string SourceSpan::str() const {
  std::string out = file.empty() ? "<input>" : file;
  out += ":" + std::to_string(line) + ":" + std::to_string(column);
  return out;
}

std::string Violation::str() const {
  return span.known() ? span.str() + ": " + message : message;
}

std::string_view to_string(ComponentKind kind) { return name_of(kKindNames, kind); }
std::string_view to_string(Tech tech) { return name_of(kTechNames, tech); }
std::string_view to_string(LinkKind kind) { return name_of(kLinkKindNames, kind); }
std::string_view to_string(StpaCategory c) { return name_of(kCategoryNames, c); }
std::string_view to_string(RedundancyLevel l) { return name_of(kLevelNames, l); }
std::string_view to_string(GroupLogic logic) { return name_of(kLogicNames, logic); }
std::string_view to_string(ResourceScope s) { return name_of(kScopeNames, s); }

char to_char(FailureMode mode) { return static_cast<char>('A' + static_cast<int>(mode)); }

std::optional<ComponentKind> parse_component_kind(std::string_view text) {
  return value_of(kKindNames, text);
}
std::optional<Tech> parse_tech(std::string_view text) { return value_of(kTechNames, text); }
std::optional<RedundancyLevel> parse_redundancy_level(std::string_view text) {
  return value_of(kLevelNames, text);
}
std::optional<GroupLogic> parse_group_logic(std::string_view text) {
  return value_of(kLogicNames, text);
}
std::optional<ResourceScope> parse_resource_scope(std::string_view text) {
  return value_of(kScopeNames, text);
}
std::optional<FailureMode> parse_failure_mode(std::string_view text) {
  if (text.size() != 1 || text[0] < 'A' || text[0] > 'G') return std::nullopt;
  return static_cast<FailureMode>(text[0] - 'A');
}

StpaCategory stpa_category(FailureMode mode) {
  switch (mode) {
    case FailureMode::A:
      return StpaCategory::kMissing;
    case FailureMode::B:
      return StpaCategory::kNotNeeded;
    case FailureMode::C:
    case FailureMode::D:
    case FailureMode::E:
      return StpaCategory::kTimingOrder;
    case FailureMode::F:
    case FailureMode::G:
      return StpaCategory::kDurationMagnitude;
  }
  return StpaCategory::kMissing;
}

std::string_view describe(FailureMode mode) {
  switch (mode) {
    case FailureMode::A: return "missing when needed";
    case FailureMode::B: return "provided when not needed";
    case FailureMode::C: return "provided too early";
    case FailureMode::D: return "provided too late";
    case FailureMode::E: return "applied in the wrong order";
    case FailureMode::F: return "applied too long or too much";
    case FailureMode::G: return "stopped too early or applied too little";
  }
  return "";
}

bool is_identifier(std::string_view id) {
  if (id.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(id[0])) return false;
  return std::all_of(id.begin() + 1, id.end(), [&](char c) {
    return alpha(c) || digit(c) || c == '_' || c == '-';
  });
}

// ---------------------------------------------------------------------------
// ModelIndex

ModelIndex::ModelIndex(const SystemModel& model) : model_(&model) {
  auto add_component = [this](const Component& c, const std::string& division) {
    order_.push_back(&c);
    components_.emplace(c.id, &c);
    division_of_.emplace(c.id, division);
    for (const Link& link : c.links) {
      links_.emplace(link.id, &link);
      link_owner_.emplace(link.id, &c);
    }
    if (c.kind == ComponentKind::kOperator && !operator_) operator_ = &c;
  };
  for (const Division& d : model.divisions) {
    divisions_.emplace(d.id, &d);
    for (const Component& c : d.components) add_component(c, d.id);
  }
  for (const Component& c : model.shared_components) add_component(c, "");
  for (const DesignClass& dc : model.design_classes) classes_.emplace(dc.id, &dc);
  for (const Hazard& h : model.hazards) hazards_.emplace(h.id, &h);
  for (const Loss& l : model.losses) losses_.emplace(l.id, true);

  for (const Component* c : order_) {
    auto& edges = inputs_[c->id];
    auto add_edge = [&edges](InputEdge edge) {
      bool seen = std::any_of(edges.begin(), edges.end(),
                              [&](const InputEdge& e) { return e.source == edge.source; });
      if (!seen) edges.push_back(std::move(edge));
    };
    for (const std::string& ref : c->inputs) {
      if (auto it = link_owner_.find(ref); it != link_owner_.end()) {
        add_edge({it->second->id, ref});
      } else if (components_.count(ref)) {
        add_edge({ref, ""});
      }
    }
  }
  // Links targeting a component imply an input edge even when undeclared.
  for (const Component* owner : order_) {
    for (const Link& link : owner->links) {
      for (const std::string& target : link.targets) {
        auto it = inputs_.find(target);
        if (it == inputs_.end()) continue;
        auto& edges = it->second;
        bool seen = std::any_of(edges.begin(), edges.end(),
                                [&](const InputEdge& e) { return e.source == owner->id; });
        if (!seen) edges.push_back({owner->id, link.id});
      }
    }
  }
  for (const Component* c : order_) consumers_[c->id];
  for (const Component* c : order_) {
    for (const InputEdge& edge : inputs_[c->id]) consumers_[edge.source].push_back(c->id);
  }
}

const Component* ModelIndex::component(std::string_view id) const {
  auto it = components_.find(id);
  return it == components_.end() ? nullptr : it->second;
}

const Link* ModelIndex::link(std::string_view id) const {
  auto it = links_.find(id);
  return it == links_.end() ? nullptr : it->second;
}

const Component* ModelIndex::link_owner(std::string_view link_id) const {
  auto it = link_owner_.find(link_id);
  return it == link_owner_.end() ? nullptr : it->second;
}

const std::string& ModelIndex::division_of(std::string_view component_id) const {
  static const std::string kNone;
  auto it = division_of_.find(component_id);
  return it == division_of_.end() ? kNone : it->second;
}

const DesignClass* ModelIndex::design_class(std::string_view id) const {
  auto it = classes_.find(id);
  return it == classes_.end() ? nullptr : it->second;
}

const Division* ModelIndex::division(std::string_view id) const {
  auto it = divisions_.find(id);
  return it == divisions_.end() ? nullptr : it->second;
}

const Hazard* ModelIndex::hazard(std::string_view id) const {
  auto it = hazards_.find(id);
  return it == hazards_.end() ? nullptr : it->second;
}

bool ModelIndex::has_loss(std::string_view id) const { return losses_.find(id) != losses_.end(); }

const std::vector<InputEdge>& ModelIndex::inputs(std::string_view component_id) const {
  static const std::vector<InputEdge> kEmpty;
  auto it = inputs_.find(component_id);
  return it == inputs_.end() ? kEmpty : it->second;
}

const std::vector<std::string>& ModelIndex::consumers(std::string_view component_id) const {
  static const std::vector<std::string> kEmpty;
  auto it = consumers_.find(component_id);
  return it == consumers_.end() ? kEmpty : it->second;
}

std::optional<std::vector<std::string>> ModelIndex::topological_order() const {
  // Kahn's algorithm; ready components are taken in declaration order.
  std::map<std::string, std::size_t, std::less<>> position;
  for (std::size_t i = 0; i < order_.size(); ++i) position.emplace(order_[i]->id, i);
  std::vector<std::size_t> pending(order_.size(), 0);
  for (std::size_t i = 0; i < order_.size(); ++i) pending[i] = inputs(order_[i]->id).size();
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < order_.size(); ++i)
    if (pending[i] == 0) ready.push(i);
  std::vector<std::string> out;
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    out.push_back(order_[i]->id);
    for (const std::string& consumer : consumers(order_[i]->id)) {
      std::size_t j = position.at(consumer);
      if (--pending[j] == 0) ready.push(j);
    }
  }
  if (out.size() != order_.size()) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Replication

SystemModel expand_replication(const SystemModel& model) {
  SystemModel out = model;
  std::map<std::string, const Division*> by_id;
  for (const Division& d : model.divisions) by_id.emplace(d.id, &d);

  for (Division& target : out.divisions) {
    if (!target.replicates) continue;
    auto src_it = by_id.find(*target.replicates);
    if (src_it == by_id.end())
      throw ModelError("division '" + target.id + "' replicates unknown division '" +
                           *target.replicates + "'",
                       target.span);
    const Division& source = *src_it->second;
    if (source.replicates)
      throw ModelError("chained replication unsupported: '" + target.id + "' replicates '" +
                           source.id + "' which itself replicates '" + *source.replicates + "'",
                       target.span);

    const std::string suffix = "_" + target.id;
    std::set<std::string> local;  // ids renamed by the copy
    for (const Component& c : source.components) {
      local.insert(c.id);
      for (const Link& l : c.links) local.insert(l.id);
    }
    auto rename = [&](const std::string& id) { return local.count(id) ? id + suffix : id; };
    auto rename_all = [&](std::vector<std::string>& ids) {
      for (std::string& id : ids) id = rename(id);
    };

    target.components = source.components;
    for (Component& c : target.components) {
      c.id = rename(c.id);
      rename_all(c.inputs);
      rename_all(c.feedback_inputs);
      for (Link& l : c.links) {
        l.id = rename(l.id);
        rename_all(l.targets);
      }
    }
    // Module- and division-level groups wholly inside the source are copied.
    std::vector<RedundancyGroup> copies;
    for (const RedundancyGroup& g : model.redundancy_groups) {
      if (g.level == RedundancyLevel::kSystem || g.members.empty()) continue;
      bool inside = std::all_of(g.members.begin(), g.members.end(),
                                [&](const std::string& m) { return local.count(m) > 0; });
      if (!inside) continue;
      RedundancyGroup copy = g;
      copy.id = g.id + suffix;
      rename_all(copy.members);
      copies.push_back(std::move(copy));
    }
    out.redundancy_groups.insert(out.redundancy_groups.end(), copies.begin(), copies.end());
    target.replicates.reset();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  explicit Validator(const SystemModel& model) : model_(model) {}

  ValidationReport run() {
    check_header();
    check_losses_and_hazards();
    check_design_classes();
    check_divisions();
    std::optional<SystemModel> expanded;
    try {
      expanded = expand_replication(model_);
    } catch (const ModelError& e) {
      report_.violations.push_back({e.span(), strip_location(e.what(), e.span())});
    }
    if (expanded) check_expanded(*expanded);
    return std::move(report_);
  }

 private:
  static std::string strip_location(const std::string& what, const SourceSpan& span) {
    std::string prefix = span.known() ? span.str() + ": " : "";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
  }

  void add(const SourceSpan& span, std::string message) {
    report_.violations.push_back({span, std::move(message)});
  }

  void check_id(const std::string& id, const SourceSpan& span, std::string_view what) {
    if (!is_identifier(id)) add(span, "invalid " + std::string(what) + " id '" + id + "'");
  }

  static bool numbered(const std::string& id, char prefix) {
    if (id.size() < 3 || id[0] != prefix || id[1] != '-') return false;
    return std::all_of(id.begin() + 2, id.end(), [](char c) { return c >= '0' && c <= '9'; });
  }

  void check_header() {
    if (model_.name.empty()) add({}, "missing system name");
    if (model_.top_event.empty()) add({}, "missing top event");
  }

  void check_losses_and_hazards() {
    std::set<std::string> losses;
    for (const Loss& l : model_.losses) {
      if (!numbered(l.id, 'L')) add(l.span, "loss id '" + l.id + "' does not match L-<n>");
      if (!losses.insert(l.id).second) add(l.span, "duplicate loss id '" + l.id + "'");
    }
    std::set<std::string> hazards;
    for (const Hazard& h : model_.hazards) {
      if (!numbered(h.id, 'H')) add(h.span, "hazard id '" + h.id + "' does not match H-<n>");
      if (!hazards.insert(h.id).second) add(h.span, "duplicate hazard id '" + h.id + "'");
      if (h.linked_losses.empty()) add(h.span, "hazard '" + h.id + "' links no loss");
      for (const std::string& l : h.linked_losses)
        if (!losses.count(l))
          add(h.span, "unresolved loss reference '" + l + "' in hazard '" + h.id + "'");
    }
  }

  void check_design_classes() {
    std::set<std::string> seen;
    for (const DesignClass& dc : model_.design_classes) {
      check_id(dc.id, dc.span, "design class");
      if (!seen.insert(dc.id).second) add(dc.span, "duplicate design class id '" + dc.id + "'");
    }
  }

  void check_divisions() {
    std::set<std::string> seen;
    for (const Division& d : model_.divisions) {
      check_id(d.id, d.span, "division");
      if (!seen.insert(d.id).second) add(d.span, "duplicate division id '" + d.id + "'");
      if (d.replicates && !d.components.empty())
        add(d.span, "replicating division '" + d.id + "' declares components");
      std::set<std::string> local;
      for (const Component& c : d.components)
        if (!local.insert(c.id).second)
          add(c.span, "duplicate component id '" + c.id + "' in division '" + d.id + "'");
    }
  }

  void check_expanded(const SystemModel& m) {
    ModelIndex index(m);

    std::set<std::string> ids;
    int operators = 0;
    for (const Component* c : index.components()) {
      check_id(c->id, c->span, "component");
      if (!ids.insert(c->id).second) add(c->span, "duplicate component id '" + c->id + "'");
      if (c->kind == ComponentKind::kOperator) ++operators;
      check_component(index, *c);
    }
    if (operators != 1)
      add({}, "model must declare exactly one operator component, found " +
                  std::to_string(operators));

    std::set<std::string> link_ids;
    for (const Component* c : index.components())
      for (const Link& l : c->links)
        if (!link_ids.insert(l.id).second || ids.count(l.id))
          add(l.span, "duplicate link id '" + l.id + "'");

    for (const RedundancyGroup& g : m.redundancy_groups) check_group(index, g);
    for (const SharedResource& r : m.shared_resources) {
      check_id(r.id, r.span, "shared resource");
      if (r.dependents.size() < 2)
        add(r.span, "shared resource '" + r.id + "' needs at least 2 dependents");
      for (const std::string& d : r.dependents)
        if (!index.component(d))
          add(r.span, "unresolved dependent '" + d + "' in shared resource '" + r.id + "'");
    }
    check_cycles(index);
  }

  void check_component(const ModelIndex& index, const Component& c) {
    if (!index.design_class(c.design_class))
      add(c.span, "unresolved design class '" + c.design_class + "' in component '" + c.id + "'");
    auto check_refs = [&](const std::vector<std::string>& refs, std::string_view what) {
      for (const std::string& ref : refs) {
        if (const Link* link = index.link(ref)) {
          if (std::find(link->targets.begin(), link->targets.end(), c.id) == link->targets.end())
            add(c.span, "component '" + c.id + "' lists " + std::string(what) + " link '" + ref +
                            "' which does not target it");
        } else if (!index.component(ref)) {
          add(c.span, "unresolved " + std::string(what) + " reference '" + ref +
                          "' in component '" + c.id + "'");
        } else if (ref == c.id) {
          add(c.span, "component '" + c.id + "' lists itself as " + std::string(what));
        }
      }
    };
    check_refs(c.inputs, "input");
    check_refs(c.feedback_inputs, "feedback");

    for (const Link& l : c.links) {
      check_id(l.id, l.span, "link");
      if (l.kind == LinkKind::kControlAction && c.kind != ComponentKind::kController)
        add(l.span, "control action '" + l.id + "' sourced by non-controller '" + c.id + "'");
      if (l.targets.empty()) add(l.span, "link '" + l.id + "' has no targets");
      for (const std::string& t : l.targets)
        if (!index.component(t))
          add(l.span, "unresolved link target '" + t + "' in link '" + l.id + "'");
      if (!l.applicability.empty() && c.tech != Tech::kDigital)
        add(l.span, "link '" + l.id + "' declares UCA/UIF applicability on non-digital component '" +
                        c.id + "'");
      std::set<FailureMode> modes;
      for (const Applicability& a : l.applicability) {
        if (!modes.insert(a.mode).second)
          add(a.span, std::string("duplicate applicability type ") + to_char(a.mode) +
                          " in link '" + l.id + "'");
        if (a.hazards.empty())
          add(a.span, std::string("applicable instance lacks hazard link: type ") +
                          to_char(a.mode) + " of link '" + l.id + "'");
        for (const std::string& h : a.hazards)
          if (!index.hazard(h))
            add(a.span, "unresolved hazard reference '" + h + "' in link '" + l.id + "'");
      }
    }
  }

  void check_group(const ModelIndex& index, const RedundancyGroup& g) {
    check_id(g.id, g.span, "redundancy group");
    if (g.members.size() < 2)
      add(g.span, "redundancy group '" + g.id + "' needs at least 2 members");
    std::set<std::string> member_components;
    for (const std::string& m : g.members) {
      if (const Division* d = index.division(m)) {
        for (const Component& c : d->components) member_components.insert(c.id);
      } else if (index.component(m)) {
        member_components.insert(m);
      } else {
        add(g.span, "unresolved member '" + m + "' in redundancy group '" + g.id + "'");
      }
    }
    if (g.logic == GroupLogic::kAnyMisleads) {
      bool feeds_human = false;
      for (const Component* c : index.components()) {
        if (c->tech != Tech::kHuman) continue;
        for (const InputEdge& e : index.inputs(c->id))
          if (member_components.count(e.source)) feeds_human = true;
      }
      if (!feeds_human)
        add(g.span, "any_misleads group '" + g.id + "' does not feed a human component");
    }
  }

  void check_cycles(const ModelIndex& index) {
    if (index.topological_order()) return;
    // Report one violation per strongly tangled component: find a cycle by DFS.
    std::map<std::string, int> color;
    std::vector<std::string> stack;
    std::function<bool(const std::string&)> dfs = [&](const std::string& id) -> bool {
      color[id] = 1;
      stack.push_back(id);
      for (const std::string& next : index.consumers(id)) {
        if (color[next] == 1) {
          std::string path;
          auto it = std::find(stack.begin(), stack.end(), next);
          for (; it != stack.end(); ++it) path += *it + " -> ";
          path += next;
          add(index.component(next)->span, "dependency cycle: " + path);
          return true;
        }
        if (color[next] == 0 && dfs(next)) return true;
      }
      stack.pop_back();
      color[id] = 2;
      return false;
    };
    for (const Component* c : index.components())
      if (color[c->id] == 0 && dfs(c->id)) return;
  }

  const SystemModel& model_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_model(const SystemModel& model) { return Validator(model).run(); }

}  // namespace resha
