/// @file ccf.cc

#include "resha/ccf.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace resha {

std::vector<std::string> digital_dependents(const ModelIndex& index, const std::string& component) {
  const std::string& division = index.division_of(component);
  std::set<std::string> seen{component};
  std::deque<std::string> queue{component};
  std::vector<std::string> out;
  while (!queue.empty()) {
    std::string id = queue.front();
    queue.pop_front();
    for (const std::string& next : index.consumers(id)) {
      if (index.division_of(next) != division || !seen.insert(next).second) continue;
      if (index.component(next)->tech == Tech::kDigital) out.push_back(next);
      queue.push_back(next);
    }
  }
  return out;
}

namespace {

std::set<std::string> divisions_using(const ModelIndex& index, const std::string& design_class) {
  std::set<std::string> out;
  for (const Component* c : index.components())
    if (c->design_class == design_class) out.insert(index.division_of(c->id));
  return out;
}

std::set<std::string> commanded_targets(const Component& c) {
  std::set<std::string> out;
  if (c.kind != ComponentKind::kController) return out;
  for (const Link& l : c.links) {
    if (l.kind != LinkKind::kControlAction) continue;
    std::set<std::string> distinct(l.targets.begin(), l.targets.end());
    if (distinct.size() >= 2) out.insert(distinct.begin(), distinct.end());
  }
  return out;
}

RedundancyLevel scope_of(const ModelIndex& index, const std::vector<std::string>& components) {
  std::set<std::string> divisions;
  for (const std::string& c : components) divisions.insert(index.division_of(c));
  return divisions.size() > 1 ? RedundancyLevel::kSystem : RedundancyLevel::kDivision;
}

}  // namespace

int classify_ccf_type(const std::string& trigger, const SystemModel& model,
                      std::optional<int> hint) {
  ModelIndex index(model);
  std::vector<std::pair<int, std::string>> matches;
  if (index.design_class(trigger) && divisions_using(index, trigger).size() >= 2)
    matches.push_back({4, "design class shared across divisions"});
  for (const SharedResource& r : model.shared_resources) {
    if (r.id != trigger) continue;
    if (r.scope == ResourceScope::kExternal)
      matches.push_back({3, "shared resource external to the controller"});
    else
      matches.push_back({2, "shared internal resource"});
  }
  if (const Component* c = index.component(trigger)) {
    if (c->tech == Tech::kDigital && digital_dependents(index, trigger).size() >= 2)
      matches.push_back({2, "shared upstream component with digital dependents"});
    if (commanded_targets(*c).size() >= 2)
      matches.push_back({1, "controller commanding several components"});
  }
  if (matches.empty()) throw CcfError("no CCF rule matches trigger '" + trigger + "'");
  if (hint) {
    for (const auto& [type, why] : matches)
      if (type == *hint) return type;
  }
  if (matches.size() > 1) {
    std::string msg = "ambiguous CCF trigger '" + trigger + "': ";
    for (std::size_t i = 0; i < matches.size(); ++i)
      msg += (i ? " and " : "") + ("Type " + std::to_string(matches[i].first)) + " (" +
             matches[i].second + ")";
    throw CcfError(msg + "; annotate the group type");
  }
  return matches.front().first;
}

std::vector<CcfGroup> detect_ccf_groups(const FaultTree& ft, const SystemModel& model,
                                        const std::vector<UcaUifInstance>& instances) {
  ModelIndex index(model);
  std::vector<CcfGroup> out;
  // Components that never reach the top event have no place to inject into.
  auto in_tree = [&](const std::string& component) {
    return ft.find(fail_gate_id(component)).has_value();
  };

  // (a) Type 4: same design class and failure type in distinct divisions.
  {
    std::map<std::pair<std::string, FailureMode>, std::vector<const UcaUifInstance*>> by_key;
    std::vector<std::pair<std::string, FailureMode>> order;
    for (const UcaUifInstance& inst : instances) {
      const Component* owner = index.component(inst.owner);
      if (!owner || !ft.find(inst.id)) continue;
      auto key = std::make_pair(owner->design_class, inst.type);
      auto [it, fresh] = by_key.try_emplace(key);
      if (fresh) order.push_back(key);
      it->second.push_back(&inst);
    }
    std::sort(order.begin(), order.end());
    for (const auto& key : order) {
      const auto& members = by_key[key];
      std::set<std::string> divisions;
      for (const UcaUifInstance* m : members) divisions.insert(m->division);
      if (divisions.size() < 2) continue;
      CcfGroup g;
      g.id = "CCF4-" + key.first + "-" + to_char(key.second);
      g.ccf_type = 4;
      g.scope = RedundancyLevel::kSystem;
      g.trigger = key.first;
      g.failure_type = key.second;
      for (const UcaUifInstance* m : members) {
        g.members.push_back(m->id);
        if (std::find(g.origins.begin(), g.origins.end(), m->owner) == g.origins.end())
          g.origins.push_back(m->owner);
      }
      out.push_back(std::move(g));
    }
  }

  // (b) Type 2: upstream digital component feeding >= 2 digital dependents.
  {
    std::map<std::string, std::set<FailureMode>> types;
    for (const UcaUifInstance& inst : instances) types[inst.owner].insert(inst.type);
    std::map<std::pair<std::string, FailureMode>, std::size_t> by_key;
    for (const Component* c : index.components()) {
      auto t = types.find(c->id);
      if (c->tech != Tech::kDigital || t == types.end()) continue;
      std::vector<std::string> dependents = digital_dependents(index, c->id);
      std::erase_if(dependents, [&](const std::string& d) { return !in_tree(d); });
      if (dependents.size() < 2) continue;
      for (FailureMode mode : t->second) {
        auto key = std::make_pair(c->design_class, mode);
        auto it = by_key.find(key);
        if (it == by_key.end()) {
          CcfGroup g;
          g.id = std::string("CCF2-") + c->id + "-" + to_char(mode);
          g.ccf_type = 2;
          g.scope = RedundancyLevel::kDivision;
          g.trigger = c->id;
          g.failure_type = mode;
          it = by_key.emplace(key, out.size()).first;
          out.push_back(std::move(g));
        }
        CcfGroup& g = out[it->second];
        g.origins.push_back(c->id);
        for (const std::string& d : dependents)
          if (std::find(g.members.begin(), g.members.end(), d) == g.members.end())
            g.members.push_back(d);
      }
    }
  }

  // (c) Type 3: external shared resources.
  for (const SharedResource& r : model.shared_resources) {
    if (r.scope != ResourceScope::kExternal) continue;
    CcfGroup g;
    g.id = "CCF3-" + r.id;
    g.ccf_type = 3;
    g.trigger = r.id;
    for (const std::string& d : r.dependents)
      if (in_tree(d)) g.members.push_back(d);
    if (g.members.size() < 2) continue;
    g.scope = scope_of(index, g.members);
    out.push_back(std::move(g));
  }

  // (d) Type 1: a controller commanding several components with one action.
  for (const Component* c : index.components()) {
    std::set<std::string> targets = commanded_targets(*c);
    if (targets.size() < 2) continue;
    CcfGroup g;
    g.id = "CCF1-" + c->id;
    g.ccf_type = 1;
    g.trigger = c->id;
    g.origins = {c->id};
    for (const Link& l : c->links)
      if (l.kind == LinkKind::kControlAction)
        for (const std::string& t : l.targets)
          if (targets.count(t) && in_tree(t) &&
              std::find(g.members.begin(), g.members.end(), t) == g.members.end())
            g.members.push_back(t);
    if (g.members.size() < 2) continue;
    g.scope = scope_of(index, g.members);
    out.push_back(std::move(g));
  }

  for (CcfGroup& g : out) {
    int type = classify_ccf_type(g.trigger, model, g.ccf_type);
    if (type != g.ccf_type)
      throw CcfError("group '" + g.id + "' trigger classifies as Type " + std::to_string(type));
  }
  return out;
}

FaultTree inject_ccf_events(const FaultTree& ft, const std::vector<CcfGroup>& groups) {
  FaultTree out = ft;
  auto parents = ft.parents();
  for (const CcfGroup& g : groups) {
    std::vector<std::size_t> locations;
    for (const std::string& member : g.members) {
      std::optional<std::size_t> where;
      if (g.ccf_type == 4) {
        if (auto event = ft.find(member)) {
          auto p = parents.find(*event);
          if (p != parents.end())
            for (std::size_t gate : p->second)
              if (ft.node(gate).gate().role == GateRole::kSoftware) where = gate;
        }
      } else {
        where = ft.find(dependency_gate_id(member));
        if (!where) where = ft.find(fail_gate_id(member));
      }
      if (!where)
        throw CcfError("member location not found in tree: '" + member + "' of group '" + g.id +
                       "'");
      locations.push_back(*where);
    }
    std::string label = "Type " + std::to_string(g.ccf_type) + " software CCF triggered by " +
                        g.trigger;
    if (g.failure_type) label += std::string(" (type ") + to_char(*g.failure_type) + ")";
    std::size_t event = out.add_event(g.id, EventCategory::kCcf, std::move(label));
    for (std::size_t gate : locations) out.add_child(gate, event);
  }
  out.metadata.ccf_injected = true;
  return out;
}

}  // namespace resha
