/// @file stpa.cc

#include "resha/stpa.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace resha {

std::string_view to_string(Flavor flavor) { return flavor == Flavor::kUca ? "UCA" : "UIF"; }

bool ControlStructure::contains(std::string_view component) const {
  return std::any_of(nodes.begin(), nodes.end(),
                     [&](const ControlNode& n) { return n.component == component; });
}

std::string instance_id(std::string_view link, FailureMode type, std::string_view division) {
  std::string id(link);
  id += '/';
  id += to_char(type);
  id += '/';
  id += division.empty() ? std::string_view("shared") : division;
  return id;
}

ControlStructure extract_control_structure(const SystemModel& model) {
  ModelIndex index(model);
  ControlStructure cs;
  for (const Component* c : index.components()) {
    bool source = !c->links.empty();
    if (!source && c->kind != ComponentKind::kOperator) continue;
    ControlNode node{c->id, index.division_of(c->id), {}};
    const std::string& division = node.division;
    for (const RedundancyGroup& g : model.redundancy_groups) {
      bool member = std::any_of(g.members.begin(), g.members.end(), [&](const std::string& m) {
        return m == c->id || (!division.empty() && m == division);
      });
      if (member && std::find(node.redundancy.begin(), node.redundancy.end(), g.level) ==
                        node.redundancy.end())
        node.redundancy.push_back(g.level);
    }
    cs.nodes.push_back(std::move(node));
    for (const Link& l : c->links) {
      cs.links.push_back(l.id);
      auto& edges = l.kind == LinkKind::kControlAction ? cs.control_edges : cs.info_edges;
      for (const std::string& t : l.targets) edges.push_back({l.id, c->id, t});
    }
  }
  return cs;
}

std::vector<UcaUifInstance> enumerate_candidates(const ControlStructure& cs,
                                                 const SystemModel& model) {
  ModelIndex index(model);
  std::vector<UcaUifInstance> out;
  out.reserve(cs.links.size() * 7);
  for (const std::string& link_id : cs.links) {
    const Link* link = index.link(link_id);
    const Component* owner = index.link_owner(link_id);
    if (!link || !owner) continue;
    const std::string& division = index.division_of(owner->id);
    for (FailureMode mode : kAllFailureModes) {
      UcaUifInstance inst;
      inst.id = instance_id(link_id, mode, division);
      inst.flavor = link->kind == LinkKind::kControlAction ? Flavor::kUca : Flavor::kUif;
      inst.type = mode;
      inst.owner = owner->id;
      inst.link = link_id;
      inst.division = division;
      inst.stpa_category = stpa_category(mode);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

std::vector<UcaUifInstance> apply_applicability(const std::vector<UcaUifInstance>& candidates,
                                                const SystemModel& model) {
  ModelIndex index(model);
  std::vector<UcaUifInstance> out;
  for (const UcaUifInstance& candidate : candidates) {
    const Link* link = index.link(candidate.link);
    if (!link) continue;
    auto it = std::find_if(link->applicability.begin(), link->applicability.end(),
                           [&](const Applicability& a) { return a.mode == candidate.type; });
    if (it == link->applicability.end()) continue;
    if (it->hazards.empty())
      throw ModelError(std::string("applicable instance lacks hazard link: ") + candidate.id,
                       it->span);
    UcaUifInstance inst = candidate;
    inst.hazards = it->hazards;
    out.push_back(std::move(inst));
  }
  std::sort(out.begin(), out.end(), [](const UcaUifInstance& a, const UcaUifInstance& b) {
    return std::tie(a.division, a.owner, a.type, a.link) <
           std::tie(b.division, b.owner, b.type, b.link);
  });
  return out;
}

std::vector<std::string> traced_losses(const UcaUifInstance& instance, const SystemModel& model) {
  std::set<std::string> losses;
  for (const std::string& h : instance.hazards)
    for (const Hazard& hazard : model.hazards)
      if (hazard.id == h) losses.insert(hazard.linked_losses.begin(), hazard.linked_losses.end());
  return {losses.begin(), losses.end()};
}

}  // namespace resha
