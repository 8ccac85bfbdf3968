// Shared fixtures and random generators for the test binaries.

#pragma once

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "resha/dsl.h"
#include "resha/fault_tree.h"
#include "resha/model.h"

namespace resha::test {

inline std::string bundled_model_path() { return RESHA_SOURCE_DIR "/casestudy/qiasp.resha"; }
inline std::string bundled_golden_path() { return RESHA_SOURCE_DIR "/casestudy/qiasp.golden.json"; }

inline const SystemModel& bundled_model() {
  static const SystemModel model = load_model(bundled_model_path());
  return model;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small hand-built trees: build("or", {...}) style.
class TreeBuilder {
 public:
  std::size_t event(const std::string& id,
                    EventCategory category = EventCategory::kHwStochastic) {
    if (auto i = ft.find(id)) return *i;
    return ft.add_event(id, category, id);
  }
  std::size_t gate(const std::string& id, GateOp op, std::vector<std::size_t> children) {
    std::size_t g = ft.add_gate(id, op, GateRole::kGeneric, id);
    for (std::size_t c : children) ft.add_child(g, c);
    return g;
  }
  FaultTree root(std::size_t r) {
    ft.set_root(r);
    return ft;
  }
  FaultTree ft;
};

// Random monotone DAG over at most `max_events` events. Gates draw children
// from everything built before them, so subtrees get shared.
inline FaultTree random_tree(std::mt19937& rng, int max_events) {
  std::uniform_int_distribution<int> n_events(1, max_events);
  std::uniform_int_distribution<int> n_gates(1, 10);
  std::uniform_int_distribution<int> fan(1, 4);
  std::bernoulli_distribution is_and(0.4);
  FaultTree ft;
  std::vector<std::size_t> pool;
  int events = n_events(rng);
  for (int i = 0; i < events; ++i) {
    auto cat = static_cast<EventCategory>(i % 6);
    pool.push_back(ft.add_event("e" + std::to_string(i), cat, "event " + std::to_string(i)));
  }
  int gates = n_gates(rng);
  std::size_t last = pool.front();
  for (int g = 0; g < gates; ++g) {
    GateOp op = is_and(rng) ? GateOp::kAnd : GateOp::kOr;
    last = ft.add_gate("g" + std::to_string(g), op, GateRole::kGeneric, "gate");
    int k = fan(rng);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int c = 0; c < k; ++c) ft.add_child(last, pool[pick(rng)]);
    pool.push_back(last);
  }
  // The root reaches most events so the oracle has work to do.
  std::size_t root = ft.add_gate("root", is_and(rng) ? GateOp::kAnd : GateOp::kOr,
                                 GateRole::kTop, "root");
  ft.add_child(root, last);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int c = fan(rng); c > 1; --c) ft.add_child(root, pool[pick(rng)]);
  ft.set_root(root);
  return ft;
}

inline std::string random_text(std::mt19937& rng) {
  static const std::vector<std::string> words = {
      "sensor", "loss of", "a \"quoted\" word", "back\\slash", "multi\nline", "signal",
      "trip", "value", "#hash", "end", "component"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::string out = words[pick(rng)];
  for (int i = std::uniform_int_distribution<int>(0, 2)(rng); i > 0; --i)
    out += " " + words[pick(rng)];
  return out;
}

struct ModelShape {
  int max_components = 6;
  int max_divisions = 3;
};

// Random model that passes validate_model. Divisions are either replicas of
// the first division or independently wired copies with their own classes.
inline SystemModel random_model(std::mt19937& rng, ModelShape shape = {}) {
  auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  SystemModel m;
  m.name = random_text(rng);
  m.top_event = random_text(rng);
  int losses = uniform(1, 4);
  for (int i = 1; i <= losses; ++i)
    m.losses.push_back({"L-" + std::to_string(i), random_text(rng), {}});
  int hazards = uniform(1, 4);
  for (int i = 1; i <= hazards; ++i) {
    Hazard h{"H-" + std::to_string(i), random_text(rng), {}, {}};
    std::set<int> linked;
    for (int k = uniform(1, losses); k > 0; --k) linked.insert(uniform(1, losses));
    for (int l : linked) h.linked_losses.push_back("L-" + std::to_string(l));
    m.hazards.push_back(std::move(h));
  }
  int classes = uniform(2, 6);
  for (int i = 0; i < classes; ++i) {
    DesignClass dc{"dc" + std::to_string(i), random_text(rng), {}, {}};
    if (coin(0.5)) dc.diversity_tag = "tag" + std::to_string(uniform(0, 2));
    m.design_classes.push_back(dc);
  }
  m.design_classes.push_back({"human", "operator", {}, {}});

  auto random_applicability = [&]() {
    std::vector<Applicability> out;
    for (FailureMode mode : kAllFailureModes) {
      if (!coin(0.3)) continue;
      Applicability a{mode, {}, {}};
      std::set<int> hs;
      for (int k = uniform(1, hazards); k > 0; --k) hs.insert(uniform(1, hazards));
      for (int h : hs) a.hazards.push_back("H-" + std::to_string(h));
      out.push_back(std::move(a));
    }
    return out;
  };

  static const std::vector<ComponentKind> kinds = {
      ComponentKind::kController, ComponentKind::kSensor,      ComponentKind::kCalculator,
      ComponentKind::kAlarm,      ComponentKind::kConverter,   ComponentKind::kConditioner,
      ComponentKind::kPowerSupply, ComponentKind::kComms,      ComponentKind::kDisplay,
      ComponentKind::kTestPanel};

  int n_divisions = uniform(1, shape.max_divisions);
  int n_components = uniform(1, shape.max_components);
  std::vector<std::string> division_ids;
  std::vector<std::string> division_tails;
  std::vector<std::string> all_components;
  std::size_t first_division_tails = 0;
  for (int d = 0; d < n_divisions; ++d) {
    std::string div(1, static_cast<char>('A' + d));
    division_ids.push_back(div);
    Division division{div, {}, {}, {}};
    if (d > 0 && coin(0.5)) {
      division.replicates = "A";
      m.divisions.push_back(division);
      for (std::size_t i = 0; i < first_division_tails; ++i)
        division_tails.push_back(division_tails[i] + "_" + div);
      continue;
    }
    std::string prefix = std::string(1, static_cast<char>('a' + d)) + "_c";
    bool diverse = coin(0.5);
    for (int i = 0; i < n_components; ++i) {
      Component c;
      c.id = prefix + std::to_string(i);
      c.kind = kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
      c.tech = coin(0.6) ? Tech::kDigital : Tech::kAnalog;
      int cls = diverse ? uniform(0, classes - 1) : i % classes;
      c.design_class = "dc" + std::to_string(cls);
      for (int j = 0; j < i; ++j)
        if (coin(0.35)) c.inputs.push_back(prefix + std::to_string(j));
      if (i > 0 && coin(0.2)) c.feedback_inputs.push_back(prefix + std::to_string(i - 1));
      division.components.push_back(std::move(c));
    }
    // Links point forward (or at the operator) so the graph stays acyclic.
    int link_no = 0;
    for (int i = 0; i < n_components; ++i) {
      Component& c = division.components[i];
      int n_links = coin(0.5) ? uniform(1, 2) : 0;
      for (int k = 0; k < n_links; ++k) {
        Link l;
        l.id = prefix + "l" + std::to_string(link_no++);
        l.kind = c.kind == ComponentKind::kController && coin(0.6) ? LinkKind::kControlAction
                                                                   : LinkKind::kInformationFlow;
        if (coin(0.2)) l.port = "p" + std::to_string(k);
        for (int j = i + 1; j < n_components; ++j)
          if (coin(0.4)) l.targets.push_back(prefix + std::to_string(j));
        if (l.targets.empty()) l.targets.push_back("operator");
        if (c.tech == Tech::kDigital) l.applicability = random_applicability();
        // Consumers sometimes name the link instead of its source.
        for (const std::string& t : l.targets)
          for (Component& target : division.components)
            if (target.id == t && coin(0.3)) target.inputs.push_back(l.id);
        c.links.push_back(std::move(l));
      }
    }
    // Every sink feeds the operator so the whole division reaches the top event.
    std::set<std::string> consumed;
    for (const Component& c : division.components) {
      for (const std::string& in : c.inputs) consumed.insert(in);
      for (const Link& l : c.links)
        if (l.targets != std::vector<std::string>{"operator"}) consumed.insert(c.id);
    }
    for (const Component& c : division.components) {
      bool sink = !consumed.count(c.id);
      for (const Link& l : c.links) sink = sink && !consumed.count(l.id);
      if (sink) division_tails.push_back(c.id);
    }
    for (const Component& c : division.components) all_components.push_back(c.id);
    m.divisions.push_back(std::move(division));
    if (d == 0) first_division_tails = division_tails.size();
  }

  Component op;
  op.id = "operator";
  op.kind = ComponentKind::kOperator;
  op.tech = Tech::kHuman;
  op.design_class = "human";
  op.inputs = division_tails;
  m.shared_components.push_back(op);

  if (n_divisions >= 2 && coin(0.6)) {
    RedundancyGroup g{"rg", RedundancyLevel::kSystem, division_ids,
                      coin(0.5) ? GroupLogic::kAllMustFail : GroupLogic::kAnyMisleads, {}};
    m.redundancy_groups.push_back(g);
  }
  if (all_components.size() >= 2 && coin(0.5)) {
    SharedResource r{"bus", coin(0.5) ? ResourceScope::kExternal : ResourceScope::kInternal, {}, {}};
    std::set<std::string> deps;
    while (deps.size() < 2)
      deps.insert(all_components[std::uniform_int_distribution<std::size_t>(
          0, all_components.size() - 1)(rng)]);
    r.dependents.assign(deps.begin(), deps.end());
    m.shared_resources.push_back(r);
  }
  return m;
}

}  // namespace resha::test
