#include <algorithm>

#include "doctest.h"
#include "resha/ccf.h"
#include "resha/cut_sets.h"
#include "support.h"

using namespace resha;

namespace {

struct Staged {
  SystemModel model;
  std::vector<UcaUifInstance> instances;
  FaultTree integrated;
  std::vector<CcfGroup> groups;
};

Staged stage(const SystemModel& raw) {
  Staged s;
  s.model = expand_replication(raw);
  s.instances = apply_applicability(
      enumerate_candidates(extract_control_structure(s.model), s.model), s.model);
  s.integrated = integrate_software(synthesize_hardware_ft(s.model), s.instances);
  s.groups = detect_ccf_groups(s.integrated, s.model, s.instances);
  return s;
}

const Staged& bundled() {
  static const Staged s = stage(test::bundled_model());
  return s;
}

const CcfGroup& group(const std::vector<CcfGroup>& groups, const std::string& id) {
  auto it = std::find_if(groups.begin(), groups.end(), [&](const CcfGroup& g) { return g.id == id; });
  REQUIRE(it != groups.end());
  return *it;
}

std::vector<std::string> parents_of(const FaultTree& ft, const std::string& id) {
  std::vector<std::string> out;
  std::size_t target = *ft.find(id);
  for (const Node& n : ft.nodes())
    if (n.is_gate())
      for (std::size_t c : n.gate().children)
        if (c == target) out.push_back(n.id);
  std::sort(out.begin(), out.end());
  return out;
}

int count_type(const std::vector<CcfGroup>& groups, int type) {
  return static_cast<int>(
      std::count_if(groups.begin(), groups.end(), [&](const CcfGroup& g) { return g.ccf_type == type; }));
}

}  // namespace

TEST_SUITE("ccf") {
  TEST_CASE("bundled Type 4 groups decompose 3 + 15 + 10") {
    const Staged& s = bundled();
    CHECK(count_type(s.groups, 4) == 28);
    ModelIndex index(s.model);
    int ctrl = 0, calc = 0, alarm = 0;
    for (const CcfGroup& g : s.groups) {
      if (g.ccf_type != 4) continue;
      CHECK(g.scope == RedundancyLevel::kSystem);
      CHECK(g.members.size() == 2);
      ComponentKind k = index.component(g.origins.front())->kind;
      if (k == ComponentKind::kController) ++ctrl;
      else if (k == ComponentKind::kCalculator) ++calc;
      else if (k == ComponentKind::kAlarm) ++alarm;
    }
    CHECK(ctrl == 3);
    CHECK(calc == 15);
    CHECK(alarm == 10);
    const CcfGroup& g = group(s.groups, "CCF4-hjtc_ctrl_sw-F");
    CHECK(g.members == std::vector<std::string>{"hjtc_ref/F/A", "hjtc_ref_B/F/B"});
    CHECK(g.failure_type == FailureMode::F);
  }

  TEST_CASE("bundled Type 2 groups decompose 3 + 12 without the ICC calculator") {
    const Staged& s = bundled();
    CHECK(count_type(s.groups, 2) == 15);
    CHECK(count_type(s.groups, 1) == 0);
    CHECK(count_type(s.groups, 3) == 0);
    std::set<std::string> triggers;
    for (const CcfGroup& g : s.groups)
      if (g.ccf_type == 2) triggers.insert(g.trigger);
    CHECK(triggers == std::set<std::string>{"cet_calc", "hjtc_calc", "hjtc_ctrl", "rcsm_calc",
                                            "rvl_calc"});
    ModelIndex index(s.model);
    CHECK(digital_dependents(index, "hjtc_ctrl").size() == 8);
    CHECK(digital_dependents(index, "icc_calc").size() == 1);
    const CcfGroup& cet = group(s.groups, "CCF2-cet_calc-A");
    CHECK(cet.members ==
          std::vector<std::string>{"cet_alarm", "icc_alarm", "cet_alarm_B", "icc_alarm_B"});
    CHECK(cet.scope == RedundancyLevel::kDivision);
  }

  TEST_CASE("diverse divisions yield no Type 4 or Type 3 groups") {
    SystemModel m = test::bundled_model();
    m = expand_replication(m);
    for (Component& c : m.divisions[1].components) {
      m.design_classes.push_back({c.design_class + "_b", "diverse", "other", {}});
      c.design_class += "_b";
    }
    REQUIRE(validate_model(m).ok());
    Staged s = stage(m);
    CHECK(count_type(s.groups, 4) == 0);
    CHECK(count_type(s.groups, 3) == 0);
    CHECK(count_type(s.groups, 2) == 30);
  }

  TEST_CASE("classification") {
    SystemModel m = expand_replication(test::bundled_model());
    CHECK(classify_ccf_type("hjtc_calc_sw", m) == 4);
    CHECK(classify_ccf_type("hjtc_ctrl", m) == 2);
    CHECK_THROWS_AS(classify_ccf_type("psu", m), CcfError);
    CHECK_THROWS_AS(classify_ccf_type("no_such_thing", m), CcfError);

    m.shared_resources.push_back({"power_bus", ResourceScope::kExternal, {"psu", "psu_B"}, {}});
    CHECK(classify_ccf_type("power_bus", m) == 3);
    m.shared_resources.back().scope = ResourceScope::kInternal;
    CHECK(classify_ccf_type("power_bus", m) == 2);
  }

  TEST_CASE("ambiguous triggers need a hint") {
    SystemModel m = expand_replication(test::bundled_model());
    // A controller commanding two targets is both Type 1 and Type 2.
    Component& ctrl = m.divisions[0].components[0];
    REQUIRE(ctrl.id == "hjtc_ctrl");
    ctrl.links[0].targets.push_back("adc_hjtc");
    CHECK_THROWS_WITH_AS(classify_ccf_type("hjtc_ctrl", m), doctest::Contains("ambiguous"),
                         CcfError);
    CHECK(classify_ccf_type("hjtc_ctrl", m, 1) == 1);
    CHECK(classify_ccf_type("hjtc_ctrl", m, 2) == 2);
  }

  TEST_CASE("Type 1 and Type 3 detection") {
    SystemModel m = expand_replication(test::bundled_model());
    m.divisions[0].components[0].links[0].targets.push_back("adc_hjtc");
    m.shared_resources.push_back({"grid", ResourceScope::kExternal, {"psu", "psu_B"}, {}});
    REQUIRE(validate_model(m).ok());
    Staged s = stage(m);
    CHECK(count_type(s.groups, 1) == 1);
    CHECK(count_type(s.groups, 3) == 1);
    const CcfGroup& t1 = group(s.groups, "CCF1-hjtc_ctrl");
    CHECK(t1.members == std::vector<std::string>{"hjtc_sensors", "adc_hjtc"});
    const CcfGroup& t3 = group(s.groups, "CCF3-grid");
    CHECK(t3.scope == RedundancyLevel::kSystem);
    FaultTree ft = inject_ccf_events(s.integrated, s.groups);
    // psu has no inputs, so the event lands in its component gate.
    CHECK(parents_of(ft, "CCF3-grid") == std::vector<std::string>{"G-psu", "G-psu_B"});
  }

  TEST_CASE("Type 4 injection shares one event across divisions") {
    const Staged& s = bundled();
    FaultTree ft = inject_ccf_events(s.integrated, s.groups);
    CHECK(ft.metadata.ccf_injected);
    CHECK(parents_of(ft, "CCF4-hjtc_ctrl_sw-F") ==
          std::vector<std::string>{"SW-hjtc_ctrl", "SW-hjtc_ctrl_B"});
    CHECK(ft.node(*ft.find("CCF4-hjtc_ctrl_sw-F")).event().category == EventCategory::kCcf);
  }

  TEST_CASE("Type 2 injection reaches every dependent") {
    const Staged& s = bundled();
    FaultTree ft = inject_ccf_events(s.integrated, s.groups);
    CHECK(parents_of(ft, "CCF2-cet_calc-A") ==
          std::vector<std::string>{"DEP-cet_alarm", "DEP-cet_alarm_B", "DEP-icc_alarm",
                                   "DEP-icc_alarm_B"});
  }

  TEST_CASE("empty group list leaves the tree unchanged") {
    const Staged& s = bundled();
    FaultTree ft = inject_ccf_events(s.integrated, {});
    ft.metadata.ccf_injected = s.integrated.metadata.ccf_injected;
    CHECK(ft == s.integrated);
  }

  TEST_CASE("member missing from the tree") {
    const Staged& s = bundled();
    CcfGroup g{"CCF4-x-A", 4, RedundancyLevel::kSystem, "x", {"nope/A/A"}, FailureMode::A, {}};
    CHECK_THROWS_WITH_AS(inject_ccf_events(s.integrated, {g}),
                         doctest::Contains("member location not found in tree"), CcfError);
  }

  TEST_CASE("new minimal cut sets all contain a CCF event") {
    const Staged& s = bundled();
    CutSetCollection before = minimal_cut_sets(s.integrated, 2);
    CutSetCollection after = minimal_cut_sets(inject_ccf_events(s.integrated, s.groups), 2);
    std::set<CutSet> old(before.sets.begin(), before.sets.end());
    for (const CutSet& c : after.sets) {
      if (old.count(c)) continue;
      bool has_ccf = std::any_of(c.begin(), c.end(), [&](const std::string& e) {
        return after.categories.at(e) == EventCategory::kCcf;
      });
      CHECK(has_ccf);
    }
    for (const CutSet& c : before.sets)
      CHECK(std::find(after.sets.begin(), after.sets.end(), c) != after.sets.end());
  }

  TEST_CASE("members that never reach the top event are skipped") {
    SystemModel m = expand_replication(test::bundled_model());
    Component spare = m.divisions[0].components.back();
    spare.id = "spare_display";
    spare.inputs = {"psu"};
    m.divisions[0].components.push_back(spare);
    m.shared_resources.push_back({"grid", ResourceScope::kExternal, {"psu", "spare_display"}, {}});
    REQUIRE(validate_model(m).ok());
    Staged s = stage(m);
    CHECK(count_type(s.groups, 3) == 0);
    CHECK_NOTHROW(inject_ccf_events(s.integrated, s.groups));
  }
}
