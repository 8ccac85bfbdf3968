// Randomized invariants. Seeds are fixed so failures reproduce.

#include <algorithm>

#include "doctest.h"
#include "resha/ccf.h"
#include "resha/cut_sets.h"
#include "resha/pipeline.h"
#include "support.h"

using namespace resha;

namespace {

FaultTree integrated_tree(const SystemModel& m) {
  std::vector<UcaUifInstance> inst =
      apply_applicability(enumerate_candidates(extract_control_structure(m), m), m);
  return integrate_software(synthesize_hardware_ft(m), inst);
}

// Flips events on one at a time from random starting states; a monotone
// tree never goes from failed back to working.
int monotonicity_violations(const FaultTree& ft, std::mt19937& rng, int samples) {
  std::vector<std::size_t> events;
  for (std::size_t i : ft.bottom_up_order())
    if (!ft.node(i).is_gate()) events.push_back(i);
  int violations = 0;
  std::vector<char> state(ft.nodes().size(), 0);
  for (int s = 0; s < samples; ++s) {
    double p = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    for (std::size_t e : events) state[e] = std::bernoulli_distribution(p)(rng);
    bool before = ft.evaluate(state);
    for (std::size_t e : events) {
      if (state[e]) continue;
      state[e] = 1;
      if (before && !ft.evaluate(state)) ++violations;
      state[e] = 0;
    }
  }
  return violations;
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("minimal cut sets equal the brute-force oracle") {
    std::mt19937 rng(20240611);
    for (int i = 0; i < 150; ++i) {
      FaultTree ft = test::random_tree(rng, 16);
      CutSetCollection oracle = brute_force_oracle(ft);
      CutSetCollection fast = minimal_cut_sets(ft);
      CHECK(fast.sets == oracle.sets);
    }
  }

  TEST_CASE("truncation is sound") {
    std::mt19937 rng(99);
    for (int i = 0; i < 100; ++i) {
      FaultTree ft = test::random_tree(rng, 14);
      CutSetCollection full = brute_force_oracle(ft);
      int k = std::uniform_int_distribution<int>(1, 4)(rng);
      std::vector<CutSet> expected;
      for (const CutSet& s : full.sets)
        if (static_cast<int>(s.size()) <= k) expected.push_back(s);
      CHECK(minimal_cut_sets(ft, k).sets == expected);
    }
  }

  TEST_CASE("every minimal cut set fails the top event and is minimal") {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
      FaultTree ft = test::random_tree(rng, 20);
      for (const CutSet& s : minimal_cut_sets(ft).sets) {
        std::set<std::string> failed(s.begin(), s.end());
        CHECK(ft.evaluate(failed));
        for (const std::string& e : s) {
          std::set<std::string> smaller = failed;
          smaller.erase(e);
          CHECK_FALSE(ft.evaluate(smaller));
        }
      }
    }
  }

  TEST_CASE("CCF injection is additive") {
    std::mt19937 rng(424242);
    int with_groups = 0;
    for (int i = 0; i < 60; ++i) {
      SystemModel m = expand_replication(test::random_model(rng, {5, 3}));
      REQUIRE(validate_model(m).ok());
      std::vector<UcaUifInstance> inst =
          apply_applicability(enumerate_candidates(extract_control_structure(m), m), m);
      FaultTree pre = integrate_software(synthesize_hardware_ft(m), inst);
      std::vector<CcfGroup> groups = detect_ccf_groups(pre, m, inst);
      with_groups += !groups.empty();
      FaultTree post = inject_ccf_events(pre, groups);
      CutSetCollection before = minimal_cut_sets(pre, 3);
      CutSetCollection after = minimal_cut_sets(post, 3);
      std::set<CutSet> after_sets(after.sets.begin(), after.sets.end());
      for (const CutSet& s : before.sets) CHECK(after_sets.count(s) == 1);
      for (const CutSet& s : after.sets) {
        if (std::find(before.sets.begin(), before.sets.end(), s) != before.sets.end()) continue;
        CHECK(std::any_of(s.begin(), s.end(), [&](const std::string& e) {
          return after.categories.at(e) == EventCategory::kCcf;
        }));
      }
    }
    CHECK(with_groups >= 20);
  }

  TEST_CASE("trees are monotone") {
    std::mt19937 rng(77);
    int violations = 0;
    for (int i = 0; i < 10; ++i)
      violations += monotonicity_violations(test::random_tree(rng, 16), rng, 1000);
    for (int i = 0; i < 5; ++i) {
      SystemModel m = expand_replication(test::random_model(rng));
      violations += monotonicity_violations(integrated_tree(m), rng, 1000);
    }
    Analysis a = analyze(test::bundled_model());
    violations += monotonicity_violations(a.hardware_tree, rng, 1000);
    violations += monotonicity_violations(a.tree, rng, 1000);
    CHECK(violations == 0);
  }

  TEST_CASE("serialize then parse is a fixed point") {
    std::mt19937 rng(2718);
    int mismatches = 0;
    for (int i = 0; i < 250; ++i) {
      SystemModel m = test::random_model(rng);
      std::string text = serialize_model(m);
      SystemModel back = parse_model(text);
      if (!(back == m) || serialize_model(back) != text) {
        ++mismatches;
        INFO(text);
        CHECK(back == m);
      }
    }
    CHECK(mismatches == 0);
  }

  TEST_CASE("tree JSON round trips") {
    std::mt19937 rng(31);
    for (int i = 0; i < 50; ++i) {
      FaultTree ft = test::random_tree(rng, 16);
      CHECK(import_ft(export_ft(ft)) == ft);
    }
  }

  TEST_CASE("the pipeline runs on random models") {
    std::mt19937 rng(8);
    for (int i = 0; i < 50; ++i) {
      SystemModel m = test::random_model(rng);
      Analysis a;
      REQUIRE_NOTHROW(a = analyze(m));
      int digital = 0;
      for (std::size_t n : a.hardware_tree.bottom_up_order()) {
        const Node& node = a.hardware_tree.node(n);
        if (node.is_gate() && node.gate().role == GateRole::kComponent) {
          ModelIndex index(a.model);
          digital += index.component(node.gate().component)->tech == Tech::kDigital;
        }
      }
      CHECK(branch_census(a.hardware_tree).sw_design_branches == digital);
    }
  }
}
