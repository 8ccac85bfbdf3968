#include "doctest.h"
#include "resha/cut_sets.h"
#include "resha/pipeline.h"
#include "support.h"

using namespace resha;

namespace {

using Sets = std::vector<CutSet>;

Sets mcs(FaultTree ft, std::optional<int> k = {}) { return minimal_cut_sets(ft, k).sets; }

}  // namespace

TEST_SUITE("cutsets") {
  TEST_CASE("or of two events") {
    test::TreeBuilder b;
    FaultTree ft = b.root(b.gate("top", GateOp::kOr, {b.event("a"), b.event("b")}));
    CHECK(mcs(ft) == Sets{{"a"}, {"b"}});
    CHECK(brute_force_oracle(ft).sets == Sets{{"a"}, {"b"}});
  }

  TEST_CASE("absorption") {
    test::TreeBuilder b;
    std::size_t a = b.event("a");
    FaultTree ft =
        b.root(b.gate("top", GateOp::kOr, {a, b.gate("g", GateOp::kAnd, {a, b.event("b")})}));
    CHECK(mcs(ft) == Sets{{"a"}});
  }

  TEST_CASE("oracle worked examples") {
    {
      test::TreeBuilder b;
      FaultTree ft = b.root(b.gate(
          "top", GateOp::kOr,
          {b.event("a"), b.gate("g", GateOp::kAnd, {b.event("b"), b.event("c")})}));
      CHECK(brute_force_oracle(ft).sets == Sets{{"a"}, {"b", "c"}});
      CHECK(mcs(ft) == Sets{{"a"}, {"b", "c"}});
    }
    {
      test::TreeBuilder b;
      FaultTree ft = b.root(b.gate(
          "top", GateOp::kAnd,
          {b.event("a"), b.gate("g", GateOp::kOr, {b.event("b"), b.event("c")})}));
      CHECK(brute_force_oracle(ft).sets == Sets{{"a", "b"}, {"a", "c"}});
      CHECK(mcs(ft) == Sets{{"a", "b"}, {"a", "c"}});
    }
    {
      test::TreeBuilder b;
      FaultTree ft = b.root(b.gate("top", GateOp::kOr, {b.event("e")}));
      CHECK(brute_force_oracle(ft).sets == Sets{{"e"}});
    }
  }

  TEST_CASE("first-order split") {
    {
      test::TreeBuilder b;
      FaultTree ft = b.root(b.gate("top", GateOp::kAnd, {b.event("a"), b.event("b")}));
      FirstOrderCutSets f = first_order_cut_sets(minimal_cut_sets(ft));
      CHECK(f.hardware.empty());
      CHECK(f.software.empty());
    }
    {
      test::TreeBuilder b;
      FaultTree ft = b.root(b.gate("top", GateOp::kOr, {b.event("e"),
                                                        b.event("s", EventCategory::kSwUif)}));
      FirstOrderCutSets f = first_order_cut_sets(minimal_cut_sets(ft));
      CHECK(f.hardware == std::vector<std::string>{"e"});
      CHECK(f.software == std::vector<std::string>{"s"});
    }
  }

  TEST_CASE("empty gates are false") {
    test::TreeBuilder b;
    std::size_t empty_or = b.gate("sw", GateOp::kOr, {});
    FaultTree ft = b.root(b.gate("top", GateOp::kOr, {b.event("a"), empty_or}));
    CHECK(mcs(ft) == Sets{{"a"}});
    CHECK(brute_force_oracle(ft).sets == Sets{{"a"}});
  }

  TEST_CASE("events ordered by category then id") {
    test::TreeBuilder b;
    FaultTree ft = b.root(b.gate("top", GateOp::kAnd,
                                 {b.event("z"), b.event("a", EventCategory::kCcf),
                                  b.event("m", EventCategory::kSwUca)}));
    CHECK(mcs(ft) == Sets{{"z", "m", "a"}});
  }

  TEST_CASE("truncation keeps exactly the low-order sets") {
    test::TreeBuilder b;
    FaultTree ft = b.root(b.gate(
        "top", GateOp::kOr,
        {b.event("a"), b.gate("g", GateOp::kAnd, {b.event("b"), b.event("c")}),
         b.gate("h", GateOp::kAnd, {b.event("d"), b.event("e"), b.event("f")})}));
    CHECK(mcs(ft, 1) == Sets{{"a"}});
    CHECK(mcs(ft, 2) == Sets{{"a"}, {"b", "c"}});
    CutSetCollection c = minimal_cut_sets(ft, 2);
    CHECK(c.truncation_order == 2);
    CHECK(c.order_index == std::map<int, int>{{1, 1}, {2, 1}});
  }

  TEST_CASE("oracle refuses large trees") {
    test::TreeBuilder b;
    std::vector<std::size_t> events;
    for (int i = 0; i <= kOracleMaxEvents; ++i) events.push_back(b.event("e" + std::to_string(i)));
    FaultTree ft = b.root(b.gate("top", GateOp::kOr, events));
    CHECK_THROWS_AS(brute_force_oracle(ft), OracleLimitError);
    CHECK(mcs(ft).size() == events.size());
  }

  TEST_CASE("bundled first-order software cut sets") {
    Analysis a = analyze(test::bundled_model());
    FirstOrderCutSets f = first_order_cut_sets(a.cut_sets);
    CHECK(f.software.size() == 43);
    CHECK(f.hardware == std::vector<std::string>{"HW-terminal"});
    for (const std::string& e : f.software) CHECK(a.cut_sets.categories.at(e) == EventCategory::kCcf);
    for (const char* id : {"CCF4-hjtc_ctrl_sw-F", "CCF4-hjtc_calc_sw-A", "CCF4-cet_calc_sw-A",
                           "CCF4-rvl_calc_sw-A", "CCF4-rcsm_calc_sw-A"})
      CHECK(std::find(f.software.begin(), f.software.end(), id) != f.software.end());
    CutSetCollection first = minimal_cut_sets(a.tree, 1);
    CHECK(first.sets.size() == 44);
  }
}
