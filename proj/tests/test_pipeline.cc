#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "resha/pipeline.h"
#include "support.h"

using namespace resha;
using nlohmann::json;

TEST_SUITE("casestudy") {
  TEST_CASE("shipped model matches shipped golden") {
    GoldenReport r = verify_golden(test::bundled_model_path(), test::bundled_golden_path());
    for (const FieldDiff& d : r.diffs) INFO(d.field << ": " << d.expected << " vs " << d.actual);
    CHECK(r.pass());
  }

  TEST_CASE("altered census is reported on its field") {
    json golden = json::parse(test::slurp(test::bundled_golden_path()));
    golden["census"]["hw_stochastic_events"] = 42;
    GoldenReport r = verify_golden(test::bundled_model(), golden.dump());
    REQUIRE(r.diffs.size() == 1);
    CHECK(r.diffs[0].field == "census.hw_stochastic_events");
    CHECK(r.diffs[0].expected == "42");
    CHECK(r.diffs[0].actual == "41");
  }

  TEST_CASE("removing the replica drops Type 4 to zero") {
    SystemModel m = test::bundled_model();
    m.divisions.pop_back();
    m.redundancy_groups.clear();
    m.shared_components[0].inputs = {"display"};
    REQUIRE(validate_model(m).ok());
    GoldenReport r = verify_golden(m, test::slurp(test::bundled_golden_path()));
    CHECK_FALSE(r.pass());
    bool type4 = false;
    for (const FieldDiff& d : r.diffs)
      if (d.field == "ccf.type4") type4 = d.actual == "0";
    CHECK(type4);
  }

  TEST_CASE("invalid golden document and invalid model") {
    CHECK_FALSE(verify_golden(test::bundled_model(), "{").pass());
    SystemModel m = test::bundled_model();
    m.hazards[0].linked_losses.push_back("L-99");
    GoldenReport r = verify_golden(m, "{}");
    REQUIRE(r.diffs.size() == 1);
    CHECK(r.diffs[0].field == "validation");
  }

  TEST_CASE("analyze rejects invalid models") {
    SystemModel m = test::bundled_model();
    m.hazards[0].linked_losses.push_back("L-99");
    CHECK_THROWS_AS(analyze(m), ValidationFailed);
  }

  TEST_CASE("summary counts") {
    Analysis a = analyze(test::bundled_model());
    SummaryCounts s = summary_counts(a);
    CHECK(s.divisions == 2);
    CHECK(s.components == 42);
    CHECK(s.candidates == 154);
    CHECK(s.ucas == 6);
    CHECK(s.uifs == 50);
    CHECK(s.ccf_by_type[4] == 28);
    CHECK(s.ccf_by_type[2] == 15);
    CHECK(s.first_order_software == 43);
  }

  TEST_CASE("artifacts are written and deterministic") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "resha_pipeline_test";
    fs::remove_all(dir);
    Analysis a = analyze(test::bundled_model());
    write_artifacts(a, dir / "one");
    write_artifacts(analyze(test::bundled_model()), dir / "two");
    for (const std::string& f : kArtifactFiles) {
      REQUIRE(fs::exists(dir / "one" / f));
      CHECK(test::slurp((dir / "one" / f).string()) == test::slurp((dir / "two" / f).string()));
    }
    fs::remove_all(dir);
  }
}
