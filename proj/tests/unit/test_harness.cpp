#include <filesystem>

#include "doctest.h"
#include "efk/error.hpp"
#include "efk/harness.hpp"

using namespace efk;

namespace {

Scorecard sample_card() {
  Scorecard c;
  c.entries.push_back({"bounds", "a", true, true, 2, 0.5, 1.0, 0.1, ""});
  c.entries.push_back({"bounds", "b", true, true, 2, 1e-8, 1e-6, 0.1, ""});
  c.entries.push_back({"gamma", "c", false, false, 0, std::nan(""), 0.0, 0.0, "recorded"});
  return c;
}

}  // namespace

TEST_CASE("suite names") {
  for (Suite s : all_suites()) CHECK(suite_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(suite_from_string("nope"), Error);
  CHECK(coverage_complete());
  CHECK(coverage_manifest().size() == 18);
}

TEST_CASE("scorecard verdict ignores recorded entries") {
  Scorecard c = sample_card();
  CHECK(c.passed());
  c.entries[1].passed = false;
  CHECK_FALSE(c.passed());
}

TEST_CASE("scorecard json and diff") {
  const Scorecard a = sample_card();
  const Scorecard back = scorecard_from_json(to_json(a));
  REQUIRE(back.entries.size() == 3);
  CHECK(std::isnan(back.entries[2].measured));
  CHECK(to_json(back) == to_json(a));
  CHECK(scorecard_diff(a, back).empty());

  Scorecard b = a;
  b.entries[0].measured = 0.75;
  b.entries[1].passed = false;
  const DiffReport d = scorecard_diff(a, b);
  REQUIRE(d.changed.size() == 2);
  CHECK(d.transitions == 1);
  CHECK(d.changed[0].after - d.changed[0].before == doctest::Approx(0.25));
  CHECK(to_json(d)["changed"][1]["transition"] == true);

  Scorecard missing = a;
  missing.entries.pop_back();
  CHECK_THROWS_AS(scorecard_diff(a, missing), Error);
  CHECK_THROWS_AS(scorecard_diff(missing, a), Error);
  Scorecard v2 = a;
  v2.version = 2;
  CHECK_THROWS_AS(scorecard_diff(a, v2), Error);
  CHECK_THROWS_AS(scorecard_from_json(Json::parse(R"({"entries": []})")), Error);
}

TEST_CASE("quick gamma suite is deterministic and writes plot data") {
  const auto dir = std::filesystem::temp_directory_path() / "efk_harness_plots";
  std::filesystem::remove_all(dir);
  HarnessConfig h;
  h.quick = true;
  h.plot_dir = dir;
  const Scorecard a = run_suite(Suite::Gamma, h);
  const Scorecard b = run_suite(Suite::Gamma, h);
  CHECK(a.passed());
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(scorecard_diff(a, b).empty());
  for (const auto& e : a.entries) {
    CHECK(e.suite == "gamma");
    CHECK(e.criterion == 12);
  }
  CHECK(std::filesystem::exists(dir / "gamma_u_gamma0.dat"));
  std::filesystem::remove_all(dir);
}
