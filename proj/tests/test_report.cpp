#include <doctest.h>

#include <nlohmann/json.hpp>

#include "dfx/suites.hpp"

using namespace dfx;
using json = nlohmann::json;

TEST_CASE("reports serialize per the shipped schema and replay deterministically") {
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.kernel_samples = 50;
  VerificationReport rep = run_suite("cosymmetry", cfg);

  json j = json::parse(report_to_json(rep));
  // structural validation mirroring docs/report.schema.json
  REQUIRE(j.contains("suite"));
  REQUIRE(j.contains("engine_version"));
  REQUIRE(j.contains("seed"));
  REQUIRE(j.contains("all_pass"));
  REQUIRE(j.contains("checks"));
  CHECK(j["suite"].is_string());
  CHECK(j["seed"].is_number_unsigned());
  CHECK(j["all_pass"].is_boolean());
  REQUIRE(j["checks"].is_array());
  REQUIRE(!j["checks"].empty());
  for (const auto& c : j["checks"]) {
    REQUIRE(c.contains("id"));
    REQUIRE(c.contains("anchor"));
    REQUIRE(c.contains("status"));
    REQUIRE(c.contains("exact"));
    REQUIRE(c.contains("residual"));
    REQUIRE(c.contains("wall_ms"));
    CHECK((c["status"] == "pass" || c["status"] == "fail" || c["status"] == "inconclusive"));
    if (c["status"] == "fail") CHECK(!c["residual"].get<std::string>().empty());
  }
  CHECK(j["seed"] == 42);

  // re-running with the same seed reproduces the statuses
  VerificationReport rep2 = run_suite("cosymmetry", cfg);
  REQUIRE(rep.records.size() == rep2.records.size());
  for (size_t i = 0; i < rep.records.size(); ++i) {
    CHECK(rep.records[i].id == rep2.records[i].id);
    CHECK(rep.records[i].status == rep2.records[i].status);
    CHECK(rep.records[i].exact == rep2.records[i].exact);
  }
}

TEST_CASE("unknown suite names are configuration errors") {
  SuiteConfig cfg;
  CHECK_THROWS_AS((void)run_suite("nope", cfg), Error);
}

TEST_CASE("text rendering lists one line per check") {
  SuiteConfig cfg;
  cfg.kernel_samples = 20;
  VerificationReport rep = run_suite("cosymmetry", cfg);
  std::string text = report_to_text(rep);
  size_t lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  CHECK(lines >= rep.records.size());
}
