#include "bt/runner.hpp"

#include <doctest.h>

using namespace bt;
using namespace bt::runner;

namespace {

RunConfig small(std::vector<std::string> checks) {
  RunConfig c = default_config();
  c.checks = std::move(checks);
  c.checks_given = true;
  c.samples = 8;
  c.workers = 2;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = parse_config(json::parse(R"({"p": [5], "N": [2], "r": ["1/2", 1], "checks": ["unity"], "seed": 9})"));
  CHECK(c.p == std::vector<long long>{5});
  CHECK(c.n == std::vector<long long>{2});
  CHECK(c.r == std::vector<Q>{Q(1, 2), Q(1)});
  CHECK(c.checks == std::vector<std::string>{"unity"});
  CHECK(c.seed == 9);

  CHECK_THROWS_AS(parse_config(json::parse(R"({"bogus": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"p": [4]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"r": ["-1/2"]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"samples": 0})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"root_systems": ["E8"]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse("[1]")), ConfigError);
  CHECK_THROWS(parse_config(json::parse(R"({"checks": ["nope"]})")));

  auto d = default_config();
  auto back = parse_config(config_to_json(d));
  CHECK(back.r == d.r);
  CHECK(back.s == d.s);
  CHECK(back.p == d.p);
  CHECK(back.samples == d.samples);
}

TEST_CASE("empty check list") {
  auto reps = run_suite(small({}));
  CHECK(reps.empty());
  CHECK(emit_json(reps, false) == "[]\n");
  CHECK(exit_code(reps, true) == 0);
}

TEST_CASE("report formats") {
  auto reps = run_suite(small({"unity"}));
  REQUIRE(!reps.empty());
  auto j = json::parse(emit_json({reps[0]}, false));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["verdict"] == "pass");
  CHECK(j[0]["ms"] == 0);
  auto csv = emit_csv(reps, false);
  CHECK(csv.rfind("check,instance,verdict,ms,witness\n", 0) == 0);

  CheckReport odd{"x", "a,b", Verdict::fail, 0, "say \"hi\"", json::object()};
  CHECK(emit_csv({odd}, false) == "check,instance,verdict,ms,witness\nx,\"a,b\",fail,0,\"say \"\"hi\"\"\"\n");
  CHECK(format_error(3.3e-16) == "3.30e-16");
}

TEST_CASE("runs are deterministic") {
  auto c = small({"stab", "equal", "indicator"});
  c.p = {3};
  c.n = {3};
  auto a = emit_json(run_suite(c), false);
  c.workers = 1;
  auto b = emit_json(run_suite(c), false);
  CHECK(a == b);
  c.seed = 2;
  CHECK(emit_json(run_suite(c), false) != a);
}

TEST_CASE("precision below the policy is a skip") {
  auto c = small({"projector"});
  c.n = {1};
  c.p = {3};
  c.m = {1};
  c.r = {Q(0)};
  auto reps = run_suite(c);
  REQUIRE(!reps.empty());
  // Cells whose group still contains G_{0,1} are checked exactly; the rest are skipped.
  long long skipped = 0;
  for (const auto& r : reps) {
    CHECK(r.verdict != Verdict::fail);
    skipped += r.verdict == Verdict::skipped;
  }
  CHECK(skipped > 0);
  CHECK(exit_code(reps, false) == 0);
  CHECK(exit_code(reps, true) == 1);
}

TEST_CASE("exceptions and failures are reported, not thrown") {
  RunConfig c = small({});
  std::vector<Job> jobs;
  jobs.push_back({"t", "ok", [](std::mt19937_64&) { return CheckReport{}; }});
  jobs.push_back({"t", "boom", [](std::mt19937_64&) -> CheckReport { throw std::runtime_error("bad"); }});
  auto reps = run_jobs(c, jobs);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].instance == "boom");
  CHECK(reps[0].verdict == Verdict::fail);
  CHECK(reps[0].witness.find("bad") != std::string::npos);
  CHECK(reps[1].verdict == Verdict::pass);
  CHECK(exit_code(reps, false) == 1);
}
