#pragma once

#include "bt/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace bt::runner {

using json = nlohmann::json;
using bt::to_string;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<std::string> root_systems{"A1"};
  std::vector<int> m{1, 2};
  Q window{2};  // half-width of the box around the origin
  std::vector<long long> p{2, 3};
  std::vector<long long> n{3, 4};
  std::vector<long long> q{2, 3, 5};  // finite fields for the Steinberg suite
  std::vector<Q> r{Q(0), Q(1, 2), Q(1)};
  std::vector<Q> s{Q(0), Q(1, 2), Q(1), Q(2)};
  std::uint64_t seed = 1;
  long long max_enumeration = 200000;
  long long max_ms = 60000;
  int workers = 4;
  int samples = 200;  // random instances per (system, m) where a check samples
  std::vector<std::string> checks;
  bool checks_given = false;  // an explicit empty list runs nothing
  bool timing = false;  // real timings break byte-identical output, so off by default
};

// Throws ConfigError naming the offending key.
RunConfig parse_config(const json& j);
json config_to_json(const RunConfig& c);
RunConfig default_config();

enum class Verdict { pass, fail, skipped };
std::string to_string(Verdict v);

struct CheckReport {
  std::string check;
  std::string instance;
  Verdict verdict = Verdict::pass;
  double ms = 0;
  std::string witness;
  json detail = json::object();
};

// A job returns a report without check, instance or timing filled in.
struct Job {
  std::string check;
  std::string instance;
  std::function<CheckReport(std::mt19937_64&)> run;
};

struct CheckInfo {
  std::string id;
  std::string summary;
  std::function<std::vector<Job>(const RunConfig&)> jobs;
};

const std::vector<CheckInfo>& registry();
const CheckInfo& find_check(const std::string& id);
std::vector<std::string> all_check_ids();

// Runs every job on a worker pool; output sorted by (check, instance).
std::vector<CheckReport> run_jobs(const RunConfig& c, std::vector<Job> jobs);
std::vector<CheckReport> run_suite(const RunConfig& c);

// Exit status: 0 iff no failures, and no skips either in strict mode.
int exit_code(const std::vector<CheckReport>& reports, bool strict);

std::string emit_json(const std::vector<CheckReport>& reports, bool timing);
std::string emit_csv(const std::vector<CheckReport>& reports, bool timing);
std::string format_error(double e);

}  // namespace bt::runner
