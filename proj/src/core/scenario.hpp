#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace adyn {

// Parses JSON text; syntax errors become ConfigError with line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<string>");
Json load_json_file(const std::string& path);

// Sets j at a dotted path ("model.K", "run.seed"), creating objects on the way.
void set_path(Json& j, const std::string& dotted, const Json& value);

// Typed field access on one config object with a dotted location for error
// messages. finish() rejects keys that were never read.
class Section {
 public:
  Section(const Json& j, std::string where);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::int64_t integer(const std::string& key, std::int64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::int64_t> integers(const std::string& key, const std::vector<std::int64_t>& fallback) const;
  Json raw(const std::string& key) const;
  void finish() const;

 private:
  const Json& at(const std::string& key, const char* expected) const;

  Json j_;
  std::string where_;
  mutable std::set<std::string> used_;
};

struct RunSpec {
  double horizon = 10.0;
  double record_dt = 0.1;
  std::uint64_t seed = 1;
  std::int64_t replicates = 1;
  int threads = 1;
  std::uint64_t max_events = 2'000'000'000ULL;
  bool event_log = false;

  Json to_json() const;
};

struct SweepSpec {
  std::string parameter;
  std::vector<Json> values;
  bool active() const { return !parameter.empty(); }
};

// A loaded scenario: model, initial condition, run settings, optional sweep,
// and the raw per-command sections (ode, tss, canonical, invasion, compare,
// ess, ibm), which the commands parse themselves.
struct Scenario {
  Json input;   // as loaded (plus overrides); sweeps and overrides apply here
  Json config;  // input with model, run and initial replaced by resolved forms
  DemographyModel model;
  RunSpec run;
  std::vector<std::pair<Genotype, double>> initial;  // genotype densities
  SweepSpec sweep;

  Json section(const std::string& name) const;
  static Scenario from_json(const Json& j);
};

// Advisory messages for the mutation time-scale window
// ln K / sigma << 1 / (K mu_K); the upper side exp(V K) is not checkable.
std::vector<std::string> time_scale_advisory(const DemographyModel& model);

}  // namespace adyn
