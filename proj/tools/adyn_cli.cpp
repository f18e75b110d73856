#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "adyn/adyn.h"

namespace {

using Json = nlohmann::json;

struct ScenarioHandle {
  adyn_scenario* p = nullptr;
  ~ScenarioHandle() { adyn_scenario_free(p); }
};

int report_error(adyn_status st) {
  std::cerr << adyn_last_error_json() << '\n';
  return static_cast<int>(st);
}

int usage_error(const std::string& message) {
  std::cerr << Json{{"error", "usage"}, {"code", 64}, {"message", message}}.dump() << '\n';
  return 64;
}

// A --set value that is not valid JSON is taken as a bare string.
std::string as_json_value(const std::string& text) {
  if (Json::accept(text)) return text;
  return Json(text).dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of diploid adaptive dynamics"};
  app.set_version_flag("--version", std::string(adyn_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  std::string out = "out";
  std::int64_t seed = -1;
  std::int64_t replicates = -1;
  int threads = -1;
  std::vector<std::string> sets;
  bool print_config = false;
  app.add_option("--config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", seed, "Master seed")->check(CLI::NonNegativeNumber);
  app.add_option("--replicates", replicates, "Replicate count")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--set", sets, "Override KEY=VALUE (dotted key, JSON value)");
  app.add_flag("--print-config", print_config, "Print the resolved scenario and exit");

  const std::map<std::string, std::string> blurbs{
      {"ibm", "individual-based simulation"},
      {"ode", "three-genotype deterministic flow"},
      {"tss", "trait substitution sequence"},
      {"canonical", "canonical equation of adaptive dynamics"},
      {"invasion", "invasion probability and phase durations"},
      {"compare", "cross-layer convergence checks"},
      {"ess", "singular strategies and their classification"}};
  for (const char* const* name = adyn_command_names(); *name; ++name) {
    const auto it = blurbs.find(*name);
    app.add_subcommand(*name, it == blurbs.end() ? "" : it->second);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ScenarioHandle sc;
  adyn_status st = adyn_scenario_load_file(config.c_str(), &sc.p);
  if (st != ADYN_OK) return report_error(st);

  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) return usage_error("--set expects KEY=VALUE, got '" + s + "'");
    overrides.emplace_back(s.substr(0, eq), as_json_value(s.substr(eq + 1)));
  }
  if (seed >= 0) overrides.emplace_back("run.seed", std::to_string(seed));
  if (replicates > 0) overrides.emplace_back("run.replicates", std::to_string(replicates));
  if (threads > 0) overrides.emplace_back("run.threads", std::to_string(threads));
  for (const auto& [key, value] : overrides) {
    st = adyn_scenario_set(sc.p, key.c_str(), value.c_str());
    if (st != ADYN_OK) return report_error(st);
  }

  if (print_config) {
    char* text = nullptr;
    st = adyn_scenario_resolved_json(sc.p, &text);
    if (st != ADYN_OK) return report_error(st);
    std::cout << text << '\n';
    adyn_string_free(text);
    return 0;
  }

  char* report = nullptr;
  st = adyn_run(sc.p, command.c_str(), out.c_str(), &report);
  if (st != ADYN_OK) return report_error(st);
  const Json rep = Json::parse(report);
  adyn_string_free(report);
  if (rep.contains("warnings"))
    for (const auto& w : rep.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << '\n';
  std::cout << command << ": wrote " << out << '\n';
  return 0;
}
