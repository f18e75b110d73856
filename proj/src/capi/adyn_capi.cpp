#include "adyn/adyn.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "canonical.hpp"
#include "commands.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "invasion.hpp"
#include "scenario.hpp"
#include "tss.hpp"

struct adyn_scenario {
  adyn::Scenario scenario;
};

namespace {

thread_local std::string last_message;
thread_local std::string last_json;

adyn_status fail(adyn_status code, const std::string& message) {
  last_message = message;
  last_json = adyn::Json{{"error", adyn_status_name(code)}, {"code", static_cast<int>(code)}, {"message", message}}.dump();
  return code;
}

template <class F>
adyn_status guarded(F f) {
  try {
    f();
    last_message.clear();
    last_json.clear();
    return ADYN_OK;
  } catch (const adyn::ConfigError& e) {
    return fail(ADYN_ERR_CONFIG, e.what());
  } catch (const adyn::DomainError& e) {
    return fail(ADYN_ERR_DOMAIN, e.what());
  } catch (const adyn::PreconditionError& e) {
    return fail(ADYN_ERR_PRECONDITION, e.what());
  } catch (const adyn::NumericalError& e) {
    return fail(ADYN_ERR_NUMERICAL, e.what());
  } catch (const adyn::Json::exception& e) {
    return fail(ADYN_ERR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ADYN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ADYN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ADYN_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* adyn_version(void) { return adyn::kVersion; }

const char* adyn_last_error(void) { return last_message.c_str(); }

const char* adyn_last_error_json(void) { return last_json.c_str(); }

const char* adyn_status_name(adyn_status status) {
  switch (status) {
    case ADYN_OK: return "ok";
    case ADYN_ERR_CONFIG: return "config";
    case ADYN_ERR_DOMAIN: return "domain";
    case ADYN_ERR_PRECONDITION: return "precondition";
    case ADYN_ERR_NUMERICAL: return "numerical";
    case ADYN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ADYN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

adyn_status adyn_scenario_load_file(const char* path, adyn_scenario** out) {
  if (!path || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new adyn_scenario{adyn::Scenario::from_json(adyn::load_json_file(path))}; });
}

adyn_status adyn_scenario_load_string(const char* json, adyn_scenario** out) {
  if (!json || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new adyn_scenario{adyn::Scenario::from_json(adyn::parse_json_text(json))}; });
}

void adyn_scenario_free(adyn_scenario* scenario) { delete scenario; }

adyn_status adyn_scenario_set(adyn_scenario* scenario, const char* key_path, const char* json_value) {
  if (!scenario || !key_path || !json_value) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    adyn::Json cfg = scenario->scenario.input;
    adyn::set_path(cfg, key_path, adyn::parse_json_text(json_value, std::string("value of ") + key_path));
    scenario->scenario = adyn::Scenario::from_json(cfg);
  });
}

adyn_status adyn_scenario_resolved_json(const adyn_scenario* scenario, char** out_json) {
  if (!scenario || !out_json) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out_json = copy_string(scenario->scenario.config.dump(2)); });
}

void adyn_string_free(char* s) { delete[] s; }

const char* const* adyn_command_names(void) {
  static const char* const names[] = {"ibm", "ode", "tss", "canonical", "invasion", "compare", "ess", nullptr};
  return names;
}

adyn_status adyn_run(const adyn_scenario* scenario, const char* command, const char* out_dir, char** report_json) {
  if (!scenario || !command || !out_dir) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const adyn::Json report = adyn::run_command(scenario->scenario, command, out_dir);
    if (report_json) *report_json = copy_string(report.dump(2));
  });
}

adyn_status adyn_carrying_capacity(const adyn_scenario* scenario, double u, double* out) {
  if (!scenario || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    scenario->scenario.model.phenotype(adyn::Genotype::homozygote(u));
    *out = scenario->scenario.model.carrying_capacity(u);
  });
}

adyn_status adyn_invasion_fitness(const adyn_scenario* scenario, double u_a, double u_A, double* out) {
  if (!scenario || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = adyn::invasion_fitness(scenario->scenario.model, u_a, u_A); });
}

adyn_status adyn_survival_probability(const adyn_scenario* scenario, double u_A, double u_a, double* out) {
  if (!scenario || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = adyn::survival_probability(adyn::DimorphicModel::from_model(scenario->scenario.model, u_A, u_a));
  });
}

adyn_status adyn_fitness_gradient(const adyn_scenario* scenario, double u, double* out) {
  if (!scenario || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = adyn::fitness_gradient(scenario->scenario.model, u); });
}

adyn_status adyn_total_jump_rate(const adyn_scenario* scenario, double u, double* out) {
  if (!scenario || !out) return fail(ADYN_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = adyn::total_jump_rate(scenario->scenario.model, u); });
}

}  // extern "C"
