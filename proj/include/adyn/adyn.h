#ifndef ADYN_ADYN_H
#define ADYN_ADYN_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ADYN_API __declspec(dllexport)
#else
#define ADYN_API __attribute__((visibility("default")))
#endif

typedef enum adyn_status {
  ADYN_OK = 0,
  ADYN_ERR_CONFIG = 1,        /* invalid scenario or override */
  ADYN_ERR_DOMAIN = 2,        /* argument outside an operation's domain */
  ADYN_ERR_PRECONDITION = 3,  /* engine precondition violated */
  ADYN_ERR_NUMERICAL = 4,     /* solver / quadrature / root failure */
  ADYN_ERR_INVALID_ARGUMENT = 5,
  ADYN_ERR_INTERNAL = 6
} adyn_status;

typedef struct adyn_scenario adyn_scenario;

ADYN_API const char* adyn_version(void);

/* Message and machine-readable JSON ({"error": code, "message": ...}) of the
   last failed call on this thread. Valid until the next call. */
ADYN_API const char* adyn_last_error(void);
ADYN_API const char* adyn_last_error_json(void);
ADYN_API const char* adyn_status_name(adyn_status status);

ADYN_API adyn_status adyn_scenario_load_file(const char* path, adyn_scenario** out);
ADYN_API adyn_status adyn_scenario_load_string(const char* json, adyn_scenario** out);
ADYN_API void adyn_scenario_free(adyn_scenario* scenario);

/* Sets a dotted key ("model.K", "run.seed") to a JSON value and re-validates
   the scenario. On failure the scenario is unchanged. */
ADYN_API adyn_status adyn_scenario_set(adyn_scenario* scenario, const char* key_path, const char* json_value);

/* Resolved configuration as JSON; release with adyn_string_free. */
ADYN_API adyn_status adyn_scenario_resolved_json(const adyn_scenario* scenario, char** out_json);
ADYN_API void adyn_string_free(char* s);

/* Names of the subcommands, NULL-terminated. */
ADYN_API const char* const* adyn_command_names(void);

/* Runs a subcommand writing its outputs under out_dir. report_json may be
   NULL; otherwise it receives the report (release with adyn_string_free). */
ADYN_API adyn_status adyn_run(const adyn_scenario* scenario, const char* command, const char* out_dir,
                              char** report_json);

/* Scalar probes of the scenario's model. */
ADYN_API adyn_status adyn_carrying_capacity(const adyn_scenario* scenario, double u, double* out);
ADYN_API adyn_status adyn_invasion_fitness(const adyn_scenario* scenario, double u_a, double u_A, double* out);
ADYN_API adyn_status adyn_survival_probability(const adyn_scenario* scenario, double u_A, double u_a, double* out);
ADYN_API adyn_status adyn_fitness_gradient(const adyn_scenario* scenario, double u, double* out);
ADYN_API adyn_status adyn_total_jump_rate(const adyn_scenario* scenario, double u, double* out);

#ifdef __cplusplus
}
#endif

#endif
