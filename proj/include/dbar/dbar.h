/* dbar: matrix dbar-problems, integrable-operator determinants and tau-function
 * checks on planar domains. C interface to the core library: opaque handles,
 * integer status codes, malloc'd strings released through dbar_string_free. */

#ifndef DBAR_H
#define DBAR_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dbar_status {
  DBAR_OK = 0,
  DBAR_TOLERANCE_FAILURE = 1,
  DBAR_CONFIG_ERROR = 2,
  DBAR_SOLVER_FAILURE = 3,
  DBAR_INVALID_ARGUMENT = 4,
  DBAR_INTERNAL_ERROR = 5
} dbar_status;

typedef struct dbar_scenario dbar_scenario;
typedef struct dbar_solution dbar_solution;

const char* dbar_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
const char* dbar_last_error(void);

/* Scenario handles hold a parsed JSON configuration (see README for the schema).
 * NULL return means the text/file was unreadable; dbar_last_error() explains. */
dbar_scenario* dbar_scenario_from_string(const char* config_json);
dbar_scenario* dbar_scenario_from_file(const char* path);
void dbar_scenario_free(dbar_scenario* s);

/* Runs one subcommand (solve-dbar, det2, tau-path, miwa-check, hirota-check,
 * kp-residual, nls-solve, nls-verify, rh-compare). Report files and CSV tables
 * are written under output_dir ("-" disables file output). When report_json is
 * non-NULL it receives the JSON summary (free with dbar_string_free). Returns
 * DBAR_OK when every enabled check passed. */
dbar_status dbar_run(dbar_scenario* s, const char* subcommand, const char* output_dir,
                     char** report_json);

/* Direct access to the dbar solve of the scenario's source field. */
dbar_solution* dbar_solve(dbar_scenario* s);
void dbar_solution_free(dbar_solution* sol);
int dbar_solution_size(const dbar_solution* sol);
/* Gamma(z): out = {re g11, im g11, re g12, im g12, re g21, im g21, re g22, im g22}. */
dbar_status dbar_solution_eval(const dbar_solution* sol, double re_z, double im_z,
                               double out[8]);
double dbar_solution_unimodularity(const dbar_solution* sol);
/* psi = 2i (Gamma_1)_{12}: out = {re, im}. */
dbar_status dbar_solution_psi(const dbar_solution* sol, double out[2]);

void dbar_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* DBAR_H */
