#ifndef QSS_H
#define QSS_H

/* C interface to the secret-sharing evaluation library. Every entry point
 * returns a status code; results come back through out parameters. Strings
 * returned through char** are heap allocated and must be released with
 * qss_string_free. State handles are opaque and released with
 * qss_state_free. Status codes match the command line tool's exit codes. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qss_status {
  QSS_OK = 0,
  QSS_ERR_INVALID_ARGUMENT = 2,
  QSS_ERR_SOLVER = 3,
  QSS_ERR_INTERNAL = 4
} qss_status;

/* Library version, static storage. */
const char* qss_version(void);

/* Message for the calling thread's most recent failure; empty after any
 * successful call. Static storage, valid until the next call. */
const char* qss_last_error(void);

void qss_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Two-qubit states.                                                   */

typedef struct qss_state qss_state;

/* family: "isotropic", "partial", or "pure". v is the visibility in [0,1],
 * theta the state angle in (0, pi/4]; each family ignores the parameter it
 * does not use. */
qss_status qss_state_family(const char* family, double v, double theta, qss_state** out);

/* name: "phi+", "phi-", "psi+", "psi-". */
qss_status qss_state_bell(const char* name, qss_state** out);

/* JSON format: {"dim": 4, "re": [[...]], "im": [[...]]}, row major. */
qss_status qss_state_from_json(const char* json, qss_state** out);
qss_status qss_state_to_json(const qss_state* state, char** out_json);

void qss_state_free(qss_state* state);

qss_status qss_state_negativity(const qss_state* state, double* out);
qss_status qss_state_fidelity(const qss_state* a, const qss_state* b, double* out);

/* ------------------------------------------------------------------ */
/* Protocol evaluation. task: "deterministic" or "stochastic".         */

/* Canonical protocol on the given source state. JSON: scores plus the
 * full conditional behavior. */
qss_status qss_eval(const char* task, const qss_state* state, char** out_json);

/* Published closed-form scores; fails for combinations without one. */
qss_status qss_closed_form(const char* task, const char* family, double v, double theta,
                           char** out_json);

/* Smallest visibility where the canonical protocol beats the classical
 * bound, to 1e-6. */
qss_status qss_threshold(const char* task, const char* family, double theta, double* out);

qss_status qss_classical_bound(const char* task, double* out);

/* ------------------------------------------------------------------ */
/* Classical strategy enumeration.                                     */

/* Exact maximum over all relay strategies. JSON includes the best value,
 * its exact numerator out of 32, and the achieving strategy tables. */
qss_status qss_classical_best(const char* task, char** out_json);

/* Pareto trade-off of the stochastic task as CSV
 * (Rscrt,Rctrl,f_id,g_id,h_id). */
qss_status qss_classical_frontier(char** out_csv);

/* ------------------------------------------------------------------ */
/* Alternating-ascent optimisation over qubit strategies.              */

qss_status qss_seesaw(const char* task, int restarts, uint64_t seed, char** out_json);

/* ------------------------------------------------------------------ */
/* Steering certificates.                                              */

/* One-sided certificate for the state at refinement level 1..3. JSON:
 * status, direction, level, shrink, lp_iterations, detail. */
qss_status qss_certify(const qss_state* state, int level, char** out_json);

/* Largest certified-unsteerable visibility in the family, to 1e-3. */
qss_status qss_certified_visibility(const char* family, double theta, int level,
                                    double* out);

/* ------------------------------------------------------------------ */
/* Tabletop simulation.                                                */

/* Event-sampled run of the optical pipeline with plate jitter. With
 * infinite_stats nonzero, returns exact expectations at nominal dials and
 * ignores events. Either out parameter may be NULL. */
qss_status qss_experiment(const char* task, const char* family, double v, double theta,
                          long long events, uint64_t seed, int infinite_stats,
                          char** out_summary_json, char** out_counts_csv);

/* Tomography of the family state following the published procedure: each
 * basis state measured separately at events_per_setting and recombined.
 * Either out parameter may be NULL. */
qss_status qss_tomography(const char* family, double v, double theta,
                          long long events_per_setting, uint64_t seed,
                          char** out_summary_json, char** out_counts_csv);

/* Published settings tables recomputed row by row. Either out parameter
 * may be NULL. */
qss_status qss_verify_tables(char** out_json, char** out_csv);

/* Published result tables with computed counterparts. table selects one
 * (see the JSON "name" fields); NULL returns all. out_csv is only
 * available when a single table is selected. */
qss_status qss_reproduce(const char* table, uint64_t seed, char** out_json,
                         char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* QSS_H */
