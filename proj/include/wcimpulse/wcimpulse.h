#ifndef WCIMPULSE_H
#define WCIMPULSE_H

/* C interface to the impulsive Wilson-Cowan toolkit.
 *
 * Every handle is opaque. Functions returning wci_status leave a message for
 * the calling thread in wci_last_error() when they fail. Strings returned
 * through char** parameters are owned by the caller and released with
 * wci_string_free(). */

#include <stddef.h>

#if defined(_WIN32)
#define WCI_API __declspec(dllexport)
#else
#define WCI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wci_status {
  WCI_OK = 0,
  WCI_E_INVALID_ARGUMENT = 1,
  WCI_E_CONFIG = 2,
  WCI_E_STEP_UNDERFLOW = 3,
  WCI_E_VERIFICATION_FAILED = 4,
  WCI_E_NO_CONVERGENCE = 5,
  WCI_E_DOMAIN = 6,
  WCI_E_BASIN_UNDETERMINED = 7,
  WCI_E_EMPTY_POST_TRANSIENT = 8,
  WCI_E_IO = 9,
  WCI_E_CONDITION_VIOLATED = 10,
  WCI_E_INTERNAL = 99
} wci_status;

typedef enum wci_class {
  WCI_CLASS_CYCLE = 0,
  WCI_CLASS_MEDUSA = 1,
  WCI_CLASS_RING = 2,
  WCI_CLASS_MEDUSA_WITHOUT_RING = 3,
  WCI_CLASS_UNCLASSIFIED = 4
} wci_class;

typedef enum wci_jump_kind { WCI_JUMP_REGULAR = 0, WCI_JUMP_SINGULAR = 1 } wci_jump_kind;

typedef struct wci_scenario wci_scenario;
typedef struct wci_trajectory wci_trajectory;
typedef struct wci_sweep wci_sweep;

/* ---- general ---- */
WCI_API const char *wci_version(void);
/* Message of the last failure on this thread; empty when none. */
WCI_API const char *wci_last_error(void);
WCI_API const char *wci_status_name(wci_status s);
WCI_API void wci_string_free(char *s);
/* Whole-file write through a temporary sibling and rename. */
WCI_API wci_status wci_write_file_atomic(const char *path, const char *data, size_t len);

/* ---- scenarios ---- */
WCI_API size_t wci_builtin_count(void);
/* NULL when out of range. */
WCI_API const char *wci_builtin_name(size_t index);
WCI_API wci_status wci_scenario_builtin(const char *name, wci_scenario **out);
WCI_API wci_status wci_scenario_parse(const char *json, wci_scenario **out);
WCI_API wci_status wci_scenario_load(const char *path, wci_scenario **out);
WCI_API wci_status wci_scenario_serialize(const wci_scenario *s, char **out);
WCI_API size_t wci_scenario_dimension(const wci_scenario *s);
WCI_API void wci_scenario_free(wci_scenario *s);

typedef struct wci_run_options {
  int has_mu;          /* nonzero: use mu instead of the scenario's list */
  double mu;
  const double *x0;    /* NULL: use the scenario's initial states */
  size_t x0_len;
  unsigned jobs;       /* sweep worker threads; 0 = one per core */
  int convergence;     /* verify: also run the convergence study */
} wci_run_options;

WCI_API void wci_run_options_init(wci_run_options *o);

/* ---- steady states ---- */
typedef struct wci_steady_state {
  double E, I;
  double eig_re[2], eig_im[2];
  double jacobian[4]; /* row-major, unscaled field */
  int hurwitz;
} wci_steady_state;

/* Fills up to `capacity` states of the impulsive pair and stores the total
 * in *count. `text` (may be NULL) receives the full report. */
WCI_API wci_status wci_steady_states(const wci_scenario *s, wci_steady_state *buf,
                                     size_t capacity, size_t *count, char **text);

/* ---- verification ---- */
typedef struct wci_verify_summary {
  int c1_pass, c2_pass, c3_pass, all_pass;
  int convergence_run, convergence_pass;
  int simulation_failed;
} wci_verify_summary;

/* A failed check is not an error: inspect the summary. */
WCI_API wci_status wci_verify(const wci_scenario *s, const wci_run_options *o,
                              wci_verify_summary *out, char **text);

/* ---- single simulations ---- */
/* On solver failure returns the error status and still sets *out to the
 * partial trajectory. */
WCI_API wci_status wci_simulate(const wci_scenario *s, const wci_run_options *o,
                                wci_trajectory **out);
WCI_API size_t wci_trajectory_dimension(const wci_trajectory *t);
WCI_API size_t wci_trajectory_sample_count(const wci_trajectory *t);
/* Copies up to `capacity` samples; x is sample-major with dimension columns.
 * Both sides of every jump appear, with equal t. */
WCI_API size_t wci_trajectory_samples(const wci_trajectory *t, double *times, double *x,
                                      size_t capacity);
WCI_API size_t wci_trajectory_jump_count(const wci_trajectory *t);
WCI_API wci_status wci_trajectory_jump(const wci_trajectory *t, size_t index, double *time,
                                       wci_jump_kind *kind, double pre[2], double post[2]);
/* Nonzero when the run stopped early; *time gets the failure instant. */
WCI_API int wci_trajectory_failed(const wci_trajectory *t, double *time);
WCI_API wci_status wci_trajectory_csv(const wci_trajectory *t, char **out);
WCI_API wci_status wci_trajectory_summary(const wci_trajectory *t, char **out);
WCI_API void wci_trajectory_free(wci_trajectory *t);

/* ---- mu sweeps ---- */
typedef struct wci_component {
  wci_class cls;
  size_t arc_count;
  double loop_score;
  size_t revisit_count;
  size_t tentacle_count;
  int has_core;
} wci_component;

WCI_API const char *wci_class_name(wci_class c);
WCI_API wci_status wci_sweep_run(const wci_scenario *s, const wci_run_options *o,
                                 wci_sweep **out);
WCI_API size_t wci_sweep_regime_count(const wci_sweep *w);
WCI_API double wci_sweep_regime_mu(const wci_sweep *w, size_t regime);
WCI_API size_t wci_sweep_component_count(const wci_sweep *w, size_t regime);
WCI_API wci_status wci_sweep_component(const wci_sweep *w, size_t regime, size_t index,
                                       wci_component *out);
/* Number of components of the class in the regime. */
WCI_API size_t wci_sweep_class_count(const wci_sweep *w, size_t regime, wci_class c);
WCI_API size_t wci_sweep_failed_cells(const wci_sweep *w);
WCI_API wci_status wci_sweep_report(const wci_sweep *w, char **out);
WCI_API size_t wci_sweep_cell_count(const wci_sweep *w);
/* File name and CSV text of one (mu, x0) run. */
WCI_API wci_status wci_sweep_cell_csv(const wci_sweep *w, size_t index, char **name,
                                      char **csv);
WCI_API void wci_sweep_free(wci_sweep *w);

#ifdef __cplusplus
}
#endif

#endif
