/*
 * drem_im: induction motor flux, rotor resistance, speed and load torque
 * observers driven by mixed regressions. C interface.
 *
 * Conventions: every fallible call returns a drem_status. On failure a
 * description is available from drem_last_error() on the same thread until
 * the next failing call. Handles are opaque and owned by the caller, who
 * releases them with the matching *_destroy function (NULL is accepted).
 *
 * String outputs follow one pattern: the call writes at most buf_len bytes
 * including the terminating NUL and stores the full required size (with NUL)
 * in *needed when needed is non-NULL. A too-small buffer yields
 * DREM_ERR_BUFFER_TOO_SMALL and leaves buf untouched.
 */
#ifndef DREM_IM_H
#define DREM_IM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DREM_API __declspec(dllexport)
#else
#define DREM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum drem_status {
    DREM_OK = 0,
    DREM_ERR_INTEGRATION = 2,  /* non-finite state; a partial log may exist */
    DREM_ERR_CONFIG = 3,       /* invalid key, value or combination */
    DREM_ERR_DATA = 4,         /* unreadable or incomplete telemetry, missing columns, bad selector */
    DREM_ERR_ARGUMENT = 5,     /* NULL handle, bad index, bad dimension */
    DREM_ERR_BUFFER_TOO_SMALL = 6,
    DREM_ERR_INTERNAL = 7
} drem_status;

typedef enum drem_excitation {
    DREM_EXCITATION_INSUFFICIENT = 0,
    DREM_EXCITATION_NON_L2_TRENDING = 1,
    DREM_EXCITATION_PE_LIKE = 2
} drem_excitation;

typedef enum drem_verdict { DREM_VERDICT_PASS = 0, DREM_VERDICT_FAIL = 1, DREM_VERDICT_SKIPPED = 2 } drem_verdict;

typedef struct drem_config drem_config;
typedef struct drem_result drem_result;
typedef struct drem_report drem_report;

DREM_API const char* drem_version(void);
DREM_API const char* drem_last_error(void);

/* Configuration. Keys are those of the config file format (e.g. "motor.Rr",
 * "observer.mode"); values use the same text syntax. */
DREM_API drem_status drem_config_create(drem_config** out);
DREM_API drem_status drem_config_load_file(const char* path, drem_config** out);
DREM_API drem_status drem_config_set(drem_config* cfg, const char* key, const char* value);
DREM_API drem_status drem_config_get(const drem_config* cfg, const char* key, char* buf, size_t buf_len,
                                     size_t* needed);
DREM_API drem_status drem_config_validate(const drem_config* cfg);
DREM_API void drem_config_destroy(drem_config* cfg);

/* Runs the scenario. telemetry_path overrides output.telemetry when non-NULL;
 * an empty path means no log. On an integration
 * fault the result is still produced (status DREM_ERR_INTEGRATION) and the log
 * holds the rows written before the fault. */
DREM_API drem_status drem_run(const drem_config* cfg, const char* telemetry_path, drem_result** out);

typedef struct drem_summary {
    int faulted;
    double fault_time;
    double end_time;
    uint64_t steps;
    uint64_t rows;
    double flux_err_norm; /* |flux - estimate| [Wb] */
    double rr_err;        /* estimate - true [ohm] */
    double omega_err;     /* estimate - true [rad/s] */
    double tl_err;        /* estimate - true [N m] */
    /* Time from which each error stayed below its threshold; negative if never. */
    double settled_flux, settled_rr, settled_tl, settled_omega;
    double int_delta_e_sq, int_delta_m_sq;
    drem_excitation excitation_e, excitation_m;
    uint64_t flux_floor_events;
    double wall_seconds;
} drem_summary;

DREM_API drem_status drem_result_summary(const drem_result* r, drem_summary* out);
DREM_API drem_status drem_result_json(const drem_result* r, char* buf, size_t buf_len, size_t* needed);
DREM_API void drem_result_destroy(drem_result* r);

/* Acceptance check over telemetry files. Any path may be NULL; criteria that
 * need it are reported as skipped. canonical_wall_seconds < 0 means unknown. */
typedef struct drem_check_inputs {
    const char* canonical;
    const char* refined;
    const char* rerun;
    const char* unexcited;
    const char* ce;
    double canonical_wall_seconds;
} drem_check_inputs;

/* criteria: ids 1..10, or NULL / n_criteria = 0 for all. */
DREM_API drem_status drem_check(const drem_check_inputs* in, const int* criteria, size_t n_criteria,
                                drem_report** out);
DREM_API size_t drem_report_count(const drem_report* r);
DREM_API drem_status drem_report_criterion(const drem_report* r, size_t index, int* id, drem_verdict* verdict);
DREM_API drem_status drem_report_line(const drem_report* r, size_t index, char* buf, size_t buf_len, size_t* needed);
DREM_API drem_status drem_report_json(const drem_report* r, char* buf, size_t buf_len, size_t* needed);
DREM_API int drem_report_all_passed(const drem_report* r);
DREM_API int drem_report_any_failed(const drem_report* r);
DREM_API void drem_report_destroy(drem_report* r);

/* Writes <out_prefix><selector>.csv for each selector. */
DREM_API drem_status drem_plot_data(const char* telemetry_path, const char* const* selectors, size_t n_selectors,
                                    int log_scale, const char* out_prefix);

/* zeta = adj(A) y, delta = det(A) for a row-major n x n A, n = 2 or 6. */
DREM_API drem_status drem_mix(size_t n, const double* a_row_major, const double* y, double* zeta, double* delta);

#ifdef __cplusplus
}
#endif

#endif /* DREM_IM_H */
