/* C interface of libmonosim: periodic steady-state simulation of nonlinear
 * RLC networks by difference-of-monotone Douglas-Rachford splitting.
 *
 * Every function returns a monosim_status. On failure the calling thread's
 * last error message (and, for configuration errors, the dotted field path)
 * can be read until the next failing call on that thread. Handles are
 * opaque; free them with the matching *_free function. Strings returned
 * through char** out-parameters are owned by the caller and released with
 * monosim_string_free.
 */
#ifndef MONOSIM_MONOSIM_H
#define MONOSIM_MONOSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MONOSIM_API __declspec(dllexport)
#else
#define MONOSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum monosim_status {
    MONOSIM_OK = 0,
    MONOSIM_ERR_INVALID_ARGUMENT = 1, /* null handle/pointer, bad option */
    MONOSIM_ERR_CONFIG = 2,           /* invalid configuration document or value */
    MONOSIM_ERR_DIMENSION = 3,        /* inconsistent shapes */
    MONOSIM_ERR_NUMERIC = 4,          /* NaN/Inf, singular bin, imaginary residue */
    MONOSIM_ERR_NOT_OSCILLATORY = 5,  /* reference run has no oscillation */
    MONOSIM_ERR_IO = 6,               /* file could not be read or written */
    MONOSIM_ERR_INTERNAL = 7
} monosim_status;

typedef struct monosim_config monosim_config;
typedef struct monosim_solution monosim_solution;
typedef struct monosim_comparison monosim_comparison;

typedef struct monosim_bench_row {
    size_t size;
    double freq_ns;
    double dense_ns; /* valid only when has_dense != 0 */
    int has_dense;
} monosim_bench_row;

MONOSIM_API const char* monosim_version(void);
MONOSIM_API const char* monosim_last_error(void);
/* Dotted path of the offending field for MONOSIM_ERR_CONFIG, else "". */
MONOSIM_API const char* monosim_last_error_field(void);
MONOSIM_API const char* monosim_status_name(monosim_status status);
MONOSIM_API void monosim_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

MONOSIM_API monosim_status monosim_config_parse(const char* text, size_t length, monosim_config** out);
MONOSIM_API monosim_status monosim_config_load(const char* path, monosim_config** out);
MONOSIM_API void monosim_config_free(monosim_config* cfg);
/* Explicit JSON form (cells + coupling matrix) accepted by monosim_config_parse. */
MONOSIM_API monosim_status monosim_config_serialize(const monosim_config* cfg, char** out);
MONOSIM_API monosim_status monosim_config_cells(const monosim_config* cfg, size_t* cells);
/* Seed of the seeded-uniform initialization (0 when the init has no seed). */
MONOSIM_API monosim_status monosim_config_seed(const monosim_config* cfg, uint64_t* seed);
/* Replaces the seed; switches nothing else. Fails for non-seeded inits. */
MONOSIM_API monosim_status monosim_config_set_seed(monosim_config* cfg, uint64_t seed);
MONOSIM_API monosim_status monosim_config_set_max_iterations(monosim_config* cfg, size_t max_iterations);
MONOSIM_API monosim_status monosim_config_set_ab2_step(monosim_config* cfg, double step);
MONOSIM_API monosim_status monosim_config_set_t_end(monosim_config* cfg, double t_end);

/* ---- steady-state solve ----------------------------------------------- */

/* Builds the problem and runs the solver. Non-convergence is not an error:
 * check monosim_solution_converged. */
MONOSIM_API monosim_status monosim_simulate(const monosim_config* cfg, monosim_solution** out);
MONOSIM_API void monosim_solution_free(monosim_solution* sol);
MONOSIM_API int monosim_solution_converged(const monosim_solution* sol);
MONOSIM_API size_t monosim_solution_iterations(const monosim_solution* sol);
/* Channel-major samples (all voltages, then all currents), valid for the
 * lifetime of the handle. */
MONOSIM_API monosim_status monosim_solution_trajectory(const monosim_solution* sol, const double** data,
                                                       size_t* channels, size_t* num_samples, double* sample_step);
/* SolveReport plus orbit metrics as a JSON object. */
MONOSIM_API monosim_status monosim_solution_report_json(const monosim_solution* sol, char** out);
MONOSIM_API monosim_status monosim_solution_write_csv(const monosim_solution* sol, const char* path);

/* ---- comparison against the AB2 reference ----------------------------- */

MONOSIM_API monosim_status monosim_compare(const monosim_config* cfg, monosim_comparison** out);
MONOSIM_API void monosim_comparison_free(monosim_comparison* cmp);
MONOSIM_API int monosim_comparison_converged(const monosim_comparison* cmp);
MONOSIM_API monosim_status monosim_comparison_report_json(const monosim_comparison* cmp, char** out);
/* Columns: time, dmdr_<channel>..., ab2_<channel>... (AB2 orbit phase-aligned). */
MONOSIM_API monosim_status monosim_comparison_write_csv(const monosim_comparison* cmp, const char* path);
/* The DMDR part of the comparison; owned by the comparison handle. */
MONOSIM_API const monosim_solution* monosim_comparison_solution(const monosim_comparison* cmp);

/* ---- benchmark and validation ----------------------------------------- */

/* Single reference cell, alpha = 0.1, h = 0.1. rows must hold count entries. */
MONOSIM_API monosim_status monosim_bench(const size_t* sizes, size_t count, monosim_bench_row* rows);
/* Runs the oracle suites; *all_passed is 1 iff every suite passed.
 * flip_interconnect_sign != 0 injects a sign error into the fast path. */
MONOSIM_API monosim_status monosim_validate(int flip_interconnect_sign, char** summary_json, int* all_passed);

/* ---- utilities -------------------------------------------------------- */

/* Writes to a temporary file next to path, then renames it into place. */
MONOSIM_API monosim_status monosim_write_file_atomic(const char* path, const char* data, size_t length);

#ifdef __cplusplus
}
#endif

#endif /* MONOSIM_MONOSIM_H */
