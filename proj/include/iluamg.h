/*
 * iluamg C API: sparse AMG solver with ILU smoothers and iterative
 * (Richardson / truncated Neumann) triangular solves on scaled factors.
 *
 * All functions return a status code:
 *   ILUAMG_OK            (0) success / converged
 *   ILUAMG_NOT_CONVERGED (1) the run completed but missed its criterion
 *                            (the report is still produced)
 *   ILUAMG_ERR_INVALID   (2) invalid input: bad arguments, config, or file
 *   ILUAMG_ERR_NUMERIC   (3) numerical breakdown: zero pivot, singular
 *                            matrix, NaN/Inf iterates
 * On any nonzero status iluamg_last_error() describes the failure.
 *
 * Handles are opaque; every *_create/run function output must be released
 * with the matching *_free. Handles are safe to share across threads for
 * read-only use; the last-error message is thread-local.
 */

#ifndef ILUAMG_H
#define ILUAMG_H

#if defined(_WIN32)
#  if defined(ILUAMG_BUILD)
#    define ILUAMG_API __declspec(dllexport)
#  else
#    define ILUAMG_API __declspec(dllimport)
#  endif
#else
#  define ILUAMG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ILUAMG_OK 0
#define ILUAMG_NOT_CONVERGED 1
#define ILUAMG_ERR_INVALID 2
#define ILUAMG_ERR_NUMERIC 3

typedef struct iluamg_matrix_s iluamg_matrix;
typedef struct iluamg_config_s iluamg_config;
typedef struct iluamg_report_s iluamg_report;

ILUAMG_API const char* iluamg_version(void);

/* Thread-local message of the most recent failure; "" if none. */
ILUAMG_API const char* iluamg_last_error(void);

/* ---- matrices ---------------------------------------------------------- */

/* Reads a Matrix Market coordinate file (real, general or symmetric). */
ILUAMG_API int iluamg_matrix_read(const char* path, iluamg_matrix** out);

/* Builds a generated problem, e.g. "poisson2d(32,32)", "poisson1d(9)",
 * "anisotropic2d(64,64,0.001)". */
ILUAMG_API int iluamg_matrix_generate(const char* spec, iluamg_matrix** out);

/* Writes coordinate real general; a read of the output reproduces the
 * matrix exactly. */
ILUAMG_API int iluamg_matrix_write(const iluamg_matrix* A, const char* path);

ILUAMG_API long long iluamg_matrix_rows(const iluamg_matrix* A);
ILUAMG_API long long iluamg_matrix_cols(const iluamg_matrix* A);
ILUAMG_API long long iluamg_matrix_nnz(const iluamg_matrix* A);
ILUAMG_API void iluamg_matrix_free(iluamg_matrix* A);

/* ---- configuration ----------------------------------------------------- */

/* A new config carries the documented defaults. */
ILUAMG_API int iluamg_config_create(iluamg_config** out);

/* Parses a flat dotted-key file ("amg.theta = 0.25"); unknown keys fail. */
ILUAMG_API int iluamg_config_load(iluamg_config* cfg, const char* path);

ILUAMG_API int iluamg_config_set(iluamg_config* cfg, const char* key, const char* value);

/* NULL when the key is unknown. */
ILUAMG_API const char* iluamg_config_get(const iluamg_config* cfg, const char* key);

/* Static text listing every key, its default, and a description. */
ILUAMG_API const char* iluamg_config_reference(void);

ILUAMG_API void iluamg_config_free(iluamg_config* cfg);

/* ---- runs --------------------------------------------------------------
 * A may be NULL, in which case the matrix named by the config's "matrix"
 * key is loaded. Each run produces a report on success or NOT_CONVERGED.
 */

/* ILU factorization diagnostics: dep(L), dep(U), dep of the row- and
 * row/col-scaled U, condition estimates, striping flags. */
ILUAMG_API int iluamg_run_analyze(const iluamg_matrix* A, const iluamg_config* cfg, iluamg_report** out);

/* AMG-preconditioned (F)GMRES solve; history and hierarchy tables. */
ILUAMG_API int iluamg_run_solve(const iluamg_matrix* A, const iluamg_config* cfg, iluamg_report** out);

/* Richardson-vs-direct error curves for the triangular solves. */
ILUAMG_API int iluamg_run_bench_trisolve(const iluamg_matrix* A, const iluamg_config* cfg,
                              iluamg_report** out);

/* Solve once per block count in schur.blocks_list with the Schur smoother. */
ILUAMG_API int iluamg_run_schur_solve(const iluamg_matrix* A, const iluamg_config* cfg,
                           iluamg_report** out);

/* ---- reports ------------------------------------------------------------
 * A report is an ordered list of scalar key/value strings plus named tables
 * rendered as CSV (header row, comma-separated, UTF-8).
 */

ILUAMG_API int iluamg_report_status(const iluamg_report* r);
ILUAMG_API int iluamg_report_scalar_count(const iluamg_report* r);
ILUAMG_API const char* iluamg_report_scalar_key(const iluamg_report* r, int i);
ILUAMG_API const char* iluamg_report_scalar_value(const iluamg_report* r, int i);

/* NULL when absent. */
ILUAMG_API const char* iluamg_report_get(const iluamg_report* r, const char* key);

ILUAMG_API int iluamg_report_table_count(const iluamg_report* r);
ILUAMG_API const char* iluamg_report_table_name(const iluamg_report* r, int i);

/* CSV text of the named table; NULL when absent. The pointer stays valid
 * until the report is freed. */
ILUAMG_API const char* iluamg_report_table_csv(const iluamg_report* r, const char* name);

/* Scalars as a one-line JSON object. */
ILUAMG_API const char* iluamg_report_json(const iluamg_report* r);

/* Flat "key = value" text block. */
ILUAMG_API const char* iluamg_report_text(const iluamg_report* r);

ILUAMG_API void iluamg_report_free(iluamg_report* r);

#ifdef __cplusplus
}
#endif

#endif /* ILUAMG_H */
