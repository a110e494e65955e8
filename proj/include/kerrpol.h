#ifndef KERRPOL_H
#define KERRPOL_H

/*
 * C interface to the kerrpol library: polarization-noise statistics of
 * two-mode coherent light after a Kerr medium, evaluated by a truncated
 * number-basis oracle, exact closed-form moments, or a first-order model.
 *
 * Conventions:
 *  - Every fallible call returns kp_status; KP_OK is 0. On failure, a
 *    human-readable message is retrievable with kp_last_error_message()
 *    (thread-local storage, valid until the next failing call on the same
 *    thread).
 *  - Objects are opaque; free them with the matching *_free function. All
 *    out-parameters are written only on KP_OK.
 *  - Strings returned through char** out-parameters are heap copies; release
 *    them with kp_string_free. Strings returned as plain const char* point
 *    into the queried object (or static storage) and must not be freed.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KP_API __declspec(dllexport)
#else
#define KP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kp_status {
  KP_OK = 0,
  KP_ERR_PARSE = 1,           /* malformed config or table text */
  KP_ERR_SCHEMA = 2,          /* well-formed but violates the schema */
  KP_ERR_RANGE = 3,           /* value outside its admissible range */
  KP_ERR_TRUNCATION = 4,      /* basis cutoff cannot reach the tail tolerance */
  KP_ERR_DOMAIN = 5,          /* quantity undefined at these parameters */
  KP_ERR_IO = 6,              /* file system failure */
  KP_ERR_INVARIANT = 7,       /* internal consistency check failed */
  KP_ERR_INVALID_ARGUMENT = 8 /* null pointer or bad enum from the caller */,
  KP_ERR_INTERNAL = 9         /* unexpected exception; report as a bug */
} kp_status;

typedef struct kp_config kp_config;
typedef struct kp_table kp_table;

/* Library semantic version, e.g. "0.1.0". Static storage. */
KP_API const char* kp_version(void);

/* Stable identifier for a status code, e.g. "KP_ERR_RANGE". */
KP_API const char* kp_status_name(kp_status status);

/* Message describing the most recent failure on this thread ("" if none). */
KP_API const char* kp_last_error_message(void);

/* --- configuration ------------------------------------------------------ */

/* Parses and validates an INI-style run description (see
 * docs/config-format.md). */
KP_API kp_status kp_config_parse_file(const char* path, kp_config** out);
KP_API kp_status kp_config_parse_text(const char* text, kp_config** out);

/* Replaces the configured engine ("linearized", "analytic" or "fock");
 * revalidates. */
KP_API kp_status kp_config_override_engine(kp_config* config, const char* engine);

/* has_grid receives 1 when the config declares a sweep axis, else 0. */
KP_API kp_status kp_config_has_grid(const kp_config* config, int* has_grid);

KP_API void kp_config_free(kp_config* config);

/* --- runs ----------------------------------------------------------------
 * Each produces a result table. Rows that fail on domain grounds carry NaN
 * cells and a describing status string; errors that indicate a broken setup
 * (IO, invariant, argument) fail the whole call instead. */

/* Evaluates the configured grid (config must have one). */
KP_API kp_status kp_run_sweep(const kp_config* config, kp_table** out);

/* Evaluates the single configured point (config must have no grid). */
KP_API kp_status kp_run_point(const kp_config* config, kp_table** out);

/* Seed-ratio scan of the squeezing factor; requires a seed_ratio grid. */
KP_API kp_status kp_run_seed_scan(const kp_config* config, kp_table** out);

/* Preset demonstration sweeps, panels 'a'..'d', for the named engine. */
KP_API kp_status kp_fig1_table(char panel, const char* engine, kp_table** out);

/* --- tables -------------------------------------------------------------- */

KP_API kp_status kp_table_num_rows(const kp_table* table, int64_t* out);
KP_API kp_status kp_table_num_columns(const kp_table* table, int64_t* out);
KP_API kp_status kp_table_column_name(const kp_table* table, int64_t column, const char** out);
KP_API kp_status kp_table_cell(const kp_table* table, int64_t row, int64_t column, double* out);
KP_API kp_status kp_table_row_status(const kp_table* table, int64_t row, const char** out);

/* format is "csv" or "json"; fixed_metadata != 0 pins the generation stamp
 * so identical runs emit identical bytes. */
KP_API kp_status kp_table_emit_file(const kp_table* table, const char* path, const char* format,
                                    int fixed_metadata);
KP_API kp_status kp_table_emit_string(const kp_table* table, const char* format,
                                      int fixed_metadata, char** out);

KP_API void kp_string_free(char* s);
KP_API void kp_table_free(kp_table* table);

/* --- selftest -------------------------------------------------------------
 * Runs the built-in invariant suite. all_pass receives 1/0. report (optional,
 * pass NULL to skip) receives the formatted per-check listing; free it with
 * kp_string_free. inject_fault may be NULL, or the name of a check to
 * sabotage deliberately (supported: "stokes_commutators") to demonstrate
 * that the suite can fail. */
KP_API kp_status kp_selftest(const char* inject_fault, char** report, int* all_pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KERRPOL_H */
