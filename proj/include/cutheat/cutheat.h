/* C interface to the cutheat solver library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return cutheat_status; on failure, cutheat_last_error() gives a
 * human-readable message for the calling thread.
 */
#ifndef CUTHEAT_H
#define CUTHEAT_H

#include <stddef.h>

#if defined(_WIN32)
#define CUTHEAT_API __declspec(dllexport)
#else
#define CUTHEAT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cutheat_status {
    CUTHEAT_OK = 0,
    CUTHEAT_ERR_CONFIG = 1,
    CUTHEAT_ERR_RUN = 2,
    CUTHEAT_ERR_INVALID = 3
} cutheat_status;

typedef struct cutheat_config cutheat_config;
typedef struct cutheat_report cutheat_report;

typedef struct cutheat_run_options {
    const char* output_dir; /* NULL or empty: write no files */
    int write_vtk;          /* nonzero: per-step solution dumps under output_dir */
    int quiet;              /* nonzero: no progress lines on stdout */
} cutheat_run_options;

CUTHEAT_API const char* cutheat_version(void);

/* Message for the most recent failure on this thread ("" if none). */
CUTHEAT_API const char* cutheat_last_error(void);

/* Flat key=value config text; see the project README for the keys. */
CUTHEAT_API cutheat_status cutheat_config_parse_string(const char* text, cutheat_config** out);
CUTHEAT_API cutheat_status cutheat_config_parse_file(const char* path, cutheat_config** out);
CUTHEAT_API void cutheat_config_free(cutheat_config* config);

/* 1 if the config describes a convergence grid, 0 for a single run. */
CUTHEAT_API int cutheat_config_is_grid(const cutheat_config* config);

/* Runs the configured study. Grid cell failures are recorded per row and do
 * not abort the grid; a single-run failure (or a grid with no successful
 * cell) yields CUTHEAT_ERR_RUN. options may be NULL. */
CUTHEAT_API cutheat_status cutheat_execute(const cutheat_config* config,
                                           const cutheat_run_options* options,
                                           cutheat_report** out);
CUTHEAT_API void cutheat_report_free(cutheat_report* report);

CUTHEAT_API size_t cutheat_report_row_count(const cutheat_report* report);

/* Copies one result row. Output pointers may be NULL. Row status is "ok" or
 * an error tag; the returned pointer stays valid while the report lives. */
CUTHEAT_API cutheat_status cutheat_report_row(const cutheat_report* report, size_t index,
                                              double* h, double* dt, double* end_time_l2,
                                              double* l2l2, double* l2h1av);
CUTHEAT_API const char* cutheat_report_row_status(const cutheat_report* report, size_t index);

/* Fitted convergence orders; returns the number of fits, or fills the outputs
 * for the fit at index when the pointers are given. norm/protocol pointers
 * stay valid while the report lives. */
CUTHEAT_API size_t cutheat_report_fit_count(const cutheat_report* report);
CUTHEAT_API cutheat_status cutheat_report_fit(const cutheat_report* report, size_t index,
                                              const char** norm, const char** protocol,
                                              double* order, int* usable);

/* Human-readable table mirroring summary.txt; free with cutheat_string_free. */
CUTHEAT_API cutheat_status cutheat_report_summary(const cutheat_report* report, char** out_text);
CUTHEAT_API void cutheat_string_free(char* text);

/* Writes errors.csv, eoc.csv, summary.txt and plot.gnuplot into the directory. */
CUTHEAT_API cutheat_status cutheat_report_write(const cutheat_report* report,
                                                const char* output_dir);

#ifdef __cplusplus
}
#endif

#endif /* CUTHEAT_H */
