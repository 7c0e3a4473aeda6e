/* C interface to the wzns solver and experiments. All functions return a
 * wzns_status; on failure wzns_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller
 * and released with wzns_string_free. */
#ifndef WZNS_H
#define WZNS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define WZNS_API __declspec(dllexport)
#else
#define WZNS_API __attribute__((visibility("default")))
#endif

typedef enum wzns_status {
    WZNS_OK = 0,
    WZNS_INVALID_ARGUMENT = 1,
    WZNS_INVALID_TRUNCATION = 2,
    WZNS_SHELL_TRUNCATED = 3,
    WZNS_UNKNOWN_MODE = 4,
    WZNS_INCOMPLETE_ENSEMBLE = 5,
    WZNS_REFINE_FIRST = 6,
    WZNS_GRID_INCOMPATIBLE = 7,
    WZNS_UNDEFINED_SEMINORM = 8,
    WZNS_SYMMETRY = 9,
    WZNS_CONFIGURATION = 10,
    WZNS_TIME_RANGE = 11,
    WZNS_IO = 12,
    WZNS_UNSUPPORTED_VERSION = 13,
    WZNS_UNKNOWN_KEY = 14,
    WZNS_CONSTRAINT = 15,
    WZNS_VALIDATION_FAILED = 16,
    WZNS_INTERNAL = 99
} wzns_status;

typedef struct wzns_config wzns_config;
typedef struct wzns_report wzns_report;

WZNS_API const char* wzns_version(void);
WZNS_API const char* wzns_status_name(int status);
/* Message of the last failed call on this thread ("" if none). */
WZNS_API const char* wzns_last_error(void);
/* JSON error record for the last failed call on this thread. */
WZNS_API int wzns_last_error_record(char** out);
WZNS_API void wzns_string_free(char* s);

WZNS_API int wzns_config_create(wzns_config** out);
WZNS_API void wzns_config_destroy(wzns_config* config);
WZNS_API int wzns_config_load_file(wzns_config* config, const char* path);
WZNS_API int wzns_config_load_text(wzns_config* config, const char* text);
/* key may be "section.key" or a bare key. */
WZNS_API int wzns_config_set(wzns_config* config, const char* key, const char* value);
/* Resolved configuration as key=value lines, plus out=. */
WZNS_API int wzns_config_text(const wzns_config* config, char** out);
WZNS_API int wzns_config_hash(const wzns_config* config, uint64_t* out);
WZNS_API int wzns_config_validate(const wzns_config* config, const char* command);
/* Newline-separated list of valid keys. */
WZNS_API int wzns_valid_keys(char** out);

/* Runs a subcommand (simulate, wz-convergence, scaling-limit, lifespan,
 * rough-diagnostics, validate). write_files != 0 writes the output
 * directory. For validate, a failing check yields WZNS_VALIDATION_FAILED
 * with *out still set. */
WZNS_API int wzns_run(const wzns_config* config, const char* command, int write_files, wzns_report** out);
WZNS_API void wzns_report_destroy(wzns_report* report);
WZNS_API int wzns_report_json(const wzns_report* report, char** out);
WZNS_API int wzns_report_records_csv(const wzns_report* report, char** out);
WZNS_API int wzns_report_shape(const wzns_report* report, size_t* records, size_t* columns);
WZNS_API int wzns_report_column_name(const wzns_report* report, size_t column, char** out);
WZNS_API int wzns_report_value(const wzns_report* report, size_t record, size_t column, double* out);

#ifdef __cplusplus
}
#endif

#endif
