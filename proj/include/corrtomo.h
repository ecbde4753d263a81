/* C interface to the correlation-tomography library.
 *
 * All entry points return a status code:
 *   CT_OK          (0) success
 *   CT_ERR_CONFIG  (2) configuration parse or validation failure
 *   CT_ERR_NUMERIC (3) numerical failure while running
 *
 * On failure, a human-readable message is copied (truncated, always
 * NUL-terminated) into the caller-supplied error buffer when one is given.
 * Configurations are held behind an opaque handle owned by the caller.
 */
#ifndef CORRTOMO_H
#define CORRTOMO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum ct_status {
    CT_OK = 0,
    CT_ERR_CONFIG = 2,
    CT_ERR_NUMERIC = 3
};

typedef struct ct_config ct_config;

/* Parse and validate a configuration from a JSON string or file. On success
 * *out receives a handle that must be released with ct_config_free. */
int ct_config_parse(const char* json_text, ct_config** out,
                    char* err, size_t err_len);
int ct_config_load(const char* path, ct_config** out,
                   char* err, size_t err_len);
void ct_config_free(ct_config* cfg);

/* Serialize a configuration back to JSON. Returns a heap string to release
 * with ct_string_free, or NULL on allocation failure. */
char* ct_config_serialize(const ct_config* cfg);
void ct_string_free(char* s);

/* Experiment drivers. Each writes its data files into out_dir (created by
 * the caller), runs on up to `threads` workers, and uses `seed` for any
 * finite-sample draws. */
int ct_run_scan(const ct_config* cfg, const char* out_dir, int threads,
                uint64_t seed, char* err, size_t err_len);
int ct_run_reconstruction(const ct_config* cfg, const char* out_dir,
                          int threads, uint64_t seed,
                          char* err, size_t err_len);
int ct_run_fock(const ct_config* cfg, const char* out_dir, int threads,
                uint64_t seed, char* err, size_t err_len);
int ct_run_analysis(const ct_config* cfg, const char* out_dir, int threads,
                    uint64_t seed, char* err, size_t err_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CORRTOMO_H */
