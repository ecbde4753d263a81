#include "corrtomo.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "corrtomo/config.hpp"
#include "corrtomo/runner.hpp"
#include "corrtomo/symplectic.hpp"

struct ct_config {
    corrtomo::Config cfg;
};

namespace {

void copy_error(const char* msg, char* err, size_t err_len) {
    if (!err || err_len == 0)
        return;
    std::strncpy(err, msg, err_len - 1);
    err[err_len - 1] = '\0';
}

// Runs a callable and maps exceptions onto the status codes: configuration
// problems -> CT_ERR_CONFIG, everything else -> CT_ERR_NUMERIC.
template <typename Fn>
int guarded(Fn&& fn, char* err, size_t err_len) {
    try {
        fn();
        return CT_OK;
    } catch (const corrtomo::ConfigError& e) {
        copy_error(e.what(), err, err_len);
        return CT_ERR_CONFIG;
    } catch (const std::exception& e) {
        copy_error(e.what(), err, err_len);
        return CT_ERR_NUMERIC;
    } catch (...) {
        copy_error("unknown failure", err, err_len);
        return CT_ERR_NUMERIC;
    }
}

corrtomo::RunContext make_context(const char* out_dir, int threads,
                                  uint64_t seed) {
    corrtomo::RunContext rc;
    if (out_dir && *out_dir)
        rc.out_dir = out_dir;
    rc.threads = threads > 0 ? threads : 1;
    rc.seed = seed;
    return rc;
}

} // namespace

extern "C" {

int ct_config_parse(const char* json_text, ct_config** out,
                    char* err, size_t err_len) {
    if (!json_text || !out) {
        copy_error("null argument", err, err_len);
        return CT_ERR_CONFIG;
    }
    *out = nullptr;
    return guarded(
        [&] { *out = new ct_config{corrtomo::parse_config(json_text)}; },
        err, err_len);
}

int ct_config_load(const char* path, ct_config** out,
                   char* err, size_t err_len) {
    if (!path || !out) {
        copy_error("null argument", err, err_len);
        return CT_ERR_CONFIG;
    }
    *out = nullptr;
    return guarded(
        [&] { *out = new ct_config{corrtomo::load_config(path)}; },
        err, err_len);
}

void ct_config_free(ct_config* cfg) {
    delete cfg;
}

char* ct_config_serialize(const ct_config* cfg) {
    if (!cfg)
        return nullptr;
    try {
        std::string text = corrtomo::serialize_config(cfg->cfg);
        char* out = new (std::nothrow) char[text.size() + 1];
        if (out)
            std::memcpy(out, text.c_str(), text.size() + 1);
        return out;
    } catch (...) {
        return nullptr;
    }
}

void ct_string_free(char* s) {
    delete[] s;
}

int ct_run_scan(const ct_config* cfg, const char* out_dir, int threads,
                uint64_t seed, char* err, size_t err_len) {
    if (!cfg) {
        copy_error("null config", err, err_len);
        return CT_ERR_CONFIG;
    }
    return guarded(
        [&] {
            corrtomo::run_correlation_scan(cfg->cfg,
                                           make_context(out_dir, threads, seed));
        },
        err, err_len);
}

int ct_run_reconstruction(const ct_config* cfg, const char* out_dir,
                          int threads, uint64_t seed,
                          char* err, size_t err_len) {
    if (!cfg) {
        copy_error("null config", err, err_len);
        return CT_ERR_CONFIG;
    }
    return guarded(
        [&] {
            corrtomo::run_reconstruction(cfg->cfg,
                                         make_context(out_dir, threads, seed));
        },
        err, err_len);
}

int ct_run_fock(const ct_config* cfg, const char* out_dir, int threads,
                uint64_t seed, char* err, size_t err_len) {
    if (!cfg) {
        copy_error("null config", err, err_len);
        return CT_ERR_CONFIG;
    }
    return guarded(
        [&] {
            corrtomo::run_fock_panels(cfg->cfg,
                                      make_context(out_dir, threads, seed));
        },
        err, err_len);
}

int ct_run_analysis(const ct_config* cfg, const char* out_dir, int threads,
                    uint64_t seed, char* err, size_t err_len) {
    if (!cfg) {
        copy_error("null config", err, err_len);
        return CT_ERR_CONFIG;
    }
    return guarded(
        [&] {
            corrtomo::run_analysis(cfg->cfg,
                                   make_context(out_dir, threads, seed));
        },
        err, err_len);
}

} // extern "C"
