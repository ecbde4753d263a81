// Command-line front end for the correlation-tomography library.
//
// Verbs: scan, reconstruct, fock, analyze, validate-config.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "corrtomo.h"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* sub, CommonOpts& opts, bool with_run_flags) {
    sub->add_option("--config", opts.config_path, "Experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_run_flags) {
        sub->add_option("--out", opts.out_dir, "Output directory")
            ->capture_default_str();
        sub->add_option("--threads", opts.threads, "Worker thread count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", opts.seed, "RNG seed for sampled scans")
            ->capture_default_str();
    }
}

using ConfigPtr = std::unique_ptr<ct_config, decltype(&ct_config_free)>;

// Loads and validates the config; on failure prints the message and returns
// the library status, leaving *out null.
int load(const CommonOpts& opts, ConfigPtr& out) {
    char err[4096];
    ct_config* raw = nullptr;
    int rc = ct_config_load(opts.config_path.c_str(), &raw, err, sizeof err);
    if (rc != CT_OK) {
        std::fprintf(stderr, "config error: %s\n", err);
        return rc;
    }
    out.reset(raw);
    return CT_OK;
}

using Driver = int (*)(const ct_config*, const char*, int, std::uint64_t,
                       char*, size_t);

int run_driver(Driver driver, const CommonOpts& opts) {
    ConfigPtr cfg(nullptr, ct_config_free);
    int rc = load(opts, cfg);
    if (rc != CT_OK)
        return rc;
    char err[4096];
    rc = driver(cfg.get(), opts.out_dir.c_str(), opts.threads, opts.seed,
                err, sizeof err);
    if (rc != CT_OK)
        std::fprintf(stderr, "%s\n", err);
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-arm quadrature correlation simulator and reconstructor"};
    app.require_subcommand(1);

    CommonOpts scan_opts, rec_opts, fock_opts, an_opts, val_opts;

    auto* scan = app.add_subcommand(
        "scan", "Simulate a time-local correlation scan over the delay grid");
    add_common(scan, scan_opts, true);

    auto* rec = app.add_subcommand(
        "reconstruct", "Reconstruct the state covariance from a setting grid");
    add_common(rec, rec_opts, true);

    auto* fock = app.add_subcommand(
        "fock", "Joint quadrature density panels for a photon-number state");
    add_common(fock, fock_opts, true);

    auto* an = app.add_subcommand(
        "analyze", "Entanglement diagnostics of the detected two-mode state");
    add_common(an, an_opts, true);

    auto* val = app.add_subcommand(
        "validate-config", "Parse and validate a config, then print it");
    add_common(val, val_opts, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        // CLI11's own exit code for bad usage is remapped onto the
        // config-error code; --help stays 0.
        return rc == 0 ? 0 : CT_ERR_CONFIG;
    }

    if (scan->parsed())
        return run_driver(&ct_run_scan, scan_opts);
    if (rec->parsed())
        return run_driver(&ct_run_reconstruction, rec_opts);
    if (fock->parsed())
        return run_driver(&ct_run_fock, fock_opts);
    if (an->parsed())
        return run_driver(&ct_run_analysis, an_opts);

    // validate-config: load already validates; echo the normalized form.
    ConfigPtr cfg(nullptr, ct_config_free);
    int rc = load(val_opts, cfg);
    if (rc != CT_OK)
        return rc;
    char* text = ct_config_serialize(cfg.get());
    if (!text) {
        std::fprintf(stderr, "serialization failed\n");
        return CT_ERR_NUMERIC;
    }
    std::printf("%s\n", text);
    ct_string_free(text);
    return 0;
}
