#pragma once
#include <cstdint>
#include <string>

#include "corrtomo/config.hpp"
#include "corrtomo/measurement.hpp"
#include "corrtomo/states.hpp"

namespace corrtomo {

// Common run parameters shared by all drivers. threads bounds the worker
// pool; seed controls the finite-sample draws (ignored in exact mode).
struct RunContext {
    std::string out_dir = ".";
    int threads = 1;
    std::uint64_t seed = 0;
};

// Physics objects assembled from a validated configuration.
struct Experiment {
    ModeBasis basis;
    MeasurementContext ctx;
    GaussianState state; // vacuum placeholder when state.kind == "fock"
};

Experiment build_experiment(const Config& cfg);

// Time-local correlation heat map g(dt_a, dt_b, 0, 0) over the scan grid.
// Writes scan.csv / scan.json (bit-exact round-trip format).
void run_correlation_scan(const Config& cfg, const RunContext& rc);

// Covariance reconstruction from the standard setting list. Writes
// reconstruction.json (rank, singular values, projected covariance) and
// modes.csv (retained mode spectra on the frequency grid).
void run_reconstruction(const Config& cfg, const RunContext& rc);

// Joint (x_a, p_b) density panels of the configured photon-number state for
// each arm-b delay. Writes fock_panel_<i>.csv/.json and fock_sigma.csv.
void run_fock_panels(const Config& cfg, const RunContext& rc);

// Entanglement diagnostics of the detected two-mode state over the scan
// grid. Writes analysis.csv.
void run_analysis(const Config& cfg, const RunContext& rc);

} // namespace corrtomo
