#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrtomo/crystal.hpp"
#include "corrtomo/modes.hpp"

namespace corrtomo {

// Invalid or inconsistent experiment configuration. The CLI maps this to its
// configuration-error exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All config-facing frequencies are linear frequencies nu = omega / (2 pi) in
// THz; lengths in um, times in fs, temperatures in K. Conversion to angular
// rad/s happens when the physics objects are built.
struct SpectrumConfig {
    double sigma_thz = 100.0;
    double k = 0.5;
};

struct CrystalBlock {
    double length_um = 20.0;
    std::string profile = "rect"; // rect | gaussian_exp | cos_poled
    double poling_period_um = 0.0;
    double beam_area_um2 = 0.0; // 0: default
    double r41_pm_v = 4.0;
    SpectrumConfig probe;
    double alpha = 0.0; // probe amplitude in the detection path
};

struct StateBlock {
    std::string kind = "vacuum"; // vacuum | thermal | mmsv | smsv | fock
    // thermal
    double temperature_k = 1000.0;
    // mmsv: squeezing strength and the engineered-crystal pump driving it
    double alpha_gx = 0.0;
    CrystalBlock gx;
    // smsv
    double sigma_x = 0.5;
    double sigma_p = 0.5;
    std::optional<SpectrumConfig> mode; // smsv / fock temporal mode; default: LO
    // fock
    int n = 0;
};

struct ScanBlock {
    double delay_window_fs = 12.0;
    int n_delays = 11;
    int dphi_sign = +1;
    long draws = 0; // 0: exact second moments; >0: finite-sample estimate
};

struct FockBlock {
    int n = 3;
    double extent = 5.0;
    int grid = 101;
    double delay_a_fs = 0.0;
    std::vector<double> delay_b_fs = {0.0};
};

struct ReconstructionBlock {
    double relative_cutoff = 1e-3;
};

struct Config {
    SpectrumConfig basis;
    int i_max = 10;
    std::optional<SpectrumConfig> lo; // defaults to basis spectrum
    std::optional<CrystalBlock> crystal;
    StateBlock state;
    ScanBlock scan;
    FockBlock fock;
    ReconstructionBlock reconstruction;
};

// Parse / serialize the JSON experiment description. parse validates and
// throws ConfigError listing every violated constraint.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& cfg);
void validate(const Config& cfg);

// Builders from the validated description to the physics objects.
ModeBasisParams basis_params(const Config& cfg);
CrystalConfig crystal_config(const CrystalBlock& blk);
ProbeSpectrum probe_spectrum(const SpectrumConfig& s);

} // namespace corrtomo
