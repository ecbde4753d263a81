#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include "corrtomo/quadrature.hpp"

namespace corrtomo {

// Laguerre-Gauss spectral mode basis on [0, inf). sigma is angular (rad/s),
// k > 0 sets the number of optical cycles, i_max is the number of retained
// modes (indices 0..i_max-1 are used in matrix contexts).
struct ModeBasisParams {
    double sigma = 0.0;
    double k = 0.0;
    int i_max = 1;
};

enum class CycleRegime { subcycle, single_cycle, multicycle };

void validate(const ModeBasisParams& p);

// Fundamental spectral profile f_0(omega).
double fundamental_spectrum(double sigma, double k, double omega);

// Normalized Laguerre factors L~_i(omega) for i = 0..i_max-1 (three-term
// recurrence on L_i^{(k-1/2)}).
Eigen::VectorXd laguerre_factors(double sigma, double k, int i_max, double omega);

// f_i(omega) for a single index.
double mode_function(const ModeBasisParams& p, int i, double omega);

// All f_i(omega), i = 0..i_max-1.
Eigen::VectorXd mode_functions(const ModeBasisParams& p, double omega);

// Exact Gamma-ratio center frequency and FWHM-type bandwidth of f_0, plus the
// large-k approximants.
struct CenterBandwidth {
    double center;
    double bandwidth;
};
CenterBandwidth center_and_bandwidth(double sigma, double k);
CenterBandwidth center_and_bandwidth_approx(double sigma, double k);

// Invert (center, bandwidth) -> (sigma, k). The center/bandwidth ratio is a
// strictly increasing function of k, so k is found by bisection and sigma by
// the Gamma-ratio.
ModeBasisParams params_from_center_bandwidth(double center, double bandwidth, int i_max);

CycleRegime cycle_regime(double k);
const char* cycle_regime_name(CycleRegime r);

// Time-domain fundamental mode f_0(t) (unitary Fourier convention on the
// positive-frequency spectrum), confluent-hypergeometric closed form.
std::complex<double> time_domain_fundamental(double sigma, double k, double t);

// Even/odd real time-domain waveforms of mode i such that
// integral (f_e^2 + f_o^2) dt / 2 = 1 for a unit-norm spectral mode.
struct EvenOdd {
    double even;
    double odd;
};

// Cutoff used for all frequency-domain quadrature; grows with i_max so that
// the classically-allowed region of the highest Laguerre mode is covered.
double omega_cutoff(const ModeBasisParams& p);

// Precomputed quadrature grid + mode values; the workhorse for all overlap
// integrals in the rest of the library.
class ModeBasis {
public:
    explicit ModeBasis(const ModeBasisParams& params);

    const ModeBasisParams& params() const { return params_; }
    const CompositeRule& rule() const { return rule_; }
    // F(i, q) = f_i(omega_q), i_max x n_nodes
    const Eigen::MatrixXd& values() const { return F_; }

    int n_modes() const { return params_.i_max; }
    int n_nodes() const { return rule_.size(); }

    // Gram matrix of the modes under the grid (identity up to quadrature error).
    Eigen::MatrixXd gram() const;
    // omega~_ij = integral omega f_i f_j domega
    Eigen::MatrixXd frequency_matrix() const;

    // Projection of a (complex) spectral function onto the basis.
    struct Projection {
        Eigen::VectorXcd coeffs;
        double residual; // 1 - |c|^2 / |spectrum|^2
    };
    Projection project(const std::function<std::complex<double>(double)>& spectrum) const;

    // Time-domain transform of mode i at time t via grid quadrature.
    std::complex<double> time_domain_mode(int i, double t) const;
    EvenOdd even_odd_time_modes(int i, double t) const;

private:
    ModeBasisParams params_;
    CompositeRule rule_;
    Eigen::MatrixXd F_;
};

} // namespace corrtomo
