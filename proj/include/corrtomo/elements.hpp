#pragma once
#include <Eigen/Dense>
#include <complex>
#include <functional>
#include "corrtomo/modes.hpp"

namespace corrtomo {

// Wave plate with retardance Phi, rotated so that the two output
// polarization weights are balanced; the LO then picks up the effective
// phase shift stored here.
struct WavePlateSetting {
    double retardance;      // Phi
    double rotation;        // theta
    double effective_phase; // phi'
};

WavePlateSetting waveplate_balance(double Phi);

// Polarization mixing weights at (Phi, theta).
std::pair<std::complex<double>, std::complex<double>> waveplate_weights(double Phi, double theta);

// Block phase-space rotation R(phi) = [[c I, -s I], [s I, c I]].
Eigen::MatrixXd rotation(int N, double phi);

// Delay generator G = dt * [[0, W], [-W, 0]] for the frequency matrix W.
Eigen::MatrixXd delay_generator(double dt, const Eigen::MatrixXd& omega_tilde);

// Fast delay transforms via one eigendecomposition of the frequency matrix:
// exp(G_dt) = [[cos(W dt), sin(W dt)], [-sin(W dt), cos(W dt)]].
class DelayPropagator {
public:
    explicit DelayPropagator(const Eigen::MatrixXd& omega_tilde);
    int n_modes() const { return static_cast<int>(lambda_.size()); }
    Eigen::MatrixXd matrix(double dt) const;
    // M(dt)^T z without forming the full matrix
    Eigen::VectorXd apply_transpose(double dt, const Eigen::VectorXd& z) const;

private:
    Eigen::MatrixXd Q_;
    Eigen::VectorXd lambda_;
};

// LO phase-space vector: x-slots Re, p-slots Im of the basis projections of
// eta(omega) * amplitude(omega). Pass nullptr efficiency for eta == 1.
Eigen::VectorXd lo_vector(const ModeBasis& basis,
                          const std::function<std::complex<double>(double)>& amplitude,
                          const std::function<double(double)>* efficiency = nullptr,
                          double* residual_out = nullptr);

// zeta(dt, alpha, phi) = M^T(dt) M_NL^T R^T(phi) zeta.
// M_NL is the pre-exponentiated crystal transform for the probe amplitude in
// use; pass nullptr for plain homodyne (alpha = 0).
Eigen::VectorXd transformed_lo(const Eigen::VectorXd& zeta,
                               const DelayPropagator& delay, double dt,
                               const Eigen::MatrixXd* M_NL, double phi);

} // namespace corrtomo
