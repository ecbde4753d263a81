#pragma once
#include <Eigen/Dense>
#include "corrtomo/modes.hpp"
#include "corrtomo/symplectic.hpp"

namespace corrtomo {

// Gaussian state in the (x_0..x_{N-1}, p_0..p_{N-1}) phase-space ordering,
// vacuum normalization Sigma = I/2.
struct GaussianState {
    Eigen::VectorXd mu;
    Eigen::MatrixXd cov;
    int n_modes() const { return static_cast<int>(mu.size()) / 2; }
};

GaussianState vacuum(int n_modes);

// Single thermal mode g0(omega) proportional to the Bose-Einstein occupancy
// at temperature T, completed with vacuum in the orthogonal complement. The
// scalar occupancy is fixed by the band-integrated Bose-Einstein density.
GaussianState thermal_state(double temperature_k, const ModeBasis& basis,
                            double* projection_residual = nullptr);

// Covariance of the squeezed vacuum M^T Sigma_vac M.
GaussianState multimode_squeezed_vacuum(const Eigen::MatrixXd& M);

// Sigma = (sx - 1/2) zx zx^T + (sp - 1/2) zp zp^T + I/2 for orthonormal
// broadband quadrature vectors zx, zp.
GaussianState single_mode_squeezed(double sx, double sp, const Eigen::VectorXd& zx,
                                   const Eigen::VectorXd& zp);

// Single-temporal-mode Fock state descriptor: photon number plus the
// Laguerre-Gauss spectral parameters of the occupied mode.
struct FockStateSpec {
    int n = 0;
    double sigma = 0.0; // angular
    double k = 0.0;
};

// Basis coefficients of the normalized Fock mode spectrum (x-slot profile).
Eigen::VectorXd fock_mode_coefficients(const FockStateSpec& spec, const ModeBasis& basis,
                                       double* projection_residual = nullptr);

// Multimode Wigner function W(zeta) = (-1)^n L_n(2 |P_ph zeta|^2) W_vac(zeta),
// where P_ph projects onto the Fock-mode phase-space plane.
double fock_wigner(const FockStateSpec& spec, const ModeBasis& basis,
                   const Eigen::VectorXd& zeta);

} // namespace corrtomo
