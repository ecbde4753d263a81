#pragma once
#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "corrtomo/measurement.hpp"

namespace corrtomo {

// Result of the pseudoinverse covariance reconstruction, expressed in the
// orthogonalized measurement-mode coordinates (columns of U).
struct ReconstructionResult {
    Eigen::MatrixXd projected_cov; // P Sigma_U P + (vacuum completion where retained)
    Eigen::MatrixXd U;             // 2N x k orthogonal mode map (k = min(2N, m))
    Eigen::MatrixXd P;             // k x k diagonal projector onto retained directions
    int rank = 0;
    Eigen::VectorXd singular_values; // of Z_LO, descending
    double cutoff = 0.0;             // relative threshold used
};

// Columns are the state-part measurement vectors for each setting.
Eigen::MatrixXd assemble_lo_matrix(const std::vector<MeasurementSetting>& gamma,
                                   const MeasurementContext& ctx);

// SVD of Z_LO with a relative singular-value cutoff (default 1e-3), then
// projected_cov = Splus V^T corr V Splus + P/2 in the U-mode coordinates.
ReconstructionResult reconstruct(const Eigen::MatrixXd& corr, const Eigen::MatrixXd& Z_LO,
                                 double relative_cutoff = 1e-3);

// Retained orthogonalized mode spectra sampled on the basis quadrature grid;
// row i is mode i, complex value combining the x (real) and p (imaginary)
// phase-space components.
Eigen::MatrixXcd reconstructed_mode_functions(const ReconstructionResult& result,
                                              const ModeBasis& basis);

// Intensity-weighted mean frequency of a sampled mode spectrum.
double mode_centroid(const Eigen::VectorXcd& mode_values, const ModeBasis& basis);

// Time-local (equal-delay) samples of both wave-plate settings.
struct TimeLocalData {
    std::vector<double> delays; // seconds
    Eigen::VectorXd g0;         // g(dt, dt, 0, 0)
    Eigen::VectorXd g90;        // g(dt, dt, pi/2, pi/2)
};

struct SingleModeReconstruction {
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    Eigen::VectorXd zeta_x; // unit-norm broadband quadrature vectors (sign is
    Eigen::VectorXd zeta_p; // arbitrary: the covariance is quadratic in them)
    double ratio = 0.0;     // (sigma_x - 1/2)/(sigma_p - 1/2)
    double kappa = 0.0;
};

// Time-local reconstruction of a broadband single-mode squeezed state from
// equal-delay measurements. X_LO rows are the phi = 0 measurement vectors at
// the same delays (the LO is assumed phase-aligned at dt = 0 so that it has
// no component along the p-type broadband quadrature there).
SingleModeReconstruction reconstruct_single_mode(const TimeLocalData& data,
                                                 const Eigen::MatrixXd& X_LO);

// Global LO phase maximizing |g(0,0,phi,phi) - g(0,0,phi+pi/2,phi+pi/2)|,
// which enforces the dt = 0 alignment assumed by reconstruct_single_mode.
double align_lo_phase(const GaussianState& state, const MeasurementContext& ctx,
                      int scan_points = 720);

// Finite-sample estimate of the correlation matrix from synthetic Gaussian
// phase-space draws (state plus independent vacuum port); converges to
// correlation_matrix as draws grows.
Eigen::MatrixXd sampled_correlation_matrix(const GaussianState& state,
                                           const MeasurementContext& ctx,
                                           const std::vector<MeasurementSetting>& gamma,
                                           int draws, std::uint64_t seed);

} // namespace corrtomo
