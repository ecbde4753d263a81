#pragma once
#include <Eigen/Dense>
#include <string>

#include "corrtomo/measurement.hpp"
#include "corrtomo/states.hpp"

namespace corrtomo {

// Geometry of the joint (x_a, p_b) homodyne correlation measurement: the LO
// matrix, the linear outcome-to-phase-space map, and the kernel covariance.
struct DetectionGeometry {
    double dt_a = 0.0, dt_b = 0.0;
    Eigen::VectorXd za;          // LO vector of the x_a outcome (phi = pi/2 leg)
    Eigen::VectorXd zb;          // LO vector of the p_b outcome (phi = 0 leg)
    Eigen::MatrixXd P_LO;        // za za^T + zb zb^T
    Eigen::MatrixXd sigma_d_inv; // kernel inverse covariance
    Eigen::VectorXd zeta_d_x;    // zeta_d(x_a, p_b) = x_a zeta_d_x + p_b zeta_d_p
    Eigen::VectorXd zeta_d_p;
    double cross = 0.0;         // za . zb (zero for coincident delays)
    double envelope_norm = 0.0; // ||za - zb||
};

// Homodyne-only (no crystal in the context).
DetectionGeometry detection_geometry(double dt_a, double dt_b, const MeasurementContext& ctx);

// Multivariate Gaussian measurement kernel K(x_a, p_b | zeta), normalized so
// that it integrates to one over the outcomes for any fixed zeta.
double kernel_value(const DetectionGeometry& g, double x_a, double p_b,
                    const Eigen::VectorXd& zeta);

// Schur-complement statistics of the measurement restricted to the phase-space
// plane of a single-temporal-mode Fock state.
struct SchurStats {
    DetectionGeometry geom;
    double sigma_x = 0.0, sigma_p = 0.0; // singular values of the inverse Schur block
    Eigen::VectorXd e_x, e_p;            // principal directions in the Fock plane
    Eigen::MatrixXd zeta_dph_map;        // 2N x 2: (x_a, p_b) -> zeta_dph
    Eigen::MatrixXd env_quadform;        // complement pseudo-inverse in the envelope exponent
    double log_env_const = 0.0;          // log of the constant envelope prefactor
};

SchurStats schur_stats(const DetectionGeometry& g, const FockStateSpec& spec,
                       const ModeBasis& basis);

// Normalization envelope N(x_a, p_b).
double envelope(const SchurStats& s, double x_a, double p_b);

// Exact joint density of the correlation measurement of an n-photon state.
double fock_joint_pdf(double x_a, double p_b, const SchurStats& s, int n);

// Equal-singular-value case: the detected photon-number mixture bin(k; p, n)
// with detection probability p = sigma/4.
Eigen::VectorXd binomial_mixture_check(const SchurStats& s, int n, double tol = 1e-6);

// Closed-form density reassembled from the Husimi mixture of the equal
// singular-value case; must agree with fock_joint_pdf.
double fock_mixture_pdf(double x_a, double p_b, const SchurStats& s, int n);

// One-arm-vacuum case (sigma_p near 2): density from the Hermite-squared
// convolution integral along the zeta_dph . e_p = 0 slice.
double hermite_limit_pdf(double x_a, double p_b, const SchurStats& s, int n, double tol = 5e-2);

// CSV export `x_a, p_b, density` over a uniform grid, plus a JSON header with
// the geometry and singular values.
void write_pdf_csv(const SchurStats& s, int n, double extent, int grid,
                   const std::string& csv_path, const std::string& json_path);

} // namespace corrtomo
