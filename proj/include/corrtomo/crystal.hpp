#pragma once
#include <Eigen/Dense>
#include <optional>
#include <vector>
#include "corrtomo/modes.hpp"
#include "corrtomo/symplectic.hpp"

namespace corrtomo {

// Sellmeier coefficients n(w) = sqrt(a + b (2 pi c)^2 / ((2 pi c)^2 - w^2 gamma))
struct SellmeierSet {
    double a = 4.27;
    double b = 3.01;
    double gamma = 0.142e-12; // m^2
};

enum class CrystalProfile { rect, gaussian_exp, cos_poled };

struct CrystalConfig {
    double length = 20e-6;                      // m
    CrystalProfile profile = CrystalProfile::rect;
    double poling_period = 0.0;                 // m, cos_poled only
    double beam_area = 0.0;                     // m^2; default pi*(3 um)^2 if 0
    double r41 = 4e-12;                         // m/V
    SellmeierSet sellmeier;                     // s-polarized field
    std::optional<SellmeierSet> birefringent_z; // z-polarized, if distinct
};

// probe/pump spectral shape: f_alpha = fundamental_spectrum(sigma, k, w)
struct ProbeSpectrum {
    double sigma = 0.0;
    double k = 0.0;
};

double sellmeier_pole(const SellmeierSet& s);
double refractive_index(const SellmeierSet& s, double omega);
double group_index(const SellmeierSet& s, double omega);      // d(w n)/dw
double dispersion_param(const SellmeierSet& s, double omega); // d^2(w n)/dw^2

double beam_area(const CrystalConfig& c);
// coupling strength lambda = A eps0 d / 2 with d = -n^4(probe center) r41
double coupling_lambda(const CrystalConfig& c, double probe_center);

// FT of the longitudinal interaction profile at wave-vector mismatch k,
// including the lambda scale.
double crystal_profile_ft(const CrystalConfig& c, double k, double lambda);

// wave-vector mismatch for the sum-frequency process
double wavevector_mismatch(const CrystalConfig& c, double Omega, double omega);

// pointwise squeezing/beam-splitting kernels
struct KernelValues {
    double S;
    double B;
};
KernelValues kernels(double Omega, double omega, const CrystalConfig& c, const ProbeSpectrum& probe);

struct NonlinearCouplings {
    Eigen::MatrixXd S; // symmetric (real probe)
    Eigen::MatrixXd B; // antisymmetric (real probe)
    double quadrature_rel_error;
};

NonlinearCouplings discretize_couplings(const ModeBasisParams& basis,
                                        const CrystalConfig& c,
                                        const ProbeSpectrum& probe);

// G_NL for a real probe: block-diagonal [-(S - B), 0; 0, S + B]
Eigen::MatrixXd nl_generator(const NonlinearCouplings& nc);

// M_NL(alpha) = exp(alpha G): a negative amplitude is the pi-phase probe,
// which flips the kernel signs, so the sign rides on the exponent.
SymplecticMatrix nl_symplectic(const Eigen::MatrixXd& G, double alpha);

// leading 2x2 Schur block of the x-quadrature generator, [[a, -b], [c, a]];
// index locates the corresponding pair of Schur modes
struct TruncatedSchurBlock {
    double a;
    double b;
    double c;
    int index;
};

// first complex-conjugate 2x2 block of the sorted x-block Schur form (the
// largest-real-part blocks can be real squeezing eigenvalues, which carry no
// beam-splitting rotation)
TruncatedSchurBlock leading_schur_block(const Eigen::MatrixXd& T);

// Re-expresses a 2x2 block taken from the Schur form of the p-quadrature
// block in the x-block parametrization used by the truncated closed form.
// Blocks from the x-block Schur form pass through unchanged.
TruncatedSchurBlock to_x_orientation(const TruncatedSchurBlock& blk, PhaseBlock source);

// closed-form exp(alpha * T_trunc) on the 4-dim (x1,x2,p1,p2) subspace,
// valid for b c > 0
Eigen::Matrix4d truncated_nl_closed_form(const TruncatedSchurBlock& blk, double alpha);

// optimal probe amplitude from the two leading Schur-mode components of the
// LO; both atan branches are returned (principal and "second solution").
struct ProbeOptimum {
    double alpha_principal;
    double alpha_second;
};
ProbeOptimum optimize_probe_amplitude(double c1, double c2, const TruncatedSchurBlock& blk,
                                      PhaseBlock quadrature);

// amplitude at which the second Magnus order matches the first
double magnus_threshold(const CrystalConfig& c, double probe_center);

// quasi-phase-matching curve: values of 2*upsilon = omega - Omega solving
// zero mismatch at sum frequency 2*xi, for the +-2pi/Lambda lattice vectors
struct QpmPoint {
    double xi;
    double two_upsilon; // NaN when the radicand is negative
};
std::vector<QpmPoint> qpm_curve(const std::vector<double>& xi_grid,
                                const CrystalConfig& c, double pump_center,
                                int lattice_sign);

} // namespace corrtomo
