#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "corrtomo/symplectic.hpp"

namespace corrtomo {

// All functions take the detected 4x4 covariance in the (x_a, p_a, x_b, p_b)
// ordering with the internal vacuum normalization Sigma_vac = I/2; arm a is
// subsystem A, arm b subsystem B.

// Von Neumann entropy in bits from the symplectic spectrum.
double von_neumann_entropy(const Eigen::Matrix4d& sigma);

// Logarithmic negativity of the a|b bipartition,
// L = max{0, -log2(2 nu_min)} of the partially transposed covariance.
double logarithmic_negativity(const Eigen::Matrix4d& sigma);

// Gaussian quantum discord with an optimized Gaussian measurement on the
// indicated subsystem (closed form for two-mode states).
enum class MeasuredArm { a, b };
double gaussian_discord(const Eigen::Matrix4d& sigma, MeasuredArm measured = MeasuredArm::b);

// One heat-map sample of the three diagnostics.
struct AnalysisSample {
    double dt_a = 0.0; // seconds
    double dt_b = 0.0;
    double vne_bits = 0.0;
    double logneg = 0.0;
    double discord = 0.0;
};

// CSV export: dt_a_fs, dt_b_fs, vne_bits, logneg, discord.
void write_analysis_csv(const std::vector<AnalysisSample>& samples, const std::string& path);

} // namespace corrtomo
