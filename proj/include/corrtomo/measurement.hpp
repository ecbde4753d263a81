#pragma once
#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "corrtomo/elements.hpp"
#include "corrtomo/states.hpp"

namespace corrtomo {

enum class Arm { a, b };

// One column of the setting list: delay plus wave-plate phase (0 -> x-type,
// pi/2 -> p-type measurement); the probe amplitude is common to both arms and
// lives in the context.
struct MeasurementSetting {
    double delay = 0.0; // seconds
    double phi = 0.0;   // radians
};

struct MeasurementVectors {
    Eigen::VectorXd state_part;  // coefficient of the signal quadratures
    Eigen::VectorXd vacuum_part; // coefficient of the beam-splitter vacuum port
};

// Precomputed measurement geometry: unit-norm LO, delay propagator, optional
// nonlinear crystal transform, and the per-arm reflection phase convention.
class MeasurementContext {
public:
    // M_NL: pre-exponentiated crystal transform (nullopt for homodyne).
    // dphi_sign = +1: arm a picks +pi/2 (main-text convention); -1 flips.
    MeasurementContext(const ModeBasis& basis, Eigen::VectorXd zeta_lo,
                       std::optional<Eigen::MatrixXd> M_NL = std::nullopt, int dphi_sign = +1);

    int n_modes() const { return prop_.n_modes(); }
    double arm_phase(Arm arm) const;

    Eigen::VectorXd state_part(Arm arm, const MeasurementSetting& s) const;
    MeasurementVectors vectors(Arm arm, const MeasurementSetting& s) const;

private:
    Eigen::VectorXd zeta_;
    DelayPropagator prop_;
    std::optional<Eigen::MatrixXd> mnl_;
    int dphi_sign_;
};

// g = zeta_LO^T(a) Sigma zeta_LO(b): the mean correlated signal of the two
// arms (the constant vacuum floor is retained, matching the time-local
// signal definition).
double correlation_signal(const GaussianState& state, const MeasurementContext& ctx,
                          const MeasurementSetting& set_a, const MeasurementSetting& set_b);

struct CorrelationDataset {
    std::vector<MeasurementSetting> gamma; // shared setting list of both arms
    Eigen::MatrixXd corr;                  // corr(i,j): arm-a setting i, arm-b setting j
    Eigen::MatrixXd signal;                // raw g(i,j) before vacuum subtraction
};

// Delay grid x {0, pi/2} setting list.
std::vector<MeasurementSetting> standard_settings(const std::vector<double>& delays);

// corr_ij = 1/2 <{q_a(G_i), q_b(G_j)}> = v_i^T Sigma v_j + w_i^T Sigma_vac w_j.
CorrelationDataset correlation_matrix(const GaussianState& state, const MeasurementContext& ctx,
                                      const std::vector<MeasurementSetting>& gamma);

// 4x4 covariance of (x_a, p_a, x_b, p_b) at the given delays, normalized so
// direct (crystal-free) detection of the vacuum yields exactly I/2; with a
// crystal the vacuum input detects as the crystal-squeezed vacuum.
Eigen::Matrix4d detected_state(const GaussianState& state, const MeasurementContext& ctx,
                               double dt_a, double dt_b);

// CSV (dt_a_fs, dt_b_fs, phi_a, phi_b, g) with a JSON sidecar carrying the
// setting list; round-trips bit-exactly.
void write_correlation_csv(const CorrelationDataset& ds, const std::string& csv_path,
                           const std::string& sidecar_json_path);
CorrelationDataset read_correlation_csv(const std::string& csv_path,
                                        const std::string& sidecar_json_path);

} // namespace corrtomo
