#include "corrtomo/tomography.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "corrtomo/units.hpp"

namespace corrtomo {

Eigen::MatrixXd assemble_lo_matrix(const std::vector<MeasurementSetting>& gamma,
                                   const MeasurementContext& ctx) {
    if (gamma.empty()) throw std::invalid_argument("assemble_lo_matrix: empty setting list");
    const int m = static_cast<int>(gamma.size());
    Eigen::MatrixXd Z(2 * ctx.n_modes(), m);
    for (int i = 0; i < m; ++i) Z.col(i) = ctx.state_part(Arm::a, gamma[i]);
    return Z;
}

ReconstructionResult reconstruct(const Eigen::MatrixXd& corr, const Eigen::MatrixXd& Z_LO,
                                 double relative_cutoff) {
    const int m = static_cast<int>(Z_LO.cols());
    if (corr.rows() != m || corr.cols() != m)
        throw std::invalid_argument("reconstruct: corr/Z_LO dimension mismatch");
    if (Z_LO.cwiseAbs().maxCoeff() == 0.0)
        throw std::invalid_argument("reconstruct: all-zero measurement matrix");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z_LO, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd s = svd.singularValues();
    const int k = static_cast<int>(s.size());
    const double thresh = relative_cutoff * s(0);

    ReconstructionResult res;
    res.U = svd.matrixU();
    res.singular_values = s;
    res.cutoff = relative_cutoff;
    res.P = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd s_plus = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) {
        if (s(i) > thresh) {
            res.P(i, i) = 1.0;
            s_plus(i) = 1.0 / s(i);
            ++res.rank;
        }
    }

    const Eigen::MatrixXd VSp = svd.matrixV() * s_plus.asDiagonal();
    res.projected_cov = VSp.transpose() * corr * VSp + 0.5 * res.P;
    res.projected_cov = 0.5 * (res.projected_cov + res.projected_cov.transpose()).eval();
    return res;
}

Eigen::MatrixXcd reconstructed_mode_functions(const ReconstructionResult& result,
                                              const ModeBasis& basis) {
    const int N = basis.n_modes();
    if (result.U.rows() != 2 * N)
        throw std::invalid_argument("reconstructed_mode_functions: basis size mismatch");
    const auto& rule = basis.rule();
    Eigen::MatrixXcd modes(result.rank, rule.size());
    int row = 0;
    for (int i = 0; i < static_cast<int>(result.U.cols()); ++i) {
        if (result.P(i, i) == 0.0) continue;
        for (int q = 0; q < rule.size(); ++q) {
            std::complex<double> v(0.0, 0.0);
            for (int j = 0; j < N; ++j)
                v += std::complex<double>(result.U(j, i), result.U(N + j, i)) * basis.values()(j, q);
            modes(row, q) = v;
        }
        ++row;
    }
    return modes;
}

double mode_centroid(const Eigen::VectorXcd& mode_values, const ModeBasis& basis) {
    const auto& rule = basis.rule();
    if (mode_values.size() != rule.size())
        throw std::invalid_argument("mode_centroid: grid size mismatch");
    double num = 0.0, den = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const double w = rule.weights(q) * std::norm(mode_values(q));
        num += w * rule.nodes(q);
        den += w;
    }
    if (!(den > 0.0)) throw NumericalError("mode_centroid: zero-intensity mode");
    return num / den;
}

namespace {

// Signed square roots of the step-2 radicands, with the sign fixed by
// continuity across the delay grid, seeded at the global maximum.
Eigen::VectorXd signed_sqrt_continuous(const Eigen::VectorXd& radicand) {
    const int m = static_cast<int>(radicand.size());
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) {
        if (radicand(i) < -1e-9 * radicand.cwiseAbs().maxCoeff())
            throw NumericalError("reconstruct_single_mode: negative radicand (sign bookkeeping)");
        v(i) = std::sqrt(std::max(0.0, radicand(i)));
    }
    int seed = 0;
    radicand.maxCoeff(&seed);
    // walk outward from the seed, choosing the sign closest to the linear
    // extrapolation of the two previous samples (the waveform carries an
    // optical-frequency oscillation, so plain nearest-value continuity would
    // fail at zero crossings)
    auto pick = [&](int i, int p1, int p2) {
        const double pred = (p2 >= 0 && p2 < m) ? 2.0 * v(p1) - v(p2) : v(p1);
        if (std::abs(v(i) - pred) > std::abs(-v(i) - pred)) v(i) = -v(i);
    };
    for (int i = seed + 1; i < m; ++i) pick(i, i - 1, i - 2 >= seed ? i - 2 : -1);
    for (int i = seed - 1; i >= 0; --i) pick(i, i + 1, i + 2 <= seed ? i + 2 : -1);
    return v;
}

} // namespace

SingleModeReconstruction reconstruct_single_mode(const TimeLocalData& data,
                                                 const Eigen::MatrixXd& X_LO) {
    const int m = static_cast<int>(data.delays.size());
    if (m < 2 || data.g0.size() != m || data.g90.size() != m || X_LO.rows() != m)
        throw std::invalid_argument("reconstruct_single_mode: inconsistent input sizes");
    int i0 = 0;
    double best = std::abs(data.delays[0]);
    for (int i = 1; i < m; ++i)
        if (std::abs(data.delays[i]) < best) best = std::abs(data.delays[i]), i0 = i;
    if (best > 1e-18)
        throw std::invalid_argument("reconstruct_single_mode: delay grid must contain dt = 0");

    const Eigen::VectorXd e0 = data.g0.array() - 0.5;
    const Eigen::VectorXd e90 = data.g90.array() - 0.5;
    if (std::abs(e90(i0)) < 1e-12 || std::abs(e0(i0) - e90(i0)) < 1e-12)
        throw NumericalError("reconstruct_single_mode: no squeezing contrast at dt = 0");
    const double r = e0(i0) / e90(i0);
    if (std::abs(r - 1.0) < 1e-6)
        throw NumericalError("reconstruct_single_mode: degenerate (unsqueezed) state");

    // [g0 - 1/2] - r [g90 - 1/2] = kappa^2 (zeta_LO(dt,0)^T zeta_p)^2, and the
    // same combination with the roles swapped isolates the x overlap
    const Eigen::VectorXd rad_p = e0 - r * e90;
    const Eigen::VectorXd rad_x = e90 - r * e0;
    const Eigen::VectorXd sp = signed_sqrt_continuous(rad_p);
    const Eigen::VectorXd sx = signed_sqrt_continuous(rad_x);

    // the delay-scanned LO rows are nearly coplanar, so the pseudoinverse
    // needs an explicit rank cutoff to avoid amplifying discretization noise
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X_LO, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    Eigen::VectorXd sv_plus = Eigen::VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) sv_plus(i) = 1.0 / sv(i);
    const Eigen::MatrixXd pinv =
        svd.matrixV() * sv_plus.asDiagonal() * svd.matrixU().transpose();
    // self-consistency refinement: re-derive the signs from the fitted linear
    // model until the assignment is a fixed point
    auto refine = [&](Eigen::VectorXd s) {
        for (int pass = 0; pass < 4; ++pass) {
            const Eigen::VectorXd fit = X_LO * (pinv * s);
            bool changed = false;
            for (int i = 0; i < m; ++i) {
                const double want = (fit(i) >= 0.0 ? 1.0 : -1.0) * std::abs(s(i));
                if (want != s(i)) s(i) = want, changed = true;
            }
            if (!changed) break;
        }
        return s;
    };
    const Eigen::VectorXd sp_r = refine(sp);
    const Eigen::VectorXd sx_r = refine(sx);
    Eigen::VectorXd zp = pinv * sp_r;
    Eigen::VectorXd zx = pinv * sx_r;
    if (!(zp.norm() > 0.0) || !(zx.norm() > 0.0))
        throw NumericalError("reconstruct_single_mode: zero quadrature projection");
    zp /= zp.norm();
    zx /= zx.norm();
    // least-squares amplitude of the signed overlaps along the recovered mode
    const Eigen::VectorXd fit = X_LO * zp;
    const double kappa = fit.dot(sp_r) / fit.squaredNorm();
    if (!(kappa > 0.0))
        throw NumericalError("reconstruct_single_mode: zero quadrature projection");

    SingleModeReconstruction out;
    out.ratio = r;
    out.kappa = kappa;
    out.sigma_p = 0.5 + kappa * kappa / (1.0 - r * r);
    out.sigma_x = 0.5 + r * (out.sigma_p - 0.5);
    out.zeta_x = zx;
    out.zeta_p = zp;
    if (!(out.sigma_x > 0.0) || !(out.sigma_p > 0.0) ||
        out.sigma_x * out.sigma_p < 0.25 * (1.0 - 1e-6))
        throw NumericalError("reconstruct_single_mode: unphysical recovered variances");
    return out;
}

double align_lo_phase(const GaussianState& state, const MeasurementContext& ctx,
                      int scan_points) {
    if (scan_points < 4) throw std::invalid_argument("align_lo_phase: too few scan points");
    double best_phi = 0.0, best_val = -1.0;
    for (int i = 0; i < scan_points; ++i) {
        const double phi = units::pi * i / scan_points; // contrast is pi-periodic
        const double g0 = correlation_signal(state, ctx, {0.0, phi}, {0.0, phi});
        const double g90 = correlation_signal(state, ctx, {0.0, phi + units::pi / 2},
                                              {0.0, phi + units::pi / 2});
        const double val = std::abs(g0 - g90);
        if (val > best_val) best_val = val, best_phi = phi;
    }
    return best_phi;
}

Eigen::MatrixXd sampled_correlation_matrix(const GaussianState& state,
                                           const MeasurementContext& ctx,
                                           const std::vector<MeasurementSetting>& gamma,
                                           int draws, std::uint64_t seed) {
    if (draws < 1) throw std::invalid_argument("sampled_correlation_matrix: draws must be >= 1");
    const int m = static_cast<int>(gamma.size());
    const int n = static_cast<int>(state.cov.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.cov);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw NumericalError("sampled_correlation_matrix: covariance not positive semidefinite");
    const Eigen::MatrixXd root =
        es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();

    std::vector<MeasurementVectors> va(m), vb(m);
    for (int i = 0; i < m; ++i) {
        va[i] = ctx.vectors(Arm::a, gamma[i]);
        vb[i] = ctx.vectors(Arm::b, gamma[i]);
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd xi(n), r(n), rv(n);
    Eigen::VectorXd qa(m), qb(m);
    const double svac = std::sqrt(0.5);
    for (int d = 0; d < draws; ++d) {
        for (int i = 0; i < n; ++i) xi(i) = nd(rng);
        r = state.mu + root * xi;
        for (int i = 0; i < n; ++i) rv(i) = svac * nd(rng);
        for (int i = 0; i < m; ++i) {
            qa(i) = va[i].state_part.dot(r) + va[i].vacuum_part.dot(rv);
            qb(i) = vb[i].state_part.dot(r) + vb[i].vacuum_part.dot(rv);
        }
        acc += qa * qb.transpose();
    }
    return acc / draws;
}

} // namespace corrtomo
