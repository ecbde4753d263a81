#include "corrtomo/elements.hpp"
#include "corrtomo/units.hpp"
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace corrtomo {

WavePlateSetting waveplate_balance(double Phi) {
    const double c2 = std::cos(0.5 * Phi) * std::cos(0.5 * Phi);
    const double s2 = std::sin(0.5 * Phi) * std::sin(0.5 * Phi);
    const double num = 1.0 - 2.0 * c2;
    if (num < -1e-12 || s2 <= 0.0)
        throw std::invalid_argument("waveplate_balance: retardance outside [pi/2, 3pi/2]");
    const double arg = std::sqrt(std::max(0.0, num) / (2.0 * s2));
    if (arg > 1.0 + 1e-12)
        throw std::invalid_argument("waveplate_balance: no balancing rotation exists");
    const double theta = 0.5 * std::acos(std::min(1.0, arg));
    double phip;
    if (num <= 0.0) {
        phip = -0.5 * units::pi;
    } else {
        phip = -std::atan(std::sqrt(2.0 * c2 / num));
    }
    return {Phi, theta, phip};
}

std::pair<std::complex<double>, std::complex<double>> waveplate_weights(double Phi, double theta) {
    using namespace std::complex_literals;
    std::complex<double> w1 = std::cos(0.5 * Phi) - 1i * std::sin(0.5 * Phi) * std::cos(2.0 * theta);
    std::complex<double> w2 = -1i * std::sin(0.5 * Phi) * std::sin(2.0 * theta);
    return {w1, w2};
}

Eigen::MatrixXd rotation(int N, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    R.topLeftCorner(N, N).diagonal().setConstant(c);
    R.topRightCorner(N, N).diagonal().setConstant(-s);
    R.bottomLeftCorner(N, N).diagonal().setConstant(s);
    R.bottomRightCorner(N, N).diagonal().setConstant(c);
    return R;
}

Eigen::MatrixXd delay_generator(double dt, const Eigen::MatrixXd& omega_tilde) {
    if (!std::isfinite(dt)) throw std::invalid_argument("delay_generator: non-finite delay");
    const int N = static_cast<int>(omega_tilde.rows());
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    G.topRightCorner(N, N) = dt * omega_tilde;
    G.bottomLeftCorner(N, N) = -dt * omega_tilde;
    return G;
}

DelayPropagator::DelayPropagator(const Eigen::MatrixXd& omega_tilde) {
    Eigen::MatrixXd sym = 0.5 * (omega_tilde + omega_tilde.transpose());
    if ((omega_tilde - sym).cwiseAbs().maxCoeff() > 1e-8 * sym.cwiseAbs().maxCoeff())
        throw std::invalid_argument("DelayPropagator: frequency matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    Q_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
}

Eigen::MatrixXd DelayPropagator::matrix(double dt) const {
    const int N = n_modes();
    Eigen::MatrixXd C = Q_ * (lambda_ * dt).array().cos().matrix().asDiagonal() * Q_.transpose();
    Eigen::MatrixXd S = Q_ * (lambda_ * dt).array().sin().matrix().asDiagonal() * Q_.transpose();
    Eigen::MatrixXd M(2 * N, 2 * N);
    M.topLeftCorner(N, N) = C;
    M.topRightCorner(N, N) = S;
    M.bottomLeftCorner(N, N) = -S;
    M.bottomRightCorner(N, N) = C;
    return M;
}

Eigen::VectorXd DelayPropagator::apply_transpose(double dt, const Eigen::VectorXd& z) const {
    const int N = n_modes();
    if (z.size() != 2 * N) throw std::invalid_argument("DelayPropagator: dimension mismatch");
    Eigen::VectorXd cx = Q_.transpose() * z.head(N);
    Eigen::VectorXd cp = Q_.transpose() * z.tail(N);
    Eigen::ArrayXd c = (lambda_ * dt).array().cos();
    Eigen::ArrayXd s = (lambda_ * dt).array().sin();
    // M^T = [[C, -S], [S, C]]
    Eigen::VectorXd out(2 * N);
    out.head(N) = Q_ * (c * cx.array() - s * cp.array()).matrix();
    out.tail(N) = Q_ * (s * cx.array() + c * cp.array()).matrix();
    return out;
}

Eigen::VectorXd lo_vector(const ModeBasis& basis,
                          const std::function<std::complex<double>(double)>& amplitude,
                          const std::function<double(double)>* efficiency,
                          double* residual_out) {
    auto weighted = [&](double w) -> std::complex<double> {
        std::complex<double> a = amplitude(w);
        if (efficiency && *efficiency) a *= (*efficiency)(w);
        return a;
    };
    ModeBasis::Projection pr = basis.project(weighted);
    const int N = basis.n_modes();
    Eigen::VectorXd z(2 * N);
    z.head(N) = pr.coeffs.real();
    z.tail(N) = pr.coeffs.imag();
    if (residual_out) *residual_out = pr.residual;
    return z;
}

Eigen::VectorXd transformed_lo(const Eigen::VectorXd& zeta,
                               const DelayPropagator& delay, double dt,
                               const Eigen::MatrixXd* M_NL, double phi) {
    const int N = delay.n_modes();
    if (zeta.size() != 2 * N) throw std::invalid_argument("transformed_lo: dimension mismatch");
    // R^T(phi) z, computed slot-wise
    const double c = std::cos(phi), s = std::sin(phi);
    Eigen::VectorXd z(2 * N);
    z.head(N) = c * zeta.head(N) + s * zeta.tail(N);
    z.tail(N) = -s * zeta.head(N) + c * zeta.tail(N);
    if (M_NL) z = M_NL->transpose() * z;
    return delay.apply_transpose(dt, z);
}

} // namespace corrtomo
