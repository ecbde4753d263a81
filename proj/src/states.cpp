#include "corrtomo/states.hpp"

#include <cmath>
#include <stdexcept>

#include "corrtomo/units.hpp"

namespace corrtomo {

namespace {

double bose_einstein(double omega, double temperature_k) {
    const double x = units::hbar * omega / (units::kB * temperature_k);
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

// Standard Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x) {
    if (n == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 - x;
    for (int i = 1; i < n; ++i) {
        const double lp1 = ((2.0 * i + 1.0 - x) * l - i * lm1) / (i + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

} // namespace

GaussianState vacuum(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("vacuum: need at least one mode");
    GaussianState s;
    s.mu = Eigen::VectorXd::Zero(2 * n_modes);
    s.cov = 0.5 * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    return s;
}

GaussianState thermal_state(double temperature_k, const ModeBasis& basis,
                            double* projection_residual) {
    if (!(temperature_k > 0.0)) throw std::invalid_argument("thermal_state: T must be > 0");
    const int N = basis.n_modes();

    const auto proj = basis.project(
        [&](double w) { return std::complex<double>(bose_einstein(w, temperature_k), 0.0); });
    Eigen::VectorXd c = proj.coeffs.real();
    const double norm = c.norm();
    if (!(norm > 0.0))
        throw NumericalError("thermal_state: occupancy projects to zero on the basis band");
    c /= norm;
    if (projection_residual) *projection_residual = proj.residual;

    // Band-integrated occupancy sets the scalar photon number of the mode.
    const auto& rule = basis.rule();
    double n_bar = 0.0;
    for (int q = 0; q < rule.size(); ++q)
        n_bar += rule.weights(q) * bose_einstein(rule.nodes(q), temperature_k);
    n_bar /= basis.params().sigma; // per unit of the basis frequency scale

    GaussianState s = vacuum(N);
    Eigen::VectorXd zx = Eigen::VectorXd::Zero(2 * N), zp = Eigen::VectorXd::Zero(2 * N);
    zx.head(N) = c;
    zp.tail(N) = c;
    s.cov += n_bar * (zx * zx.transpose() + zp * zp.transpose());
    return s;
}

GaussianState multimode_squeezed_vacuum(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0)
        throw std::invalid_argument("multimode_squeezed_vacuum: square even-sized M required");
    GaussianState s;
    s.mu = Eigen::VectorXd::Zero(M.rows());
    s.cov = 0.5 * (M.transpose() * M);
    return s;
}

GaussianState single_mode_squeezed(double sx, double sp, const Eigen::VectorXd& zx,
                                   const Eigen::VectorXd& zp) {
    if (!(sx > 0.0) || !(sp > 0.0) || sx * sp < 0.25 * (1.0 - 1e-9))
        throw std::invalid_argument("single_mode_squeezed: variances violate the uncertainty bound");
    if (zx.size() != zp.size()) throw std::invalid_argument("single_mode_squeezed: size mismatch");
    const double tol = 1e-8;
    if (std::abs(zx.norm() - 1.0) > tol || std::abs(zp.norm() - 1.0) > tol ||
        std::abs(zx.dot(zp)) > tol)
        throw std::invalid_argument("single_mode_squeezed: mode vectors must be orthonormal");
    GaussianState s;
    const int n = static_cast<int>(zx.size());
    s.mu = Eigen::VectorXd::Zero(n);
    s.cov = 0.5 * Eigen::MatrixXd::Identity(n, n);
    s.cov += (sx - 0.5) * (zx * zx.transpose());
    s.cov += (sp - 0.5) * (zp * zp.transpose());
    return s;
}

Eigen::VectorXd fock_mode_coefficients(const FockStateSpec& spec, const ModeBasis& basis,
                                       double* projection_residual) {
    if (spec.n < 0) throw std::invalid_argument("fock_mode_coefficients: n must be >= 0");
    const auto proj = basis.project([&](double w) {
        return std::complex<double>(fundamental_spectrum(spec.sigma, spec.k, w), 0.0);
    });
    Eigen::VectorXd c = proj.coeffs.real();
    const double norm = c.norm();
    if (!(norm > 0.0)) throw NumericalError("fock_mode_coefficients: zero projection");
    if (projection_residual) *projection_residual = proj.residual;
    if (proj.residual > 1e-3)
        throw NumericalError("fock_mode_coefficients: mode not contained in the basis (residual " +
                             std::to_string(proj.residual) + ")");
    return c / norm;
}

double fock_wigner(const FockStateSpec& spec, const ModeBasis& basis,
                   const Eigen::VectorXd& zeta) {
    const int N = basis.n_modes();
    if (zeta.size() != 2 * N) throw std::invalid_argument("fock_wigner: dimension mismatch");
    const Eigen::VectorXd c = fock_mode_coefficients(spec, basis);
    const double a = c.dot(zeta.head(N));
    const double b = c.dot(zeta.tail(N));
    const double r2 = a * a + b * b;
    const double wvac = std::pow(1.0 / units::pi, N) * std::exp(-zeta.squaredNorm());
    const double sign = (spec.n % 2 == 0) ? 1.0 : -1.0;
    return sign * laguerre(spec.n, 2.0 * r2) * wvac;
}

} // namespace corrtomo
