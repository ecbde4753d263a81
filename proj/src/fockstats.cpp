#include "corrtomo/fockstats.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "corrtomo/units.hpp"

namespace corrtomo {

namespace {

// generalized Laguerre L_i^(alpha)(x) by the three-term recurrence
double laguerre_gen(int i, double alpha, double x) {
    if (i == 0) return 1.0;
    double lm1 = 1.0, l = 1.0 + alpha - x;
    for (int k = 1; k < i; ++k) {
        const double lp1 = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

double hermite_phys(int n, double x) {
    if (n == 0) return 1.0;
    double hm1 = 1.0, h = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double hp1 = 2.0 * x * h - 2.0 * k * hm1;
        hm1 = h;
        h = hp1;
    }
    return h;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// (1 - 4/sigma)^i L_i^(-1/2)[2 d^2 / (sigma^2 - 4 sigma)], evaluated through
// its finite limit when sigma approaches the complete-overlap value 4
double overlap_term(int i, double sigma, double d2) {
    if (i == 0) return 1.0;
    if (std::abs(sigma - 4.0) < 1e-6) {
        double t = 1.0;
        for (int k = 1; k <= i; ++k) t *= (-2.0 * d2 / (sigma * sigma)) / k;
        return t;
    }
    const double f = 1.0 - 4.0 / sigma;
    const double arg = 2.0 * d2 / (sigma * sigma - 4.0 * sigma);
    return std::pow(f, i) * laguerre_gen(i, -0.5, arg);
}

} // namespace

DetectionGeometry detection_geometry(double dt_a, double dt_b, const MeasurementContext& ctx) {
    const int N = ctx.n_modes();
    DetectionGeometry g;
    g.dt_a = dt_a;
    g.dt_b = dt_b;
    g.za = ctx.state_part(Arm::a, {dt_a, 0.5 * units::pi});
    g.zb = ctx.state_part(Arm::b, {dt_b, 0.0});
    g.P_LO = g.za * g.za.transpose() + g.zb * g.zb.transpose();
    g.cross = g.za.dot(g.zb);
    g.envelope_norm = (g.za - g.zb).norm();
    if (1.0 - g.cross * g.cross < 1e-12)
        throw NumericalError("detection_geometry: degenerate LO pair (vectors collinear)");
    const double inv2 = 1.0 / (1.0 - g.cross * g.cross);
    const Eigen::MatrixXd omega = symplectic_form(N);
    g.sigma_d_inv = 2.0 * inv2 * (omega.transpose() * g.P_LO * g.P_LO * omega);
    g.zeta_d_x = 2.0 * inv2 * (omega * g.P_LO * g.za);
    g.zeta_d_p = -2.0 * inv2 * (omega * g.P_LO * g.zb);
    return g;
}

double kernel_value(const DetectionGeometry& g, double x_a, double p_b,
                    const Eigen::VectorXd& zeta) {
    const double denom = 1.0 - g.cross * g.cross;
    const double out2 = (x_a * g.za - p_b * g.zb).squaredNorm();
    const Eigen::VectorXd zd = x_a * g.zeta_d_x + p_b * g.zeta_d_p;
    // the prefactor normalizes the kernel over the outcomes for any zeta
    const double pref = 1.0 / (units::pi * std::sqrt(denom));
    return pref * std::exp(-out2 / denom + zd.dot(zeta) -
                           0.5 * zeta.dot(g.sigma_d_inv * zeta));
}

SchurStats schur_stats(const DetectionGeometry& g, const FockStateSpec& spec,
                       const ModeBasis& basis) {
    const int N = basis.n_modes();
    if (g.za.size() != 2 * N) throw std::invalid_argument("schur_stats: basis size mismatch");
    const Eigen::VectorXd c = fock_mode_coefficients(spec, basis);
    Eigen::VectorXd zx = Eigen::VectorXd::Zero(2 * N), zp = Eigen::VectorXd::Zero(2 * N);
    zx.head(N) = c;
    zp.tail(N) = c;

    // orthonormal basis of the complement of the Fock plane
    Eigen::MatrixXd plane(2 * N, 2);
    plane.col(0) = zx;
    plane.col(1) = zp;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(plane);
    const Eigen::MatrixXd Qfull =
        qr.householderQ() * Eigen::MatrixXd::Identity(2 * N, 2 * N);
    const Eigen::MatrixXd Q = Qfull.rightCols(2 * N - 2);

    const Eigen::MatrixXd A =
        2.0 * Eigen::MatrixXd::Identity(2 * N, 2 * N) + g.sigma_d_inv; // vac^-1 + d^-1
    const Eigen::MatrixXd Ar = Q.transpose() * A * Q;                  // complement block
    Eigen::LLT<Eigen::MatrixXd> llt(Ar);
    if (llt.info() != Eigen::Success)
        throw NumericalError("schur_stats: complement block not positive definite");
    const Eigen::MatrixXd Mr = Q * llt.solve(Q.transpose()); // pseudo-inverse on range(P_r)

    // 2x2 inverse Schur block in the (zx, zp) frame
    const Eigen::MatrixXd cross = g.sigma_d_inv * Mr * g.sigma_d_inv;
    Eigen::Matrix2d S2;
    S2(0, 0) = zx.dot(A * zx) - zx.dot(cross * zx);
    S2(0, 1) = zx.dot(A * zp) - zx.dot(cross * zp);
    S2(1, 0) = S2(0, 1);
    S2(1, 1) = zp.dot(A * zp) - zp.dot(cross * zp);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S2);

    SchurStats s;
    s.geom = g;
    // descending: sigma_x is the larger singular value
    s.sigma_x = es.eigenvalues()(1);
    s.sigma_p = es.eigenvalues()(0);
    s.e_x = es.eigenvectors()(0, 1) * zx + es.eigenvectors()(1, 1) * zp;
    s.e_p = es.eigenvectors()(0, 0) * zx + es.eigenvectors()(1, 0) * zp;

    const Eigen::MatrixXd plane_proj = zx * zx.transpose() + zp * zp.transpose();
    const Eigen::MatrixXd dph =
        plane_proj * (Eigen::MatrixXd::Identity(2 * N, 2 * N) - g.sigma_d_inv * Mr);
    s.zeta_dph_map.resize(2 * N, 2);
    s.zeta_dph_map.col(0) = dph * g.zeta_d_x;
    s.zeta_dph_map.col(1) = dph * g.zeta_d_p;

    s.env_quadform = Mr;

    // log of 2^(i_max - 1) / sqrt(pdet(P_r A P_r)) / (pi sqrt(1 - c^2)), using
    // the pseudo-determinant of the complement block
    double log_pdet = 0.0;
    const Eigen::MatrixXd L = llt.matrixL();
    for (int i = 0; i < L.rows(); ++i) log_pdet += 2.0 * std::log(L(i, i));
    s.log_env_const = (N - 1) * std::log(2.0) - 0.5 * log_pdet -
                      std::log(units::pi * std::sqrt(1.0 - g.cross * g.cross));
    return s;
}

double envelope(const SchurStats& s, double x_a, double p_b) {
    const DetectionGeometry& g = s.geom;
    const double denom = 1.0 - g.cross * g.cross;
    const double out2 = (x_a * g.za - p_b * g.zb).squaredNorm();
    const Eigen::VectorXd zd = x_a * g.zeta_d_x + p_b * g.zeta_d_p;
    return std::exp(s.log_env_const - out2 / denom + 0.5 * zd.dot(s.env_quadform * zd));
}

double fock_joint_pdf(double x_a, double p_b, const SchurStats& s, int n) {
    if (n < 0) throw std::invalid_argument("fock_joint_pdf: n must be >= 0");
    const Eigen::Vector2d outc(x_a, p_b);
    const Eigen::VectorXd dph = s.zeta_dph_map * outc;
    const double dx = dph.dot(s.e_x), dp = dph.dot(s.e_p);
    double sum = 0.0;
    for (int i = 0; i <= n; ++i)
        sum += overlap_term(i, s.sigma_x, dx * dx) * overlap_term(n - i, s.sigma_p, dp * dp);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double val = envelope(s, x_a, p_b) * sign / units::pi * 2.0 * units::pi /
                       std::sqrt(s.sigma_x * s.sigma_p) *
                       std::exp(dx * dx / (2.0 * s.sigma_x) + dp * dp / (2.0 * s.sigma_p)) *
                       sum;
    if (val < -1e-9) throw NumericalError("fock_joint_pdf: negative density (conditioning)");
    return std::max(0.0, val);
}

Eigen::VectorXd binomial_mixture_check(const SchurStats& s, int n, double tol) {
    if (std::abs(s.sigma_x - s.sigma_p) > tol * std::max(s.sigma_x, s.sigma_p))
        throw std::invalid_argument("binomial_mixture_check: singular values not equal");
    const double p = 0.25 * 0.5 * (s.sigma_x + s.sigma_p);
    Eigen::VectorXd bin(n + 1);
    for (int k = 0; k <= n; ++k)
        bin(k) = factorial(n) / (factorial(k) * factorial(n - k)) * std::pow(p, k) *
                 std::pow(1.0 - p, n - k);
    return bin;
}

double fock_mixture_pdf(double x_a, double p_b, const SchurStats& s, int n) {
    const double sigma = 0.5 * (s.sigma_x + s.sigma_p);
    const double p = sigma / 4.0;
    const Eigen::Vector2d outc(x_a, p_b);
    const Eigen::VectorXd dph = s.zeta_dph_map * outc;
    const double dx = dph.dot(s.e_x), dp = dph.dot(s.e_p);
    const double r2 = dx * dx + dp * dp;
    const Eigen::VectorXd bin = binomial_mixture_check(s, n);
    // Husimi mixture: sum_k bin(k; p, n) Q_k evaluated at the rescaled outcome
    const double qx = dx / (sigma / 2.0), qp = dp / (sigma / 2.0);
    const double q2 = 0.5 * (qx * qx + qp * qp);
    double mix = 0.0;
    for (int k = 0; k <= n; ++k)
        mix += bin(k) * std::pow(q2, k) / (units::pi * factorial(k)) * std::exp(-0.5 * q2);
    return envelope(s, x_a, p_b) * (2.0 * units::pi / sigma) *
           std::exp(r2 / (2.0 * sigma) + r2 / (sigma * sigma)) * std::pow(p, -n) * mix;
}

double hermite_limit_pdf(double x_a, double p_b, const SchurStats& s, int n, double tol) {
    if (std::abs(s.sigma_p - 2.0) > tol)
        throw std::invalid_argument("hermite_limit_pdf: sigma_p not near the vacuum value 2");
    const Eigen::Vector2d outc(x_a, p_b);
    const Eigen::VectorXd dph = s.zeta_dph_map * outc;
    const double dx = dph.dot(s.e_x);
    // Gauss-Legendre style uniform panel integration of the convolution
    const double lim = 8.0 / std::sqrt(s.sigma_x) + std::abs(dx) / s.sigma_x + 6.0;
    const int m = 4000;
    const double h = 2.0 * lim / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = -lim + (i + 0.5) * h;
        const double hn = hermite_phys(n, x);
        acc += hn * hn * std::exp(x * dx - 0.5 * s.sigma_x * x * x);
    }
    acc *= h;
    return envelope(s, x_a, p_b) * std::pow(2.0, -n) /
           (std::sqrt(units::pi) * factorial(n)) * acc;
}

void write_pdf_csv(const SchurStats& s, int n, double extent, int grid,
                   const std::string& csv_path, const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("write_pdf_csv: cannot open " + csv_path);
    csv << "x_a, p_b, density\n";
    char buf[120];
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double x = -extent + 2.0 * extent * i / (grid - 1);
            const double p = -extent + 2.0 * extent * j / (grid - 1);
            std::snprintf(buf, sizeof(buf), "%.17g, %.17g, %.17g\n", x, p,
                          fock_joint_pdf(x, p, s, n));
            csv << buf;
        }
    }
    nlohmann::json hdr;
    hdr["dt_a_fs"] = units::s_to_fs(s.geom.dt_a);
    hdr["dt_b_fs"] = units::s_to_fs(s.geom.dt_b);
    hdr["n"] = n;
    hdr["sigma_x"] = s.sigma_x;
    hdr["sigma_p"] = s.sigma_p;
    hdr["extent"] = extent;
    hdr["grid"] = grid;
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("write_pdf_csv: cannot open " + json_path);
    js << hdr.dump(2) << "\n";
}

} // namespace corrtomo
