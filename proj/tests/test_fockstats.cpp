#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "corrtomo/fockstats.hpp"
#include "corrtomo/units.hpp"

using namespace corrtomo;
using units::fs_to_s;
using units::thz_to_angular;

namespace {

double sigma_for_center(double center, double k) {
    return center / std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 0.5));
}

struct Setup {
    ModeBasis basis;
    MeasurementContext ctx;
    FockStateSpec spec;
};

// a near-infrared pulse basis whose fundamental mode doubles as the LO and as
// the temporal mode of the photon-number state
Setup make_setup(int i_max = 10) {
    const double k = 16.0;
    const double sigma = sigma_for_center(thz_to_angular(202.0), k);
    ModeBasis basis({sigma, k, i_max});
    auto spec = [&](double w) {
        return std::complex<double>(fundamental_spectrum(sigma, k, w), 0.0);
    };
    Eigen::VectorXd zeta_lo = lo_vector(basis, spec);
    return {basis, MeasurementContext(basis, std::move(zeta_lo)), {0, sigma, k}};
}

// midpoint quadrature of f over the square [-lim, lim]^2
template <typename F>
double square_integral(F&& f, double lim, int m) {
    const double h = 2.0 * lim / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            acc += f(-lim + (i + 0.5) * h, -lim + (j + 0.5) * h);
    return acc * h * h;
}

} // namespace

TEST_CASE("correlation kernel normalizes over outcomes") {
    Setup s = make_setup();
    const int N = s.basis.n_modes();
    DetectionGeometry g = detection_geometry(fs_to_s(0.7), fs_to_s(-0.4), s.ctx);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    Eigen::VectorXd zr(2 * N);
    for (int i = 0; i < 2 * N; ++i) zr(i) = 0.7 * nd(rng);

    for (const Eigen::VectorXd& z : {Eigen::VectorXd(Eigen::VectorXd::Zero(2 * N)), zr}) {
        const double norm = square_integral(
            [&](double x, double p) { return kernel_value(g, x, p, z); }, 12.0, 600);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("kernel convolution of a Gaussian state matches the quadrature covariance") {
    Setup s = make_setup();
    const int N = s.basis.n_modes();

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd Ax(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) Ax(i, j) = 0.25 * nd(rng);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    G.topLeftCorner(N, N) = Ax;
    G.bottomRightCorner(N, N) = -Ax.transpose();
    GaussianState st = multimode_squeezed_vacuum(exp_generator(G, 1.0));

    const double ta = fs_to_s(0.4), tb = fs_to_s(-0.7);
    DetectionGeometry g = detection_geometry(ta, tb, s.ctx);

    // closed-form convolution of the Gaussian Wigner function with the kernel
    Eigen::MatrixXd I2N = Eigen::MatrixXd::Identity(2 * N, 2 * N);
    Eigen::MatrixXd M = (st.cov.inverse() + g.sigma_d_inv).inverse();
    const double det = (I2N + st.cov * g.sigma_d_inv).determinant();
    auto conv = [&](double x, double p) {
        Eigen::VectorXd zd = x * g.zeta_d_x + p * g.zeta_d_p;
        return kernel_value(g, x, p, Eigen::VectorXd::Zero(2 * N)) / std::sqrt(det) *
               std::exp(0.5 * zd.dot(M * zd));
    };

    // joint normal density predicted by the two-arm measurement vectors
    MeasurementVectors va = s.ctx.vectors(Arm::a, {ta, 0.0});
    MeasurementVectors vb = s.ctx.vectors(Arm::b, {tb, 0.5 * units::pi});
    Eigen::Matrix2d C;
    const MeasurementVectors* vv[2] = {&va, &vb};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            C(i, j) = vv[i]->state_part.dot(st.cov * vv[j]->state_part) +
                      0.5 * vv[i]->vacuum_part.dot(vv[j]->vacuum_part);

    double maxrel = 0.0;
    for (double x = -2.0; x <= 2.0; x += 0.5)
        for (double p = -2.0; p <= 2.0; p += 0.5) {
            Eigen::Vector2d u(x, p);
            const double ref = std::exp(-0.5 * u.dot(C.inverse() * u)) /
                               (2.0 * units::pi * std::sqrt(C.determinant()));
            const double got = conv(x, p);
            if (ref > 1e-8) maxrel = std::max(maxrel, std::abs(got - ref) / ref);
        }
    CHECK(maxrel < 1e-7);
}

TEST_CASE("matched zero-delay detection reads the full photon number") {
    Setup s = make_setup();
    DetectionGeometry g = detection_geometry(0.0, 0.0, s.ctx);
    SchurStats st = schur_stats(g, s.spec, s.basis);

    // complete mode overlap: both inverse Schur singular values reach 4
    CHECK(st.sigma_x == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(st.sigma_p == doctest::Approx(4.0).epsilon(1e-9));

    // the detected photon-number mixture collapses onto the prepared n
    Eigen::VectorXd bin = binomial_mixture_check(st, 3);
    CHECK(bin(3) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(bin.head(3).cwiseAbs().maxCoeff() < 1e-8);

    // normalization and outcome second moments <x^2> = n + 1
    for (int n : {0, 2}) {
        double norm = 0.0, m2 = 0.0;
        const double lim = 6.0, h = 2.0 * lim / 500;
        for (int i = 0; i < 500; ++i)
            for (int j = 0; j < 500; ++j) {
                const double x = -lim + (i + 0.5) * h, p = -lim + (j + 0.5) * h;
                const double v = fock_joint_pdf(x, p, st, n);
                norm += v * h * h;
                m2 += v * x * x * h * h;
            }
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(m2 / norm == doctest::Approx(n + 1.0).epsilon(1e-3));
    }

    // n = 0 outcome density is the centered bivariate normal with unit variances
    const double inv2pi = 1.0 / (2.0 * units::pi);
    for (double x : {0.0, 0.8, -1.3})
        for (double p : {0.0, -0.6, 1.7}) {
            const double ref = inv2pi * std::exp(-0.5 * (x * x + p * p));
            CHECK(fock_joint_pdf(x, p, st, 0) == doctest::Approx(ref).epsilon(1e-9));
        }
}

TEST_CASE("joint density normalizes at generic delays") {
    Setup s = make_setup();
    DetectionGeometry g = detection_geometry(fs_to_s(1.1), fs_to_s(-0.6), s.ctx);
    SchurStats st = schur_stats(g, s.spec, s.basis);
    CHECK(st.sigma_x > st.sigma_p);
    for (int n : {0, 3}) {
        const double norm = square_integral(
            [&](double x, double p) { return fock_joint_pdf(x, p, st, n); }, 8.0, 640);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("equal-singular-value density is a binomial photon-number mixture") {
    Setup s = make_setup();

    // coincident delays away from zero: equal singular values below 4
    DetectionGeometry g = detection_geometry(fs_to_s(0.9), fs_to_s(0.9), s.ctx);
    SchurStats st = schur_stats(g, s.spec, s.basis);
    CHECK(st.sigma_x == doctest::Approx(st.sigma_p).epsilon(1e-9));
    CHECK(st.sigma_x < 4.0);
    CHECK(st.sigma_x > 2.0);

    Eigen::VectorXd bin = binomial_mixture_check(st, 3);
    CHECK(bin.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bin.minCoeff() > 0.0);

    for (int n : {1, 3}) {
        for (double x : {0.0, 0.9, -1.7})
            for (double p : {0.3, -1.1}) {
                const double direct = fock_joint_pdf(x, p, st, n);
                const double mix = fock_mixture_pdf(x, p, st, n);
                CHECK(mix == doctest::Approx(direct).epsilon(1e-9));
            }
    }
}

TEST_CASE("vacuum-admixed arm follows the hermite convolution") {
    Setup s = make_setup();

    // arm b delayed far outside the pulse: it detects only vacuum
    DetectionGeometry g = detection_geometry(0.0, fs_to_s(60.0), s.ctx);
    SchurStats st = schur_stats(g, s.spec, s.basis);
    CHECK(st.sigma_p == doctest::Approx(2.0).epsilon(1e-3));

    double maxrel = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.61)
        for (double p = -3.0; p <= 3.0; p += 0.53) {
            const double a = fock_joint_pdf(x, p, st, 2);
            if (a < 1e-10) continue;
            maxrel = std::max(maxrel, std::abs(a - hermite_limit_pdf(x, p, st, 2)) / a);
        }
    CHECK(maxrel < 2e-2);

    // the n = 1 outcome marginal on arm a keeps the two-lobe quadrature shape
    auto marginal = [&](double x) {
        double acc = 0.0;
        const double h = 12.0 / 400;
        for (int j = 0; j < 400; ++j)
            acc += fock_joint_pdf(x, -6.0 + (j + 0.5) * h, st, 1) * h;
        return acc;
    };
    CHECK(marginal(0.0) < marginal(1.0));
    CHECK(marginal(0.0) < marginal(-1.0));
}

TEST_CASE("detection mismatch oscillates at twice the carrier") {
    Setup s = make_setup();

    // the larger singular value diverges when arm b is delayed by a quarter
    // cycle of the carrier: both arms then read the same quadrature
    const double period_fs = 1.0 / (202.0 * 1e12) * 1e15;
    double best_dt = 0.0, best = 0.0;
    for (double dt = 1.0; dt <= 1.5; dt += 0.01) {
        DetectionGeometry g = detection_geometry(0.0, fs_to_s(dt), s.ctx);
        SchurStats st = schur_stats(g, s.spec, s.basis);
        if (st.sigma_x > best) {
            best = st.sigma_x;
            best_dt = dt;
        }
    }
    CHECK(best > 50.0);
    CHECK(best_dt == doctest::Approx(period_fs / 4.0).epsilon(0.03));

    // half a cycle restores matched detection up to the envelope walk-off
    DetectionGeometry gh = detection_geometry(0.0, fs_to_s(period_fs / 2.0), s.ctx);
    SchurStats sh = schur_stats(gh, s.spec, s.basis);
    CHECK(sh.sigma_x == doctest::Approx(sh.sigma_p).epsilon(0.1));
    CHECK(sh.sigma_x > 3.0);
}

TEST_CASE("density table export") {
    Setup s = make_setup(8);
    DetectionGeometry g = detection_geometry(0.0, fs_to_s(0.5), s.ctx);
    SchurStats st = schur_stats(g, s.spec, s.basis);
    write_pdf_csv(st, 2, 4.0, 11, "fock_pdf.csv", "fock_pdf.json");

    std::ifstream csv("fock_pdf.csv");
    REQUIRE(csv.good());
    std::string line;
    int rows = 0;
    std::getline(csv, line);
    CHECK(line == "x_a, p_b, density");
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 11 * 11);

    std::ifstream js("fock_pdf.json");
    REQUIRE(js.good());
    nlohmann::json hdr = nlohmann::json::parse(js);
    CHECK(hdr["n"] == 2);
    CHECK(hdr["grid"] == 11);
    CHECK(std::abs(hdr["dt_b_fs"].get<double>() - 0.5) < 1e-12);
}
