#include <doctest.h>
#include "corrtomo/elements.hpp"
#include "corrtomo/symplectic.hpp"
#include "corrtomo/units.hpp"

using namespace corrtomo;
using units::thz_to_angular;

namespace {
const double sigma0 = thz_to_angular(100.0);
const ModeBasisParams bparams{sigma0, 0.5, 12};
}

TEST_CASE("wave plate balance") {
    WavePlateSetting half = waveplate_balance(units::pi);
    CHECK(half.rotation == doctest::Approx(units::pi / 8).epsilon(1e-12)); // 22.5 deg
    CHECK(std::abs(half.effective_phase) < 1e-12);

    WavePlateSetting quarter = waveplate_balance(units::pi / 2);
    CHECK(quarter.rotation == doctest::Approx(units::pi / 4).epsilon(1e-12)); // 45 deg
    CHECK(quarter.effective_phase == doctest::Approx(-units::pi / 2).epsilon(1e-12));

    for (double Phi : {units::pi / 2, 0.8 * units::pi, units::pi, 1.3 * units::pi}) {
        WavePlateSetting s = waveplate_balance(Phi);
        auto [w1, w2] = waveplate_weights(Phi, s.rotation);
        CHECK(std::abs(std::norm(w1) - std::norm(w2)) < 1e-12);
    }
    CHECK_THROWS(waveplate_balance(0.3 * units::pi));
}

TEST_CASE("rotation matrices") {
    Eigen::MatrixXd R1 = rotation(3, 0.4), R2 = rotation(3, 1.1);
    CHECK((R1 * R2 - rotation(3, 1.5)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(symplectic_residual(R1) < 1e-12);
    CHECK((R1 * R1.transpose() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    // Omega R^T(phi) = R^T(phi + pi/2) in this Omega sign convention
    Eigen::MatrixXd lhs = symplectic_form(3) * rotation(3, 0.4).transpose();
    Eigen::MatrixXd rhs = rotation(3, 0.4 + units::pi / 2).transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("frequency matrix properties") {
    ModeBasis basis(bparams);
    Eigen::MatrixXd W = basis.frequency_matrix();
    CHECK((W - W.transpose()).cwiseAbs().maxCoeff() < 1e-10 * W.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    CenterBandwidth cb = center_and_bandwidth(sigma0, 0.5);
    CHECK(W(0, 0) == doctest::Approx(cb.center).epsilon(1e-9));
}

TEST_CASE("delay propagator") {
    ModeBasis basis(bparams);
    Eigen::MatrixXd W = basis.frequency_matrix();
    DelayPropagator delay(W);

    CHECK((delay.matrix(0.0) - Eigen::MatrixXd::Identity(24, 24)).cwiseAbs().maxCoeff() < 1e-12);

    double dt1 = units::fs_to_s(3.0), dt2 = units::fs_to_s(-7.5);
    Eigen::MatrixXd M1 = delay.matrix(dt1);
    CHECK(symplectic_residual(M1) < 1e-9);
    CHECK((M1 * delay.matrix(dt2) - delay.matrix(dt1 + dt2)).cwiseAbs().maxCoeff() < 1e-8);

    // agrees with the generic generator exponential
    Eigen::MatrixXd Me = exp_generator(delay_generator(dt1, W)).mat();
    CHECK((M1 - Me).cwiseAbs().maxCoeff() < 1e-9);

    // apply_transpose consistent with the dense matrix
    Eigen::VectorXd z = Eigen::VectorXd::Random(24);
    CHECK((delay.apply_transpose(dt1, z) - M1.transpose() * z).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("narrowband phase advance") {
    // narrowband (large k) single mode: delay is a phase rotation at the carrier
    double k = 400.0;
    ModeBasis basis({sigma0, k, 1});
    DelayPropagator delay(basis.frequency_matrix());
    double wbar = center_and_bandwidth(sigma0, k).center;
    double dt = 0.5 / wbar;
    Eigen::MatrixXd M = delay.matrix(dt);
    CHECK(M(0, 0) == doctest::Approx(std::cos(wbar * dt)).epsilon(1e-6));
}

TEST_CASE("lo_vector") {
    ModeBasis basis(bparams);
    auto spec0 = [&](double w) { return std::complex<double>(mode_function(bparams, 0, w), 0.0); };
    double res = 0.0;
    Eigen::VectorXd z = lo_vector(basis, spec0, nullptr, &res);
    CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(z.tail(12).cwiseAbs().maxCoeff() < 1e-12); // real spectrum: p slots vanish
    CHECK(std::abs(res) < 1e-8);

    std::function<double(double)> half = [](double) { return 0.5; };
    Eigen::VectorXd zh = lo_vector(basis, spec0, &half);
    CHECK((zh - 0.5 * z).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transformed LO") {
    ModeBasis basis(bparams);
    DelayPropagator delay(basis.frequency_matrix());
    auto spec0 = [&](double w) { return std::complex<double>(mode_function(bparams, 0, w), 0.0); };
    Eigen::VectorXd z = lo_vector(basis, spec0);

    CHECK((transformed_lo(z, delay, 0.0, nullptr, 0.0) - z).cwiseAbs().maxCoeff() < 1e-12);

    // quarter rotation maps x slots to p slots
    Eigen::VectorXd zp = transformed_lo(z, delay, 0.0, nullptr, units::pi / 2);
    CHECK(std::abs(zp[12] + 1.0) < 1e-9); // R^T(pi/2): p slot = -x slot
    CHECK(zp.head(12).cwiseAbs().maxCoeff() < 1e-9);

    // norm preserved by delay and rotation
    Eigen::VectorXd zt = transformed_lo(z, delay, units::fs_to_s(4.2), nullptr, 0.7);
    CHECK(zt.norm() == doctest::Approx(z.norm()).epsilon(1e-9));
}

TEST_CASE("LO spiral: nearby delays nearly parallel") {
    ModeBasisParams bp{sigma0, 0.5, 20};
    ModeBasis basis(bp);
    DelayPropagator delay(basis.frequency_matrix());
    auto spec = [&](double w) { return std::complex<double>(fundamental_spectrum(sigma0, 0.5, w), 0.0); };
    Eigen::VectorXd z = lo_vector(basis, spec);
    z.normalize();
    Eigen::VectorXd z1 = transformed_lo(z, delay, 0.0, nullptr, 0.0);
    Eigen::VectorXd z2 = transformed_lo(z, delay, units::fs_to_s(0.12), nullptr, 0.0);
    double cosang = z1.dot(z2) / (z1.norm() * z2.norm());
    CHECK(cosang < 1.0 - 1e-9);              // linearly independent
    CHECK(std::acos(std::min(1.0, cosang)) < 5.0 * units::pi / 180.0);
}
