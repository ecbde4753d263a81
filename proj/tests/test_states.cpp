#include <doctest.h>
#include <random>

#include "corrtomo/states.hpp"
#include "corrtomo/symplectic.hpp"
#include "corrtomo/units.hpp"

using namespace corrtomo;
using units::thz_to_angular;

namespace {
const double sigma0 = thz_to_angular(100.0);
const ModeBasisParams bparams{sigma0, 0.5, 12};
}

TEST_CASE("vacuum state") {
    GaussianState v = vacuum(5);
    CHECK(v.n_modes() == 5);
    CHECK(v.mu.cwiseAbs().maxCoeff() == 0.0);
    CHECK((v.cov - 0.5 * Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::VectorXd nu = symplectic_eigenvalues(v.cov);
    CHECK((nu.array() - 0.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("thermal state structure") {
    ModeBasis basis(bparams);
    double res = 0.0;
    GaussianState th = thermal_state(1000.0, basis, &res);
    // the 1/omega divergence of the occupancy at the band edge dominates the
    // projection residual; only the in-band component defines the mode
    CHECK(res <= 1.0);
    CHECK(is_physical_covariance(th.cov, 1e-10));

    // exactly one excited symplectic mode, the rest vacuum
    Eigen::VectorXd nu = symplectic_eigenvalues(th.cov);
    CHECK(nu.head(nu.size() - 1).maxCoeff() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(nu(nu.size() - 1) > 0.5);

    // hotter bath, larger occupancy
    GaussianState th2 = thermal_state(2000.0, basis);
    CHECK(th2.cov.trace() > th.cov.trace());

    // x and p carry the same excitation: the excess is phase-insensitive
    const int N = basis.n_modes();
    Eigen::MatrixXd ex = th.cov - 0.5 * Eigen::MatrixXd::Identity(2 * N, 2 * N);
    CHECK((ex.topLeftCorner(N, N) - ex.bottomRightCorner(N, N)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ex.topRightCorner(N, N).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multimode squeezed vacuum is pure") {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> nd;
    const int N = 4;
    Eigen::MatrixXd Ax(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) Ax(i, j) = 0.3 * nd(rng);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    G.topLeftCorner(N, N) = Ax;
    G.bottomRightCorner(N, N) = -Ax.transpose();
    Eigen::MatrixXd M = exp_generator(G, 1.0);
    REQUIRE(symplectic_residual(M) < 1e-10);

    GaussianState s = multimode_squeezed_vacuum(M);
    CHECK(is_physical_covariance(s.cov, 1e-9));
    Eigen::VectorXd nu = symplectic_eigenvalues(s.cov);
    CHECK((nu.array() - 0.5).abs().maxCoeff() < 1e-9); // pure state
}

TEST_CASE("single-mode squeezed construction") {
    const int N = 6;
    Eigen::VectorXd zx = Eigen::VectorXd::Zero(2 * N), zp = Eigen::VectorXd::Zero(2 * N);
    zx(1) = 1.0;
    zp(N + 1) = 1.0;
    GaussianState s = single_mode_squeezed(2.0, 0.125, zx, zp);
    CHECK(zx.dot(s.cov * zx) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(zp.dot(s.cov * zp) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(is_physical_covariance(s.cov, 1e-9));

    CHECK_THROWS(single_mode_squeezed(0.3, 0.3, zx, zp));       // below uncertainty bound
    CHECK_THROWS(single_mode_squeezed(2.0, 0.2, zx, 0.9 * zp)); // not unit norm
}

TEST_CASE("fock mode coefficients") {
    ModeBasis basis({sigma0, 0.5, 16});
    double res = 0.0;
    Eigen::VectorXd c = fock_mode_coefficients({3, sigma0, 0.5}, basis, &res);
    CHECK(res < 1e-10);
    CHECK(c.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(c(0)) > 0.999); // fundamental of the same family is the first basis mode

    // a mode family far outside the band must be rejected
    CHECK_THROWS_AS(fock_mode_coefficients({1, 10.0 * sigma0, 30.0}, basis),
                    NumericalError);
}

TEST_CASE("fock wigner function") {
    ModeBasis basis({sigma0, 0.5, 8});
    const int N = basis.n_modes();
    FockStateSpec f0{0, sigma0, 0.5};
    Eigen::VectorXd origin = Eigen::VectorXd::Zero(2 * N);

    // n = 0 is the vacuum Gaussian
    CHECK(fock_wigner(f0, basis, origin) ==
          doctest::Approx(std::pow(1.0 / units::pi, N)).epsilon(1e-12));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * N);
    z(0) = 0.7;
    z(N) = -0.4;
    CHECK(fock_wigner(f0, basis, z) ==
          doctest::Approx(std::pow(1.0 / units::pi, N) * std::exp(-z.squaredNorm()))
              .epsilon(1e-12));

    // odd n is negative at the origin
    FockStateSpec f3{3, sigma0, 0.5};
    CHECK(fock_wigner(f3, basis, origin) < 0.0);
    CHECK(fock_wigner(f3, basis, origin) ==
          doctest::Approx(-std::pow(1.0 / units::pi, N)).epsilon(1e-12));

    // normalization over the occupied phase-space plane (complement is exact vacuum)
    auto plane_integral = [&](const FockStateSpec& f) {
        const int n_grid = 160;
        const double lim = 6.0, h = 2.0 * lim / n_grid;
        double acc = 0.0;
        Eigen::VectorXd zz = Eigen::VectorXd::Zero(2 * N);
        for (int i = 0; i < n_grid; ++i) {
            for (int j = 0; j < n_grid; ++j) {
                zz(0) = -lim + (i + 0.5) * h;
                zz(N) = -lim + (j + 0.5) * h;
                acc += fock_wigner(f, basis, zz);
            }
        }
        return acc * h * h * std::pow(units::pi, N - 1); // divide out vacuum complement
    };
    CHECK(plane_integral(f3) == doctest::Approx(1.0).epsilon(1e-6));
}
