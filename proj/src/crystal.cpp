#include "corrtomo/crystal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "corrtomo/quadrature.hpp"
#include "corrtomo/units.hpp"

namespace corrtomo {

namespace {

double sq(double x) { return x * x; }

// n = sqrt(a + b q) with q = P / (P - w^2 gamma), P = (2 pi c)^2
struct IndexDerivs {
    double n, n1, n2; // n, dn/dw, d2n/dw2
};

// n^2 = a + b q; negative inside the absorption window just above the pole,
// where the dispersion model is undefined
double index_squared(const SellmeierSet& s, double omega) {
    const double P = sq(2.0 * units::pi * units::c0);
    const double den = P - omega * omega * s.gamma;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return s.a + s.b * P / den;
}

IndexDerivs index_derivs(const SellmeierSet& s, double omega) {
    const double P = sq(2.0 * units::pi * units::c0);
    const double den = P - omega * omega * s.gamma;
    if (den == 0.0 || index_squared(s, omega) <= 0.0)
        throw NumericalError("refractive index evaluated inside the absorption window of the "
                             "dispersion model");
    const double q = P / den;
    const double q1 = 2.0 * omega * s.gamma * P / sq(den);
    const double q2 = 2.0 * s.gamma * P / sq(den) + 8.0 * sq(omega * s.gamma) * P / (den * den * den);
    IndexDerivs d;
    d.n = std::sqrt(s.a + s.b * q);
    d.n1 = s.b * q1 / (2.0 * d.n);
    d.n2 = s.b * q2 / (2.0 * d.n) - sq(s.b * q1) / (4.0 * d.n * d.n * d.n);
    return d;
}

const SellmeierSet& z_set(const CrystalConfig& c) {
    return c.birefringent_z ? *c.birefringent_z : c.sellmeier;
}

double wavevector(const SellmeierSet& s, double omega) {
    return omega * refractive_index(s, omega) / units::c0;
}

} // namespace

double sellmeier_pole(const SellmeierSet& s) {
    return 2.0 * units::pi * units::c0 / std::sqrt(s.gamma);
}

double refractive_index(const SellmeierSet& s, double omega) { return index_derivs(s, omega).n; }

double group_index(const SellmeierSet& s, double omega) {
    const IndexDerivs d = index_derivs(s, omega);
    return d.n + omega * d.n1;
}

double dispersion_param(const SellmeierSet& s, double omega) {
    const IndexDerivs d = index_derivs(s, omega);
    return 2.0 * d.n1 + omega * d.n2;
}

double beam_area(const CrystalConfig& c) {
    if (c.beam_area > 0.0) return c.beam_area;
    const double w0 = 3e-6;
    return units::pi * w0 * w0;
}

double coupling_lambda(const CrystalConfig& c, double probe_center) {
    const double n = refractive_index(c.sellmeier, probe_center);
    const double d = -sq(sq(n)) * c.r41;
    return beam_area(c) * units::eps0 * d / 2.0;
}

double crystal_profile_ft(const CrystalConfig& c, double k, double lambda) {
    const double L = c.length;
    auto rect = [&](double kk) {
        const double x = kk * L / 2.0;
        const double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        return lambda * L / std::sqrt(2.0 * units::pi) * sinc;
    };
    switch (c.profile) {
    case CrystalProfile::rect:
        return rect(k);
    case CrystalProfile::cos_poled: {
        if (c.poling_period <= 0.0)
            throw std::invalid_argument("cos_poled profile requires a positive poling period");
        const double g = 2.0 * units::pi / c.poling_period;
        return 0.5 * (rect(k + g) + rect(k - g));
    }
    case CrystalProfile::gaussian_exp:
        return lambda / std::sqrt(2.0 * units::pi) * std::exp(-std::abs(L * k / 2.0));
    }
    throw std::invalid_argument("unknown crystal profile");
}

double wavevector_mismatch(const CrystalConfig& c, double Omega, double omega) {
    return wavevector(z_set(c), Omega + omega) - wavevector(c.sellmeier, Omega) -
           wavevector(c.sellmeier, omega);
}

namespace {

// The dispersion model diverges toward the absorption resonance; the
// interaction is switched off smoothly once the index grows beyond a cap so
// the coupling integrals stay spectrally convergent. The transition sits in
// the deep spectral tails of the physical configurations.
double validity_weight(double n2) {
    if (n2 <= 1e-6) return 0.0;
    constexpr double n_cap = 4.0, n_width = 0.35;
    return 0.5 * (1.0 - std::tanh((std::sqrt(n2) - n_cap) / n_width));
}

} // namespace

KernelValues kernels(double Omega, double omega, const CrystalConfig& c, const ProbeSpectrum& probe) {
    const double chi = validity_weight(index_squared(c.sellmeier, Omega)) *
                       validity_weight(index_squared(c.sellmeier, omega)) *
                       validity_weight(index_squared(z_set(c), Omega + omega));
    if (chi == 0.0) return {0.0, 0.0};
    const double A = beam_area(c);
    const double pref = (1.0 / units::hbar) * std::pow(2.0 * units::pi, 1.5) *
                        std::pow(units::hbar / (4.0 * units::pi * units::eps0 * units::c0 * A), 1.5);
    const double lam = coupling_lambda(c, center_and_bandwidth(probe.sigma, probe.k).center);
    const double sum = Omega + omega;
    const double amp = chi * pref * std::sqrt(sum / refractive_index(z_set(c), sum)) *
                       std::sqrt(Omega * omega /
                                 (refractive_index(c.sellmeier, Omega) *
                                  refractive_index(c.sellmeier, omega))) *
                       crystal_profile_ft(c, wavevector_mismatch(c, Omega, omega), lam);
    auto fa = [&](double w) { return fundamental_spectrum(probe.sigma, probe.k, w); };
    KernelValues kv;
    kv.S = amp * fa(omega + Omega);
    // relative minus sign between the difference-frequency terms keeps the
    // beam-splitting coupling antisymmetric, as unitarity of the single-pass
    // propagator requires
    kv.B = amp * (fa(omega - Omega) - fa(Omega - omega));
    return kv;
}

namespace {

NonlinearCouplings couple_on_grid(const ModeBasisParams& basis, const CrystalConfig& c,
                                  const ProbeSpectrum& probe, int panels, int order) {
    const double hi = omega_cutoff(basis);
    const CompositeRule rule = composite_gauss_legendre(1e-6 * basis.sigma, hi, panels, order);
    const int n = static_cast<int>(rule.nodes.size());

    Eigen::MatrixXd F(basis.i_max, n);
    for (int j = 0; j < n; ++j) {
        const Eigen::VectorXd col = mode_functions(basis, rule.nodes[j]);
        F.col(j) = col * rule.weights[j];
    }

    Eigen::MatrixXd KS(n, n), KB(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const KernelValues kv = kernels(rule.nodes[i], rule.nodes[j], c, probe);
            KS(i, j) = kv.S;
            KB(i, j) = kv.B;
        }

    NonlinearCouplings nc;
    nc.S = 2.0 * F * KS * F.transpose();
    nc.B = 2.0 * F * KB * F.transpose();
    nc.quadrature_rel_error = 0.0;
    return nc;
}

} // namespace

NonlinearCouplings discretize_couplings(const ModeBasisParams& basis, const CrystalConfig& c,
                                        const ProbeSpectrum& probe) {
    int panels = std::max(32, 2 * basis.i_max);
    for (int attempt = 0; attempt < 3; ++attempt) {
        NonlinearCouplings coarse = couple_on_grid(basis, c, probe, panels, 16);
        NonlinearCouplings fine = couple_on_grid(basis, c, probe, panels, 32);
        const double scale = std::max(fine.S.cwiseAbs().maxCoeff(), fine.B.cwiseAbs().maxCoeff());
        const double diff = std::max((fine.S - coarse.S).cwiseAbs().maxCoeff(),
                                     (fine.B - coarse.B).cwiseAbs().maxCoeff());
        fine.quadrature_rel_error = (scale > 0.0) ? diff / scale : 0.0;
        if (fine.quadrature_rel_error < 1e-8) return fine;
        panels *= 2;
        if (attempt == 2) return fine;
    }
    throw NumericalError("coupling quadrature failed to converge");
}

Eigen::MatrixXd nl_generator(const NonlinearCouplings& nc) {
    const Eigen::Index N = nc.S.rows();
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    G.topLeftCorner(N, N) = -(nc.S - nc.B);
    G.bottomRightCorner(N, N) = nc.S + nc.B;
    return G;
}

SymplecticMatrix nl_symplectic(const Eigen::MatrixXd& G, double alpha) {
    return exp_generator(alpha * G);
}

TruncatedSchurBlock leading_schur_block(const Eigen::MatrixXd& T) {
    const double scale = T.cwiseAbs().maxCoeff();
    for (int i = 0; i + 1 < T.rows(); ++i) {
        if (std::abs(T(i + 1, i)) <= 1e-12 * scale) continue;
        TruncatedSchurBlock blk;
        blk.a = 0.5 * (T(i, i) + T(i + 1, i + 1));
        blk.b = -T(i, i + 1);
        blk.c = T(i + 1, i);
        blk.index = i;
        if (blk.b * blk.c > 0.0) return blk;
        ++i; // skip the partner row of a non-rotational block
    }
    throw NumericalError("Schur form contains no complex-conjugate block");
}

Eigen::Matrix4d truncated_nl_closed_form(const TruncatedSchurBlock& blk, double alpha) {
    const double root = std::sqrt(blk.b * blk.c);
    const double delta = alpha * root;
    const double gamma = std::sqrt(blk.b / blk.c);
    const double cd = std::cos(delta), sd = std::sin(delta);
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    const double ep = std::exp(alpha * blk.a), em = std::exp(-alpha * blk.a);
    M(0, 0) = ep * cd;
    M(0, 1) = -ep * gamma * sd;
    M(1, 0) = ep * sd / gamma;
    M(1, 1) = ep * cd;
    M(2, 2) = em * cd;
    M(2, 3) = -em * sd / gamma;
    M(3, 2) = em * gamma * sd;
    M(3, 3) = em * cd;
    return M;
}

TruncatedSchurBlock to_x_orientation(const TruncatedSchurBlock& blk, PhaseBlock source) {
    if (source == PhaseBlock::x) return blk;
    return TruncatedSchurBlock{-blk.a, blk.c, blk.b, blk.index};
}

// The block is expected in the Schur form of the quadrature's own diagonal
// block of the generator; the x and p interference requirements (equal and
// opposite transformed components, respectively) then reduce to the
// arctangent expressions below.
ProbeOptimum optimize_probe_amplitude(double c1, double c2, const TruncatedSchurBlock& blk,
                                      PhaseBlock quadrature) {
    const double root = std::sqrt(blk.b * blk.c);
    double num, den;
    if (quadrature == PhaseBlock::x) {
        num = root * (c2 - c1);
        den = c1 * blk.b + c2 * blk.c;
    } else {
        num = root * (c1 + c2);
        den = c1 * blk.b - c2 * blk.c;
    }
    if (num == 0.0 && den == 0.0)
        throw NumericalError("probe optimization is degenerate for this LO");
    const double delta0 = std::atan2(num, den);
    const double delta1 = (delta0 > 0.0) ? delta0 - units::pi : delta0 + units::pi;
    ProbeOptimum opt;
    opt.alpha_principal = delta0 / root;
    opt.alpha_second = delta1 / root;
    return opt;
}

double magnus_threshold(const CrystalConfig& c, double probe_center) {
    const double lam = std::abs(coupling_lambda(c, probe_center));
    return (1.0 / lam) * std::sqrt(4.0 * units::pi * units::eps0 * units::c0 * beam_area(c) /
                                   units::hbar);
}

std::vector<QpmPoint> qpm_curve(const std::vector<double>& xi_grid, const CrystalConfig& c,
                                double pump_center, int lattice_sign) {
    const double half = pump_center / 2.0;
    const double g = (c.profile == CrystalProfile::cos_poled && c.poling_period > 0.0)
                         ? 2.0 * units::pi / c.poling_period
                         : 0.0;
    const double r = wavevector_mismatch(c, half, half) + lattice_sign * g;
    const double s = (group_index(z_set(c), pump_center) - group_index(c.sellmeier, half)) / units::c0;
    const double t =
        (2.0 * dispersion_param(z_set(c), pump_center) - dispersion_param(c.sellmeier, half)) /
        (4.0 * units::c0);
    const double u = dispersion_param(c.sellmeier, half) / (4.0 * units::c0);

    std::vector<QpmPoint> out;
    out.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        const double d = 2.0 * xi - pump_center;
        const double radicand = (r + s * d + t * d * d) / u;
        QpmPoint p;
        p.xi = xi;
        p.two_upsilon = (radicand >= 0.0) ? std::sqrt(radicand) : std::nan("");
        out.push_back(p);
    }
    return out;
}

} // namespace corrtomo
