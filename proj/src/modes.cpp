#include "corrtomo/modes.hpp"
#include "corrtomo/units.hpp"
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>
#include <stdexcept>

namespace corrtomo {

void validate(const ModeBasisParams& p) {
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw std::invalid_argument("mode basis: sigma must be positive and finite");
    if (!(p.k > 0.0) || !std::isfinite(p.k))
        throw std::invalid_argument("mode basis: k must be positive and finite");
    if (p.i_max < 1)
        throw std::invalid_argument("mode basis: i_max must be >= 1");
}

double fundamental_spectrum(double sigma, double k, double omega) {
    if (!std::isfinite(omega)) throw std::invalid_argument("mode_function: non-finite omega");
    if (omega < 0.0) return 0.0;
    if (omega == 0.0) return k > 0.0 ? 0.0 : std::sqrt(2.0 / sigma / std::tgamma(0.5));
    // log-space evaluation so large k does not overflow
    const double lg = std::lgamma(k + 0.5);
    const double u = omega / sigma;
    const double logf = 0.5 * (std::log(2.0 / sigma) - lg) + k * std::log(u) - 0.5 * u * u;
    return std::exp(logf);
}

Eigen::VectorXd laguerre_factors(double sigma, double k, int i_max, double omega) {
    const double a = k - 0.5;
    const double x = (omega / sigma) * (omega / sigma);
    Eigen::VectorXd L(i_max);
    // three-term recurrence for generalized Laguerre polynomials
    double Lm1 = 0.0, L0 = 1.0;
    for (int i = 0; i < i_max; ++i) {
        if (i == 0) {
            L[0] = 1.0;
        } else {
            double Ln = ((2.0 * i - 1.0 + a - x) * L0 - (i - 1.0 + a) * Lm1) / i;
            Lm1 = L0;
            L0 = Ln;
            L[i] = Ln;
        }
    }
    // normalization sqrt(Gamma(i+1)Gamma(k+1/2)/Gamma(i+k+1/2))
    const double lgk = std::lgamma(k + 0.5);
    for (int i = 0; i < i_max; ++i) {
        double lognorm = 0.5 * (std::lgamma(i + 1.0) + lgk - std::lgamma(i + k + 0.5));
        L[i] *= std::exp(lognorm);
    }
    return L;
}

double mode_function(const ModeBasisParams& p, int i, double omega) {
    validate(p);
    if (i < 0 || i >= p.i_max) throw std::out_of_range("mode_function: index out of range");
    return mode_functions(p, omega)[i];
}

Eigen::VectorXd mode_functions(const ModeBasisParams& p, double omega) {
    const double f0 = fundamental_spectrum(p.sigma, p.k, omega);
    Eigen::VectorXd v = laguerre_factors(p.sigma, p.k, p.i_max, omega);
    return f0 * v;
}

CenterBandwidth center_and_bandwidth(double sigma, double k) {
    const double ratio = std::exp(std::lgamma(k + 1.0) - std::lgamma(k + 0.5));
    const double center = sigma * ratio;
    const double var = k + 0.5 - ratio * ratio;
    const double bandwidth = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma * std::sqrt(std::max(var, 0.0));
    return {center, bandwidth};
}

CenterBandwidth center_and_bandwidth_approx(double sigma, double k) {
    return {sigma * std::sqrt(k + 1.0 / units::pi),
            std::sqrt(2.0 * std::log(2.0)) * sigma};
}

ModeBasisParams params_from_center_bandwidth(double center, double bandwidth, int i_max) {
    if (!(center > 0.0) || !(bandwidth > 0.0))
        throw std::invalid_argument("params_from_center_bandwidth: center and bandwidth must be positive");
    const double target = center / bandwidth;
    auto ratio_of_k = [](double k) {
        CenterBandwidth cb = center_and_bandwidth(1.0, k);
        return cb.center / cb.bandwidth;
    };
    const double rmin = std::sqrt(2.0 / (units::pi - 2.0)) / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    if (target <= rmin)
        throw std::invalid_argument("params_from_center_bandwidth: center/bandwidth ratio below the k->0 minimum");
    double klo = 1e-9, khi = 1.0;
    while (ratio_of_k(khi) < target) {
        khi *= 2.0;
        if (khi > 1e9) throw std::runtime_error("params_from_center_bandwidth: k search diverged");
    }
    for (int it = 0; it < 200; ++it) {
        double km = 0.5 * (klo + khi);
        (ratio_of_k(km) < target ? klo : khi) = km;
    }
    double k = 0.5 * (klo + khi);
    double sigma = center * std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0));
    return {sigma, k, i_max};
}

CycleRegime cycle_regime(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("cycle_regime: k must be positive");
    if (k <= 1.0) return CycleRegime::subcycle;
    if (k <= 3.0) return CycleRegime::single_cycle;
    return CycleRegime::multicycle;
}

const char* cycle_regime_name(CycleRegime r) {
    switch (r) {
        case CycleRegime::subcycle: return "subcycle";
        case CycleRegime::single_cycle: return "single-cycle";
        default: return "multicycle";
    }
}

std::complex<double> time_domain_fundamental(double sigma, double k, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("time_domain_fundamental: non-finite t");
    const double z = -0.5 * sigma * sigma * t * t;
    double h1, h2;
    try {
        h1 = boost::math::hypergeometric_1F1(0.5 * (k + 1.0), 0.5, z);
        h2 = boost::math::hypergeometric_1F1(0.5 * k + 1.0, 1.5, z);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("time_domain_fundamental: hypergeometric evaluation failed: ") + e.what());
    }
    // overall factor sigma from the substitution u = omega/sigma in the
    // Fourier integral (required for dimensional consistency with the
    // frequency-domain normalization)
    const double pref = sigma / std::sqrt(2.0 * units::pi) *
                        std::exp(0.5 * (std::log(2.0 / sigma) - std::lgamma(k + 0.5))) *
                        std::pow(2.0, 0.5 * (k - 1.0));
    const double re = std::exp(std::lgamma(0.5 * (k + 1.0))) * h1;
    const double im = -t * std::sqrt(2.0) * sigma * std::exp(std::lgamma(0.5 * k + 1.0)) * h2;
    return {pref * re, pref * im};
}

double omega_cutoff(const ModeBasisParams& p) {
    // Must cover the classically allowed region of the highest retained
    // Laguerre mode (x ~ 4 i_max + 2 k), plus a Gaussian tail margin; the
    // bare sqrt(k)+10 rule is only adequate for low mode indices.
    const double hi = std::sqrt(4.0 * (p.i_max - 1) + 2.0 * p.k + 3.0) + 6.0;
    return p.sigma * std::max(std::sqrt(p.k) + 10.0, hi);
}

ModeBasis::ModeBasis(const ModeBasisParams& params) : params_(params) {
    validate(params_);
    const double cut = omega_cutoff(params_);
    const int panels = std::max(24, 2 * params_.i_max);
    rule_ = composite_gauss_legendre(0.0, cut, panels, 40);
    F_.resize(params_.i_max, rule_.size());
    for (int q = 0; q < rule_.size(); ++q)
        F_.col(q) = mode_functions(params_, rule_.nodes[q]);
}

Eigen::MatrixXd ModeBasis::gram() const {
    return F_ * rule_.weights.asDiagonal() * F_.transpose();
}

Eigen::MatrixXd ModeBasis::frequency_matrix() const {
    Eigen::VectorXd w = rule_.weights.cwiseProduct(rule_.nodes);
    return F_ * w.asDiagonal() * F_.transpose();
}

ModeBasis::Projection ModeBasis::project(const std::function<std::complex<double>(double)>& spectrum) const {
    Eigen::VectorXcd s(rule_.size());
    for (int q = 0; q < rule_.size(); ++q) s[q] = spectrum(rule_.nodes[q]);
    Eigen::VectorXcd sw = s.cwiseProduct(rule_.weights.cast<std::complex<double>>());
    Projection pr;
    pr.coeffs = F_.cast<std::complex<double>>() * sw;
    double norm2 = (s.cwiseAbs2().cwiseProduct(rule_.weights)).sum();
    double coeff2 = pr.coeffs.squaredNorm();
    pr.residual = norm2 > 0.0 ? 1.0 - coeff2 / norm2 : 0.0;
    return pr;
}

std::complex<double> ModeBasis::time_domain_mode(int i, double t) const {
    if (i < 0 || i >= params_.i_max) throw std::out_of_range("time_domain_mode: index out of range");
    std::complex<double> acc = 0.0;
    for (int q = 0; q < rule_.size(); ++q) {
        double w = rule_.nodes[q];
        acc += rule_.weights[q] * F_(i, q) * std::exp(std::complex<double>(0.0, -w * t));
    }
    return acc / std::sqrt(2.0 * units::pi);
}

EvenOdd ModeBasis::even_odd_time_modes(int i, double t) const {
    std::complex<double> f = time_domain_mode(i, t);
    return {std::sqrt(2.0) * f.real(), -std::sqrt(2.0) * f.imag()};
}

} // namespace corrtomo
