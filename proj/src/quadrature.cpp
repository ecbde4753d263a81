#include "corrtomo/quadrature.hpp"
#include "corrtomo/units.hpp"
#include <cmath>
#include <stdexcept>

namespace corrtomo {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on Legendre polynomials, symmetric roots.
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(units::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

CompositeRule composite_gauss_legendre(double a, double b, int panels, int order) {
    if (!(b > a)) throw std::invalid_argument("composite_gauss_legendre: need b > a");
    if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: panels must be >= 1");
    Eigen::VectorXd x, w;
    gauss_legendre(order, x, w);
    CompositeRule r;
    r.a = a;
    r.b = b;
    r.nodes.resize(panels * order);
    r.weights.resize(panels * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int j = 0; j < order; ++j) {
            r.nodes[p * order + j] = lo + 0.5 * h * (x[j] + 1.0);
            r.weights[p * order + j] = 0.5 * h * w[j];
        }
    }
    return r;
}

} // namespace corrtomo
