#pragma once
#include <Eigen/Dense>

namespace corrtomo {

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

// Composite Gauss-Legendre rule: `panels` uniform panels on [a,b],
// `order` nodes per panel.
struct CompositeRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    double a = 0.0, b = 0.0;
    int size() const { return static_cast<int>(nodes.size()); }
};

CompositeRule composite_gauss_legendre(double a, double b, int panels, int order);

} // namespace corrtomo
