#pragma once

#include <Eigen/Dense>

namespace ppsolve {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    Eigen::ArrayXd nodes;
    Eigen::ArrayXd weights;
};

/// Rule of the given order (= number of points), cached per order. Thread-safe.
const QuadratureRule& gauss_legendre(int order);

/// Single-panel Gauss-Legendre integral of f over [a, b].
template <class F>
double gl_panel(F&& f, double a, double b, const QuadratureRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int q = 0; q < rule.nodes.size(); ++q) sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
    return half * sum;
}

template <class F>
double gl_panel(F&& f, double a, double b, int order) {
    return gl_panel(static_cast<F&&>(f), a, b, gauss_legendre(order));
}

}  // namespace ppsolve
