#pragma once

#include <functional>
#include <vector>

namespace ntnlink::quad {

struct GlRule {
    std::vector<double> x; // nodes on (-1, 1)
    std::vector<double> w;
};

/// Gauss-Legendre rule of order n (cached, thread-safe after first construction).
const GlRule& gl_rule(int n);

/// Integrate f over [a, b] with a fixed n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Adaptive quadrature on [a, b] (Gauss 15/7 pairs with bisection).
/// Stops when the local error estimate is below max(rel_tol*|I|, abs_tol).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 48);

/// Integral over [a, inf): geometric segments until the tail is negligible.
double integrate_to_inf(const std::function<double(double)>& f, double a, double scale,
                        double rel_tol = 1e-10, int max_segments = 200);

} // namespace ntnlink::quad
