#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace evsource {

using Complex = std::complex<double>;

struct QuadratureOptions {
    double rel_tol = 1e-11;
    double abs_tol = 0.0;
    int max_panels = 4000;
};

struct QuadratureResult {
    Complex value;
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
};

/// Adaptive panel integration of a complex-valued integrand over [a, b].
/// Each panel is evaluated with nested Gauss-Legendre rules (12 and 24
/// points); the panel with the largest error estimate is bisected until
/// the global estimate meets rel_tol * |value| + abs_tol.
///
/// `breakpoints` may carry interior points where the caller knows the
/// integrand has structure (a near-pole, say); they seed the initial
/// panel layout.
QuadratureResult integrate(const std::function<Complex(double)>& f,
                           double a, double b,
                           const std::vector<double>& breakpoints = {},
                           const QuadratureOptions& options = {});

/// Same, throwing ConvergenceError when the tolerance is not met.
Complex integrate_or_throw(const std::function<Complex(double)>& f,
                           double a, double b,
                           const std::vector<double>& breakpoints = {},
                           const QuadratureOptions& options = {});

} // namespace evsource
