#include "evsource/contour.hpp"
#include "evsource/errors.hpp"
#include "evsource/quadrature.hpp"

#include <cmath>

namespace evsource {

Complex psi_quadrature(const SourceParams& p, double x, double t,
                       const ContourOptions& options) {
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(t > 0.0)) throw DomainError("t must be > 0");

    const double ks = x / (2.0 * t);
    const Complex direction = std::sqrt(0.5) * Complex(1.0, -1.0); // e^{-i pi/4}

    // Perpendicular distance from k0 to the line k_I = k_s - k_R.
    const double distance = std::fabs(1.0 - p.v0 - ks) / std::sqrt(2.0);
    if (distance < options.pole_clearance) {
        throw PoleProximityError("psi_quadrature: path passes too close to k0; nudge t");
    }

    // On the line the exponent collapses to i k_s^2 t - t s^2; substitute
    // sigma = s sqrt(t) so the Gaussian window has unit width.
    const double sqrt_t = std::sqrt(t);
    const auto integrand = [&](double sigma) -> Complex {
        const Complex k = ks + direction * (sigma / sqrt_t);
        const Complex bracket = 1.0 / (k - p.k0) + 1.0 / (k + p.k0);
        return std::exp(-sigma * sigma) * bracket;
    };

    const double sigma_max = 6.2; // exp(-38.4) ~ 2e-17 tail
    // Arc-length position of the projection of k0 onto the line seeds the
    // panel layout near the pole.
    const double s_p = ((p.k0 - ks) * std::conj(direction)).real();
    const double sigma_p = s_p * sqrt_t;
    const double sigma_w = std::max(distance * sqrt_t, 1e-6);
    std::vector<double> breakpoints;
    for (double m : {-30.0, -5.0, -1.0, 0.0, 1.0, 5.0, 30.0}) {
        breakpoints.push_back(sigma_p + m * sigma_w);
    }

    // Absolute floor tied to the integrand scale: the line integral can be
    // orders below the integrand through cancellation, where a purely
    // relative target would chase rounding noise.
    const double d_other = (1.0 - p.v0 + ks) / std::sqrt(2.0);
    const double integrand_scale =
        std::sqrt(M_PI) * (1.0 / distance + 1.0 / d_other);
    QuadratureOptions q;
    q.rel_tol = options.rel_tol;
    q.abs_tol = 1e-15 * integrand_scale;
    q.max_panels = 20000;
    const Complex line_integral =
        integrate_or_throw(integrand, -sigma_max, sigma_max, breakpoints, q);

    const Complex i_unit(0.0, 1.0);
    const Complex phase = std::exp(i_unit * (ks * ks * t));
    Complex psi = phase * (i_unit * direction / (2.0 * M_PI * sqrt_t)) * line_integral;

    if (pole_active(p, x, t)) {
        // The line has dropped below k0: add back the residue the original
        // contour (passing above all poles) still encloses.
        psi += std::exp(i_unit * (p.k0 * x - p.omega0 * t));
    }
    return psi;
}

} // namespace evsource
