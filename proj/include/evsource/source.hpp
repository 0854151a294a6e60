#pragma once

#include "evsource/faddeeva.hpp"

namespace evsource {

/// Injection parameters of the decaying evanescent point source.  The
/// single knob is the dimensionless velocity v0 in [0, 1]; everything
/// else is derived from the complex wavenumber k0 = -v0 + i.
struct SourceParams {
    double v0 = 0.0;
    Complex k0;       // -v0 + i
    Complex omega0;   // k0^2 = (v0^2 - 1) - 2 i v0
    double lifetime;  // 1 / (2 v0); +inf at v0 = 0
};

/// Physical scales used to convert to and from dimensionless units.
/// By convention L is the inverse imaginary part of the dimensional
/// wavenumber.
struct DimensionalScale {
    double length;  // L, meters
    double mass;    // m, kg
    double hbar;    // J s
};

/// The complex time tau = -x / (2 k0); its modulus is the traversal-time
/// scale that marks the arrival of the density peak at x.
struct ComplexTime {
    Complex tau;
    double tau_R;
    double tau_I;
    double modulus;
};

/// Saddle-point variables of the contour representation at (x, t).
struct SaddleVariables {
    double k_s;       // x / (2 t)
    Complex u_plus;   // +sqrt(t/2) (1+i) k0 (1 + tau/t)
    Complex u_minus;  // -sqrt(t/2) (1+i) k0 (1 - tau/t)
};

/// Builds SourceParams, checking 0 <= v0 <= 1.
SourceParams make_params(double v0);

/// Dimensional <-> dimensionless conversions, x = x~/L, t = t~ hbar/(2 m L^2).
void validate_scale(const DimensionalScale& scale);
double to_dimensionless_x(const DimensionalScale& scale, double x_dimensional);
double to_dimensionless_t(const DimensionalScale& scale, double t_dimensional);
double to_dimensional_x(const DimensionalScale& scale, double x);
double to_dimensional_t(const DimensionalScale& scale, double t);

ComplexTime complex_time(const SourceParams& p, double x);

SaddleVariables saddle_variables(const SourceParams& p, double x, double t);

/// Shared support predicate for the pole contribution: true iff t >= t_c,
/// written so that the equivalent wavenumber condition k_s <= 1 - v0
/// evaluates identically in floating point.
bool pole_active(const SourceParams& p, double x, double t);

/// Critical time t_c = x / (2 (1 - v0)); +inf at v0 = 1.
double critical_time(const SourceParams& p, double x);

/// Exact wave function psi(x, t) for x >= 0, t > 0 through the Faddeeva
/// representation.  At t = 0 the field is the switch-on state: 0 for
/// x > 0 and 1 at x = 0 (documented convention, not evaluated here).
Complex psi_exact(const SourceParams& p, double x, double t);

/// Analytic spatial derivative of psi_exact.
Complex psi_dx(const SourceParams& p, double x, double t);

/// Probability flux J = 2 Im[conj(psi) d(psi)/dx].
double flux(const SourceParams& p, double x, double t);

struct NormOptions {
    double rel_tol = 1e-10;
    double max_horizon = 2.0e6;
};

/// Total emitted-particle number N = int_0^inf J(0, t) dt, by adaptive
/// quadrature with horizon doubling until the tail increment is
/// negligible.  Throws DomainError at v0 = 0 (the non-decaying source
/// has no established particle count) and ConvergenceError if the tail
/// does not settle.
double norm_factor(const SourceParams& p, const NormOptions& options = {});

/// Flux-normalized wave function psi / sqrt(N).  N is cached per v0
/// (thread-safe, idempotent compute-then-store).
Complex psi_normalized(const SourceParams& p, double x, double t);

/// Cached accessor for norm_factor used by psi_normalized.
double norm_factor_cached(const SourceParams& p);

} // namespace evsource
