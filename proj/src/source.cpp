#include "evsource/source.hpp"
#include "evsource/errors.hpp"
#include "evsource/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace evsource {
namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589;

// u_plus and u_minus written through A = sqrt(t/2) (1+i) k0 and zeta = tau/t,
// so u_+ = A (1 + zeta) and u_- = -A (1 - zeta).
struct UPair {
    Complex A;
    Complex u_plus;
    Complex u_minus;
};

UPair make_u(const SourceParams& p, double x, double t) {
    const Complex A = std::sqrt(0.5 * t) * Complex(1.0, 1.0) * p.k0;
    const Complex tau = -x / (2.0 * p.k0);
    const Complex zeta = tau / t;
    return {A, A * (1.0 + zeta), -A * (1.0 - zeta)};
}

void check_spacetime(double x, double t) {
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(t > 0.0)) throw DomainError("t must be > 0");
}

} // namespace

SourceParams make_params(double v0) {
    if (!(v0 >= 0.0 && v0 <= 1.0)) {
        throw DomainError("v0 must lie in [0, 1]");
    }
    SourceParams p;
    p.v0 = v0;
    p.k0 = Complex(-v0, 1.0);
    p.omega0 = p.k0 * p.k0;
    p.lifetime = (v0 > 0.0) ? 1.0 / (2.0 * v0)
                            : std::numeric_limits<double>::infinity();
    return p;
}

void validate_scale(const DimensionalScale& scale) {
    if (!(scale.length > 0.0 && scale.mass > 0.0 && scale.hbar > 0.0)) {
        throw DomainError("scale members must be strictly positive");
    }
}

double to_dimensionless_x(const DimensionalScale& scale, double x_dimensional) {
    validate_scale(scale);
    return x_dimensional / scale.length;
}

double to_dimensionless_t(const DimensionalScale& scale, double t_dimensional) {
    validate_scale(scale);
    return t_dimensional * scale.hbar / (2.0 * scale.mass * scale.length * scale.length);
}

double to_dimensional_x(const DimensionalScale& scale, double x) {
    validate_scale(scale);
    return x * scale.length;
}

double to_dimensional_t(const DimensionalScale& scale, double t) {
    validate_scale(scale);
    return t * 2.0 * scale.mass * scale.length * scale.length / scale.hbar;
}

ComplexTime complex_time(const SourceParams& p, double x) {
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    ComplexTime ct;
    ct.tau = -x / (2.0 * p.k0);
    ct.tau_R = ct.tau.real();
    ct.tau_I = ct.tau.imag();
    ct.modulus = std::abs(ct.tau);
    return ct;
}

SaddleVariables saddle_variables(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    const UPair u = make_u(p, x, t);
    return {x / (2.0 * t), u.u_plus, u.u_minus};
}

bool pole_active(const SourceParams& p, double x, double t) {
    // t >= t_c and k_s <= 1 - v0 phrased as one exact comparison.
    return x <= 2.0 * t * (1.0 - p.v0);
}

double critical_time(const SourceParams& p, double x) {
    if (p.v0 >= 1.0) return std::numeric_limits<double>::infinity();
    return x / (2.0 * (1.0 - p.v0));
}

Complex psi_exact(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    const UPair u = make_u(p, x, t);
    const Complex w_minus = faddeeva(-u.u_minus); // argument always in Im >= 0
    const Complex w_plus = faddeeva(-u.u_plus);
    const Complex prefactor = std::exp(Complex(0.0, x * x / (4.0 * t)));
    return 0.5 * prefactor * (w_minus + w_plus);
}

Complex psi_dx(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    const UPair u = make_u(p, x, t);
    // Both u_+ and u_- move at the same rate with x:
    // du/dx = -(1+i) / (2 sqrt(2 t)).
    const Complex mu = -Complex(1.0, 1.0) / (2.0 * std::sqrt(2.0 * t));
    const Complex wp_minus = faddeeva_derivative(-u.u_minus);
    const Complex wp_plus = faddeeva_derivative(-u.u_plus);
    const Complex prefactor = std::exp(Complex(0.0, x * x / (4.0 * t)));
    const Complex psi = psi_exact(p, x, t);
    return Complex(0.0, x / (2.0 * t)) * psi -
           0.5 * mu * prefactor * (wp_minus + wp_plus);
}

double flux(const SourceParams& p, double x, double t) {
    const Complex psi = psi_exact(p, x, t);
    const Complex dpsi = psi_dx(p, x, t);
    return 2.0 * std::imag(std::conj(psi) * dpsi);
}

namespace {

// Flux at the origin with the boundary value taken in closed form.
double flux_at_origin(const SourceParams& p, double t) {
    const double s = std::sqrt(0.5 * t);
    const Complex A = s * Complex(1.0, 1.0) * p.k0;
    const Complex mu = -Complex(1.0, 1.0) / (2.0 * std::sqrt(2.0 * t));
    const Complex wp_sum = faddeeva_derivative(A) + faddeeva_derivative(-A);
    const Complex dpsi = -0.5 * mu * wp_sum;
    const Complex psi = std::exp(Complex(0.0, -1.0) * p.omega0 * t);
    return 2.0 * std::imag(std::conj(psi) * dpsi);
}

} // namespace

double norm_factor(const SourceParams& p, const NormOptions& options) {
    if (!(p.v0 > 0.0)) {
        throw DomainError("norm_factor requires v0 > 0");
    }
    const auto integrand = [&p](double t) -> Complex {
        return Complex(flux_at_origin(p, t), 0.0);
    };
    // The integrand behaves like 1/sqrt(t) near zero; substitute t = s^2 on
    // the first interval so the transformed integrand is smooth.
    const auto integrand_sq = [&p](double s) -> Complex {
        return Complex(2.0 * s * flux_at_origin(p, s * s), 0.0);
    };
    QuadratureOptions q;
    q.rel_tol = 0.1 * options.rel_tol;
    q.abs_tol = 1e-14;
    double total = integrate_or_throw(integrand_sq, 0.0, 1.0, {}, q).real();

    // Main envelope window: both exp(-4 v0 t) and the slower cross-term
    // envelope exp(-2 v0 t) must be negligible at the horizon.
    double horizon = std::max(30.0, 7.0 / p.v0);
    total += integrate_or_throw(integrand, 1.0, horizon, {}, q).real();

    // Horizon doubling until the added tail is far below tolerance.
    bool settled = false;
    while (horizon < options.max_horizon) {
        const double next = 2.0 * horizon;
        const double inc = integrate_or_throw(integrand, horizon, next, {}, q).real();
        total += inc;
        horizon = next;
        if (std::fabs(inc) < 0.25 * options.rel_tol * std::fabs(total)) {
            settled = true;
            break;
        }
    }
    if (!settled) {
        throw ConvergenceError("norm_factor: tail did not settle inside the horizon budget");
    }
    if (!(total > 0.0)) {
        throw ConvergenceError("norm_factor: non-positive integral");
    }
    return total;
}

double norm_factor_cached(const SourceParams& p) {
    static std::mutex mutex;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        const auto it = cache.find(p.v0);
        if (it != cache.end()) return it->second;
    }
    const double value = norm_factor(p);
    std::lock_guard<std::mutex> lock(mutex);
    return cache.emplace(p.v0, value).first->second;
}

Complex psi_normalized(const SourceParams& p, double x, double t) {
    return psi_exact(p, x, t) / std::sqrt(norm_factor_cached(p));
}

} // namespace evsource
