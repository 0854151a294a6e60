#include "evsource/asymptotics.hpp"
#include "evsource/errors.hpp"

#include <cmath>

namespace evsource {
namespace {

void check_spacetime(double x, double t) {
    if (!(x >= 0.0)) throw DomainError("x must be >= 0");
    if (!(t > 0.0)) throw DomainError("t must be > 0");
}

} // namespace

Complex psi_saddle(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    const Complex tau = -x / (2.0 * p.k0);
    const Complex phase = std::exp(Complex(0.0, x * x / (4.0 * t)));
    const Complex denominator = (Complex(0.0, 1.0) - 1.0) * p.k0 * (t * t - tau * tau);
    return -std::sqrt(2.0 * t / M_PI) * phase * tau / denominator;
}

double density_saddle(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    const ComplexTime ct = complex_time(p, x);
    const double tau2 = ct.modulus * ct.modulus;
    const double re_tau_sq = (ct.tau * ct.tau).real();
    const double d = t * t * t * t + tau2 * tau2 - 2.0 * t * t * re_tau_sq;
    return t * tau2 / (M_PI * std::norm(p.k0) * d);
}

Complex psi_pole(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    if (!pole_active(p, x, t)) return Complex(0.0, 0.0);
    return std::exp(Complex(0.0, 1.0) * (p.k0 * x - p.omega0 * t));
}

WaveDecomposition decompose(const SourceParams& p, double x, double t) {
    const SaddleVariables sv = saddle_variables(p, x, t);
    WaveDecomposition d;
    d.psi_saddle = psi_saddle(p, x, t);
    d.psi_pole = psi_pole(p, x, t);
    d.psi_approx = d.psi_saddle + d.psi_pole;
    d.u_abs_plus = std::abs(sv.u_plus);
    d.u_abs_minus = std::abs(sv.u_minus);
    return d;
}

DITParameters dit_parameters(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    const double ks = x / (2.0 * t);
    const double ks2 = ks * ks;
    const double v0 = p.v0;
    DITParameters d;
    d.gamma = 2.0 * (v0 + ks);
    d.omega = 1.0 + ks2 - v0 * v0 - 2.0 * ks * v0;
    d.f_plus = 1.0 - v0 * (2.0 + v0) + ks2;
    d.f_minus = -1.0 - v0 * (2.0 - v0) - ks2;
    d.delta = std::pow(v0, 4) - 2.0 * v0 * v0 * (ks2 - 1.0) +
              (ks2 + 1.0) * (ks2 + 1.0);
    const double tau_I = x / (2.0 * (v0 * v0 + 1.0));
    d.theta = t / tau_I; // +inf at x = 0
    return d;
}

double psi_interference(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    if (!pole_active(p, x, t)) return 0.0;
    const DITParameters d = dit_parameters(p, x, t);
    const double ks = x / (2.0 * t);
    const double phi = (1.0 - p.v0 * p.v0) * t - p.v0 * x - ks * ks * t;
    const double prefactor =
        x / (t * std::sqrt(t) * d.delta) * std::sqrt(0.5 / M_PI) *
        std::exp(-d.gamma * t);
    return prefactor * (d.f_plus * std::sin(phi) - d.f_minus * std::cos(phi));
}

SmallV0Expansion dit_small_v0(const SourceParams& p, double x, double t) {
    check_spacetime(x, t);
    if (!(x > 0.0)) throw DomainError("dit_small_v0 requires x > 0");
    const DITParameters d = dit_parameters(p, x, t);
    if (d.theta < 3.0 || p.v0 > 0.3) {
        throw RangeError("dit_small_v0: expansion regime requires theta >= 3 and v0 <= 0.3");
    }
    SmallV0Expansion e;
    e.exponent = -x * (1.0 + p.v0 * d.theta);
    e.omega_approx = 1.0 - p.v0 * (p.v0 + p.v0 / d.theta);
    e.amplitude = std::exp(-d.gamma * t) /
                  (std::sqrt(2.0 * M_PI * x) * std::pow(d.theta, 1.5)) *
                  (1.0 + 2.0 * p.v0 * (1.0 - 1.125 * p.v0));
    return e;
}

} // namespace evsource
