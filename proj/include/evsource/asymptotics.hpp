#pragma once

#include "evsource/source.hpp"

namespace evsource {

/// Saddle and pole contributions at one spacetime point, plus the moduli
/// of the expansion variables that control the accuracy of the split.
struct WaveDecomposition {
    Complex psi_saddle;
    Complex psi_pole;
    Complex psi_approx;  // psi_saddle + psi_pole
    double u_abs_plus;
    double u_abs_minus;
};

/// Frequency, decay and amplitude coefficients of the pole-saddle
/// interference term at (x, t), with k_s = x / (2 t).
struct DITParameters {
    double gamma;    // 2 (v0 + k_s)
    double omega;    // 1 + k_s^2 - v0^2 - 2 k_s v0
    double f_plus;   // +1 - v0 (2 + v0) + k_s^2
    double f_minus;  // -1 - v0 (2 - v0) - k_s^2
    double delta;    // v0^4 - 2 v0^2 (k_s^2 - 1) + (k_s^2 + 1)^2
    double theta;    // t / tau_I
};

/// Steepest-descent (saddle) contribution.
Complex psi_saddle(const SourceParams& p, double x, double t);

/// |psi_saddle|^2 in closed form.
double density_saddle(const SourceParams& p, double x, double t);

/// Pole contribution: the evanescent decaying profile gated by the
/// critical time, exp(i k0 x - i omega0 t) Theta(t - t_c).  Support is
/// closed (t = t_c included); identically zero at v0 = 1.
Complex psi_pole(const SourceParams& p, double x, double t);

/// Saddle + pole split with expansion diagnostics |u_+|, |u_-|.
WaveDecomposition decompose(const SourceParams& p, double x, double t);

/// Pole-saddle interference term of the probability density: the exact
/// cross term |psi_0 + psi_S|^2 - |psi_0|^2 - |psi_S|^2 in closed form,
///
///   (x / (t^{3/2} Delta)) sqrt(1/2pi) e^{-Gamma t}
///       * (F_+ sin(Phi) - F_- cos(Phi)) * Theta(t - t_c),
///
/// with Phi = (1 - v0^2) t - v0 x - x^2/(4 t).  The commonly quoted
/// variant carries (F_+ cos(Omega t) + F_- sin(Omega t)) instead; that
/// differs from the cross term by a phase pi/2 + x^2/(2t) and is not
/// used here (the identity with the direct expansion is the contract).
double psi_interference(const SourceParams& p, double x, double t);

/// Interference coefficients at (x, t).
DITParameters dit_parameters(const SourceParams& p, double x, double t);

struct SmallV0Expansion {
    double exponent;      // -x (1 + v0 theta)
    double omega_approx;  // 1 - v0 (v0 + v0/theta)
    double amplitude;     // e^{-Gamma t} / (sqrt(2 pi x) theta^{3/2}) * [1 + 2 v0 (1 - 9 v0 / 8)]
};

/// Small-v0, large-theta expansion of the interference envelope.
/// Requires theta = t / tau_I >= 3 and v0 <= 0.3, else RangeError.
SmallV0Expansion dit_small_v0(const SourceParams& p, double x, double t);

} // namespace evsource
