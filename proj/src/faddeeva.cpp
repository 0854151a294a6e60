#include "evsource/faddeeva.hpp"
#include "evsource/errors.hpp"

#include <array>
#include <cmath>

namespace evsource {
namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589;

// Region boundary of the rectangle (in the first quadrant) inside which the
// plain Laplace continued fraction converges too slowly and the shifted
// re-expansion scheme is used instead.
constexpr double kInnerX = 8.3;
constexpr double kInnerY = 7.4;

// Shift applied to the recurrence variable in the inner region, and the
// matching geometric weights of the re-expansion.  The backward recurrence
// depth (kInnerDepth) and the number of re-expansion terms (kInnerTerms)
// are chosen so that the truncation error stays below 1e-14 over the whole
// rectangle.
constexpr double kShift = 1.6;
constexpr int kInnerDepth = 44;
constexpr int kInnerTerms = 40;

// exp(y^2 - x^2) must stay below double overflow on the reflection path.
constexpr double kOverflowExponent = 704.0;

// Maclaurin coefficients 1/Gamma(n/2 + 1).
constexpr int kSeriesTerms = 40;

const std::array<double, kSeriesTerms>& series_coefficients() {
    static const std::array<double, kSeriesTerms> c = [] {
        std::array<double, kSeriesTerms> a{};
        for (int n = 0; n < kSeriesTerms; ++n) {
            a[n] = 1.0 / std::tgamma(0.5 * n + 1.0);
        }
        return a;
    }();
    return c;
}

// w on the closed first quadrant (x >= 0, y >= 0).
Complex faddeeva_q1(double x, double y) {
    Complex result;
    if (x * x + y * y <= 1.0) {
        // Power series w(z) = sum (iz)^n / Gamma(n/2 + 1); inside the unit
        // disk the terms decay fast and nothing cancels.
        const Complex iz(-y, x);
        Complex power(1.0, 0.0);
        Complex sum(0.0, 0.0);
        for (int n = 0; n < kSeriesTerms; ++n) {
            sum += series_coefficients()[n] * power;
            power *= iz;
        }
        result = sum;
    } else if (y < kInnerY && x < kInnerX) {
        // Backward recurrence for the shifted continued fraction, followed
        // by a Taylor-style resummation that removes the shift again.
        const Complex zh(y + kShift, x);
        Complex r[kInnerDepth + 1];
        r[kInnerDepth] = Complex(0.0, 0.0);
        for (int n = kInnerDepth - 1; n >= 0; --n) {
            const Complex t = zh + static_cast<double>(n + 1) * std::conj(r[n + 1]);
            r[n] = 0.5 * t / std::norm(t);
        }
        const double ratio = 1.0 / (2.0 * kShift);
        double power = std::pow(2.0 * kShift, kInnerTerms);
        Complex s(0.0, 0.0);
        for (int n = kInnerTerms - 1; n >= 0; --n) {
            power *= ratio;
            s = r[n] * (s + power);
        }
        result = kTwoOverSqrtPi * s;
    } else {
        // Plain continued fraction; a short backward recurrence suffices
        // outside the rectangle.
        const Complex zh(y, x);
        Complex r(0.0, 0.0);
        for (int n = 12; n >= 1; --n) {
            const Complex t = zh + static_cast<double>(n) * std::conj(r);
            r = 0.5 * t / std::norm(t);
        }
        result = kTwoOverSqrtPi * r;
    }
    if (y == 0.0) {
        // On the real axis the real part is exactly the Gaussian.
        result = Complex(std::exp(-x * x), result.imag());
    }
    return result;
}

// w on the closed upper half-plane, using the quadrant symmetry
// w(z) = conj(w(-conj(z))) for Re z < 0.
Complex faddeeva_uhp(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    const Complex w = faddeeva_q1(std::fabs(x), y);
    return (x < 0.0) ? std::conj(w) : w;
}

} // namespace

Complex faddeeva(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidInputError("faddeeva: argument must be finite");
    }
    if (z.imag() >= 0.0) {
        return faddeeva_uhp(z);
    }
    // Reflection into the upper half-plane: w(z) = 2 exp(-z^2) - w(-z).
    const double re_minus_z2 = z.imag() * z.imag() - z.real() * z.real();
    if (re_minus_z2 > kOverflowExponent) {
        throw OverflowRegionError("faddeeva: exp(-z^2) overflows on the reflection path");
    }
    const Complex minus_z2(re_minus_z2, -2.0 * z.real() * z.imag());
    return 2.0 * std::exp(minus_z2) - faddeeva_uhp(-z);
}

Complex faddeeva_derivative(Complex z) {
    static const Complex two_i_over_sqrt_pi(0.0, kTwoOverSqrtPi);
    return -2.0 * z * faddeeva(z) + two_i_over_sqrt_pi;
}

} // namespace evsource
