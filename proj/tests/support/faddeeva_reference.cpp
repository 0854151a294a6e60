#include "faddeeva_reference.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace evsource::testsupport {
namespace {

using CL = std::complex<long double>;

constexpr int kGaussOrder = 24;
constexpr long double kPanelWidth = 0.25L;
constexpr long double kSqrtPi = 1.7724538509055160272981674833411452L;

struct GaussRule {
    std::array<long double, kGaussOrder> node;
    std::array<long double, kGaussOrder> weight;
};

// Gauss-Legendre nodes on [-1,1] by Newton iteration on P_n.
GaussRule make_rule() {
    GaussRule rule{};
    const int n = kGaussOrder;
    for (int i = 0; i < n; ++i) {
        long double x = std::cos(3.141592653589793238462643383279503L *
                                 (static_cast<long double>(i) + 0.75L) /
                                 (static_cast<long double>(n) + 0.5L));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 =
                    ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-20L) break;
        }
        rule.node[i] = x;
        rule.weight[i] = 2.0L / ((1.0L - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule& rule() {
    static const GaussRule r = make_rule();
    return r;
}

// Upper half-plane evaluation by direct quadrature of the damped Fourier
// representation.  The Gaussian factor exp(-s^2/4) makes the integrand
// entire and rapidly decaying, so fixed panels are enough.
CL faddeeva_quadrature_uhp(CL z) {
    const long double y = z.imag();
    // Truncate where exp(-y s - s^2/4) < ~1e-24.
    long double s_max = 2.0L * (std::sqrt(y * y + 55.0L) - y);
    if (s_max < 1.0L) s_max = 1.0L;
    const int panels = static_cast<int>(s_max / kPanelWidth) + 1;
    const GaussRule& gr = rule();
    CL sum(0.0L, 0.0L);
    const CL iz(-z.imag(), z.real());
    for (int p = 0; p < panels; ++p) {
        const long double a = p * kPanelWidth;
        const long double half = 0.5L * kPanelWidth;
        CL acc(0.0L, 0.0L);
        for (int i = 0; i < kGaussOrder; ++i) {
            const long double s = a + half * (1.0L + gr.node[i]);
            acc += gr.weight[i] * std::exp(iz * s - CL(0.25L * s * s, 0.0L));
        }
        sum += half * acc;
    }
    return sum / kSqrtPi;
}

} // namespace

std::complex<long double> faddeeva_reference_l(std::complex<long double> z) {
    if (z.imag() >= 0.0L) {
        return faddeeva_quadrature_uhp(z);
    }
    const CL minus_z2 = -z * z;
    return 2.0L * std::exp(minus_z2) - faddeeva_quadrature_uhp(-z);
}

std::complex<double> faddeeva_reference(std::complex<double> z) {
    const CL w = faddeeva_reference_l(CL(z.real(), z.imag()));
    return {static_cast<double>(w.real()), static_cast<double>(w.imag())};
}

} // namespace evsource::testsupport
