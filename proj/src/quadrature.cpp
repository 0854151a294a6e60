#include "evsource/quadrature.hpp"
#include "evsource/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace evsource {
namespace {

template <int N>
struct GaussRule {
    std::array<double, N> node;
    std::array<double, N> weight;
};

template <int N>
GaussRule<N> make_rule() {
    GaussRule<N> rule{};
    for (int i = 0; i < N; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 60; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        rule.node[i] = x;
        rule.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

const GaussRule<12>& coarse_rule() {
    static const auto r = make_rule<12>();
    return r;
}

const GaussRule<24>& fine_rule() {
    static const auto r = make_rule<24>();
    return r;
}

struct Panel {
    double a;
    double b;
    Complex value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<Complex(double)>& f, double a, double b,
                     long& evaluations) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex coarse(0.0, 0.0);
    for (int i = 0; i < 12; ++i) {
        coarse += coarse_rule().weight[i] * f(mid + half * coarse_rule().node[i]);
    }
    Complex fine(0.0, 0.0);
    for (int i = 0; i < 24; ++i) {
        fine += fine_rule().weight[i] * f(mid + half * fine_rule().node[i]);
    }
    evaluations += 36;
    coarse *= half;
    fine *= half;
    return Panel{a, b, fine, std::abs(fine - coarse)};
}

} // namespace

QuadratureResult integrate(const std::function<Complex(double)>& f,
                           double a, double b,
                           const std::vector<double>& breakpoints,
                           const QuadratureOptions& options) {
    std::vector<double> edges;
    edges.push_back(a);
    for (double p : breakpoints) {
        if (p > a && p < b) edges.push_back(p);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    QuadratureResult result;
    std::priority_queue<Panel> queue;
    Complex total(0.0, 0.0);
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = evaluate_panel(f, edges[i], edges[i + 1], result.evaluations);
        total += p.value;
        total_error += p.error;
        queue.push(p);
    }

    int panels = static_cast<int>(queue.size());
    while (panels < options.max_panels) {
        const double target = options.rel_tol * std::abs(total) + options.abs_tol;
        if (total_error <= target) break;
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            queue.push(worst); // interval at rounding resolution
            break;
        }
        Panel left = evaluate_panel(f, worst.a, mid, result.evaluations);
        Panel right = evaluate_panel(f, mid, worst.b, result.evaluations);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }

    result.value = total;
    result.error_estimate = total_error;
    result.converged =
        total_error <= options.rel_tol * std::abs(total) + options.abs_tol;
    return result;
}

Complex integrate_or_throw(const std::function<Complex(double)>& f,
                           double a, double b,
                           const std::vector<double>& breakpoints,
                           const QuadratureOptions& options) {
    const QuadratureResult r = integrate(f, a, b, breakpoints, options);
    if (!r.converged) {
        throw ConvergenceError("adaptive quadrature did not reach tolerance");
    }
    return r.value;
}

} // namespace evsource
