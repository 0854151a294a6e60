#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "evsource/contour.hpp"
#include "evsource/crank_nicolson.hpp"
#include "evsource/errors.hpp"
#include "evsource/io/dataset.hpp"
#include "evsource/quadrature.hpp"

#include <cmath>
#include <random>

using namespace evsource;

namespace {

double rel_err(Complex a, Complex b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

} // namespace

TEST_CASE("adaptive quadrature basics") {
    // oscillatory integral with known value: int_0^pi sin = 2
    const auto f = [](double x) { return Complex(std::sin(x), 0.0); };
    const QuadratureResult r = integrate(f, 0.0, M_PI);
    CHECK(r.converged);
    CHECK(std::fabs(r.value.real() - 2.0) < 1e-13);

    // integrable near-pole structure refined through breakpoints
    const auto g = [](double x) { return Complex(1.0 / (1e-4 + x * x), 0.0); };
    const Complex v = integrate_or_throw(g, -1.0, 1.0, {0.0});
    CHECK(std::fabs(v.real() - 2.0 / 1e-2 * std::atan(1.0 / 1e-2)) < 1e-8 * v.real());
}

TEST_CASE("contour integral agrees with the closed form") {
    std::mt19937 rng(314159);
    std::uniform_real_distribution<double> uv(0.0, 1.0), ux(0.1, 10.0);
    std::uniform_real_distribution<double> ut(std::log(0.05), std::log(50.0));
    int used = 0;
    double worst = 0.0;
    while (used < 40) {
        const double v0 = uv(rng), x = ux(rng), t = std::exp(ut(rng));
        const SourceParams p = make_params(v0);
        if (std::fabs(t - critical_time(p, x)) < 0.01) continue;
        try {
            worst = std::max(worst, rel_err(psi_quadrature(p, x, t), psi_exact(p, x, t)));
            ++used;
        } catch (const PoleProximityError&) {
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("contour integral at the source") {
    const SourceParams p = make_params(0.1);
    const Complex expected = std::exp(Complex(0.0, -1.0) * p.omega0 * 1.0);
    CHECK(std::abs(psi_quadrature(p, 0.0, 1.0) - expected) < 1e-10);
}

TEST_CASE("residue switching is seamless at the critical time") {
    for (double v0 : {0.1, 0.5}) {
        const SourceParams p = make_params(v0);
        const double tc = critical_time(p, 1.0);
        const Complex below = psi_quadrature(p, 1.0, 0.97 * tc);
        const Complex above = psi_quadrature(p, 1.0, 1.03 * tc);
        // each side matches the continuous closed form, so the residue
        // exactly compensates the path's pole passage
        CHECK(rel_err(below, psi_exact(p, 1.0, 0.97 * tc)) < 1e-6);
        CHECK(rel_err(above, psi_exact(p, 1.0, 1.03 * tc)) < 1e-6);
        const double jump = std::abs(above - below);
        const double true_change =
            std::abs(psi_exact(p, 1.0, 1.03 * tc) - psi_exact(p, 1.0, 0.97 * tc));
        CHECK(jump <= true_change + 1e-6);
    }
}

TEST_CASE("pole proximity guard") {
    const SourceParams p = make_params(0.5);
    const double tc = critical_time(p, 1.0);
    CHECK_THROWS_AS(psi_quadrature(p, 1.0, tc * (1.0 + 1e-7)), PoleProximityError);
}

TEST_CASE("grid evolution invariants") {
    const SourceParams p = make_params(0.2);
    GridSpec g;
    g.dx = 0.02;
    g.dt = 1e-3;
    g.x_domain = 30.0;
    g.t_final = 1.5;
    g.store_every = 300;
    g.quiescence_threshold = 0.5; // power-law front tail reaches the edge
    const GridField f = evolve_cn(p, g);

    // column 0 carries the boundary value at every stored time
    for (Eigen::Index i = 1; i < f.times.size(); ++i) {
        const Complex b = std::exp(Complex(0.0, -1.0) * p.omega0 * f.times(i));
        CHECK(std::abs(f.values(i, 0) - b) < 1e-14);
    }
    // switch-on row: 1 at the origin, zero elsewhere
    CHECK(f.values(0, 0) == Complex(1.0, 0.0));
    for (Eigen::Index j = 1; j < f.positions.size(); j += 97) {
        CHECK(f.values(0, j) == Complex(0.0, 0.0));
    }
}

TEST_CASE("grid run matches the closed form on the window") {
    const SourceParams p = make_params(0.1);
    GridSpec g;
    g.dx = 0.01;
    g.dt = 5e-4;
    g.t_final = 2.0;
    g.x_domain = 46.0;
    g.absorber_width = 40.0;
    g.absorber_strength = 16.0;
    g.smoothing_steps = 16;
    g.quiescence_threshold = 1.0;
    g.store_every = 1000;
    const GridField f = evolve_cn(p, g);
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 1; i < f.times.size(); ++i) {
        const double t = f.times(i);
        if (t < 0.5) continue;
        for (Eigen::Index j = 1; j * g.dx <= 4.0; ++j) {
            const Complex exact = psi_exact(p, j * g.dx, t);
            num += std::norm(f.values(i, j) - exact);
            den += std::norm(exact);
        }
    }
    CHECK(std::sqrt(num / den) < 1e-3);
}

TEST_CASE("grid self-convergence is second order") {
    const SourceParams p = make_params(0.1);
    GridSpec g;
    g.dx = 0.04;
    g.dt = 4e-3;
    g.x_domain = 52.0;
    g.t_final = 2.0;
    g.absorber_width = 40.0;
    g.absorber_strength = 16.0;
    g.smoothing_steps = 4;
    g.quiescence_threshold = 1.0;
    g.store_every = 1 << 30;
    const double order = verify_self_convergence(p, g, 5.0);
    CHECK(order > 0.75); // log2 of a ratio in [2, 6]
    CHECK(order >= std::log2(2.0));
    CHECK(order <= std::log2(6.0));
    CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("quiescence sentinel triggers on an undersized domain") {
    const SourceParams p = make_params(0.1);
    GridSpec g;
    g.dx = 0.02;
    g.dt = 1e-3;
    g.x_domain = 5.0;
    g.t_final = 3.0;
    // default threshold 1e-10: the front tail must trip it
    CHECK_THROWS_AS(evolve_cn(p, g), QuiescenceViolatedError);
}

TEST_CASE("windowed probability balance after the switch-on transient") {
    // With reflecting walls the scheme conserves the discrete norm, so
    // the norm gained over a window away from t = 0 matches the analytic
    // flux integral at the scheme's order.
    const SourceParams p = make_params(0.1);
    GridSpec g;
    g.dx = 0.01;
    g.dt = 5e-4;
    g.x_domain = 40.0;
    g.t_final = 3.0;
    g.quiescence_threshold = 1.0;
    g.store_every = 1000; // rows every 0.5
    const GridField f = evolve_cn(p, g);
    const double gained = f.norm_at(f.times.size() - 1) - f.norm_at(f.row_near(0.5));
    const auto j0 = [&](double t) { return Complex(flux(p, 0.0, t), 0.0); };
    QuadratureOptions q;
    q.rel_tol = 1e-12;
    const double integral = integrate_or_throw(j0, 0.5, 3.0, {}, q).real();
    // measured 3.3e-3 at this resolution, falling ~8x per halving
    CHECK(std::fabs(gained - integral) < 5e-3);
}

TEST_CASE("flux against a grid-field finite difference") {
    // the analytic flux at the origin agrees with a one-sided difference
    // of the evolved field at the oracle's accuracy
    const SourceParams p = make_params(0.25);
    GridSpec g;
    g.dx = 5e-3;
    g.dt = 2.5e-4;
    g.x_domain = 46.0;
    g.t_final = 1.0;
    g.absorber_width = 40.0;
    g.absorber_strength = 16.0;
    g.smoothing_steps = 16;
    g.quiescence_threshold = 1.0;
    g.store_every = 4000;
    const GridField f = evolve_cn(p, g);
    const Eigen::Index row = f.times.size() - 1;
    const Complex psi0 = f.values(row, 0);
    const Complex dpsi =
        (-1.5 * f.values(row, 0) + 2.0 * f.values(row, 1) - 0.5 * f.values(row, 2)) / g.dx;
    const double j_grid = 2.0 * std::imag(std::conj(psi0) * dpsi);
    CHECK(j_grid == doctest::Approx(flux(p, 0.0, 1.0)).epsilon(2e-3));
}

TEST_CASE("emitted norm against the grid route") {
    // With reflecting walls everything emitted stays on the grid, so by
    // the time the source has died out the grid norm is the emitted
    // particle number.  Agreement is limited by the switch-on burst
    // (~1e-2 at this resolution), which is what this cross-check can
    // honestly certify about N = 1/2.
    const SourceParams p = make_params(0.5);
    GridSpec g;
    g.dx = 0.01;
    g.dt = 5e-4;
    g.x_domain = 50.0;
    g.t_final = 25.0;
    g.quiescence_threshold = 1.0;
    g.store_every = 1 << 30;
    const GridField f = evolve_cn(p, g);
    const double grid_n = f.norm_at(f.times.size() - 1);
    CHECK(std::fabs(grid_n - norm_factor(p)) < 2.5e-2);
}

TEST_CASE("grid field export") {
    const SourceParams p = make_params(0.2);
    GridSpec g;
    g.dx = 0.05;
    g.dt = 2e-3;
    g.x_domain = 20.0;
    g.t_final = 0.5;
    g.store_every = 125;
    g.quiescence_threshold = 0.5;
    const GridField f = evolve_cn(p, g);
    const auto d = grid_field_dataset(f);
    CHECK(d.columns == std::vector<std::string>{"t", "x", "re_psi", "im_psi", "density"});
    CHECK(d.rows.size() ==
          static_cast<std::size_t>(f.times.size() * f.positions.size()));
    const std::string csv = evsource::io::to_csv(d);
    CHECK(csv.find("t,x,re_psi,im_psi,density") != std::string::npos);
}

TEST_CASE("grid spec validation") {
    const SourceParams p = make_params(0.1);
    GridSpec g;
    g.dx = 0.0;
    g.dt = 1e-3;
    g.x_domain = 10.0;
    g.t_final = 1.0;
    CHECK_THROWS_AS(evolve_cn(p, g), DomainError);
    CHECK(suggested_domain(5.0, 10.0) == doctest::Approx(69.0));
}
