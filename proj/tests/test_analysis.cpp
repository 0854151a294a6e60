#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "evsource/analysis.hpp"
#include "evsource/errors.hpp"
#include "support/test_util.hpp"

#include <cmath>
#include <random>

using namespace evsource;
using evsource::testsupport::argmax;

TEST_CASE("saddle-maximum time: limits and linearity") {
    // purely evanescent limit: |tau| / sqrt(3)
    const SourceParams p0 = make_params(0.0);
    for (double x : {0.4, 1.0, 7.0}) {
        const double bl = complex_time(p0, x).modulus;
        CHECK(std::fabs(t_max_saddle(p0, x) - bl / std::sqrt(3.0)) < 1e-12 * bl);
    }
    // emission at threshold: |tau| / 3^{1/4}
    const SourceParams p1 = make_params(1.0);
    for (double x : {0.4, 1.0, 7.0}) {
        const double bl = complex_time(p1, x).modulus;
        CHECK(std::fabs(t_max_saddle(p1, x) - bl / std::pow(3.0, 0.25)) < 1e-12 * bl);
    }
    // exact linearity in x
    for (double v0 : {0.15, 0.6}) {
        const SourceParams p = make_params(v0);
        for (double x : {0.3, 1.7}) {
            CHECK(std::fabs(t_max_saddle(p, 2.0 * x) - 2.0 * t_max_saddle(p, x)) <
                  1e-13 * t_max_saddle(p, x));
        }
    }
    CHECK_THROWS_AS(t_max_saddle(make_params(0.2), 0.0), DomainError);
}

TEST_CASE("saddle-maximum time matches numerical maximization") {
    // the named spot check
    const SourceParams p04 = make_params(0.4);
    const double closed = t_max_saddle(p04, 3.0);
    const double numeric = argmax(
        [&](double t) { return density_saddle(p04, 3.0, t); }, 0.2 * closed, 4.0 * closed);
    CHECK(std::fabs(closed - numeric) < 1e-8);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uv(0.0, 1.0), ux(0.2, 5.0);
    for (int i = 0; i < 20; ++i) {
        const SourceParams p = make_params(uv(rng));
        const double x = ux(rng);
        const double tm = t_max_saddle(p, x);
        const double num = argmax(
            [&](double t) { return density_saddle(p, x, t); }, 0.2 * tm, 4.0 * tm);
        CHECK(std::fabs(tm - num) < 1e-8);
    }
}

TEST_CASE("snapshot maximum position") {
    CHECK(x_max_snapshot(make_params(0.0), 1.0) == doctest::Approx(2.0));
    CHECK(x_max_snapshot(make_params(1.0), 1.0) ==
          doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK_THROWS_AS(x_max_snapshot(make_params(0.3), 0.0), DomainError);

    // numerical argmax over x of the snapshot
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> uv(0.0, 1.0), ut(0.3, 4.0);
    for (int i = 0; i < 10; ++i) {
        const SourceParams p = make_params(uv(rng));
        const double t = ut(rng);
        const double xm = x_max_snapshot(p, t);
        const double num = argmax(
            [&](double x) { return density_saddle(p, x, t); }, 0.3 * xm, 3.0 * xm);
        CHECK(std::fabs(xm - num) < 1e-6);
    }

    // equivalently: the peak reaches position x at t = |tau|
    const SourceParams p = make_params(0.25);
    const double t = 2.0;
    const double xm = x_max_snapshot(p, t);
    CHECK(complex_time(p, xm).modulus == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("ratio R") {
    const SourceParams p = make_params(0.1);
    // zero before the pole enters
    CHECK(ratio_R(p, 1.0, 0.3) == 0.0);
    // crossings of R = 1 exist at short distances
    const TimeScales near = classify_crossings(p, 0.1);
    CHECK(near.scenario == Scenario::DoubleCrossing);
    CHECK(near.crossings.size() == 2);
    const TimeScales mid = classify_crossings(p, 1.0);
    CHECK(mid.scenario == Scenario::DoubleCrossing);
    // and are absent further out
    CHECK(classify_crossings(p, 2.5).scenario == Scenario::NoCrossing);
    CHECK(classify_crossings(p, 4.0).scenario == Scenario::NoCrossing);
}

TEST_CASE("crossing roots and the transition time") {
    const SourceParams p = make_params(0.1);
    const TimeScales ts = classify_crossings(p, 0.1);
    REQUIRE(ts.t_p.has_value());
    CHECK(*ts.t_p == doctest::Approx(46.125486).epsilon(1e-5));
    CHECK(ts.crossings.front() == doctest::Approx(0.080308).epsilon(1e-4));
    CHECK(*ts.t_p == ts.crossings.back());
    // |log R| <= 1e-10 at every root, roots in (t_c, infinity)
    for (double root : ts.crossings) {
        CHECK(std::fabs(std::log(ratio_R(p, 0.1, root))) < 1e-10);
        CHECK(root > ts.t_c);
    }
    // derived fields agree with their own operations
    CHECK(ts.t_c == critical_time(p, 0.1));
    CHECK(ts.bl_time == complex_time(p, 0.1).modulus);
    CHECK(ts.t_max_saddle == t_max_saddle(p, 0.1));

    CHECK_THROWS_AS(classify_crossings(make_params(0.0), 1.0), DomainError);
    CHECK_THROWS_AS(classify_crossings(make_params(1.0), 1.0), DomainError);
    CHECK_THROWS_AS(classify_crossings(p, 0.0), DomainError);
}

TEST_CASE("transition-time scan") {
    const TpScan scan = t_p_scan({0.1, 0.25, 0.5, 0.9}, {0.05, 0.1, 0.2});
    CHECK(scan.cells.size() == 12);
    for (std::size_t i = 0; i < scan.cells.size(); ++i) {
        const TimeScales& ts = scan.cells[i];
        if (ts.t_p) CHECK(*ts.t_p > ts.t_c);
    }
    // doubling v0 roughly halves t_p at small x
    const auto tp_of = [&](double v0) {
        return *classify_crossings(make_params(v0), 0.05).t_p;
    };
    const double ratio = tp_of(0.25) / tp_of(0.5);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.3));

    CHECK_THROWS_AS(t_p_scan({}, {1.0}), DomainError);
}

TEST_CASE("density at the transition time") {
    const SourceParams p = make_params(0.25);
    // increases with distance while defined
    double previous = 0.0;
    for (double x : {0.1, 0.3, 0.6, 1.0}) {
        const double d = density_at_tp(p, x);
        CHECK(d > previous);
        previous = d;
    }
    // order of magnitude of the largest transition density
    CHECK(previous > 1e-4);
    CHECK(previous < 1e-1);
    // undefined far out
    CHECK_THROWS_AS(density_at_tp(make_params(0.1), 4.0), NoCrossingError);
}

TEST_CASE("first interference minimum time") {
    // x -> 0 at v0 = 0 degenerates to t = 3 pi / 2
    CHECK(dit_first_minimum_time(make_params(0.0), 1e-8) ==
          doctest::Approx(1.5 * M_PI).epsilon(1e-8));

    // the standard trace point
    const SourceParams p = make_params(0.05);
    const double t1 = dit_first_minimum_time(p, 1.5);
    CHECK(t1 == doctest::Approx(4.678865).epsilon(1e-6));
    CHECK(t1 > critical_time(p, 1.5));
    // the rejected root sits below t_c
    CHECK(critical_time(p, 1.5) == doctest::Approx(0.789474).epsilon(1e-6));

    // defining residual Omega(t) t = 3 pi / 2 to 1e-12
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uv(0.0, 0.7), ux(0.1, 3.0);
    for (int i = 0; i < 50; ++i) {
        const SourceParams q = make_params(uv(rng));
        const double x = ux(rng);
        try {
            const double t = dit_first_minimum_time(q, x);
            const double ks = x / (2.0 * t);
            const double omega =
                1.0 + ks * ks - q.v0 * q.v0 - 2.0 * ks * q.v0;
            CHECK(std::fabs(omega * t - 1.5 * M_PI) < 1e-12 * (1.5 * M_PI));
            CHECK(t > critical_time(q, x));
        } catch (const NoMinimumError&) {
            // legitimate absence; nothing to check
        }
    }

    // near threshold the critical time outruns both roots at large x
    CHECK_THROWS_AS(dit_first_minimum_time(make_params(0.95), 200.0), NoMinimumError);
    // beyond x = 3 pi / 2 the v0 = 0 phase never reaches the minimum
    CHECK_THROWS_AS(dit_first_minimum_time(make_params(0.0), 5.0), NoMinimumError);
}

TEST_CASE("interference amplitude map") {
    const std::vector<double> v0s = {0.05, 0.1};
    const std::vector<double> xs = make_grid(0.02, 4.0, 24, true);
    const DITMap map = dit_amplitude_map(v0s, xs);
    CHECK(map.cells.size() == v0s.size() * xs.size());
    for (std::size_t iv = 0; iv < v0s.size(); ++iv) {
        // amplitude -> 0 toward the source and an interior maximum exists
        double first = -1.0, best = 0.0;
        std::size_t best_i = 0;
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const auto& cell = map.cells[iv * xs.size() + ix];
            REQUIRE(cell.has_value());
            CHECK(cell->amplitude >= 0.0);
            CHECK(cell->t_min1 > critical_time(make_params(v0s[iv]), xs[ix]));
            if (first < 0.0) first = cell->amplitude;
            if (cell->amplitude > best) {
                best = cell->amplitude;
                best_i = ix;
            }
        }
        CHECK(first < 0.06 * best);       // vanishes toward the source
        CHECK(best_i > 0);                // interior maximum
        CHECK(best_i < xs.size() - 1);
    }
    CHECK_THROWS_AS(dit_amplitude_map({0.0, 0.1}, {1.0}), DomainError);
}

TEST_CASE("grid helper") {
    const auto lin = make_grid(1.0, 3.0, 5, false);
    CHECK(lin.size() == 5);
    CHECK(lin[2] == doctest::Approx(2.0));
    const auto log = make_grid(0.1, 10.0, 3, true);
    CHECK(log[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_grid(1.0, 2.0, 1, false), DomainError);
    CHECK_THROWS_AS(make_grid(-1.0, 2.0, 4, true), DomainError);
}
