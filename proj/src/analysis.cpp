#include "evsource/analysis.hpp"
#include "evsource/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

namespace evsource {
namespace {

double log_ratio(const SourceParams& p, double x, double t) {
    // log R = log |psi_0|^2 - log |psi_S|^2, in closed form so the scan
    // remains meaningful over hundreds of orders of magnitude.
    const double log_pole = -2.0 * (2.0 * p.v0 * t + x);
    const ComplexTime ct = complex_time(p, x);
    const double tau2 = ct.modulus * ct.modulus;
    const double re_tau_sq = (ct.tau * ct.tau).real();
    const double d = t * t * t * t + tau2 * tau2 - 2.0 * t * t * re_tau_sq;
    const double log_saddle =
        std::log(t * tau2) - std::log(M_PI * std::norm(p.k0) * d);
    return log_pole - log_saddle;
}

double bisect_log_ratio(const SourceParams& p, double x, double lo, double hi,
                        double f_lo) {
    for (int iter = 0; iter < 300; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = log_ratio(p, x, mid);
        if (std::fabs(f_mid) < 1e-11 || hi - lo < 1e-15 * mid) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    throw ConvergenceError("classify_crossings: bisection stalled");
}

void run_parallel(std::size_t cell_count, const std::function<void(std::size_t)>& work) {
    const unsigned n_threads =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(cell_count));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < cell_count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < cell_count;
                 i = next.fetch_add(1)) {
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace

double t_max_saddle(const SourceParams& p, double x) {
    if (!(x > 0.0)) throw DomainError("t_max_saddle requires x > 0");
    const ComplexTime ct = complex_time(p, x);
    const double r2 = ct.tau_R * ct.tau_R;
    const double i2 = ct.tau_I * ct.tau_I;
    const double root = std::sqrt(r2 * r2 + i2 * i2 + r2 * i2);
    return std::sqrt((r2 - i2 + 2.0 * root) / 3.0);
}

double x_max_snapshot(const SourceParams& p, double t) {
    if (!(t > 0.0)) throw DomainError("x_max_snapshot requires t > 0");
    return 2.0 * t * std::sqrt(p.v0 * p.v0 + 1.0);
}

double ratio_R(const SourceParams& p, double x, double t) {
    if (!(x > 0.0)) throw DomainError("ratio_R requires x > 0");
    if (!(t > 0.0)) throw DomainError("ratio_R requires t > 0");
    if (!pole_active(p, x, t)) return 0.0;
    return std::exp(log_ratio(p, x, t));
}

TimeScales classify_crossings(const SourceParams& p, double x) {
    if (!(p.v0 > 0.0 && p.v0 < 1.0)) {
        throw DomainError("classify_crossings requires 0 < v0 < 1");
    }
    if (!(x > 0.0)) throw DomainError("classify_crossings requires x > 0");

    TimeScales ts;
    ts.t_c = critical_time(p, x);
    ts.t_max_saddle = t_max_saddle(p, x);
    ts.bl_time = complex_time(p, x).modulus;

    double t_cap = std::max(100.0 / (4.0 * p.v0), 100.0 * ts.bl_time);
    // Past t_cap the pole exponential must dominate the power law; extend
    // the cap if the scan horizon happens to sit before the turnover.
    for (int guard = 0; guard < 8; ++guard) {
        const double h = 1e-4 * t_cap;
        const double slope =
            (log_ratio(p, x, t_cap + h) - log_ratio(p, x, t_cap - h)) / (2.0 * h);
        if (slope < 0.0) break;
        t_cap *= 4.0;
    }

    double t_lo = ts.t_c * (1.0 + 1e-9);
    double f_lo = log_ratio(p, x, t_lo);
    if (std::fabs(f_lo) < 1e-11) ts.crossings.push_back(t_lo);
    while (t_lo < t_cap) {
        const double t_hi = std::min(t_lo * 1.05, t_cap);
        const double f_hi = log_ratio(p, x, t_hi);
        if ((f_lo > 0.0) != (f_hi > 0.0)) {
            ts.crossings.push_back(bisect_log_ratio(p, x, t_lo, t_hi, f_lo));
        }
        t_lo = t_hi;
        f_lo = f_hi;
        if (t_hi >= t_cap) break;
    }

    std::sort(ts.crossings.begin(), ts.crossings.end());
    if (ts.crossings.empty()) {
        ts.scenario = Scenario::NoCrossing;
    } else if (ts.crossings.size() == 1) {
        ts.scenario = Scenario::SingleCrossing;
        ts.t_p = ts.crossings.back();
    } else {
        ts.scenario = Scenario::DoubleCrossing;
        ts.t_p = ts.crossings.back();
    }
    return ts;
}

TpScan t_p_scan(const std::vector<double>& v0_grid,
                const std::vector<double>& x_grid) {
    if (v0_grid.empty() || x_grid.empty()) {
        throw DomainError("t_p_scan requires nonempty grids");
    }
    TpScan scan;
    scan.v0_grid = v0_grid;
    scan.x_grid = x_grid;
    scan.cells.resize(v0_grid.size() * x_grid.size());
    run_parallel(scan.cells.size(), [&](std::size_t i) {
        const double v0 = v0_grid[i / x_grid.size()];
        const double x = x_grid[i % x_grid.size()];
        scan.cells[i] = classify_crossings(make_params(v0), x);
    });
    return scan;
}

double density_at_tp(const SourceParams& p, double x) {
    const TimeScales ts = classify_crossings(p, x);
    if (!ts.t_p) {
        throw NoCrossingError("density_at_tp: no R = 1 crossing at this position");
    }
    return std::norm(psi_normalized(p, x, *ts.t_p));
}

double dit_first_minimum_time(const SourceParams& p, double x) {
    if (!(p.v0 >= 0.0 && p.v0 < 1.0)) {
        throw DomainError("dit_first_minimum_time requires 0 <= v0 < 1");
    }
    if (!(x > 0.0)) throw DomainError("dit_first_minimum_time requires x > 0");
    const double a = 1.0 - p.v0 * p.v0;
    const double b = -(p.v0 * x + 1.5 * M_PI);
    const double c = 0.25 * x * x;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        throw NoMinimumError("dit_first_minimum_time: no real solution");
    }
    // b < 0 always, so the stable split is q = -(b - sqrt(disc)) / 2.
    const double q = 0.5 * (-b + std::sqrt(disc));
    const double t_big = q / a;
    const double t_small = c / q;
    const double tc = critical_time(p, x);
    if (t_small > tc) return t_small;
    if (t_big > tc) return t_big;
    throw NoMinimumError("dit_first_minimum_time: both roots precede the pole entry");
}

DITMap dit_amplitude_map(const std::vector<double>& v0_grid,
                         const std::vector<double>& x_grid) {
    if (v0_grid.empty() || x_grid.empty()) {
        throw DomainError("dit_amplitude_map requires nonempty grids");
    }
    for (double v0 : v0_grid) {
        if (!(v0 > 0.0)) throw DomainError("dit_amplitude_map requires v0 > 0");
    }
    DITMap map;
    map.v0_grid = v0_grid;
    map.x_grid = x_grid;
    map.cells.resize(v0_grid.size() * x_grid.size());
    // Warm the norm cache serially so parallel cells only read it.
    std::vector<double> norms(v0_grid.size());
    for (std::size_t i = 0; i < v0_grid.size(); ++i) {
        norms[i] = norm_factor_cached(make_params(v0_grid[i]));
    }
    run_parallel(map.cells.size(), [&](std::size_t i) {
        const std::size_t iv = i / x_grid.size();
        const double v0 = v0_grid[iv];
        const double x = x_grid[i % x_grid.size()];
        const SourceParams p = make_params(v0);
        try {
            const double t1 = dit_first_minimum_time(p, x);
            const double amp = std::fabs(psi_interference(p, x, t1)) / norms[iv];
            map.cells[i] = DITScanPoint{v0, x, t1, amp};
        } catch (const NoMinimumError&) {
            map.cells[i] = std::nullopt;
        }
    });
    return map;
}

std::vector<double> make_grid(double lo, double hi, int count, bool log_spaced) {
    if (count < 2) throw DomainError("grid count must be >= 2");
    if (log_spaced && !(lo > 0.0)) {
        throw DomainError("log grid requires positive endpoints");
    }
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        grid[i] = log_spaced ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
    }
    return grid;
}

} // namespace evsource
