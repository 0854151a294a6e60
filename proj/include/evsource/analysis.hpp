#pragma once

#include "evsource/asymptotics.hpp"

#include <optional>
#include <vector>

namespace evsource {

enum class Scenario { NoCrossing, SingleCrossing, DoubleCrossing };

/// The characteristic times of the density at a fixed position: entry of
/// the pole, saddle-density maximum, generalized traversal time, and the
/// R = 1 crossings that mark the post-exponential transition.
struct TimeScales {
    double t_c;
    double t_max_saddle;
    double bl_time;                  // |tau|
    std::vector<double> crossings;   // ascending solutions of R(t) = 1
    Scenario scenario;
    std::optional<double> t_p;       // max crossing when any exist
};

struct DITScanPoint {
    double v0;
    double x;
    double t_min1;      // first-minimum time, Omega t = 3 pi / 2
    double amplitude;   // |psi_Int| there, normalized by N
};

/// Closed-form location of the saddle-density maximum in t at fixed x.
double t_max_saddle(const SourceParams& p, double x);

/// Location of the saddle-density maximum in x at fixed t: 2 t sqrt(v0^2+1).
double x_max_snapshot(const SourceParams& p, double t);

/// R = |psi_0 / psi_S|^2; zero before the pole enters.
double ratio_R(const SourceParams& p, double x, double t);

/// Finds all R(t) = 1 crossings on (t_c, T_cap] by geometric sign scan
/// plus bisection on log R, and classifies the scenario.  Requires
/// 0 < v0 < 1 (at the endpoints R is trivially monotone).
TimeScales classify_crossings(const SourceParams& p, double x);

/// Grid scan of classify_crossings, parallel over cells, output in
/// row-major (v0, x) order.
struct TpScan {
    std::vector<double> v0_grid;
    std::vector<double> x_grid;
    std::vector<TimeScales> cells;  // size v0_grid.size() * x_grid.size()
};
TpScan t_p_scan(const std::vector<double>& v0_grid,
                const std::vector<double>& x_grid);

/// Normalized probability density at the post-exponential transition
/// time.  Throws NoCrossingError when t_p is undefined at (p, x).
double density_at_tp(const SourceParams& p, double x);

/// First DIT minimum time: the root of Omega(t) t = 3 pi / 2, i.e. of
/// (1 - v0^2) t^2 - (v0 x + 3 pi/2) t + x^2/4 = 0, restricted to t > t_c
/// (the smaller admissible root).  Throws NoMinimumError when no root
/// qualifies.
double dit_first_minimum_time(const SourceParams& p, double x);

/// Amplitude map of the interference term at the first minimum over a
/// (v0, x) grid; cells without a minimum are absent.
struct DITMap {
    std::vector<double> v0_grid;
    std::vector<double> x_grid;
    std::vector<std::optional<DITScanPoint>> cells;
};
DITMap dit_amplitude_map(const std::vector<double>& v0_grid,
                         const std::vector<double>& x_grid);

/// Log- or linearly-spaced grid helper used by scans and the CLI.
std::vector<double> make_grid(double lo, double hi, int count, bool log_spaced);

} // namespace evsource
