#pragma once

#include "evsource/source.hpp"

#include <Eigen/Core>

namespace evsource {

/// Grid layout for the time-stepped oracle.  The domain must be generous
/// enough that the right boundary never activates; the run checks the
/// sentinel cell x_domain - 5 dx against 1e-10 at every step.
struct GridSpec {
    double dx = 5e-3;
    double dt = 2.5e-4;
    double x_domain = 0.0;
    double t_final = 0.0;
    int store_every = 0;  // 0: choose automatically (~every 0.05 time units)
    // Sentinel amplitude above which the run aborts.  The switch-on front
    // has a power-law spatial tail (|psi| ~ sqrt(8 t / pi) / x well ahead
    // of the forerunner peak), so for runs that outlast x_domain / (a few)
    // this must be set from that envelope rather than machine-noise level;
    // validation against wall reflections is done by domain doubling in
    // the oracle tests.
    double quiescence_threshold = 1e-10;
    // Width of the quadratic complex-absorbing layer at the right edge.
    // Zero keeps the plain reflecting Dirichlet wall: exactly
    // norm-conserving, which the probability-balance checks rely on.
    // Field-accuracy comparisons need the absorber: the hard wall
    // reflects the power-law front tail back into the window at ~5/X
    // relative, measured, so no affordable domain makes it negligible.
    double absorber_width = 0.0;
    double absorber_strength = 1.0;
    // Number of fully-implicit startup steps.  The switch-on jump pumps
    // the band above the temporal Nyquist frequency, which on the grid
    // crawls at near-zero group velocity and sits in the comparison
    // window as ~1e-2 noise; a short damped start removes it while
    // leaving resolved modes at the scheme's order.  Damped steps are
    // not norm-conserving, so balance runs must keep this at zero.
    int smoothing_steps = 0;
};

/// Stored history of a Crank-Nicolson run.  values(i, j) is psi at
/// times[i], positions[j]; column 0 carries the exact boundary value and
/// row 0 the switch-on state.
struct GridField {
    Eigen::VectorXd times;
    Eigen::VectorXd positions;
    Eigen::MatrixXcd values;

    /// Trapezoidal norm integral over the whole domain at stored row i.
    double norm_at(Eigen::Index i) const;

    /// Index of the stored time closest to t.
    Eigen::Index row_near(double t) const;
};

/// Recommended quiescent domain size for observations up to x_obs and
/// evolution up to t_final.
double suggested_domain(double x_obs, double t_final);

/// Crank-Nicolson evolution of i psi_t = -psi_xx on [0, x_domain] with
/// the source value pinned at x = 0 and zero Dirichlet on the right.
/// The switch-on jump is started with a half-step boundary average.
/// Throws QuiescenceViolatedError if the right boundary activates.
GridField evolve_cn(const SourceParams& p, const GridSpec& g);

/// Observed self-convergence order of evolve_cn at (x_probe, t_probe)
/// under two grid halvings; throws ConvergenceError when the Richardson
/// ratio leaves [2, 6].
double verify_self_convergence(const SourceParams& p, const GridSpec& base,
                               double x_probe);

} // namespace evsource

namespace evsource::io {
struct Dataset;
}

namespace evsource {

/// Debug export of a stored field history in the shared dataset format
/// (columns t, x, re_psi, im_psi, density).
io::Dataset grid_field_dataset(const GridField& field);

} // namespace evsource
