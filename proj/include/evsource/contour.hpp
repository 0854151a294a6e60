#pragma once

#include "evsource/source.hpp"

namespace evsource {

struct ContourOptions {
    double rel_tol = 1e-11;
    double pole_clearance = 1e-3;  // minimum distance of the path to k0
};

/// Independent evaluation of psi(x, t) by direct numerical integration of
/// the spectral representation along the steepest-descent line
/// k = k_s + e^{-i pi/4} s, plus the explicit pole residue once the line
/// has passed k0 (t > t_c).  Shares no code with the Faddeeva route.
///
/// Throws PoleProximityError when the line passes within
/// `pole_clearance` of k0 (t too close to t_c); the caller must nudge t.
Complex psi_quadrature(const SourceParams& p, double x, double t,
                       const ContourOptions& options = {});

} // namespace evsource
