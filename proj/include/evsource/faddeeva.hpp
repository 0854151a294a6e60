#pragma once

#include <complex>

namespace evsource {

using Complex = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), evaluated on the whole
/// complex plane.  Relative accuracy is better than 1e-13 for |z| <= 20.
///
/// The lower half-plane is reached through the reflection
/// w(z) = 2 exp(-z^2) - w(-z); if exp(-z^2) would overflow a double this
/// throws OverflowRegionError instead of returning Inf.  NaN/Inf input
/// throws InvalidInputError.
Complex faddeeva(Complex z);

/// Derivative w'(z) = -2 z w(z) + 2i/sqrt(pi).  Propagates faddeeva errors.
Complex faddeeva_derivative(Complex z);

} // namespace evsource
