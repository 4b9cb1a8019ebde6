#pragma once

#include "etalab/strip_point.hpp"

namespace etalab {

/// log Gamma(z) for complex z, any branch of the imaginary part.
///
/// Lanczos approximation (g = 7, nine terms) for Re z >= 1/2 and the
/// reflection formula below that. The log form keeps |Im z| up to a few
/// hundred representable, where Gamma itself underflows towards 1e-137.
/// Throws PoleError at non-positive integers.
Complex log_gamma(Complex z);

/// Gamma(z) = exp(log_gamma(z)).
Complex gamma(Complex z);

/// log sin(pi z), stable for large |Im z|.
Complex log_sin_pi(Complex z);

/// log cos(pi z / 2), stable for large |Im z|.
Complex log_cos_half_pi(Complex z);

}  // namespace etalab
