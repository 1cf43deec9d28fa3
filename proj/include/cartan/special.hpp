#pragma once

#include <complex>

namespace cartan {

/// log Gamma(x) for x > 0 (Lanczos, g = 7). Raises NonPositiveArgument.
double log_gamma(double x);

/// Gamma'/Gamma for x > 0. Raises NonPositiveArgument.
double digamma(double x);

/// log Gamma(z) away from the poles, up to a multiple of 2 pi i.
std::complex<double> log_gamma(std::complex<double> z);

}  // namespace cartan
