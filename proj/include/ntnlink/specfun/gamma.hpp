#pragma once

#include <complex>
#include <stdexcept>

namespace ntnlink::specfun {

using cplx = std::complex<double>;

/// Principal-branch log-gamma for complex argument.
/// Throws std::domain_error at the poles (non-positive integers on the real axis).
cplx ln_gamma(cplx z);

/// Real gamma function, valid away from non-positive integers.
double gamma_real(double x);

/// Regularized upper incomplete gamma Q(p, x) = Gamma(p, x)/Gamma(p), p > 0, x >= 0.
double gamma_upper_reg(double p, double x);

/// Regularized lower incomplete gamma P(p, x) = 1 - Q(p, x).
double gamma_lower_reg(double p, double x);

} // namespace ntnlink::specfun
