#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ntnlink/specfun/gamma.hpp"

namespace ntnlink::specfun {

/// One Gamma factor of a Mellin-Barnes integrand: Gamma(offset + c1*s + c2*t),
/// in the numerator or the denominator. Univariate kernels use c2 = 0.
struct GammaFactor {
    double offset = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    bool numerator = true;
};

/// Encodes exactly one Mellin-Barnes integrand as a product of Gamma factors.
struct GammaFactorList {
    std::vector<GammaFactor> factors;
};

/// Vertical-line contour description. NaN anchors request automatic placement
/// (pole-window computation plus saddle search). half_length = 0 requests the
/// adaptive truncation rule (doubling until the value settles).
struct ContourSpec {
    double anchor1 = std::numeric_limits<double>::quiet_NaN();
    double anchor2 = std::numeric_limits<double>::quiet_NaN();
    double half_length = 0.0;
    int nodes = 64; // Gauss-Legendre nodes per unit-8 panel, >= 32
};

struct EvalResult {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    double perturbation = 0.0; // total offset nudge applied by the degeneracy policy
};

/// (1/(2*pi*i)) Int K(s) z^s ds over a vertical line. All offsets real, so the
/// integrand is conjugate-symmetric and only the upper half-line is evaluated.
/// Anchor selection enforces positive real Gamma arguments for every numerator
/// factor (fails loudly when the feasible window is empty).
EvalResult mb_integral_1d(const GammaFactorList& kernel, double ln_z, ContourSpec contour = {});

/// Same contract for the two-variable integrand, tensor-product quadrature.
EvalResult mb_integral_2d(const GammaFactorList& kernel, double ln_z1, double ln_z2,
                          ContourSpec contour = {});

/// Feasible anchor window (lo, hi) in one variable implied by the numerator
/// factors; used by the automatic placement and exposed for tests.
void anchor_window_1d(const GammaFactorList& kernel, double& lo, double& hi);

namespace detail {

// Shared line-quadrature plan used by the engine and by the channel-metric
// kernels, which assemble their own integrands around the same machinery.
struct LinePlan {
    double anchor = 0.0;
    double panel_len = 8.0;
    int nodes = 64;
    int max_panels = 100;
    double tail_eps = 1e-15;
    double half_length = 0.0; // 0 = adaptive
};

// (1/pi) * Re Int_0^T f(anchor + i y) dy with panel-wise accumulation.
double line_integral_half(const std::function<std::complex<double>(std::complex<double>)>& f,
                          const LinePlan& plan);

// Minimize a log-magnitude profile over [lo, hi] (coarse grid + golden section).
double minimize_logmag(const std::function<double(double)>& f, double lo, double hi);

// Density heuristic: nodes per panel needed against the oscillation of z^{iy}.
int nodes_for_oscillation(int base, double panel_len, double ln_z_mag);

} // namespace detail

} // namespace ntnlink::specfun
