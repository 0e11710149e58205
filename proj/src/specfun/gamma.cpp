#include "ntnlink/specfun/gamma.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ntnlink::specfun {

namespace {

constexpr double kLnSqrt2Pi = 0.91893853320467274178;
constexpr double kPi = 3.14159265358979323846;

// Stirling series coefficients B_{2n} / (2n (2n-1)).
constexpr double kStirling[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
};

cplx stirling_ln_gamma(cplx w)
{
    cplx r = (w - 0.5) * std::log(w) - w + kLnSqrt2Pi;
    cplx w2 = w * w;
    cplx p = 1.0 / w;
    for (double c : kStirling) {
        r += c * p;
        p /= w2;
    }
    return r;
}

// log(sin(pi z)) up to multiples of 2*pi*i, overflow-safe for large |Im z|.
cplx ln_sin_pi(cplx z)
{
    if (z.imag() >= 0.0) {
        // sin(pi z) = -exp(-i pi z)/(2i) (1 - exp(2 i pi z)), |exp(2 i pi z)| < 1
        cplx q = std::exp(cplx(0.0, 2.0 * kPi) * z);
        return cplx(0.0, -kPi) * z + std::log(1.0 - q) - std::log(cplx(0.0, 2.0)) + cplx(0.0, kPi);
    }
    return std::conj(ln_sin_pi(std::conj(z)));
}

} // namespace

cplx ln_gamma(cplx z)
{
    if (z.imag() == 0.0) {
        double x = z.real();
        if (x <= 0.0 && x == std::floor(x)) {
            std::ostringstream os;
            os << "ln_gamma: pole at non-positive integer z = " << x;
            throw std::domain_error(os.str());
        }
        if (x > 0.0)
            return {std::lgamma(x), 0.0};
    }
    if (z.real() < 0.5) {
        // Reflection: ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z).
        return std::log(kPi) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    cplx acc = 0.0;
    cplx w = z;
    while (std::abs(w) < 16.0) {
        acc -= std::log(w);
        w += 1.0;
    }
    return stirling_ln_gamma(w) + acc;
}

double gamma_real(double x)
{
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_real: pole at non-positive integer");
    return std::tgamma(x);
}

double gamma_upper_reg(double p, double x)
{
    if (!(p > 0.0))
        throw std::domain_error("gamma_upper_reg: requires p > 0");
    if (!(x >= 0.0))
        throw std::domain_error("gamma_upper_reg: requires x >= 0");
    if (x == 0.0)
        return 1.0;
    double gln = std::lgamma(p);
    if (x < p + 1.0) {
        // Lower series, Q = 1 - P.
        double ap = p;
        double del = 1.0 / p;
        double sum = del;
        for (int n = 0; n < 500; ++n) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16)
                return 1.0 - sum * std::exp(-x + p * std::log(x) - gln);
        }
        throw std::runtime_error("gamma_upper_reg: series did not converge");
    }
    // Continued fraction for Q directly (Lentz).
    const double tiny = 1e-300;
    double b = x + 1.0 - p;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int n = 1; n <= 500; ++n) {
        double an = -n * (n - p);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return h * std::exp(-x + p * std::log(x) - gln);
    }
    throw std::runtime_error("gamma_upper_reg: continued fraction did not converge");
}

double gamma_lower_reg(double p, double x)
{
    return 1.0 - gamma_upper_reg(p, x);
}

} // namespace ntnlink::specfun
