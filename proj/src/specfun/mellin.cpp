#include "ntnlink/specfun/mellin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ntnlink/quad.hpp"

namespace ntnlink::specfun {

namespace detail {

int nodes_for_oscillation(int base, double panel_len, double ln_z_mag)
{
    // z^{i y} oscillates with angular frequency |ln z|; keep >= ~5 nodes per period.
    int need = static_cast<int>(std::ceil(panel_len * (std::fabs(ln_z_mag) * 0.8 + 4.0)));
    return std::clamp(std::max(base, need), 32, 220);
}

double line_integral_half(const std::function<std::complex<double>(std::complex<double>)>& f,
                          const LinePlan& plan)
{
    const quad::GlRule& rule = quad::gl_rule(plan.nodes);
    double total = 0.0;
    double scale = 0.0;
    int quiet = 0;
    int panels = plan.max_panels;
    if (plan.half_length > 0.0)
        panels = std::max(1, static_cast<int>(std::ceil(plan.half_length / plan.panel_len)));
    for (int p = 0; p < panels; ++p) {
        double lo = p * plan.panel_len;
        double hi = lo + plan.panel_len;
        double part = 0.0;
        double mag = 0.0;
        for (size_t i = 0; i < rule.x.size(); ++i) {
            double y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.x[i];
            std::complex<double> v = f({plan.anchor, y});
            part += rule.w[i] * v.real();
            mag += rule.w[i] * std::abs(v);
        }
        part *= 0.5 * (hi - lo);
        mag *= 0.5 * (hi - lo);
        total += part;
        scale = std::max(scale, mag);
        if (plan.half_length <= 0.0) {
            if (mag < plan.tail_eps * std::max(scale, 1e-300))
                if (++quiet >= 2)
                    break;
            if (mag >= plan.tail_eps * std::max(scale, 1e-300))
                quiet = 0;
        }
    }
    return total / M_PI;
}

double minimize_logmag(const std::function<double(double)>& f, double lo, double hi)
{
    const int grid = 80;
    double best = lo, bestv = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double c = lo + (hi - lo) * i / grid;
        double v = f(c);
        if (std::isfinite(v) && v < bestv) {
            bestv = v;
            best = c;
        }
    }
    double a = std::max(lo, best - (hi - lo) / grid);
    double b = std::min(hi, best + (hi - lo) / grid);
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-10 * (1.0 + std::fabs(a)); ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

namespace {

struct SplitKernel {
    std::vector<GammaFactor> gammas;            // remaining Gamma factors
    std::vector<std::pair<double, double>> rats; // 1/(offset + c*s) factors (univariate)
};

// Collapse Gamma(x)/Gamma(1+x) pairs into rational 1/x factors. Pairs must share
// the same coefficients; offsets differ by exactly 1.
SplitKernel simplify_pairs(const GammaFactorList& kernel)
{
    SplitKernel out;
    std::vector<GammaFactor> num, den;
    for (const auto& g : kernel.factors)
        (g.numerator ? num : den).push_back(g);
    std::vector<bool> den_used(den.size(), false);
    for (const auto& g : num) {
        bool matched = false;
        for (size_t j = 0; j < den.size(); ++j) {
            if (den_used[j])
                continue;
            if (den[j].c1 == g.c1 && den[j].c2 == g.c2 && den[j].offset == g.offset + 1.0 &&
                g.c2 == 0.0) {
                den_used[j] = true;
                out.rats.emplace_back(g.offset, g.c1);
                matched = true;
                break;
            }
        }
        if (!matched)
            out.gammas.push_back(g);
    }
    for (size_t j = 0; j < den.size(); ++j)
        if (!den_used[j])
            out.gammas.push_back(den[j]);
    return out;
}

cplx eval_kernel(const SplitKernel& k, cplx s)
{
    cplx acc = 0.0;
    for (const auto& g : k.gammas) {
        cplx arg = g.offset + g.c1 * s;
        cplx lg = ln_gamma(arg);
        acc += g.numerator ? lg : -lg;
    }
    cplx v = std::exp(acc);
    for (const auto& r : k.rats)
        v /= (r.first + r.second * s);
    return v;
}

double kernel_logmag(const SplitKernel& k, double c)
{
    double acc = 0.0;
    for (const auto& g : k.gammas) {
        double arg = g.offset + g.c1 * c;
        if (arg <= 0.0 && arg == std::floor(arg))
            return std::numeric_limits<double>::infinity();
        double lg = (arg > 0.0) ? std::lgamma(arg)
                                : std::log(std::abs(gamma_real(arg)));
        acc += g.numerator ? lg : -lg;
    }
    for (const auto& r : k.rats) {
        double x = r.first + r.second * c;
        if (x == 0.0)
            return std::numeric_limits<double>::infinity();
        acc -= std::log(std::fabs(x));
    }
    return acc;
}

void window_from_factors(const std::vector<GammaFactor>& factors, bool second_var,
                         double& lo, double& hi, std::string* offender = nullptr)
{
    lo = -60.0;
    hi = 60.0;
    for (const auto& g : factors) {
        if (!g.numerator)
            continue;
        double c = second_var ? g.c2 : g.c1;
        double other = second_var ? g.c1 : g.c2;
        if (c == 0.0 || other != 0.0) // joint factors are validated at the chosen anchors
            continue;
        double bound = -g.offset / c;
        if (c > 0.0)
            lo = std::max(lo, bound);
        else
            hi = std::min(hi, bound);
    }
    if (offender && lo >= hi)
        *offender = "numerator Gamma factors leave no separating strip";
}

} // namespace

namespace detail {

void check_collisions(GammaFactorList& kernel, bool auto_perturb, double& perturbation)
{
    // Two numerator families with equal coefficients and integer offset gap
    // produce colliding poles; nudge the second offset per the degeneracy policy.
    auto& f = kernel.factors;
    for (size_t i = 0; i < f.size(); ++i) {
        if (!f[i].numerator || (f[i].c1 == 0.0 && f[i].c2 == 0.0))
            continue;
        for (size_t j = i + 1; j < f.size(); ++j) {
            if (!f[j].numerator || f[j].c1 != f[i].c1 || f[j].c2 != f[i].c2)
                continue;
            double c = (f[i].c1 != 0.0) ? f[i].c1 : f[i].c2;
            double d = (f[i].offset - f[j].offset) / c;
            if (std::fabs(d - std::round(d)) < 1e-6) {
                if (!auto_perturb) {
                    std::ostringstream os;
                    os << "degenerate Gamma parameters: offsets " << f[i].offset << " and "
                       << f[j].offset << " differ by an integer multiple of the coefficient";
                    throw std::domain_error(os.str());
                }
                double nudge = 1e-6 * (1.0 + std::fabs(f[j].offset));
                f[j].offset += nudge;
                perturbation += nudge;
            }
        }
    }
}

} // namespace detail

namespace {

void anchor_window_1d(const GammaFactorList& kernel, double& lo, double& hi)
{
    window_from_factors(kernel.factors, false, lo, hi);
}

EvalResult mb_integral_1d(const GammaFactorList& kernel_in, double ln_z, ContourSpec contour)
{
    if (contour.nodes < 32)
        throw std::invalid_argument("ContourSpec: node count must be >= 32");
    const GammaFactorList& kernel = kernel_in;
    EvalResult res;
    SplitKernel k = simplify_pairs(kernel);

    double lo, hi;
    std::string offender;
    window_from_factors(kernel.factors, false, lo, hi, &offender);
    if (lo >= hi)
        throw std::domain_error("mb_integral_1d: contour window empty: " + offender);

    double anchor = contour.anchor1;
    if (std::isnan(anchor)) {
        double m = 1e-3 * (hi - lo);
        anchor = detail::minimize_logmag(
            [&](double c) { return kernel_logmag(k, c) + c * ln_z; }, lo + m, hi - m);
    } else if (anchor <= lo || anchor >= hi) {
        throw std::domain_error("mb_integral_1d: anchor outside the separating strip");
    }

    auto f = [&](cplx s) { return eval_kernel(k, s) * std::exp(s * ln_z); };

    detail::LinePlan plan;
    plan.anchor = anchor;
    plan.half_length = contour.half_length;
    plan.nodes = detail::nodes_for_oscillation(contour.nodes, plan.panel_len, ln_z);
    double v1 = detail::line_integral_half(f, plan);
    plan.nodes = detail::nodes_for_oscillation(static_cast<int>(contour.nodes * 1.5),
                                               plan.panel_len, ln_z);
    double v2 = detail::line_integral_half(f, plan);

    res.value = v2;
    res.abs_error = std::fabs(v2 - v1);
    res.converged = res.abs_error <= std::max(1e-9 * std::fabs(v2), 1e-306);
    return res;
}

EvalResult mb_integral_2d(const GammaFactorList& kernel_in, double ln_z1, double ln_z2,
                          ContourSpec contour)
{
    if (contour.nodes < 32)
        throw std::invalid_argument("ContourSpec: node count must be >= 32");
    const GammaFactorList& kernel = kernel_in;
    EvalResult res;

    double slo, shi, tlo, thi;
    window_from_factors(kernel.factors, false, slo, shi);
    window_from_factors(kernel.factors, true, tlo, thi);
    // Joint factors couple the two anchors; handled after the box search.
    if (slo >= shi || tlo >= thi)
        throw std::domain_error("mb_integral_2d: contour window empty in one variable");

    auto logmag = [&](double cs, double ct) {
        double acc = 0.0;
        for (const auto& g : kernel.factors) {
            double arg = g.offset + g.c1 * cs + g.c2 * ct;
            if (g.numerator && arg <= 1e-9)
                return std::numeric_limits<double>::infinity();
            if (arg <= 0.0 && arg == std::floor(arg))
                return std::numeric_limits<double>::infinity();
            double lg = (arg > 0.0) ? std::lgamma(arg) : std::log(std::abs(gamma_real(arg)));
            acc += g.numerator ? lg : -lg;
        }
        return acc + cs * ln_z1 + ct * ln_z2;
    };

    double cs = contour.anchor1, ct = contour.anchor2;
    if (std::isnan(cs) || std::isnan(ct)) {
        double ms = 1e-3 * (shi - slo), mt = 1e-3 * (thi - tlo);
        cs = 0.5 * (slo + shi);
        ct = 0.5 * (tlo + thi);
        for (int round = 0; round < 3; ++round) {
            double ct_fixed = ct;
            cs = detail::minimize_logmag([&](double c) { return logmag(c, ct_fixed); },
                                         slo + ms, shi - ms);
            double cs_fixed = cs;
            ct = detail::minimize_logmag([&](double c) { return logmag(cs_fixed, c); },
                                         tlo + mt, thi - mt);
        }
    }
    // Validate joint separation at the chosen anchors.
    for (const auto& g : kernel.factors) {
        if (!g.numerator)
            continue;
        double arg = g.offset + g.c1 * cs + g.c2 * ct;
        if (arg <= 0.0) {
            std::ostringstream os;
            os << "mb_integral_2d: contour fails to separate poles of Gamma(" << g.offset;
            if (g.c1 != 0.0) os << (g.c1 > 0 ? " + " : " - ") << std::fabs(g.c1) << "*s";
            if (g.c2 != 0.0) os << (g.c2 > 0 ? " + " : " - ") << std::fabs(g.c2) << "*t";
            os << "): real part " << arg << " on the contour";
            throw std::domain_error(os.str());
        }
    }

    // Split: s-only, t-only, joint.
    std::vector<GammaFactor> fs, ft, fj;
    for (const auto& g : kernel.factors) {
        if (g.c2 == 0.0)
            fs.push_back(g);
        else if (g.c1 == 0.0)
            ft.push_back(g);
        else
            fj.push_back(g);
    }
    SplitKernel ks = simplify_pairs({fs});
    SplitKernel kt_tmp;
    {
        // reuse pair simplification in t by mapping c2 -> c1
        GammaFactorList tmp;
        for (auto g : ft) {
            std::swap(g.c1, g.c2);
            tmp.factors.push_back(g);
        }
        kt_tmp = simplify_pairs(tmp);
    }

    auto eval_joint = [&](cplx s, cplx t) {
        cplx acc = 0.0;
        for (const auto& g : fj) {
            cplx lg = ln_gamma(g.offset + g.c1 * s + g.c2 * t);
            acc += g.numerator ? lg : -lg;
        }
        return acc;
    };

    auto run = [&](int base_nodes) {
        const quad::GlRule& rs =
            quad::gl_rule(detail::nodes_for_oscillation(base_nodes, 8.0, ln_z1));
        const quad::GlRule& rt =
            quad::gl_rule(detail::nodes_for_oscillation(base_nodes, 8.0, ln_z2));
        // inner s-line for fixed complex t, both half-lines
        auto inner = [&](cplx t) {
            cplx tot = 0.0;
            for (int sign = 0; sign < 2; ++sign) {
                double dir = sign ? -1.0 : 1.0;
                double scale = 0.0;
                int quiet = 0;
                for (int p = 0; p < 60; ++p) {
                    double lo2 = p * 8.0, hi2 = lo2 + 8.0;
                    cplx part = 0.0;
                    double mag = 0.0;
                    for (size_t i = 0; i < rs.x.size(); ++i) {
                        double y = dir * (0.5 * (lo2 + hi2) + 0.5 * (hi2 - lo2) * rs.x[i]);
                        cplx s(cs, y);
                        cplx v = eval_kernel(ks, s) * std::exp(eval_joint(s, t) + s * ln_z1);
                        part += rs.w[i] * v;
                        mag += rs.w[i] * std::abs(v);
                    }
                    part *= 0.5 * (hi2 - lo2);
                    mag *= 0.5 * (hi2 - lo2);
                    tot += part;
                    scale = std::max(scale, mag);
                    if (mag < 1e-15 * std::max(scale, 1e-300)) {
                        if (++quiet >= 2)
                            break;
                    } else {
                        quiet = 0;
                    }
                }
            }
            return tot / (2.0 * M_PI);
        };
        // outer t half-line, doubled real part by conjugate symmetry
        double total = 0.0;
        double scale = 0.0;
        int quiet = 0;
        for (int p = 0; p < 60; ++p) {
            double lo2 = p * 8.0, hi2 = lo2 + 8.0;
            double part = 0.0, mag = 0.0;
            for (size_t i = 0; i < rt.x.size(); ++i) {
                double y = 0.5 * (lo2 + hi2) + 0.5 * (hi2 - lo2) * rt.x[i];
                cplx t(ct, y);
                cplx g = eval_kernel(kt_tmp, t) * std::exp(t * ln_z2);
                cplx v = inner(t) * g;
                part += rt.w[i] * v.real();
                mag += rt.w[i] * std::abs(v);
            }
            part *= 0.5 * (hi2 - lo2);
            mag *= 0.5 * (hi2 - lo2);
            total += part;
            scale = std::max(scale, mag);
            if (mag < 1e-14 * std::max(scale, 1e-300)) {
                if (++quiet >= 2)
                    break;
            } else {
                quiet = 0;
            }
        }
        return total / M_PI;
    };

    double v1 = run(contour.nodes);
    double v2 = run(static_cast<int>(contour.nodes * 1.5));

    res.value = v2;
    res.abs_error = std::fabs(v2 - v1);
    res.converged = res.abs_error <= std::max(1e-7 * std::fabs(v2), 1e-306);
    return res;
}

} // namespace ntnlink::specfun
