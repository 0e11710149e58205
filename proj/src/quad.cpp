#include "ntnlink/quad.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ntnlink::quad {

namespace {

GlRule make_rule(int n)
{
    // Newton iteration on Legendre polynomials, nodes symmetric about 0.
    GlRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double eps = 1e-15;
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < eps)
                break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

std::mutex g_rule_mutex;
std::map<int, GlRule> g_rules;

// 15-point Gauss and embedded 7-point Gauss for error estimation.
const GlRule& rule15() { return gl_rule(15); }
const GlRule& rule7() { return gl_rule(7); }

struct Seg {
    double a, b;
    int depth;
};

} // namespace

const GlRule& gl_rule(int n)
{
    std::lock_guard<std::mutex> lk(g_rule_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end())
        it = g_rules.emplace(n, make_rule(n)).first;
    return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int n)
{
    const GlRule& r = gl_rule(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth)
{
    if (a == b)
        return 0.0;
    const GlRule& g15 = rule15();
    const GlRule& g7 = rule7();
    auto seg_eval = [&](double lo, double hi, double& coarse) {
        double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        double s15 = 0.0;
        for (size_t i = 0; i < g15.x.size(); ++i)
            s15 += g15.w[i] * f(c + h * g15.x[i]);
        double s7 = 0.0;
        for (size_t i = 0; i < g7.x.size(); ++i)
            s7 += g7.w[i] * f(c + h * g7.x[i]);
        coarse = s7 * h;
        return s15 * h;
    };

    double total = 0.0;
    std::vector<Seg> stack{{a, b, 0}};
    // first pass estimate for the relative floor
    double coarse0;
    double rough = seg_eval(a, b, coarse0);
    double floor_scale = std::fabs(rough);
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double coarse;
        double fine = seg_eval(s.a, s.b, coarse);
        double err = std::fabs(fine - coarse);
        double tol = std::max(abs_tol, rel_tol * std::max(floor_scale, std::fabs(total) + std::fabs(fine)));
        if (err < tol * 1e-2 || s.depth >= max_depth) {
            total += fine;
        } else {
            double mid = 0.5 * (s.a + s.b);
            stack.push_back({s.a, mid, s.depth + 1});
            stack.push_back({mid, s.b, s.depth + 1});
        }
    }
    return total;
}

double integrate_to_inf(const std::function<double(double)>& f, double a, double scale,
                        double rel_tol, int max_segments)
{
    if (!(scale > 0.0))
        throw std::invalid_argument("integrate_to_inf: scale must be positive");
    double total = 0.0;
    double lo = a;
    double len = scale;
    int quiet = 0;
    for (int k = 0; k < max_segments; ++k) {
        double hi = lo + len;
        double part = integrate_adaptive(f, lo, hi, rel_tol, 0.0, 40);
        total += part;
        if (std::fabs(part) < rel_tol * std::fabs(total) + 1e-300) {
            if (++quiet >= 2)
                break;
        } else {
            quiet = 0;
        }
        lo = hi;
        len *= 2.0;
    }
    return total;
}

} // namespace ntnlink::quad
