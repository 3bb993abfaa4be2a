#include "bosegas/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace bosegas {

namespace {

// Newton iteration on P_n with cos initial guesses; standard construction
gl_rule make_rule(int n) {
    gl_rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    return rule;
}

std::map<int, gl_rule> rule_cache;
std::mutex rule_mutex;

double adaptive_rec(const std::function<double(double)>& f, double a, double b, double tol,
                    int order, int depth) {
    const double whole = gl_integrate(f, a, b, order);
    const double mid = 0.5 * (a + b);
    const double split = gl_integrate(f, a, mid, order) + gl_integrate(f, mid, b, order);
    if (std::abs(split - whole) <= tol || depth >= 48) {
        if (depth >= 48 && std::abs(split - whole) > tol)
            throw numerical_error("integrate_adaptive: refinement stalled");
        return split;
    }
    return adaptive_rec(f, a, mid, 0.5 * tol, order, depth + 1) +
           adaptive_rec(f, mid, b, 0.5 * tol, order, depth + 1);
}

} // namespace

const gl_rule& gauss_legendre(int order) {
    if (order < 1) throw config_error("gauss_legendre: order must be positive");
    std::lock_guard<std::mutex> lock(rule_mutex);
    auto it = rule_cache.find(order);
    if (it == rule_cache.end()) it = rule_cache.emplace(order, make_rule(order)).first;
    return it->second;
}

double gl_integrate(const std::function<double(double)>& f, double a, double b, int order) {
    const gl_rule& rule = gauss_legendre(order);
    const double c = 0.5 * (b - a), d = 0.5 * (a + b);
    kahan_sum acc;
    for (int i = 0; i < order; ++i) acc.add(rule.w[i] * f(d + c * rule.x[i]));
    return c * acc.value();
}

double gl_composite(const std::function<double(double)>& f, double a, double b, double max_panel,
                    int order) {
    if (!(max_panel > 0.0) || b - a <= max_panel) return gl_integrate(f, a, b, order);
    const int panels = static_cast<int>(std::ceil((b - a) / max_panel));
    const double h = (b - a) / panels;
    kahan_sum acc;
    for (int i = 0; i < panels; ++i) acc.add(gl_integrate(f, a + i * h, a + (i + 1) * h, order));
    return acc.value();
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor, int order) {
    if (a == b) return 0.0;
    const double first = std::abs(gl_integrate(f, a, b, order));
    const double tol = std::max(rel_tol * first, std::max(abs_floor, 1e-300));
    return adaptive_rec(f, a, b, tol, order, 0);
}

double oscillatory_integral(const std::function<double(double)>& f, double a, double b, double q,
                            double rel_tol) {
    if (a == b) return 0.0;
    const double qa = std::abs(q);
    if (qa < 1e-14) return integrate_adaptive(f, a, b, rel_tol);
    const double quarter_phase = pi / (2.0 * qa);
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / quarter_phase)));
    const double h = (b - a) / panels;
    kahan_sum acc;
    for (int i = 0; i < panels; ++i)
        acc.add(integrate_adaptive(f, a + i * h, a + (i + 1) * h, rel_tol / panels));
    return acc.value();
}

} // namespace bosegas
