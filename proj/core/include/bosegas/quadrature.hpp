#pragma once

#include <functional>
#include <vector>

#include "bosegas/common.hpp"

namespace bosegas {

// Gauss-Legendre nodes/weights on [-1,1], computed once per order and cached
struct gl_rule {
    std::vector<double> x;
    std::vector<double> w;
};
const gl_rule& gauss_legendre(int order);

// single Gauss-Legendre panel on [a,b]
double gl_integrate(const std::function<double(double)>& f, double a, double b, int order = 16);

// composite rule with a cap on panel width (0 or negative = single panel)
double gl_composite(const std::function<double(double)>& f, double a, double b, double max_panel,
                    int order = 16);

// adaptive bisection, accepting a panel when the order-n and split estimates
// agree to the local tolerance; rel_tol is measured against a first global
// estimate of the integral (plus abs_floor for integrals near zero)
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor = 0.0, int order = 16);

// integral of f(r)*sin(q*r) style oscillatory integrands: panels are capped
// at a quarter phase pi/(2q) and each panel is integrated adaptively
double oscillatory_integral(const std::function<double(double)>& f, double a, double b, double q,
                            double rel_tol = 1e-12);

} // namespace bosegas
