#include "bosegas/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "bosegas/quadrature.hpp"

namespace bosegas {

namespace {

struct ode_result {
    double u_end = 0.0;
    double du_end = 0.0;
};

struct mesh_points {
    std::vector<double> r;
    std::size_t i_support = 0; // node index sitting exactly on the scaled support edge
};

// RK4 pass over the fixed mesh for -u'' + c(r) u = lambda u, u(0)=0, u'(0)=1;
// optionally records (u, u') at every node. The potential jumps at the support
// edge, so the march is split there: inside steps clamp the potential argument
// to the support radius (one-sided limit from below), outside steps use the
// exact zero tail. Each phase then sees a smooth right-hand side and RK4 keeps
// full order through the seam.
ode_result integrate_u(const potential_spec& spec, double lambda, const mesh_points& mesh,
                       std::vector<double>* u_out, std::vector<double>* du_out) {
    const std::vector<double>& r = mesh.r;
    const double strength = 0.5 * spec.kappa *
                            std::pow(static_cast<double>(spec.n_particles), 3.0 * spec.beta - 1.0);
    const double nb = spec.n_beta();
    const double r_cap = spec.support_radius();
    const auto rhs_inside = [&](double rr, double uu) {
        return (strength * potential_value(spec, std::min(nb * rr, r_cap)) - lambda) * uu;
    };
    const auto rhs_outside = [&](double, double uu) { return -lambda * uu; };
    double u = 0.0, v = 1.0;
    if (u_out) (*u_out)[0] = u;
    if (du_out) (*du_out)[0] = v;
    const auto step = [&](std::size_t i, const auto& rhs) {
        const double h = r[i] - r[i - 1], r0 = r[i - 1];
        const double k1u = v, k1v = rhs(r0, u);
        const double k2u = v + 0.5 * h * k1v, k2v = rhs(r0 + 0.5 * h, u + 0.5 * h * k1u);
        const double k3u = v + 0.5 * h * k2v, k3v = rhs(r0 + 0.5 * h, u + 0.5 * h * k2u);
        const double k4u = v + h * k3v, k4v = rhs(r0 + h, u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if (u_out) (*u_out)[i] = u;
        if (du_out) (*du_out)[i] = v;
    };
    for (std::size_t i = 1; i <= mesh.i_support; ++i) step(i, rhs_inside);
    for (std::size_t i = mesh.i_support + 1; i < r.size(); ++i) step(i, rhs_outside);
    return {u, v};
}

mesh_points build_mesh(double r_support, double ell, const mesh_control& mesh) {
    const int total = std::max(mesh.total_steps, mesh.min_inside + mesh.min_outside);
    int n_in = static_cast<int>(std::lround(total * r_support / ell));
    n_in = std::max(n_in, mesh.min_inside);
    const int n_out = std::max(total - n_in, mesh.min_outside);
    mesh_points out;
    out.r.reserve(static_cast<std::size_t>(n_in + n_out) + 1);
    for (int i = 0; i <= n_in; ++i) out.r.push_back(r_support * static_cast<double>(i) / n_in);
    for (int j = 1; j <= n_out; ++j)
        out.r.push_back(r_support + (ell - r_support) * static_cast<double>(j) / n_out);
    out.r.back() = ell; // exact endpoint
    out.i_support = static_cast<std::size_t>(n_in);
    return out;
}

// cubic Hermite reconstruction of w on one mesh interval
struct hermite_patch {
    double r0, r1, w0, w1, d0, d1;
    double operator()(double rr) const {
        const double h = r1 - r0, t = (rr - r0) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * w0 + (t3 - 2.0 * t2 + t) * h * d0 +
               (-2.0 * t3 + 3.0 * t2) * w1 + (t3 - t2) * h * d1;
    }
};

} // namespace

double scattering_solution::eta_at(const momentum& p) const {
    if (!eta_filled) throw config_error("scattering: eta requested before eta_coefficients");
    const auto idx = modes.index_of(p);
    if (idx < 0) throw config_error("scattering: momentum " + to_string(p) + " not in eta table");
    return eta[static_cast<std::size_t>(idx)];
}

double scattering_solution::eta_tilde_at(const momentum& p) const {
    return p.is_zero() ? eta0_tilde : eta_at(p);
}

scattering_solution solve_neumann(const potential_spec& spec, double ell,
                                  const mesh_control& mesh) {
    spec.validate();
    if (!(ell > 0.0) || !(ell < 0.5))
        throw config_error("solve_neumann: Neumann radius must lie in (0, 1/2)");
    const double r_support = spec.support_radius() / spec.n_beta();
    if (r_support >= ell)
        throw config_error("solve_neumann: scaled potential exceeds ell (support " +
                           std::to_string(r_support) + " >= " + std::to_string(ell) + ")");

    scattering_solution sol;
    sol.ell = ell;
    sol.n_particles = spec.n_particles;
    const mesh_points grid = build_mesh(r_support, ell, mesh);
    sol.r = grid.r;
    const std::size_t nodes = sol.r.size();
    sol.f.assign(nodes, 1.0);
    sol.fp.assign(nodes, 0.0);
    sol.w.assign(nodes, 0.0);

    if (spec.kappa == 0.0 || hat_zero(spec) == 0.0) {
        // free equation: u = r solves it with lambda = 0 and f = 1 exactly
        sol.lambda = 0.0;
        sol.solved = true;
        return sol;
    }

    const auto neumann_defect = [&](double lambda) {
        const auto end = integrate_u(spec, lambda, grid, nullptr, nullptr);
        return end.du_end - end.u_end / ell;
    };

    // the defect is positive at lambda = 0 (u is convex while positive for
    // V >= 0); expand the upper edge geometrically until it turns negative
    const double g0 = neumann_defect(0.0);
    const double seed = 3.0 * spec.kappa * hat_zero(spec) /
                        (8.0 * pi * static_cast<double>(spec.n_particles) * ell * ell * ell);
    double lo = 0.0, g_lo = g0;
    double hi = 2.0 * seed, g_hi = neumann_defect(hi);
    int expansions = 0;
    while (g_hi > 0.0 && expansions < 200) {
        lo = hi;
        g_lo = g_hi;
        hi *= 2.0;
        g_hi = neumann_defect(hi);
        ++expansions;
    }
    if (!(g_lo > 0.0) || !(g_hi <= 0.0))
        throw numerical_error("solve_neumann: bracket failure, defect(" + std::to_string(lo) +
                              ") = " + std::to_string(g_lo) + ", defect(" + std::to_string(hi) +
                              ") = " + std::to_string(g_hi));

    // bisection to machine-level relative width, then a secant polish
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = neumann_defect(mid);
        if (g_mid > 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    double lambda = (g_lo != g_hi) ? (lo + (hi - lo) * g_lo / (g_lo - g_hi)) : 0.5 * (lo + hi);
    if (!(lambda >= lo) || !(lambda <= hi)) lambda = 0.5 * (lo + hi);
    sol.lambda = lambda;

    std::vector<double> u(nodes), du(nodes);
    integrate_u(spec, lambda, grid, &u, &du);
    const double scale = u.back() / ell;
    if (!(std::abs(scale) > 0.0))
        throw numerical_error("solve_neumann: degenerate boundary value u(ell) = 0");
    sol.f[0] = du[0] / scale; // limit of u/(r scale) at r = 0
    sol.fp[0] = 0.0;
    for (std::size_t i = 1; i < nodes; ++i) {
        const double rr = sol.r[i];
        sol.f[i] = u[i] / (rr * scale);
        sol.fp[i] = (du[i] * rr - u[i]) / (rr * rr * scale);
    }
    for (std::size_t i = 0; i < nodes; ++i) sol.w[i] = 1.0 - sol.f[i];
    sol.solved = true;
    return sol;
}

void eta_coefficients(scattering_solution& sol, const mode_set& set) {
    if (!sol.solved) throw config_error("eta_coefficients: solution not solved yet");
    if (set.empty()) throw config_error("eta_coefficients: empty mode set");

    const double big_n = static_cast<double>(sol.n_particles);
    const std::size_t intervals = sol.r.size() - 1;

    // eta depends on |p| only: one quadrature per shell
    std::map<int, double> by_shell;
    for (const auto& p : set) by_shell.emplace(p.n_sq(), 0.0);

    for (auto& [n_sq, value] : by_shell) {
        const double p_abs = two_pi * std::sqrt(static_cast<double>(n_sq));
        const double max_panel = pi / (2.0 * p_abs);
        kahan_sum acc;
        for (std::size_t i = 0; i < intervals; ++i) {
            const hermite_patch patch{sol.r[i],    sol.r[i + 1], sol.w[i],
                                      sol.w[i + 1], -sol.fp[i],  -sol.fp[i + 1]};
            acc.add(gl_composite(
                [&](double rr) { return rr * patch(rr) * std::sin(p_abs * rr); }, patch.r0,
                patch.r1, max_panel, 16));
        }
        value = -big_n * 4.0 * pi / p_abs * acc.value();
    }

    kahan_sum zero_acc;
    for (std::size_t i = 0; i < intervals; ++i) {
        const hermite_patch patch{sol.r[i],    sol.r[i + 1], sol.w[i],
                                  sol.w[i + 1], -sol.fp[i],  -sol.fp[i + 1]};
        zero_acc.add(
            gl_integrate([&](double rr) { return rr * rr * patch(rr); }, patch.r0, patch.r1, 16));
    }

    sol.modes = set;
    sol.eta.resize(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        sol.eta[i] = by_shell.at(set.momenta[i].n_sq());
    sol.eta0_tilde = -big_n * 4.0 * pi * zero_acc.value();
    sol.eta_filled = true;
}

double chi_hat(double ell, double k_abs) { return ball_hat(1.0, ell, k_abs); }

std::vector<double> scattering_residuals(const scattering_solution& sol,
                                         const potential_spec& spec, const mode_set& set,
                                         const mode_set& targets) {
    if (!sol.eta_filled) throw config_error("scattering_residual: eta not filled");
    if (sol.modes.momenta != set.momenta)
        throw config_error("scattering_residual: eta was filled on a different mode set");

    // transform caches over every difference p - q that can occur
    int max_nsq_set = 0, max_nsq_tgt = 0;
    for (const auto& q : set) max_nsq_set = std::max(max_nsq_set, q.n_sq());
    for (const auto& p : targets) {
        if (!set.contains(p))
            throw config_error("scattering_residual: momentum " + to_string(p) +
                               " outside the mode set");
        max_nsq_tgt = std::max(max_nsq_tgt, p.n_sq());
    }
    const int a = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_nsq_set))));
    const int b = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_nsq_tgt))));
    const int diff_cap = (a + b) * (a + b) + 1;
    const scaled_hat_table vhat = build_scaled_hat_table(spec, diff_cap);
    std::vector<double> chi(static_cast<std::size_t>(diff_cap) + 1);
    for (int s = 0; s <= diff_cap; ++s)
        chi[static_cast<std::size_t>(s)] =
            chi_hat(sol.ell, two_pi * std::sqrt(static_cast<double>(s)));

    const double kappa = spec.kappa;
    const double big_n = static_cast<double>(spec.n_particles);
    std::vector<double> out(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const momentum& p = targets.momenta[t];
        kahan_sum v_conv, chi_conv;
        for (std::size_t j = 0; j < set.size(); ++j) {
            const momentum d = p - set.momenta[j];
            v_conv.add(vhat.at_n_sq(d.n_sq()) * sol.eta[j]);
            chi_conv.add(chi[static_cast<std::size_t>(d.n_sq())] * sol.eta[j]);
        }
        // q = 0 contributions ride on eta0_tilde
        v_conv.add(vhat.at_n_sq(p.n_sq()) * sol.eta0_tilde);
        chi_conv.add(chi[static_cast<std::size_t>(p.n_sq())] * sol.eta0_tilde);

        const double eta_p = sol.eta[static_cast<std::size_t>(set.index_of(p))];
        out[t] = p.norm_sq() * eta_p + 0.5 * kappa * vhat.at_n_sq(p.n_sq()) +
                 0.5 * kappa / big_n * v_conv.value() - big_n * sol.lambda * chi[static_cast<std::size_t>(p.n_sq())] -
                 sol.lambda * chi_conv.value();
    }
    return out;
}

double scattering_residual(const scattering_solution& sol, const potential_spec& spec,
                           const momentum& p, const mode_set& set) {
    mode_set single;
    single.momenta = {p};
    single.cutoff_radius = p.norm();
    return scattering_residuals(sol, spec, set, single).front();
}

} // namespace bosegas
