#include "bosegas/bogoliubov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bosegas/quadrature.hpp"

namespace bosegas {

namespace {

// integral of |vhat(u)|^pow over (x0, infinity): oscillation-resolving
// quadrature on a finite window, then an inverse-square envelope
// continuation fitted at the window edge. Feeds the recorded cutoff-tail
// estimates; quadrature-level precision is not needed here.
double hat_tail_integral(const potential_spec& spec, double x0, int pow) {
    const double r_sup = spec.support_radius();
    const double window = 80.0 / r_sup;
    const double x1 = x0 + window;
    const double quarter_phase = 0.5 * pi / r_sup;
    const auto f = [&](double u) {
        const double v = std::abs(fourier_hat(spec, u));
        return pow == 2 ? v * v : v;
    };
    const double body = gl_composite(f, x0, x1, quarter_phase, 16);
    double envelope = 0.0; // max |vhat| u^2 over the last oscillation
    for (int i = 0; i <= 32; ++i) {
        const double u = x1 - 2.0 * quarter_phase * static_cast<double>(i) / 32.0;
        envelope = std::max(envelope, std::abs(fourier_hat(spec, u)) * u * u);
    }
    const double rest = pow == 2 ? envelope * envelope / (3.0 * x1 * x1 * x1) : envelope / x1;
    return body + rest;
}

void require_matching_modes(const scattering_solution& sol, const mode_set& set,
                            const char* who) {
    if (!sol.eta_filled) throw config_error(std::string(who) + ": eta coefficients not filled");
    if (sol.modes.momenta != set.momenta)
        throw config_error(std::string(who) + ": eta was filled on a different mode set");
}

} // namespace

quadratic_coeffs fg_coeffs(const potential_spec& spec, const scattering_solution& sol,
                           const mode_set& set) {
    spec.validate();
    require_matching_modes(sol, set, "fg_coeffs");
    if (set.empty()) throw config_error("fg_coeffs: empty mode set");

    const std::size_t m = set.size();
    quadratic_coeffs c;
    c.modes = set;
    c.sigma.resize(m);
    c.gamma.resize(m);
    c.f_p.resize(m);
    c.g_p.resize(m);
    c.s_p.resize(m);
    c.vhat_p.resize(m);

    int max_nsq = 0;
    for (const auto& q : set) max_nsq = std::max(max_nsq, q.n_sq());
    const int half = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_nsq))));
    const scaled_hat_table vhat = build_scaled_hat_table(spec, 4 * half * half);

    const double kappa = spec.kappa;
    const double big_n = static_cast<double>(spec.n_particles);
    double eta_envelope = 0.0; // max |eta_q| q^2 over the set
    for (std::size_t j = 0; j < m; ++j)
        eta_envelope = std::max(eta_envelope, std::abs(sol.eta[j]) * set.momenta[j].norm_sq());

    for (std::size_t i = 0; i < m; ++i) {
        const momentum& p = set.momenta[i];
        kahan_sum conv;
        for (std::size_t j = 0; j < m; ++j)
            conv.add(vhat.at(p - set.momenta[j]) * sol.eta[j]);
        conv.add(vhat.at(p) * sol.eta0_tilde); // q = 0 rides on the zero-mode transform
        const double s = kappa / big_n * conv.value();
        const double sig = std::sinh(sol.eta[i]);
        const double gam = std::cosh(sol.eta[i]);
        const double vp = vhat.at(p);
        const double p_sq = p.norm_sq();
        const double cross = (sig + gam) * (sig + gam);
        c.sigma[i] = sig;
        c.gamma[i] = gam;
        c.vhat_p[i] = vp;
        c.s_p[i] = s;
        c.f_p[i] = p_sq * (sig * sig + gam * gam) + kappa * vp * cross;
        c.g_p[i] = 2.0 * p_sq * sig * gam + kappa * vp * cross + s;
    }

    // dropped |q| > cutoff mass of the s_p convolution: per-shell contributions
    // follow |vhat(q/N^b)| * eta_envelope / q^2, so the remainder is the radial
    // envelope integral of the transform past the cutoff
    if (kappa > 0.0 && eta_envelope > 0.0) {
        const double x0 = set.cutoff_radius / spec.n_beta();
        c.conv_tail = kappa / big_n * eta_envelope * spec.n_beta() / (2.0 * pi * pi) *
                      hat_tail_integral(spec, x0, 1);
    }
    return c;
}

void ap_defect(quadratic_coeffs& c, const potential_spec& spec) {
    if (c.f_p.empty()) throw config_error("ap_defect: f/g coefficients not filled");
    const double kappa = spec.kappa;
    const std::size_t m = c.size();
    c.a_p.resize(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double sig = c.sigma[i], gam = c.gamma[i], s = c.s_p[i], vp = c.vhat_p[i];
        const double p_sq = c.modes.momenta[i].norm_sq();
        const double cross = (gam + sig) * (gam + sig);
        const double a = -2.0 * (kappa * vp * cross + 2.0 * p_sq * gam * sig) * s - s * s;
        c.a_p[i] = a;
        const double lhs = c.f_p[i] * c.f_p[i] - c.g_p[i] * c.g_p[i];
        const double rhs = p_sq * p_sq + 2.0 * p_sq * kappa * vp + a;
        worst = std::max(worst, std::abs(lhs - rhs) / (c.f_p[i] * c.f_p[i]));
    }
    c.max_identity_residual = worst;
    c.a_filled = true;
}

void tau_coeffs(quadratic_coeffs& c) {
    if (c.f_p.empty()) throw config_error("tau_coeffs: f/g coefficients not filled");
    const std::size_t m = c.size();
    c.tau.resize(m);
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double ratio = c.g_p[i] / c.f_p[i];
        if (!(std::abs(ratio) < 1.0))
            throw numerical_error(
                "tau_coeffs: kappa outside Bogoliubov-diagonalizable regime (|g|/f = " +
                std::to_string(std::abs(ratio)) + " at p = " + to_string(c.modes.momenta[i]) +
                ")");
        c.tau[i] = 0.25 * (std::log1p(-ratio) - std::log1p(ratio));
        worst = std::max(worst, std::abs(ratio));
    }
    c.max_gf_ratio = worst;
    c.tau_filled = true;
}

value_with_tail constant_cn(const potential_spec& spec, const scattering_solution& sol,
                            const quadratic_coeffs& c) {
    spec.validate();
    require_matching_modes(sol, c.modes, "constant_cn");
    if (c.f_p.empty()) throw config_error("constant_cn: coefficients not filled");

    const std::size_t m = c.size();
    int max_nsq = 0;
    for (const auto& q : c.modes) max_nsq = std::max(max_nsq, q.n_sq());
    const int half = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_nsq))));
    const scaled_hat_table vhat = build_scaled_hat_table(spec, 4 * half * half);

    const double kappa = spec.kappa;
    const double big_n = static_cast<double>(spec.n_particles);
    kahan_sum total;
    for (std::size_t i = 0; i < m; ++i) {
        const momentum& p = c.modes.momenta[i];
        kahan_sum inner; // q = 0 excluded from the double sum
        for (std::size_t j = 0; j < m; ++j)
            inner.add(vhat.at(p - c.modes.momenta[j]) * sol.eta[j]);
        const double sig = c.sigma[i], gam = c.gamma[i];
        total.add(p.norm_sq() * sig * sig + kappa * c.vhat_p[i] * (sig * sig + sig * gam) +
                  0.5 * kappa / big_n * sol.eta[i] * inner.value());
    }

    value_with_tail out;
    out.value = 0.5 * (big_n - 1.0) * kappa * hat_zero(spec) + total.value();
    // per-mode summand approaches -kappa^2 vhat^2(p/N^b)/(4 p^2) at large |p|,
    // so the dropped mass is the envelope integral of vhat^2 past the cutoff
    // (doubled to cover the eta-eta double-sum remainder)
    if (kappa > 0.0) {
        const double x0 = c.modes.cutoff_radius / spec.n_beta();
        out.tail = kappa * kappa * spec.n_beta() / (8.0 * pi * pi) *
                   hat_tail_integral(spec, x0, 2) * 2.0;
    }
    return out;
}

int mbeta(double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) throw config_error("mbeta: beta must lie in (0,1)");
    const double bound = 1.0 / (1.0 - beta) + std::min(0.5, beta / (1.0 - beta));
    return static_cast<int>(std::floor(bound + 1e-9));
}

born_result born_series(const potential_spec& spec, const mode_set& set, int k_max) {
    spec.validate();
    if (set.empty()) throw config_error("born_series: empty mode set");
    if (k_max < 1) throw config_error("born_series: k_max must be at least 1");
    if (k_max > 12) throw config_error("born_series: k_max beyond resource limit (12)");

    const std::size_t m = set.size();
    int max_nsq = 0;
    for (const auto& q : set) max_nsq = std::max(max_nsq, q.n_sq());
    const int half = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_nsq))));
    const scaled_hat_table vhat = build_scaled_hat_table(spec, 4 * half * half);

    const double kappa = spec.kappa;
    const double big_n = static_cast<double>(spec.n_particles);
    std::vector<double> v(m), weight(m); // v(q) and 1/(2N q^2)
    for (std::size_t j = 0; j < m; ++j) {
        v[j] = kappa * vhat.at(set.momenta[j]);
        weight[j] = 1.0 / (2.0 * big_n * set.momenta[j].norm_sq());
    }

    born_result out;
    out.terms.reserve(static_cast<std::size_t>(k_max));
    out.tails.reserve(static_cast<std::size_t>(k_max));
    std::vector<double> w = v, w_next(m); // w = K^{k-1} v
    double sign = -1.0;
    for (int k = 1; k <= k_max; ++k) {
        kahan_sum sum;
        for (std::size_t i = 0; i < m; ++i) sum.add(v[i] * weight[i] * w[i]);
        out.terms.push_back(sign * sum.value());
        if (k < k_max) {
            for (std::size_t i = 0; i < m; ++i) {
                const momentum& p = set.momenta[i];
                kahan_sum acc;
                for (std::size_t j = 0; j < m; ++j)
                    acc.add(kappa * vhat.at(p - set.momenta[j]) * weight[j] * w[j]);
                w_next[i] = acc.value();
            }
            w.swap(w_next);
        }
        sign = -sign;
    }

    // k = 1 has the closed envelope tail (summand kappa^2 vhat^2/(2N p^2));
    // deeper terms inherit its relative size, each kernel pass being
    // cutoff-local in the same way
    double rel_tail = 0.0;
    if (kappa > 0.0 && out.terms[0] != 0.0) {
        const double x0 = set.cutoff_radius / spec.n_beta();
        const double tail1 = kappa * kappa * spec.n_beta() / (4.0 * pi * pi * big_n) *
                             hat_tail_integral(spec, x0, 2);
        rel_tail = tail1 / std::abs(out.terms[0]);
    }
    for (int k = 0; k < k_max; ++k) out.tails.push_back(std::abs(out.terms[static_cast<std::size_t>(k)]) * rel_tail);
    return out;
}

born_result born_series_radial(const potential_spec& spec, int k_max, int grid_points,
                               double u_max) {
    spec.validate();
    if (spec.shape != potential_spec::shape_t::ball)
        throw config_error("born_series_radial: continuum reduction requires the step potential");
    if (k_max < 1) throw config_error("born_series_radial: k_max must be at least 1");
    if (k_max > 12) throw config_error("born_series_radial: k_max beyond resource limit (12)");
    if (grid_points < 16 || grid_points > 16384)
        throw config_error("born_series_radial: grid_points outside [16, 16384]");
    if (!(u_max > 0.0)) throw config_error("born_series_radial: u_max must be positive");

    const double nb = spec.n_beta();
    const double kappa = spec.kappa;
    const double big_n = static_cast<double>(spec.n_particles);
    const double r_ball = spec.radius;
    const std::size_t m = static_cast<std::size_t>(grid_points);
    const double p_max = u_max * nb;
    const double h = p_max / static_cast<double>(grid_points);

    std::vector<double> p(m), hatv(m);
    for (std::size_t i = 0; i < m; ++i) {
        p[i] = (static_cast<double>(i) + 0.5) * h; // midpoint grid in raw momentum
        hatv[i] = ball_hat(spec.v0, r_ball, p[i] / nb);
    }

    // angular reduction of the convolution kernel: the closed-form bipolar
    // integral of s*vhat(s/N^b) between |p-q| and p+q
    const double w_coef = 4.0 * pi * spec.v0 * nb * nb * nb;
    const auto seg = [&](double s) { // antiderivative piece sin(R s / N^b)/s
        return s == 0.0 ? r_ball / nb : std::sin(r_ball * s / nb) / s;
    };

    born_result out;
    std::vector<double> w(m), w_next(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = kappa * hatv[i];
    double sign = -1.0;
    for (int k = 1; k <= k_max; ++k) {
        kahan_sum sum;
        for (std::size_t i = 0; i < m; ++i) sum.add(hatv[i] * w[i]);
        out.terms.push_back(sign * kappa * h / (4.0 * pi * pi * big_n) * sum.value());
        if (k < k_max) {
            for (std::size_t i = 0; i < m; ++i) {
                kahan_sum acc;
                for (std::size_t j = 0; j < m; ++j) {
                    const double ww = w_coef * (seg(std::abs(p[i] - p[j])) - seg(p[i] + p[j]));
                    acc.add(w[j] / p[j] * ww);
                }
                w_next[i] = kappa * h / (8.0 * pi * pi * big_n * p[i]) * acc.value();
            }
            w.swap(w_next);
        }
        sign = -sign;
    }

    double rel_tail = 0.0;
    if (kappa > 0.0 && out.terms[0] != 0.0) {
        const double tail1 = kappa * kappa * nb / (4.0 * pi * pi * big_n) *
                             hat_tail_integral(spec, u_max, 2);
        rel_tail = tail1 / std::abs(out.terms[0]);
    }
    for (int k = 0; k < k_max; ++k) out.tails.push_back(std::abs(out.terms[static_cast<std::size_t>(k)]) * rel_tail);
    return out;
}

energy_report ground_energy(const potential_spec& spec, const scattering_solution& sol,
                            const quadratic_coeffs& coeffs) {
    spec.validate();
    require_matching_modes(sol, coeffs.modes, "ground_energy");
    if (coeffs.f_p.empty()) throw config_error("ground_energy: coefficients not filled");

    energy_report er;
    er.modes = coeffs.modes;

    const value_with_tail cn = constant_cn(spec, sol, coeffs);
    er.c_n = cn.value;
    er.c_n_tail = cn.tail;

    // (1/2)[-f + sqrt(f^2 - g^2)] = -g^2 / (2 (f + sqrt(f^2 - g^2))): the
    // rationalized form avoids cancellation once the summand falls like p^-6
    kahan_sum shift;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double f = coeffs.f_p[i], g = coeffs.g_p[i];
        const double disc = f * f - g * g;
        if (disc < 0.0)
            throw numerical_error("ground_energy: f^2 - g^2 negative at p = " +
                                  to_string(coeffs.modes.momenta[i]) +
                                  " (quadratic form not diagonalizable)");
        shift.add(-g * g / (2.0 * (f + std::sqrt(disc))));
    }
    er.diag_shift = shift.value();
    er.e_direct = er.c_n + er.diag_shift;

    const born_result born = born_series(spec, coeffs.modes, mbeta(spec.beta));
    er.born_terms = born.terms;
    er.born_tails = born.tails;
    kahan_sum eight_pi_a;
    eight_pi_a.add(spec.kappa * hat_zero(spec));
    for (const double t : born.terms) eight_pi_a.add(t);
    er.a_n = eight_pi_a.value() / (8.0 * pi);

    // closed-form momentum sum with the constant zero-mode coupling
    // c = kappa vhat(0): the summand
    //   -(1/2)[p^2 + c - sqrt(p^4 + 2 p^2 c) - c^2/(2 p^2)]
    // is evaluated in rationalized form -(c^2/(2 p^2)) [1/(1 + x/2 + sqrt(1+x)) - 1/2],
    // x = 2 c / p^2, which decays like c^3/(4 p^4)
    const double c = spec.kappa * hat_zero(spec);
    kahan_sum asym;
    er.dispersion.resize(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double p_sq = coeffs.modes.momenta[i].norm_sq();
        const double x = 2.0 * c / p_sq;
        asym.add(-(c * c / (2.0 * p_sq)) *
                 (1.0 / (1.0 + 0.5 * x + std::sqrt(1.0 + x)) - 0.5));
        er.dispersion[i] = dispersion_from_psq(p_sq, c);
    }
    er.asym_sum = asym.value();
    er.asym_tail = (c * c * c / 4.0) / (2.0 * pi * pi * coeffs.modes.cutoff_radius);
    er.e_asymptotic = 4.0 * pi * (static_cast<double>(spec.n_particles) - 1.0) * er.a_n +
                      er.asym_sum;
    return er;
}

double dispersion(const momentum& p, double kappa_vhat0) {
    return dispersion_from_psq(p.norm_sq(), kappa_vhat0);
}

double dispersion_from_psq(double p_sq, double kappa_vhat0) {
    if (kappa_vhat0 < 0.0)
        throw config_error("dispersion: zero-mode coupling must be nonnegative");
    return std::sqrt(p_sq * p_sq + 2.0 * p_sq * kappa_vhat0);
}

double excitation_levels(const std::map<momentum, int>& occupations, double kappa_vhat0) {
    kahan_sum total;
    for (const auto& [p, n] : occupations) {
        if (p.is_zero())
            throw config_error("excitation_levels: zero momentum is not an excitation mode");
        if (n < 0)
            throw config_error("excitation_levels: negative occupation at p = " + to_string(p));
        total.add(static_cast<double>(n) * dispersion(p, kappa_vhat0));
    }
    return total.value();
}

} // namespace bosegas
