#include "bosegas/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bosegas/quadrature.hpp"

namespace bosegas {

double potential_spec::support_radius() const {
    return shape == shape_t::ball ? radius : (grid_r.empty() ? 0.0 : grid_r.back());
}

double potential_spec::n_beta() const {
    return std::pow(static_cast<double>(n_particles), beta);
}

void potential_spec::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw config_error("potential: coupling must be finite and nonnegative");
    if (!(beta >= 0.0) || !(beta < 1.0))
        throw config_error("potential: scaling exponent must lie in [0,1)");
    if (n_particles < 2) throw config_error("potential: particle number must be >= 2");
    if (shape == shape_t::ball) {
        if (!(v0 >= 0.0) || !std::isfinite(v0))
            throw config_error("potential: ball height must be finite and nonnegative");
        if (!(radius > 0.0) || !std::isfinite(radius))
            throw config_error("potential: ball radius must be finite and positive");
        return;
    }
    if (grid_r.size() != grid_v.size() || grid_r.size() < 2)
        throw config_error("potential: tabulated grid needs >= 2 matched (r, V) pairs");
    if (grid_r.front() != 0.0)
        throw config_error("potential: tabulated grid must start at r = 0");
    for (std::size_t i = 1; i < grid_r.size(); ++i)
        if (!(grid_r[i] > grid_r[i - 1]))
            throw config_error("potential: tabulated grid must be strictly increasing");
    for (double v : grid_v)
        if (!std::isfinite(v) || v < 0.0)
            throw config_error("potential: tabulated values must be finite and nonnegative");
}

potential_spec ball_potential(double v0, double radius, double kappa, double beta,
                              long long n_particles) {
    potential_spec spec;
    spec.shape = potential_spec::shape_t::ball;
    spec.v0 = v0;
    spec.radius = radius;
    spec.kappa = kappa;
    spec.beta = beta;
    spec.n_particles = n_particles;
    spec.validate();
    return spec;
}

potential_spec tabulated_potential(std::vector<double> grid_r, std::vector<double> grid_v,
                                   double kappa, double beta, long long n_particles) {
    potential_spec spec;
    spec.shape = potential_spec::shape_t::tabulated;
    spec.grid_r = std::move(grid_r);
    spec.grid_v = std::move(grid_v);
    spec.kappa = kappa;
    spec.beta = beta;
    spec.n_particles = n_particles;
    spec.validate();
    return spec;
}

potential_spec load_tabulated_csv(const std::string& path, double kappa, double beta,
                                  long long n_particles) {
    std::ifstream in(path);
    if (!in) throw config_error("potential: cannot open CSV file " + path);
    std::vector<double> rs, vs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::string body = line;
        std::replace(body.begin(), body.end(), ',', ' ');
        std::istringstream row(body);
        double r = 0.0, v = 0.0;
        if (!(row >> r >> v))
            throw config_error("potential: malformed CSV row at " + path + ":" +
                               std::to_string(line_no));
        rs.push_back(r);
        vs.push_back(v);
    }
    return tabulated_potential(std::move(rs), std::move(vs), kappa, beta, n_particles);
}

double potential_value(const potential_spec& spec, double r) {
    if (spec.shape == potential_spec::shape_t::ball) return r <= spec.radius ? spec.v0 : 0.0;
    if (r <= 0.0) return spec.grid_v.front();
    if (r >= spec.grid_r.back()) return r == spec.grid_r.back() ? spec.grid_v.back() : 0.0;
    const auto it = std::upper_bound(spec.grid_r.begin(), spec.grid_r.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - spec.grid_r.begin());
    const double r0 = spec.grid_r[i - 1], r1 = spec.grid_r[i];
    const double t = (r - r0) / (r1 - r0);
    return (1.0 - t) * spec.grid_v[i - 1] + t * spec.grid_v[i];
}

double ball_hat(double v0, double radius, double q) {
    // 4 pi v0 R^3 * h(x), x = R q, h(x) = (sin x / x - cos x) / x^2
    const double x = radius * std::abs(q);
    double h;
    if (x < 0.5) {
        // h(x) = sum_{k>=1} (-1)^(k+1) * 2k * x^(2k-2) / (2k+1)!  (closed form
        // cancels catastrophically as x -> 0)
        const double x2 = x * x;
        double term = 1.0 / 3.0; // k = 1
        h = term;
        double fact = 6.0;       // (2k+1)! running
        double sign = -1.0;
        double xpow = 1.0;
        for (int k = 2; k <= 8; ++k) {
            fact *= (2.0 * k) * (2.0 * k + 1.0);
            xpow *= x2;
            h += sign * 2.0 * k * xpow / fact;
            sign = -sign;
        }
    } else {
        h = (std::sin(x) / x - std::cos(x)) / (x * x);
    }
    return 4.0 * pi * v0 * radius * radius * radius * h;
}

double fourier_hat(const potential_spec& spec, double q) {
    if (!std::isfinite(q)) throw config_error("fourier_hat: non-finite wavenumber");
    const double qa = std::abs(q);
    if (spec.shape == potential_spec::shape_t::ball) return ball_hat(spec.v0, spec.radius, qa);

    // piecewise-linear profile: integrate segment by segment (no kinks inside
    // a panel), quarter-phase panels control the oscillation
    kahan_sum acc;
    if (qa < 1e-12) {
        for (std::size_t i = 1; i < spec.grid_r.size(); ++i) {
            const double a = spec.grid_r[i - 1], b = spec.grid_r[i];
            acc.add(gl_integrate(
                [&](double r) { return r * r * potential_value(spec, r); }, a, b, 16));
        }
        return 4.0 * pi * acc.value();
    }
    for (std::size_t i = 1; i < spec.grid_r.size(); ++i) {
        const double a = spec.grid_r[i - 1], b = spec.grid_r[i];
        acc.add(gl_composite(
            [&](double r) { return r * potential_value(spec, r) * std::sin(qa * r); }, a, b,
            pi / (2.0 * qa), 16));
    }
    return 4.0 * pi / qa * acc.value();
}

double hat_zero(const potential_spec& spec) {
    if (spec.shape == potential_spec::shape_t::ball)
        return 4.0 * pi * spec.v0 * spec.radius * spec.radius * spec.radius / 3.0;
    return fourier_hat(spec, 0.0);
}

double scaled_hat(const potential_spec& spec, const momentum& p) {
    return scaled_hat(spec, p.norm());
}

double scaled_hat(const potential_spec& spec, double p_abs) {
    return fourier_hat(spec, p_abs / spec.n_beta());
}

scaled_hat_table build_scaled_hat_table(const potential_spec& spec, int n_sq_max) {
    scaled_hat_table table;
    table.value.resize(static_cast<std::size_t>(n_sq_max) + 1);
    const double nb = spec.n_beta();
    for (int s = 0; s <= n_sq_max; ++s) {
        // same rounding path as scaled_hat(spec, p.norm()) so lookups are bit-identical
        const double p_abs = two_pi * std::sqrt(static_cast<double>(s));
        table.value[static_cast<std::size_t>(s)] = fourier_hat(spec, p_abs / nb);
    }
    return table;
}

} // namespace bosegas
