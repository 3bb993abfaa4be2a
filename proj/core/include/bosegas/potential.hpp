#pragma once

#include <string>
#include <vector>

#include "bosegas/lattice.hpp"

namespace bosegas {

// compactly supported, nonnegative, radial interaction with its scaling data:
// the pair potential enters the Hamiltonian as (kappa/N) * N^(3 beta) V(N^beta x)
struct potential_spec {
    enum class shape_t { ball, tabulated };
    shape_t shape = shape_t::ball;

    // ball shape: V(r) = v0 for r <= radius, else 0
    double v0 = 1.0;
    double radius = 1.0;

    // tabulated shape: piecewise-linear values on a strictly increasing grid
    // starting at 0; V = 0 beyond the last grid point
    std::vector<double> grid_r;
    std::vector<double> grid_v;

    double kappa = 0.0;       // coupling, small and nonnegative
    double beta = 0.5;        // scaling exponent in [0,1)
    long long n_particles = 2;

    double support_radius() const;          // R, or the last grid point
    double n_beta() const;                  // N^beta
    void validate() const;                  // throws config_error
};

potential_spec ball_potential(double v0, double radius, double kappa, double beta,
                              long long n_particles);
potential_spec tabulated_potential(std::vector<double> grid_r, std::vector<double> grid_v,
                                   double kappa, double beta, long long n_particles);
// two-column CSV (r, V(r)); '#' comment lines allowed
potential_spec load_tabulated_csv(const std::string& path, double kappa, double beta,
                                  long long n_particles);

// pointwise V(r) (unscaled profile)
double potential_value(const potential_spec& spec, double r);

// closed-form transform of the uniform ball: 4 pi v0 R^3 (sin x/x - cos x)/x^2
// with x = R q, evaluated stably (series near x = 0); the sharp-window
// transform used by the scattering module has the same functional form
double ball_hat(double v0, double radius, double q);

// radial Fourier transform of V at |q| (no scaling applied)
double fourier_hat(const potential_spec& spec, double q);

// V(0-mode) integral, exact for the ball shape
double hat_zero(const potential_spec& spec);

// V^(|p| / N^beta) for a lattice momentum, and for a raw |p| value
double scaled_hat(const potential_spec& spec, const momentum& p);
double scaled_hat(const potential_spec& spec, double p_abs);

// cache of scaled transforms keyed by integer |n|^2 (momentum differences of a
// mode set all live on the lattice, so every convolution becomes a lookup)
struct scaled_hat_table {
    std::vector<double> value; // index: n_sq = |n|^2, 0 .. n_sq_max
    double at_n_sq(int n_sq) const { return value[static_cast<std::size_t>(n_sq)]; }
    double at(const momentum& p) const { return at_n_sq(p.n_sq()); }
};
scaled_hat_table build_scaled_hat_table(const potential_spec& spec, int n_sq_max);

} // namespace bosegas
