#pragma once

#include <vector>

#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"

namespace bosegas {

// Neumann ground state on the ball of radius ell for the scaled two-body
// problem: the radial substitution u = r f turns it into
//   -u'' + (kappa/2) N^(3 beta - 1) V(N^beta r) u = lambda u,  u(0) = 0,
// with the Neumann condition f'(ell) = 0 selecting the smallest lambda and
// the normalization f(ell) = 1 fixing the scale. w = 1 - f.
struct scattering_solution {
    double ell = 0.0;
    double lambda = 0.0;
    long long n_particles = 2; // recorded at solve time; eta scales w by N

    std::vector<double> r;  // mesh on [0, ell]; a node sits exactly on the
                            // scaled support edge
    std::vector<double> f;  // profile values
    std::vector<double> fp; // profile derivative (for cubic reconstruction)
    std::vector<double> w;  // 1 - f

    bool solved = false;

    // correlation coefficients over a mode set, filled by eta_coefficients:
    // eta_p = -N (4 pi / |p|) int_0^ell r w(r) sin(|p| r) dr, and the
    // zero-mode companion eta0_tilde = -N 4 pi int_0^ell r^2 w(r) dr
    mode_set modes;
    std::vector<double> eta; // aligned with modes.momenta
    double eta0_tilde = 0.0;
    bool eta_filled = false;

    double eta_at(const momentum& p) const;       // p must be in modes
    double eta_tilde_at(const momentum& p) const; // eta0_tilde when p = 0
};

struct mesh_control {
    int total_steps = 4000; // split across the two regions proportionally
    int min_inside = 256;   // floor inside the scaled support
    int min_outside = 256;  // floor outside it
};

scattering_solution solve_neumann(const potential_spec& spec, double ell,
                                  const mesh_control& mesh = {});

// fills eta over the set (values depend on |p| only and are cached per shell)
void eta_coefficients(scattering_solution& sol, const mode_set& set);

// sharp-window transform: (4 pi / |k|^2)(sin(ell |k|)/|k| - ell cos(ell |k|)),
// = 4 pi ell^3 / 3 at k = 0
double chi_hat(double ell, double k_abs);

// defect of the momentum-space form of the Neumann equation at p:
//   p^2 eta~_p + (kappa/2) V^(p/N^b) + (kappa/2N) sum_q V^((p-q)/N^b) eta~_q
//     - N lambda chi^_ell(p) - lambda sum_q chi^_ell(p-q) eta~_q
// with q running over set + {0}; measures discretization plus mode truncation
double scattering_residual(const scattering_solution& sol, const potential_spec& spec,
                           const momentum& p, const mode_set& set);

// same, for every p in targets (shared transform caches; targets must be a
// subset of set)
std::vector<double> scattering_residuals(const scattering_solution& sol,
                                         const potential_spec& spec, const mode_set& set,
                                         const mode_set& targets);

} // namespace bosegas
