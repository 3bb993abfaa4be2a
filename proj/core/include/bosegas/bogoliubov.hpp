#pragma once

#include <map>
#include <vector>

#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"

namespace bosegas {

// per-momentum coefficients of the quadratic excitation form, aligned with
// modes.momenta; sigma/gamma are the hyperbolic pair sinh(eta)/cosh(eta),
// f_p/g_p the diagonal and pairing coefficients, s_p the potential-eta
// convolution that feeds g_p, a_p the defect in the closed-form identity
// f^2 - g^2 = p^4 + 2 p^2 kappa vhat + a, and tau the rotation half-angle
// with tanh(2 tau) = -g/f
struct quadratic_coeffs {
    mode_set modes;
    std::vector<double> sigma;
    std::vector<double> gamma;
    std::vector<double> f_p;
    std::vector<double> g_p;
    std::vector<double> s_p;    // (kappa/N) sum_q vhat((p-q)/N^beta) eta~_q, q in set + {0}
    std::vector<double> vhat_p; // vhat(p/N^beta), cached for downstream formulas
    std::vector<double> a_p;
    std::vector<double> tau;
    // estimate of the convolution mass lost to the cutoff (worst p), measured
    // from the outermost shells of the set and extrapolated
    double conv_tail = 0.0;
    double max_identity_residual = 0.0; // worst |f^2-g^2 - p^4 - 2p^2 kappa vhat - a| / f^2
    double max_gf_ratio = 0.0;          // worst |g_p|/f_p, diagnosed by tau_coeffs
    bool a_filled = false;
    bool tau_filled = false;

    std::size_t size() const { return modes.size(); }
};

// build sigma, gamma, f_p, g_p, s_p from the scattering coefficients; eta must
// be filled on exactly this mode set
quadratic_coeffs fg_coeffs(const potential_spec& spec, const scattering_solution& sol,
                           const mode_set& set);

// fill a_p and record the worst identity residual
void ap_defect(quadratic_coeffs& coeffs, const potential_spec& spec);

// fill tau from f, g; throws numerical_error when |g|/f reaches 1
void tau_coeffs(quadratic_coeffs& coeffs);

struct value_with_tail {
    double value = 0.0;
    double tail = 0.0; // cutoff-truncation estimate for the summed quantity
};

// constant term of the diagonalized excitation form: (N-1)/2 kappa vhat(0)
// plus the per-mode sum with its eta-eta double convolution (q = 0 excluded)
value_with_tail constant_cn(const potential_spec& spec, const scattering_solution& sol,
                            const quadratic_coeffs& coeffs);

// largest integer m with m <= 1/(1-beta) + min(1/2, beta/(1-beta))
int mbeta(double beta);

struct born_result {
    std::vector<double> terms; // contributions to 8 pi a_N, k = 1..k_max
    std::vector<double> tails; // per-term cutoff-tail estimates (outer-shell measure)
};

// lattice Born series: term_k = (-1)^k sum_p [kappa vhat(p/N^b) / (2N p^2)]
// (K^{k-1} v)(p) with kernel K(p,q) = kappa vhat((p-q)/N^b)/(2N q^2) and
// v(q) = kappa vhat(q/N^b), all sums truncated to the mode set
born_result born_series(const potential_spec& spec, const mode_set& set, int k_max);

// continuum (radial) evaluation of the same series for the step potential:
// the angular integrals collapse to the closed-form bipolar kernel, leaving
// one-dimensional kernel powers on a midpoint grid in raw momentum
// coordinates with p_max = u_max * N^beta, so the large-N scaling of each
// term emerges numerically rather than by substitution
born_result born_series_radial(const potential_spec& spec, int k_max, int grid_points = 2048,
                               double u_max = 30.0);

// both ground-state energy routes over one mode set. Sums are truncated to
// the set; the recorded tails are estimates only and are not folded into the
// values, so the two routes stay comparable at matched truncation.
struct energy_report {
    mode_set modes;
    double c_n = 0.0;     // constant term of the quadratic form
    double c_n_tail = 0.0;
    double diag_shift = 0.0; // (1/2) sum_p [ -f_p + sqrt(f_p^2 - g_p^2) ]
    double e_direct = 0.0;   // c_n + diag_shift
    std::vector<double> born_terms;
    std::vector<double> born_tails;
    double a_n = 0.0;        // (kappa vhat(0) + sum born_terms) / (8 pi)
    double asym_sum = 0.0;   // -(1/2) sum_p [p^2 + c - sqrt(p^4 + 2 p^2 c) - c^2/(2 p^2)], c = kappa vhat(0)
    double asym_tail = 0.0;
    double e_asymptotic = 0.0; // 4 pi (N-1) a_n + asym_sum
    std::vector<double> dispersion; // eps_p aligned with modes
};

energy_report ground_energy(const potential_spec& spec, const scattering_solution& sol,
                            const quadratic_coeffs& coeffs);

// excitation dispersion sqrt(p^4 + 2 p^2 c) with c = kappa vhat(0) >= 0;
// the scalar overload takes p^2 directly (continuum formula checks)
double dispersion(const momentum& p, double kappa_vhat0);
double dispersion_from_psq(double p_sq, double kappa_vhat0);

// sum of n_p * eps_p over an occupation table; keys must be nonzero modes
double excitation_levels(const std::map<momentum, int>& occupations, double kappa_vhat0);

} // namespace bosegas
