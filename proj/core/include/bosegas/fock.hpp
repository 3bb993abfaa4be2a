#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"

namespace bosegas {

using sparse_matrix = Eigen::SparseMatrix<double>;

// excitation sector over a finite mode set with a hard occupation cap:
// every state is a length-M occupation vector with total <= n_max <= n
struct fock_basis {
    mode_set modes;
    long long n_particles = 0;
    int n_max = 0;
    std::vector<std::vector<int>> states; // graded lexicographic
    std::map<std::vector<int>, int> index;

    int dim() const { return static_cast<int>(states.size()); }
    int total_occupation(int row) const;
};

// enumeration is graded (by total occupation), lexicographic within a grade;
// throws config_error when the dimension would exceed dim_cap
fock_basis build_basis(const mode_set& modes, long long n, int n_max, int dim_cap = 20000);

// mode annihilation/creation with the standard sqrt factors; creation out of
// the capped sector is dropped (hard truncation)
sparse_matrix op_a(const fock_basis& basis, const momentum& p);
sparse_matrix op_adag(const fock_basis& basis, const momentum& p);

// modified operators b_p = sqrt((n - N_+)/n) a_p (the weight evaluated on the
// destination state), b_p* the transpose
sparse_matrix op_b(const fock_basis& basis, const momentum& p);
sparse_matrix op_bdag(const fock_basis& basis, const momentum& p);

sparse_matrix op_nplus(const fock_basis& basis);   // diag(total occupation)
sparse_matrix op_kinetic(const fock_basis& basis); // diag(sum p^2 n_p)
// diag((n + offset - N_+)/n), the scalar weights of the modified operators
sparse_matrix op_weight(const fock_basis& basis, int offset);

// excitation Hamiltonian split into its graded pieces; every interaction
// term carries the coupling kappa, and momentum combinations that leave the
// mode set are dropped
struct hamiltonian_parts {
    sparse_matrix l0, l2, l3, l4;
    sparse_matrix kinetic; // sum p^2 a_p* a_p
    sparse_matrix vn;      // the quartic sum (same restriction as l4)
    sparse_matrix nplus;

    sparse_matrix total() const;
};

hamiltonian_parts build_l(const fock_basis& basis, const potential_spec& spec);

// quadratic generator (1/2) sum_p eta_p (b_p* b_-p* - b_p b_-p); eta aligned
// with basis.modes and required even under p -> -p; exactly antisymmetric
sparse_matrix build_b(const fock_basis& basis, const std::vector<double>& eta);

// similarity transform e^{-B} L e^{B} through the dense exponential;
// dimension capped (default 2000) since the result is dense
Eigen::MatrixXd exp_conjugate(const sparse_matrix& l, const sparse_matrix& b,
                              int dense_cap = 2000);

// m smallest eigenvalues, ascending: dense solver below dim 2000, Lanczos
// with full reorthogonalization above
std::vector<double> lowest_eigs(const sparse_matrix& op, int m);
std::vector<double> lowest_eigs(const Eigen::MatrixXd& op, int m);
// the Lanczos path directly (testable against the dense oracle)
std::vector<double> lanczos_lowest(const sparse_matrix& op, int m, int max_iter = 400,
                                   double tol = 1e-11);

// exact-diagonalization comparison against the diagonalized quadratic theory
// on the same mode set
struct ed_row {
    int level = 0;         // 1-based excitation index
    double ed_gap = 0.0;   // lambda_level - lambda_0
    double predicted = 0.0; // sum n_p eps_p, enumerated over the basis
    double abs_err = 0.0;
};

struct ed_comparison {
    double lambda0 = 0.0;
    double quadratic_constant = 0.0; // condensate constant + diagonalization shift
    double constant_err = 0.0;
    std::vector<ed_row> rows;
};

ed_comparison ed_compare(const potential_spec& spec, const scattering_solution& sol,
                         const quadratic_coeffs& coeffs, const fock_basis& basis, int m);

// max over random normalized xi of
//   <xi, VN xi> / (kappa N^(beta-1) ||(K+1)^{1/2}(N_+ +1)^{1/2} xi||^2)
double vn_bound_check(const fock_basis& basis, const potential_spec& spec, int trials,
                      std::uint64_t seed);

// max over random normalized xi of the conjugated-to-plain ratio of
//   (N_+ + 1)^{n1} (n + 1 - N_+)^{n2}
double ngrow_check(const fock_basis& basis, const std::vector<double>& eta, int n1, int n2,
                   int trials, std::uint64_t seed);

// deduplicated, (row, col)-sorted coordinate entries for export
struct coordinate_entry {
    int row = 0;
    int col = 0;
    double value = 0.0;
};
std::vector<coordinate_entry> coordinate_entries(const sparse_matrix& mat);

double sym_defect(const sparse_matrix& mat); // max |A - A^T|

} // namespace bosegas
