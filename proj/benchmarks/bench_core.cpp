// Microbenchmarks for the hot paths: lattice enumeration, the radial solve,
// quadratic-coefficient assembly, Born integrals, Fock-space assembly plus
// matvecs, and the symbolic commutator expansion.

#include <benchmark/benchmark.h>

#include <string>

#include <Eigen/Dense>

#include "bosegas/bogoliubov.hpp"
#include "bosegas/commutator.hpp"
#include "bosegas/fock.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"

using namespace bosegas;

namespace {

const potential_spec bench_spec = ball_potential(1.0, 1.0, 0.05, 0.5, 10000);

void bm_enumerate_shell(benchmark::State& state) {
    const double p_max = two_pi * static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_shell(p_max));
    state.SetLabel(std::to_string(enumerate_shell(p_max).size()) + " modes");
}
BENCHMARK(bm_enumerate_shell)->Arg(4)->Arg(8)->Arg(12);

void bm_solve_neumann(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(solve_neumann(bench_spec, 0.4));
}
BENCHMARK(bm_solve_neumann);

void bm_quadratic_coeffs(benchmark::State& state) {
    const mode_set set = enumerate_shell(two_pi * static_cast<double>(state.range(0)));
    scattering_solution sol = solve_neumann(bench_spec, 0.4);
    eta_coefficients(sol, set);
    for (auto _ : state) benchmark::DoNotOptimize(fg_coeffs(bench_spec, sol, set));
    state.SetLabel(std::to_string(set.size()) + " modes");
}
BENCHMARK(bm_quadratic_coeffs)->Arg(3)->Arg(6);

void bm_born_radial(benchmark::State& state) {
    const potential_spec spec = ball_potential(1.0, 1.0, 0.05, 0.5, 100000);
    const int k_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(born_series_radial(spec, k_max));
}
BENCHMARK(bm_born_radial)->Arg(2)->Arg(3);

void bm_build_basis(benchmark::State& state) {
    const mode_set shell = enumerate_shell(two_pi);
    const int n_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_basis(shell, 100, n_max));
    state.SetLabel("dim " + std::to_string(build_basis(shell, 100, n_max).dim()));
}
BENCHMARK(bm_build_basis)->Arg(4)->Arg(5);

void bm_build_l(benchmark::State& state) {
    const potential_spec spec = ball_potential(1.0, 1.0, 0.05, 0.5, 100);
    const fock_basis basis = build_basis(enumerate_shell(two_pi), 100,
                                         static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(build_l(basis, spec));
    state.SetLabel("dim " + std::to_string(basis.dim()));
}
BENCHMARK(bm_build_l)->Arg(4)->Arg(5);

void bm_hamiltonian_matvec(benchmark::State& state) {
    const potential_spec spec = ball_potential(1.0, 1.0, 0.05, 0.5, 100);
    const fock_basis basis = build_basis(enumerate_shell(two_pi), 100,
                                         static_cast<int>(state.range(0)));
    const sparse_matrix l = build_l(basis, spec).total();
    const Eigen::VectorXd x = Eigen::VectorXd::Random(l.cols());
    Eigen::VectorXd y(l.rows());
    for (auto _ : state) {
        y.noalias() = l * x;
        benchmark::DoNotOptimize(y);
        benchmark::ClobberMemory();
    }
    state.SetLabel("dim " + std::to_string(basis.dim()) + ", " +
                   std::to_string(l.nonZeros()) + " nnz");
}
BENCHMARK(bm_hamiltonian_matvec)->Arg(4)->Arg(5);

void bm_expand_ad(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(expand_ad(depth));
    state.SetLabel(std::to_string(expand_ad(depth).terms.size()) + " terms");
}
BENCHMARK(bm_expand_ad)->Arg(4)->Arg(5)->Arg(6);

} // namespace

BENCHMARK_MAIN();
