#include "bosegas/fock.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace bosegas {

namespace {

void enumerate_grade(int remaining, std::size_t pos, std::vector<int>& work,
                     std::vector<std::vector<int>>& out) {
    if (pos + 1 == work.size()) {
        work[pos] = remaining;
        out.push_back(work);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        work[pos] = k;
        enumerate_grade(remaining - k, pos + 1, work, out);
    }
}

std::size_t mode_index(const fock_basis& basis, const momentum& p, const char* who) {
    const std::ptrdiff_t i = basis.modes.index_of(p);
    if (i < 0) throw config_error(std::string(who) + ": momentum " + to_string(p) +
                                  " not in the basis mode set");
    return static_cast<std::size_t>(i);
}

sparse_matrix from_triplets(int dim, std::vector<Eigen::Triplet<double>>& trips) {
    sparse_matrix m(dim, dim);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

// the quartic interaction (1/2N) sum V^(r/N^b) a*_{p+r} a*_q a_p a_{q+r},
// p, q in the set, r in the full lattice (zero included) with both shifted
// indices kept inside the set
sparse_matrix build_quartic(const fock_basis& basis, const potential_spec& spec,
                            const std::vector<sparse_matrix>& a,
                            const std::vector<sparse_matrix>& adag) {
    const double big_n = static_cast<double>(basis.n_particles);
    sparse_matrix l4(basis.dim(), basis.dim());
    for (std::size_t ip = 0; ip < basis.modes.size(); ++ip) {
        const momentum p = basis.modes.momenta[ip];
        std::set<momentum> shifts;
        shifts.insert(momentum{});
        for (const momentum& s : basis.modes) shifts.insert(s - p);
        for (const momentum& r : shifts) {
            if (!basis.modes.contains(p + r)) continue;
            const double v_r = 0.5 * spec.kappa / big_n * scaled_hat(spec, r);
            const std::size_t ipr = static_cast<std::size_t>(basis.modes.index_of(p + r));
            for (std::size_t iq = 0; iq < basis.modes.size(); ++iq) {
                const momentum q = basis.modes.momenta[iq];
                if (!basis.modes.contains(q + r)) continue;
                const std::size_t iqr = static_cast<std::size_t>(basis.modes.index_of(q + r));
                l4 = l4 + sparse_matrix(v_r * (adag[ipr] * (adag[iq] * (a[ip] * a[iqr]))));
            }
        }
    }
    l4.prune(0.0);
    l4.makeCompressed();
    return l4;
}

Eigen::VectorXd random_unit(std::mt19937_64& gen, int dim) {
    std::normal_distribution<double> nd;
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = nd(gen);
    x.normalize();
    return x;
}

} // namespace

int fock_basis::total_occupation(int row) const {
    int total = 0;
    for (const int k : states[static_cast<std::size_t>(row)]) total += k;
    return total;
}

fock_basis build_basis(const mode_set& modes, long long n, int n_max, int dim_cap) {
    if (modes.empty()) throw config_error("build_basis: empty mode set");
    if (n_max < 0) throw config_error("build_basis: negative occupation cap");
    if (static_cast<long long>(n_max) > n)
        throw config_error("build_basis: occupation cap exceeds particle number");
    for (const momentum& p : modes)
        if (!modes.contains(-p))
            throw config_error("build_basis: mode set not negation-closed at " + to_string(p));

    // stars and bars per grade, guarded against the cap before enumerating
    const std::size_t m = modes.size();
    double dim_estimate = 0.0;
    double binom = 1.0; // C(grade + m - 1, m - 1)
    for (int grade = 0; grade <= n_max; ++grade) {
        if (grade > 0)
            binom *= static_cast<double>(grade + m - 1) / static_cast<double>(grade);
        dim_estimate += binom;
        if (dim_estimate > static_cast<double>(dim_cap))
            throw config_error(
                "build_basis: dimension exceeds cap " + std::to_string(dim_cap) +
                "; reduce the occupation cap or the mode set");
    }

    fock_basis basis;
    basis.modes = modes;
    basis.n_particles = n;
    basis.n_max = n_max;
    std::vector<int> work(m, 0);
    for (int grade = 0; grade <= n_max; ++grade)
        enumerate_grade(grade, 0, work, basis.states);
    for (std::size_t i = 0; i < basis.states.size(); ++i)
        basis.index.emplace(basis.states[i], static_cast<int>(i));
    return basis;
}

sparse_matrix op_a(const fock_basis& basis, const momentum& p) {
    const std::size_t ip = mode_index(basis, p, "op_a");
    std::vector<Eigen::Triplet<double>> trips;
    for (int s = 0; s < basis.dim(); ++s) {
        const auto& occ = basis.states[static_cast<std::size_t>(s)];
        if (occ[ip] == 0) continue;
        std::vector<int> target = occ;
        target[ip] -= 1;
        trips.emplace_back(basis.index.at(target), s, std::sqrt(static_cast<double>(occ[ip])));
    }
    return from_triplets(basis.dim(), trips);
}

sparse_matrix op_adag(const fock_basis& basis, const momentum& p) {
    return sparse_matrix(op_a(basis, p).transpose());
}

sparse_matrix op_b(const fock_basis& basis, const momentum& p) {
    const std::size_t ip = mode_index(basis, p, "op_b");
    const double big_n = static_cast<double>(basis.n_particles);
    std::vector<Eigen::Triplet<double>> trips;
    for (int s = 0; s < basis.dim(); ++s) {
        const auto& occ = basis.states[static_cast<std::size_t>(s)];
        if (occ[ip] == 0) continue;
        std::vector<int> target = occ;
        target[ip] -= 1;
        const int total_after = basis.total_occupation(s) - 1;
        const double weight = std::sqrt((big_n - static_cast<double>(total_after)) / big_n);
        trips.emplace_back(basis.index.at(target), s,
                           std::sqrt(static_cast<double>(occ[ip])) * weight);
    }
    return from_triplets(basis.dim(), trips);
}

sparse_matrix op_bdag(const fock_basis& basis, const momentum& p) {
    return sparse_matrix(op_b(basis, p).transpose());
}

sparse_matrix op_nplus(const fock_basis& basis) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int s = 0; s < basis.dim(); ++s)
        trips.emplace_back(s, s, static_cast<double>(basis.total_occupation(s)));
    return from_triplets(basis.dim(), trips);
}

sparse_matrix op_kinetic(const fock_basis& basis) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int s = 0; s < basis.dim(); ++s) {
        double e = 0.0;
        const auto& occ = basis.states[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < occ.size(); ++i)
            e += basis.modes.momenta[i].norm_sq() * occ[i];
        if (e != 0.0) trips.emplace_back(s, s, e);
    }
    return from_triplets(basis.dim(), trips);
}

sparse_matrix op_weight(const fock_basis& basis, int offset) {
    const double big_n = static_cast<double>(basis.n_particles);
    std::vector<Eigen::Triplet<double>> trips;
    for (int s = 0; s < basis.dim(); ++s)
        trips.emplace_back(
            s, s,
            (big_n + static_cast<double>(offset) - static_cast<double>(basis.total_occupation(s))) /
                big_n);
    return from_triplets(basis.dim(), trips);
}

sparse_matrix hamiltonian_parts::total() const {
    return sparse_matrix(l0 + l2 + l3 + l4);
}

hamiltonian_parts build_l(const fock_basis& basis, const potential_spec& spec) {
    spec.validate();
    const std::size_t m = basis.modes.size();
    const double big_n = static_cast<double>(basis.n_particles);
    const double kappa = spec.kappa;

    std::vector<sparse_matrix> a(m), adag(m), b(m), bdag(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = op_a(basis, basis.modes.momenta[i]);
        adag[i] = sparse_matrix(a[i].transpose());
        b[i] = op_b(basis, basis.modes.momenta[i]);
        bdag[i] = sparse_matrix(b[i].transpose());
    }

    hamiltonian_parts parts;
    parts.nplus = op_nplus(basis);
    parts.kinetic = op_kinetic(basis);

    // constant piece: kappa vhat(0) [(N-1)(N - N_+) + N_+ (N - N_+)] / 2N
    {
        const double v0 = hat_zero(spec);
        std::vector<Eigen::Triplet<double>> trips;
        for (int s = 0; s < basis.dim(); ++s) {
            const double occ = static_cast<double>(basis.total_occupation(s));
            const double value = kappa * v0 *
                                 ((big_n - 1.0) * (big_n - occ) + occ * (big_n - occ)) /
                                 (2.0 * big_n);
            trips.emplace_back(s, s, value);
        }
        parts.l0 = from_triplets(basis.dim(), trips);
    }

    // quadratic piece: kinetic + vhat(p/N^b) [b*b - a*a/N] + (1/2) vhat [b*b* + bb]
    {
        sparse_matrix l2 = parts.kinetic;
        for (std::size_t i = 0; i < m; ++i) {
            const momentum p = basis.modes.momenta[i];
            const std::size_t in = static_cast<std::size_t>(basis.modes.index_of(-p));
            const double v = kappa * scaled_hat(spec, p);
            l2 = l2 + sparse_matrix(v * (bdag[i] * b[i])) -
                 sparse_matrix(v / big_n * (adag[i] * a[i]));
            l2 = l2 + sparse_matrix(0.5 * v * (bdag[i] * bdag[in])) +
                 sparse_matrix(0.5 * v * (b[i] * b[in]));
        }
        l2.prune(0.0);
        l2.makeCompressed();
        parts.l2 = l2;
    }

    // cubic piece: N^{-1/2} vhat(p/N^b) [b*_{p+q} a*_{-p} a_q + h.c.]
    {
        sparse_matrix l3(basis.dim(), basis.dim());
        for (std::size_t i = 0; i < m; ++i) {
            const momentum p = basis.modes.momenta[i];
            const std::size_t ineg = static_cast<std::size_t>(basis.modes.index_of(-p));
            const double v = kappa / std::sqrt(big_n) * scaled_hat(spec, p);
            for (std::size_t j = 0; j < m; ++j) {
                const momentum q = basis.modes.momenta[j];
                const momentum pq = p + q;
                if (pq.is_zero() || !basis.modes.contains(pq)) continue;
                const std::size_t ipq = static_cast<std::size_t>(basis.modes.index_of(pq));
                const sparse_matrix term(v * (bdag[ipq] * (adag[ineg] * a[j])));
                l3 = l3 + term + sparse_matrix(term.transpose());
            }
        }
        l3.prune(0.0);
        l3.makeCompressed();
        parts.l3 = l3;
    }

    parts.l4 = build_quartic(basis, spec, a, adag);
    parts.vn = parts.l4;
    return parts;
}

sparse_matrix build_b(const fock_basis& basis, const std::vector<double>& eta) {
    const std::size_t m = basis.modes.size();
    if (eta.size() != m)
        throw config_error("build_b: eta length does not match the mode set");
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(basis.modes.index_of(-basis.modes.momenta[i]));
        if (std::abs(eta[i] - eta[j]) > 1e-12 * std::max(1.0, std::abs(eta[i])))
            throw config_error("build_b: eta not even under negation at " +
                               to_string(basis.modes.momenta[i]));
    }
    sparse_matrix bmat(basis.dim(), basis.dim());
    for (std::size_t i = 0; i < m; ++i) {
        if (eta[i] == 0.0) continue;
        const momentum p = basis.modes.momenta[i];
        const std::size_t in = static_cast<std::size_t>(basis.modes.index_of(-p));
        const sparse_matrix bd = op_bdag(basis, p);
        const sparse_matrix bdn = op_bdag(basis, basis.modes.momenta[in]);
        const sparse_matrix bp = op_b(basis, p);
        const sparse_matrix bn = op_b(basis, basis.modes.momenta[in]);
        bmat = bmat + sparse_matrix(0.5 * eta[i] * (bd * bdn)) -
               sparse_matrix(0.5 * eta[i] * (bp * bn));
    }
    bmat.prune(0.0);
    bmat.makeCompressed();
    return bmat;
}

Eigen::MatrixXd exp_conjugate(const sparse_matrix& l, const sparse_matrix& b, int dense_cap) {
    if (l.rows() != b.rows())
        throw config_error("exp_conjugate: operator dimensions differ");
    if (l.rows() > dense_cap)
        throw config_error("exp_conjugate: dimension " + std::to_string(l.rows()) +
                           " above dense cap " + std::to_string(dense_cap));
    const Eigen::MatrixXd be(b);
    const Eigen::MatrixXd expb = be.exp();
    return expb.transpose() * Eigen::MatrixXd(l) * expb;
}

std::vector<double> lowest_eigs(const Eigen::MatrixXd& op, int m) {
    if (m < 1 || m > op.rows())
        throw config_error("lowest_eigs: requested count outside [1, dim]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op, Eigen::EigenvaluesOnly);
    std::vector<double> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out;
}

std::vector<double> lowest_eigs(const sparse_matrix& op, int m) {
    if (op.rows() < 2000) return lowest_eigs(Eigen::MatrixXd(op), m);
    return lanczos_lowest(op, m);
}

std::vector<double> lanczos_lowest(const sparse_matrix& op, int m, int max_iter, double tol) {
    const int n = static_cast<int>(op.rows());
    if (m < 1 || m > n) throw config_error("lanczos_lowest: requested count outside [1, dim]");
    max_iter = std::min(max_iter, n);

    std::mt19937_64 gen(0x5eed5eedULL);
    std::vector<Eigen::VectorXd> vs;
    vs.push_back(random_unit(gen, n));
    std::vector<double> alpha, beta;
    double last_residual = -1.0;

    for (int j = 0; j < max_iter; ++j) {
        Eigen::VectorXd w = op * vs.back();
        const double aj = vs.back().dot(w);
        alpha.push_back(aj);
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : vs) w -= u.dot(w) * u;
        const double bj = w.norm();

        const int k = static_cast<int>(alpha.size());
        if (k >= m) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
            for (int i = 0; i < k; ++i) t(i, i) = alpha[static_cast<std::size_t>(i)];
            for (int i = 0; i + 1 < k; ++i) {
                t(i, i + 1) = beta[static_cast<std::size_t>(i)];
                t(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            double worst = 0.0;
            for (int i = 0; i < m; ++i)
                worst = std::max(worst, std::abs(bj * es.eigenvectors()(k - 1, i)));
            last_residual = worst;
            const double scale = std::max(1.0, std::abs(es.eigenvalues()[0]));
            if (worst <= tol * scale || k == n) {
                std::vector<double> out(static_cast<std::size_t>(m));
                for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
                return out;
            }
        }

        if (bj < 1e-13) {
            // exhausted an invariant subspace: continue from a fresh direction
            Eigen::VectorXd x = random_unit(gen, n);
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& u : vs) x -= u.dot(x) * u;
            if (x.norm() < 1e-13) break; // whole space spanned
            beta.push_back(0.0);
            vs.push_back(x.normalized());
        } else {
            beta.push_back(bj);
            vs.push_back(w / bj);
        }
    }
    throw numerical_error("lanczos_lowest: no convergence after " + std::to_string(max_iter) +
                          " iterations (residual " + std::to_string(last_residual) + ")");
}

ed_comparison ed_compare(const potential_spec& spec, const scattering_solution& sol,
                         const quadratic_coeffs& coeffs, const fock_basis& basis, int m) {
    if (sol.modes.momenta != basis.modes.momenta ||
        coeffs.modes.momenta != basis.modes.momenta)
        throw config_error("ed_compare: mode sets of the inputs differ");
    if (m < 1 || m + 1 > basis.dim())
        throw config_error("ed_compare: level count exceeds basis dimension");

    const hamiltonian_parts parts = build_l(basis, spec);
    const std::vector<double> eigs = lowest_eigs(parts.total(), m + 1);

    ed_comparison cmp;
    cmp.lambda0 = eigs[0];
    cmp.quadratic_constant = ground_energy(spec, sol, coeffs).e_direct;
    cmp.constant_err = std::abs(cmp.lambda0 - cmp.quadratic_constant);

    const double c = spec.kappa * hat_zero(spec);
    std::vector<double> eps(basis.modes.size());
    for (std::size_t i = 0; i < basis.modes.size(); ++i)
        eps[i] = dispersion(basis.modes.momenta[i], c);
    std::vector<double> levels;
    for (int s = 0; s < basis.dim(); ++s) {
        if (basis.total_occupation(s) == 0) continue;
        double level = 0.0;
        const auto& occ = basis.states[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < occ.size(); ++i) level += occ[i] * eps[i];
        levels.push_back(level);
    }
    std::sort(levels.begin(), levels.end());

    for (int k = 1; k <= m; ++k) {
        ed_row row;
        row.level = k;
        row.ed_gap = eigs[static_cast<std::size_t>(k)] - eigs[0];
        row.predicted = levels[static_cast<std::size_t>(k - 1)];
        row.abs_err = std::abs(row.ed_gap - row.predicted);
        cmp.rows.push_back(row);
    }
    return cmp;
}

double vn_bound_check(const fock_basis& basis, const potential_spec& spec, int trials,
                      std::uint64_t seed) {
    spec.validate();
    if (trials < 1) throw config_error("vn_bound_check: trials must be positive");
    if (spec.kappa == 0.0) return 0.0;

    const std::size_t m = basis.modes.size();
    std::vector<sparse_matrix> a(m), adag(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = op_a(basis, basis.modes.momenta[i]);
        adag[i] = sparse_matrix(a[i].transpose());
    }
    const sparse_matrix vn = build_quartic(basis, spec, a, adag);

    std::vector<double> kin(static_cast<std::size_t>(basis.dim()));
    std::vector<double> occ(static_cast<std::size_t>(basis.dim()));
    for (int s = 0; s < basis.dim(); ++s) {
        double e = 0.0;
        const auto& st = basis.states[static_cast<std::size_t>(s)];
        for (std::size_t i = 0; i < st.size(); ++i)
            e += basis.modes.momenta[i].norm_sq() * st[i];
        kin[static_cast<std::size_t>(s)] = e;
        occ[static_cast<std::size_t>(s)] = static_cast<double>(basis.total_occupation(s));
    }

    const double scale =
        spec.kappa * std::pow(static_cast<double>(basis.n_particles), spec.beta - 1.0);
    std::mt19937_64 gen(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXd x = random_unit(gen, basis.dim());
        const double num = x.dot(vn * x);
        double den = 0.0;
        for (int s = 0; s < basis.dim(); ++s)
            den += (kin[static_cast<std::size_t>(s)] + 1.0) *
                   (occ[static_cast<std::size_t>(s)] + 1.0) * x[s] * x[s];
        worst = std::max(worst, num / (scale * den));
    }
    return worst;
}

double ngrow_check(const fock_basis& basis, const std::vector<double>& eta, int n1, int n2,
                   int trials, std::uint64_t seed) {
    if (std::abs(n1) > 2 || std::abs(n2) > 2)
        throw config_error("ngrow_check: exponents limited to |n| <= 2");
    if (trials < 1) throw config_error("ngrow_check: trials must be positive");

    const sparse_matrix b = build_b(basis, eta);
    const Eigen::MatrixXd expb = Eigen::MatrixXd(b).exp();

    const double big_n = static_cast<double>(basis.n_particles);
    Eigen::VectorXd w(basis.dim());
    for (int s = 0; s < basis.dim(); ++s) {
        const double occ = static_cast<double>(basis.total_occupation(s));
        w[s] = std::pow(occ + 1.0, n1) * std::pow(big_n + 1.0 - occ, n2);
    }

    std::mt19937_64 gen(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Eigen::VectorXd x = random_unit(gen, basis.dim());
        const Eigen::VectorXd y = expb * x;
        const double num = (w.array() * y.array().square()).sum();
        const double den = (w.array() * x.array().square()).sum();
        worst = std::max(worst, num / den);
    }
    return worst;
}

std::vector<coordinate_entry> coordinate_entries(const sparse_matrix& mat) {
    std::vector<coordinate_entry> out;
    out.reserve(static_cast<std::size_t>(mat.nonZeros()));
    for (int k = 0; k < mat.outerSize(); ++k)
        for (sparse_matrix::InnerIterator it(mat, k); it; ++it)
            if (it.value() != 0.0)
                out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()),
                               it.value()});
    std::sort(out.begin(), out.end(), [](const coordinate_entry& a, const coordinate_entry& b) {
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
    return out;
}

double sym_defect(const sparse_matrix& mat) {
    const sparse_matrix diff = mat - sparse_matrix(mat.transpose());
    double worst = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (sparse_matrix::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

} // namespace bosegas
