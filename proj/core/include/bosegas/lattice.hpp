#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bosegas/common.hpp"

namespace bosegas {

// point p = 2*pi*n of the dual lattice of the unit torus, keyed by the
// integer triple n (exact hashing, exact negation)
struct momentum {
    std::array<int, 3> n{0, 0, 0};

    int n_sq() const { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; }
    double norm_sq() const { return 4.0 * pi * pi * static_cast<double>(n_sq()); }
    double norm() const { return two_pi * std::sqrt(static_cast<double>(n_sq())); }
    bool is_zero() const { return n[0] == 0 && n[1] == 0 && n[2] == 0; }

    momentum operator-() const { return momentum{{-n[0], -n[1], -n[2]}}; }

    friend momentum operator+(const momentum& a, const momentum& b) {
        return momentum{{a.n[0] + b.n[0], a.n[1] + b.n[1], a.n[2] + b.n[2]}};
    }
    friend momentum operator-(const momentum& a, const momentum& b) {
        return momentum{{a.n[0] - b.n[0], a.n[1] - b.n[1], a.n[2] - b.n[2]}};
    }
    friend bool operator==(const momentum& a, const momentum& b) { return a.n == b.n; }
    friend bool operator!=(const momentum& a, const momentum& b) { return a.n != b.n; }

    // shell-major order: by |n|^2, then lexicographic on the triple
    friend bool operator<(const momentum& a, const momentum& b) {
        const int sa = a.n_sq(), sb = b.n_sq();
        if (sa != sb) return sa < sb;
        return a.n < b.n;
    }
};

std::string to_string(const momentum& p); // "(n1,n2,n3)"

struct momentum_hash {
    std::size_t operator()(const momentum& p) const {
        // FNV-1a over the three ints
        std::size_t h = 1469598103934665603ull;
        for (int c : p.n) {
            auto u = static_cast<std::size_t>(static_cast<unsigned>(c));
            h = (h ^ u) * 1099511628211ull;
        }
        return h;
    }
};

// finite truncation of the punctured lattice: negation-closed, no zero, no
// duplicates, sorted shell-major for deterministic iteration
struct mode_set {
    std::vector<momentum> momenta;
    double cutoff_radius = 0.0; // all |p| <= cutoff_radius

    std::size_t size() const { return momenta.size(); }
    bool empty() const { return momenta.empty(); }
    bool contains(const momentum& p) const;
    // position in momenta, or -1 if absent
    std::ptrdiff_t index_of(const momentum& p) const;

    auto begin() const { return momenta.begin(); }
    auto end() const { return momenta.end(); }
};

// all p with 0 < |p| <= p_max (boundary inclusive, with a tiny relative slack
// so that p_max = 2*pi*sqrt(k) catches the |n|^2 = k shell exactly)
mode_set enumerate_shell(double p_max);

// continuum model for the part of a sum beyond the cutoff
struct tail_model {
    enum class kind_t { none, inverse_square, inverse_quartic };
    kind_t kind = kind_t::none;
    double coefficient = 0.0; // summand ~ coefficient * |p|^-2 or |p|^-4
};

struct sum_result {
    double value = 0.0;
    double tail_estimate = 0.0;
};

// compensated sum of f over the set in stored (shell-major) order; the tail
// estimate integrates the model density beyond cutoff_radius:
//   inverse_quartic: coefficient / (2 pi^2 P_max)
//   inverse_square:  divergent -> +infinity (reported, never added)
sum_result lattice_sum(const std::function<double(const momentum&)>& f,
                       const mode_set& set, const tail_model& tail = {});

} // namespace bosegas
