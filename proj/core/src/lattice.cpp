#include "bosegas/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bosegas {

std::string to_string(const momentum& p) {
    return "(" + std::to_string(p.n[0]) + "," + std::to_string(p.n[1]) + "," +
           std::to_string(p.n[2]) + ")";
}

bool mode_set::contains(const momentum& p) const {
    return std::binary_search(momenta.begin(), momenta.end(), p);
}

std::ptrdiff_t mode_set::index_of(const momentum& p) const {
    auto it = std::lower_bound(momenta.begin(), momenta.end(), p);
    if (it == momenta.end() || !(*it == p)) return -1;
    return it - momenta.begin();
}

mode_set enumerate_shell(double p_max) {
    if (p_max < 0.0) throw config_error("enumerate_shell: negative cutoff");
    mode_set set;
    set.cutoff_radius = p_max;
    const double x = p_max / two_pi;
    // relative slack so cutoffs meant to hit a shell boundary include it
    const double n_sq_cut = x * x * (1.0 + 1e-12);
    const int n_max = static_cast<int>(std::floor(std::sqrt(n_sq_cut)));
    for (int a = -n_max; a <= n_max; ++a)
        for (int b = -n_max; b <= n_max; ++b)
            for (int c = -n_max; c <= n_max; ++c) {
                const momentum p{{a, b, c}};
                if (p.is_zero()) continue;
                if (static_cast<double>(p.n_sq()) <= n_sq_cut) set.momenta.push_back(p);
            }
    std::sort(set.momenta.begin(), set.momenta.end());
    return set;
}

sum_result lattice_sum(const std::function<double(const momentum&)>& f,
                       const mode_set& set, const tail_model& tail) {
    kahan_sum acc;
    for (const momentum& p : set.momenta) {
        const double v = f(p);
        if (!std::isfinite(v))
            throw numerical_error("lattice_sum: non-finite summand at p = 2*pi*" + to_string(p));
        acc.add(v);
    }
    sum_result out;
    out.value = acc.value();
    switch (tail.kind) {
        case tail_model::kind_t::none:
            out.tail_estimate = 0.0;
            break;
        case tail_model::kind_t::inverse_square:
            // density of states ~ 4 pi r^2 / (2 pi)^3 makes this integral diverge
            out.tail_estimate = (tail.coefficient == 0.0)
                                    ? 0.0
                                    : std::copysign(std::numeric_limits<double>::infinity(),
                                                    tail.coefficient);
            break;
        case tail_model::kind_t::inverse_quartic:
            // coefficient * (1/(2 pi)^3) * int_{P}^inf 4 pi r^2 r^-4 dr
            out.tail_estimate =
                (set.cutoff_radius > 0.0)
                    ? tail.coefficient / (2.0 * pi * pi * set.cutoff_radius)
                    : std::copysign(std::numeric_limits<double>::infinity(), tail.coefficient);
            break;
    }
    return out;
}

} // namespace bosegas
