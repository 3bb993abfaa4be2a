#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "bosegas/lattice.hpp"

using namespace bosegas;

namespace {

// independent enumeration oracle: all integer triples with 0 < |n|^2 <= n_sq_max
std::vector<std::array<int, 3>> brute_force_triples(int n_sq_max) {
    std::vector<std::array<int, 3>> out;
    const int m = static_cast<int>(std::sqrt(static_cast<double>(n_sq_max))) + 1;
    for (int a = -m; a <= m; ++a)
        for (int b = -m; b <= m; ++b)
            for (int c = -m; c <= m; ++c) {
                const int s = a * a + b * b + c * c;
                if (s > 0 && s <= n_sq_max) out.push_back({a, b, c});
            }
    return out;
}

} // namespace

TEST_CASE("momentum basics") {
    momentum p{{3, 4, 0}};
    CHECK(p.n_sq() == 25);
    CHECK(p.norm_sq() == 4.0 * pi * pi * 25.0); // exact: integer n_sq before float conversion
    CHECK(p.norm() == doctest::Approx(two_pi * 5.0).epsilon(1e-15));
    CHECK((-p) == momentum{{-3, -4, 0}});
    CHECK((p + (-p)).is_zero());
    CHECK((momentum{{1, 2, 3}} - momentum{{1, 2, 3}}).is_zero());
    CHECK(to_string(momentum{{-2, 0, 1}}) == "(-2,0,1)");
}

TEST_CASE("shell enumeration counts match the brute-force oracle") {
    CHECK(enumerate_shell(two_pi).size() == 6);         // n = +-e1, +-e2, +-e3
    CHECK(enumerate_shell(pi).size() == 0);             // nothing below |p| = 2 pi
    CHECK(enumerate_shell(two_pi * std::sqrt(3.0)).size() == 26);
    CHECK(brute_force_triples(1).size() == 6);
    CHECK(brute_force_triples(3).size() == 26);

    // generic cutoff away from a shell boundary
    const double p_max = two_pi * 3.7;
    const auto set = enumerate_shell(p_max);
    const auto oracle = brute_force_triples(13); // floor(3.7^2)
    REQUIRE(set.size() == oracle.size());
    for (const auto& n : oracle) CHECK(set.contains(momentum{n}));
}

TEST_CASE("mode set is negation-closed, zero-free, sorted, duplicate-free") {
    const auto set = enumerate_shell(two_pi * 3.0);
    std::set<std::array<int, 3>> seen;
    for (const auto& p : set) {
        CHECK(!p.is_zero());
        CHECK(set.contains(-p));
        CHECK(seen.insert(p.n).second);
    }
    for (std::size_t i = 1; i < set.size(); ++i) CHECK(set.momenta[i - 1] < set.momenta[i]);

    // deterministic order on the unit shell
    const auto unit = enumerate_shell(two_pi);
    REQUIRE(unit.size() == 6);
    CHECK(unit.momenta[0] == momentum{{-1, 0, 0}});
    CHECK(unit.momenta[1] == momentum{{0, -1, 0}});
    CHECK(unit.momenta[2] == momentum{{0, 0, -1}});
    CHECK(unit.momenta[3] == momentum{{0, 0, 1}});
    CHECK(unit.momenta[4] == momentum{{0, 1, 0}});
    CHECK(unit.momenta[5] == momentum{{1, 0, 0}});
}

TEST_CASE("index_of round-trips and rejects absent momenta") {
    const auto set = enumerate_shell(two_pi * 2.0);
    for (std::size_t i = 0; i < set.size(); ++i)
        CHECK(set.index_of(set.momenta[i]) == static_cast<std::ptrdiff_t>(i));
    CHECK(set.index_of(momentum{{5, 5, 5}}) == -1);
    CHECK(!set.contains(momentum{{0, 0, 0}}));
}

TEST_CASE("lattice_sum of a constant over the unit shell") {
    const auto unit = enumerate_shell(two_pi);
    const auto r = lattice_sum([](const momentum&) { return 1.0; }, unit);
    CHECK(r.value == 6.0);
    CHECK(r.tail_estimate == 0.0);
}

TEST_CASE("odd functions cancel exactly") {
    const auto set = enumerate_shell(two_pi * 4.0);
    const auto r = lattice_sum(
        [](const momentum& p) {
            const double x = static_cast<double>(p.n[0]);
            return x * x * x + 0.25 * static_cast<double>(p.n[1]) - static_cast<double>(p.n[2]);
        },
        set);
    CHECK(r.value == 0.0);
}

TEST_CASE("monotone refinement for nonnegative summands") {
    const auto f = [](const momentum& p) { return 1.0 / (1.0 + p.norm_sq()); };
    const auto small = lattice_sum(f, enumerate_shell(two_pi * 3.0));
    const auto large = lattice_sum(f, enumerate_shell(two_pi * 5.0));
    CHECK(large.value >= small.value);
}

TEST_CASE("inverse-quartic tail estimate covers a cutoff-refinement gap") {
    const auto f = [](const momentum& p) { return 1.0 / (p.norm_sq() * p.norm_sq()); };
    tail_model tail{tail_model::kind_t::inverse_quartic, 1.0};
    const auto coarse = lattice_sum(f, enumerate_shell(two_pi * 10.0), tail);
    const auto fine = lattice_sum(f, enumerate_shell(two_pi * 40.0), tail); // larger-cutoff oracle
    const double gap = fine.value - coarse.value;
    CHECK(gap > 0.0);
    CHECK(gap <= coarse.tail_estimate);
    CHECK(gap >= 0.5 * coarse.tail_estimate); // the estimate has the right magnitude
    CHECK(coarse.tail_estimate == doctest::Approx(1.0 / (2.0 * pi * pi * two_pi * 10.0)));
}

TEST_CASE("inverse-square tails are reported as divergent") {
    const auto set = enumerate_shell(two_pi * 2.0);
    tail_model tail{tail_model::kind_t::inverse_square, 3.0};
    const auto r = lattice_sum([](const momentum&) { return 0.0; }, set, tail);
    CHECK(std::isinf(r.tail_estimate));
    CHECK(r.tail_estimate > 0.0);
    tail.coefficient = 0.0;
    CHECK(lattice_sum([](const momentum&) { return 0.0; }, set, tail).tail_estimate == 0.0);
}

TEST_CASE("non-finite summands are rejected with the offending momentum named") {
    const auto set = enumerate_shell(two_pi * 2.0);
    try {
        lattice_sum([](const momentum& p) { return 1.0 / (p.n_sq() - 4.0); }, set);
        FAIL("expected numerical_error");
    } catch (const numerical_error& e) {
        CHECK(std::string(e.what()).find("(-2,0,0)") != std::string::npos);
    }
}

TEST_CASE("kahan accumulation beats naive summation on adversarial input") {
    kahan_sum acc;
    acc.add(1.0);
    for (int i = 0; i < 10; ++i) acc.add(1e-17);
    CHECK(acc.value() == doctest::Approx(1.0 + 1e-16).epsilon(1e-18));
}
