#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bosegas/potential.hpp"
#include "bosegas/quadrature.hpp"

using namespace bosegas;

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
    // order-n rule is exact through degree 2n-1
    for (int deg = 0; deg <= 31; ++deg) {
        const double got = gl_integrate([deg](double x) { return std::pow(x, deg); }, 0.0, 1.0, 16);
        CHECK(got == doctest::Approx(1.0 / (deg + 1)).epsilon(1e-13));
    }
    CHECK(gl_integrate([](double x) { return std::exp(x); }, 0.0, 3.0) ==
          doctest::Approx(std::exp(3.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("adaptive integration hits closed forms") {
    CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, pi, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-12) ==
          doctest::Approx(pi / 4.0).epsilon(1e-12));
    CHECK(integrate_adaptive([](double) { return 0.0; }, 0.0, 1.0, 1e-12) == 0.0);
}

TEST_CASE("oscillatory panels resolve fast phases") {
    // int_0^R r sin(qr) dr = (sin(qR) - qR cos(qR)) / q^2
    const double q = 113.0, big_r = 1.0;
    const double exact = (std::sin(q * big_r) - q * big_r * std::cos(q * big_r)) / (q * q);
    CHECK(oscillatory_integral([q](double r) { return r * std::sin(q * r); }, 0.0, big_r, q) ==
          doctest::Approx(exact).epsilon(1e-12));
    CHECK(oscillatory_integral([](double r) { return std::sin(50.0 * r); }, 0.0, 1.0, 50.0) ==
          doctest::Approx((1.0 - std::cos(50.0)) / 50.0).epsilon(1e-12));
}

TEST_CASE("ball transform matches its closed forms") {
    const auto spec = ball_potential(1.0, 1.0, 0.05, 0.5, 10000);
    CHECK(fourier_hat(spec, 0.0) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    CHECK(hat_zero(spec) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
    // at q = pi the transform collapses to 4/pi
    CHECK(fourier_hat(spec, pi) == doctest::Approx(4.0 / pi).epsilon(1e-14));
    // evenness
    CHECK(fourier_hat(spec, 2.5) == fourier_hat(spec, -2.5));
}

TEST_CASE("ball transform agrees with an independent radial quadrature oracle") {
    const auto spec = ball_potential(0.7, 1.3, 0.01, 0.3, 1000);
    for (double q : {1e-8, 0.01, 0.3, 0.38461, 0.39, 1.0, pi, 10.0, 57.0}) {
        // oracle: direct (4 pi / q) int_0^R r V sin(qr) dr on oscillation-safe panels
        const double oracle =
            4.0 * pi / q *
            oscillatory_integral([&](double r) { return r * spec.v0 * std::sin(q * r); }, 0.0,
                                 spec.radius, q);
        CHECK(fourier_hat(spec, q) == doctest::Approx(oracle).epsilon(1e-11));
    }
}

TEST_CASE("series and closed-form branches of the ball transform meet smoothly") {
    const auto spec = ball_potential(1.0, 1.0, 0.05, 0.5, 100);
    // inside the series branch (x = R q < 0.5) the closed form is still good
    // to ~25 ulp; the two must agree there
    for (double x : {0.1, 0.3, 0.45, 0.499}) {
        const double closed = 4.0 * pi * (std::sin(x) / x - std::cos(x)) / (x * x);
        CHECK(fourier_hat(spec, x) == doctest::Approx(closed).epsilon(1e-13));
    }
    // no jump across the switch beyond the function's own slope
    const double below = fourier_hat(spec, 0.5 - 1e-9);
    const double above = fourier_hat(spec, 0.5 + 1e-9);
    CHECK(std::abs(below - above) <= 1e-8 * std::abs(below));
}

TEST_CASE("tabulated step profile reproduces the ball transform") {
    // piecewise-linear through {(0,1),(1,1)} is exactly the unit ball
    const auto tab = tabulated_potential({0.0, 1.0}, {1.0, 1.0}, 0.05, 0.5, 10000);
    const auto ball = ball_potential(1.0, 1.0, 0.05, 0.5, 10000);
    for (double q : {0.0, 0.2, 1.0, pi, 8.0, 40.0})
        CHECK(fourier_hat(tab, q) == doctest::Approx(fourier_hat(ball, q)).epsilon(1e-10));
}

TEST_CASE("tabulated all-zero potential transforms to zero") {
    const auto tab = tabulated_potential({0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}, 0.05, 0.5, 100);
    for (double q : {0.0, 1.0, 17.0}) CHECK(fourier_hat(tab, q) == 0.0);
}

TEST_CASE("transform magnitude peaks at zero momentum") {
    const auto spec = ball_potential(2.0, 0.8, 0.05, 0.5, 100);
    const double v0 = hat_zero(spec);
    for (double q = 0.1; q < 30.0; q += 0.37) CHECK(std::abs(fourier_hat(spec, q)) <= v0);
}

TEST_CASE("scaled transform divides momenta by N^beta") {
    const auto spec = ball_potential(1.0, 1.0, 0.05, 0.5, 10000); // N^beta = 100
    CHECK(spec.n_beta() == doctest::Approx(100.0).epsilon(1e-14));
    const momentum p{{1, 0, 0}};
    CHECK(scaled_hat(spec, p) == doctest::Approx(fourier_hat(spec, two_pi / 100.0)).epsilon(1e-14));
    // beta = 0 leaves momenta untouched
    const auto mf = ball_potential(1.0, 1.0, 0.05, 0.0, 10000);
    CHECK(scaled_hat(mf, p) == fourier_hat(mf, two_pi));
    // |p| << N^beta sits near the zero-momentum value
    CHECK(scaled_hat(spec, p) == doctest::Approx(hat_zero(spec)).epsilon(1e-2));
}

TEST_CASE("scaled-transform table matches direct evaluation on a mode set") {
    const auto spec = ball_potential(1.0, 1.0, 0.05, 0.5, 1000);
    const auto set = enumerate_shell(two_pi * 4.0);
    const auto table = build_scaled_hat_table(spec, 4 * 16 * 3);
    for (const auto& p : set) CHECK(table.at(p) == scaled_hat(spec, p));
    for (const auto& p : set)
        for (const auto& q : set) {
            const momentum d = p - q;
            CHECK(table.at_n_sq(d.n_sq()) == scaled_hat(spec, d));
        }
}

TEST_CASE("pointwise potential values") {
    const auto ball = ball_potential(2.0, 0.5, 0.05, 0.5, 100);
    CHECK(potential_value(ball, 0.0) == 2.0);
    CHECK(potential_value(ball, 0.5) == 2.0);
    CHECK(potential_value(ball, 0.500001) == 0.0);
    const auto tab = tabulated_potential({0.0, 1.0, 2.0}, {4.0, 2.0, 0.0}, 0.05, 0.5, 100);
    CHECK(potential_value(tab, 0.0) == 4.0);
    CHECK(potential_value(tab, 0.5) == doctest::Approx(3.0));
    CHECK(potential_value(tab, 1.5) == doctest::Approx(1.0));
    CHECK(potential_value(tab, 2.5) == 0.0);
}

TEST_CASE("invalid specifications are rejected") {
    CHECK_THROWS_AS(ball_potential(1.0, -1.0, 0.05, 0.5, 100), config_error);
    CHECK_THROWS_AS(ball_potential(-1.0, 1.0, 0.05, 0.5, 100), config_error);
    CHECK_THROWS_AS(ball_potential(1.0, 1.0, -0.05, 0.5, 100), config_error);
    CHECK_THROWS_AS(ball_potential(1.0, 1.0, 0.05, 1.0, 100), config_error);
    CHECK_THROWS_AS(ball_potential(1.0, 1.0, 0.05, 0.5, 1), config_error);
    // non-monotone grid
    CHECK_THROWS_AS(tabulated_potential({0.0, 0.5, 0.4}, {1.0, 1.0, 0.0}, 0.05, 0.5, 100),
                    config_error);
    // grid not starting at zero
    CHECK_THROWS_AS(tabulated_potential({0.1, 0.5}, {1.0, 1.0}, 0.05, 0.5, 100), config_error);
    // negative values
    CHECK_THROWS_AS(tabulated_potential({0.0, 0.5}, {1.0, -1.0}, 0.05, 0.5, 100), config_error);
}

TEST_CASE("CSV loading round-trips a profile") {
    const char* path = "test_potential_profile.csv";
    {
        std::ofstream out(path);
        out << "# radial profile\n0.0, 1.5\n0.5, 1.0\n1.0, 0.0\n";
    }
    const auto spec = load_tabulated_csv(path, 0.05, 0.5, 100);
    CHECK(spec.grid_r.size() == 3);
    CHECK(potential_value(spec, 0.25) == doctest::Approx(1.25));
    std::remove(path);
    CHECK_THROWS_AS(load_tabulated_csv("no_such_file.csv", 0.05, 0.5, 100), config_error);
    try {
        load_tabulated_csv("no_such_file.csv", 0.05, 0.5, 100);
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("no_such_file.csv") != std::string::npos);
    }
}
