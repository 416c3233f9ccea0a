// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rff/bessel.hpp"

using rff::bessel_j;
using rff::bessel_j_row;

TEST_CASE("bessel_j reference values")
{
    // Abramowitz & Stegun / high-precision quadrature
    CHECK(bessel_j(0, 1.0) == doctest::Approx(0.765197686557966551).epsilon(1e-13));
    CHECK(bessel_j(1, 1.0) == doctest::Approx(0.440050585744933516).epsilon(1e-13));
    CHECK(bessel_j(0, 2.0) == doctest::Approx(0.223890779141235668).epsilon(1e-13));
    CHECK(bessel_j(5, 10.0) == doctest::Approx(-0.23406152818679364).epsilon(1e-13));
    CHECK(bessel_j(10, 20.0) == doctest::Approx(0.186482558023945083).epsilon(1e-13));
    CHECK(bessel_j(30, 10.0) == doctest::Approx(1.55109607825746701e-12).epsilon(1e-12));
    CHECK(bessel_j(60, 50.0) == doctest::Approx(0.00104851959953141805).epsilon(1e-12));
}

TEST_CASE("bessel_j special points and reflections")
{
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(3, 0.0) == 0.0);
    CHECK(bessel_j(-3, 2.5) == -bessel_j(3, 2.5));
    CHECK(bessel_j(-4, 2.5) == bessel_j(4, 2.5));
    CHECK(bessel_j(3, -2.5) == -bessel_j(3, 2.5));
    CHECK(bessel_j(-3, -2.5) == bessel_j(3, 2.5));
}

TEST_CASE("bessel_j agrees with quadrature oracle over a random grid")
{
    std::mt19937_64 rng(7041u);
    std::uniform_real_distribution<double> ux(-50.0, 50.0);
    std::uniform_int_distribution<int> un(-60, 60);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int n = un(rng);
        const double x = ux(rng);
        const double ref = rff::oracles::quadrature_gb(n, x, 0.0);
        worst = std::max(worst, std::abs(bessel_j(n, x) - ref));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j small arguments match the power series")
{
    CHECK(bessel_j(0, 1e-9) == doctest::Approx(1.0 - 2.5e-19).epsilon(1e-15));
    CHECK(bessel_j(1, 1e-9) == doctest::Approx(5e-10).epsilon(1e-13));
    CHECK(bessel_j(2, 1e-9) == doctest::Approx(1.25e-19).epsilon(1e-13));
    CHECK(bessel_j(40, 1e-12) == 0.0);
}

TEST_CASE("bessel_j_row matches element-wise evaluation and Parseval at fixed x")
{
    const double x = 13.7;
    const auto row = bessel_j_row(40, x);
    for (int n = 0; n <= 40; n += 7)
        CHECK(row[static_cast<std::size_t>(n)] == doctest::Approx(bessel_j(n, x)).epsilon(1e-14));

    // J_0^2 + 2 sum_{n>=1} J_n^2 = 1
    double s = row[0] * row[0];
    for (int n = 1; n <= 40; ++n) s += 2.0 * row[static_cast<std::size_t>(n)] * row[static_cast<std::size_t>(n)];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}
