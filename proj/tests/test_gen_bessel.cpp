// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rff/bessel.hpp"
#include "rff/gen_bessel.hpp"

using rff::bessel_j;
using rff::gb_auto_order;
using rff::generalized_bessel;
using rff::generalized_bessel_row;

TEST_CASE("generalized_bessel frozen oracle values")
{
    // frozen from the quadrature representation evaluated at 40-digit precision
    CHECK(generalized_bessel(0, 0.0, 0.0) == 1.0);
    CHECK(generalized_bessel(3, 1.7, 0.4) == doctest::Approx(0.182879795960042367).epsilon(1e-12));
    CHECK(generalized_bessel(-3, 1.7, 0.4) == doctest::Approx(0.042126263156138952).epsilon(1e-12));
    CHECK(generalized_bessel(0, 1.7, 0.4) == doctest::Approx(0.382965591064997458).epsilon(1e-12));
    CHECK(generalized_bessel(5, 8.0, 2.5) == doctest::Approx(-0.191792183669394219).epsilon(1e-12));
}

TEST_CASE("collapse identities: y = 0 gives J_m(x), x = 0 gives J_k(y) on even orders")
{
    for (int m = -6; m <= 6; ++m)
        CHECK(generalized_bessel(m, 2.3, 0.0) == doctest::Approx(bessel_j(m, 2.3)).epsilon(1e-13));

    for (int k = -3; k <= 3; ++k)
        CHECK(generalized_bessel(2 * k, 0.0, 0.7) == doctest::Approx(bessel_j(k, 0.7)).epsilon(1e-13));

    for (int m = -7; m <= 7; m += 2)
        CHECK(std::abs(generalized_bessel(m, 0.0, 0.7)) < 1e-15);
}

TEST_CASE("parity in x: A_m(-x, y) = (-1)^m A_m(x, y)")
{
    std::mt19937_64 rng(1129u);
    std::uniform_real_distribution<double> u(0.1, 6.0);
    for (int i = 0; i < 20; ++i) {
        const double x = u(rng), y = 0.3 * u(rng);
        const int m = static_cast<int>(i % 9) - 4;
        const double sign = (m & 1) ? -1.0 : 1.0;
        CHECK(generalized_bessel(m, -x, y) ==
              doctest::Approx(sign * generalized_bessel(m, x, y)).epsilon(1e-12));
    }
}

TEST_CASE("series agrees with quadrature oracle on the default random grid")
{
    std::mt19937_64 rng(4242u);
    std::uniform_real_distribution<double> uxy(-10.0, 10.0);
    std::uniform_int_distribution<int> um(-12, 12);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int m = um(rng);
        const double x = uxy(rng), y = uxy(rng);
        const double dev = std::abs(generalized_bessel(m, x, y) - rff::oracles::quadrature_gb(m, x, y));
        worst = std::max(worst, dev);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("Parseval sum reaches 1 at the auto cutoff and deficit shrinks monotonically")
{
    const double x = 4.1, y = 1.3;
    const int m_auto = gb_auto_order(x, y);
    const auto row = generalized_bessel_row(m_auto, x, y);
    double sum = 0.0;
    for (double a : row) sum += a * a;
    CHECK(std::abs(sum - 1.0) < 1e-12);

    // beyond the classical cutoff |x| + 2|y| the deficit decreases in m_max
    const int turn = static_cast<int>(std::ceil(x + 2.0 * y));
    double prev_deficit = 2.0;
    for (int mm = turn; mm <= turn + 12; ++mm) {
        const auto r = generalized_bessel_row(mm, x, y);
        double s = 0.0;
        for (double a : r) s += a * a;
        const double deficit = 1.0 - s;
        CHECK(deficit <= prev_deficit + 1e-15);
        prev_deficit = deficit;
    }
}
