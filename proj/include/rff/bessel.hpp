// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rff {

namespace detail {

// Tiny-argument power series J_n(x) ~ (x/2)^n/n! * (1 - x^2/(4(n+1))).
// Used for |x| < 1e-8 where the backward recurrence's dynamic range explodes;
// truncation error is O(x^4) relative, far below the 1e-13 target.
inline std::vector<double> bessel_j_small_x(int top, double x)
{
    std::vector<double> j(static_cast<std::size_t>(top) + 1, 0.0);
    double pw = 1.0;  // (x/2)^n / n!
    for (int n = 0; n <= top; ++n) {
        j[static_cast<std::size_t>(n)] = pw * (1.0 - x * x / (4.0 * (n + 1)));
        pw *= 0.5 * x / (n + 1);
        if (pw == 0.0) break;
    }
    return j;
}

// Backward (Miller) recurrence for the whole ladder J_0..J_top at fixed x > 0.
// The recurrence J_{k-1} = (2k/x) J_k - J_{k+1} is run downward from a start
// order well above both `top` and x, seeded with an arbitrary tiny value; the
// minimal solution J_k dominates going down. Normalization uses
// J_0 + 2*sum_{k>=1} J_{2k} = 1.
inline std::vector<double> bessel_j_ladder(int top, double x)
{
    if (x < 1e-8)
        return bessel_j_small_x(top, x);
    const int start = top + static_cast<int>(std::ceil(std::sqrt(40.0 * (top + 2)))) +
                      static_cast<int>(std::ceil(1.2 * x)) + 24;
    std::vector<double> j(static_cast<std::size_t>(top) + 1, 0.0);

    double jp = 0.0;                    // J_{k+1} (scaled)
    double jc = std::numeric_limits<double>::min() * 1e40;  // J_k (scaled seed)
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
        const double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 <= top)
            j[static_cast<std::size_t>(k - 1)] = jc;
        if (((k - 1) & 1) == 0)
            norm += (k == 1) ? jc : 2.0 * jc;
        // rescale to avoid overflow of the growing scaled solution
        if (std::abs(jc) > 1e250) {
            jp *= 1e-250;
            jc *= 1e-250;
            norm *= 1e-250;
            for (auto& v : j) v *= 1e-250;
        }
    }
    for (auto& v : j) v /= norm;
    return j;
}

}  // namespace detail

// Ordinary Bessel function of the first kind, integer order.
// Accuracy target: 1e-13 relative for |n| <= 60, |x| <= 50.
inline double bessel_j(int n, double x)
{
    if (!std::isfinite(x))
        throw std::invalid_argument("bessel_j: non-finite argument");

    // reflections: J_{-n}(x) = (-1)^n J_n(x), J_n(-x) = (-1)^n J_n(x)
    double sign = 1.0;
    if (n < 0) {
        n = -n;
        if (n & 1) sign = -sign;
    }
    if (x < 0.0) {
        x = -x;
        if (n & 1) sign = -sign;
    }
    if (x == 0.0)
        return n == 0 ? 1.0 : 0.0;

    return sign * detail::bessel_j_ladder(n, x)[static_cast<std::size_t>(n)];
}

// J_n(x) for every n in [0, n_max], one backward pass. x may be negative.
inline std::vector<double> bessel_j_row(int n_max, double x)
{
    if (n_max < 0)
        throw std::invalid_argument("bessel_j_row: n_max must be >= 0");
    if (!std::isfinite(x))
        throw std::invalid_argument("bessel_j_row: non-finite argument");

    if (x == 0.0) {
        std::vector<double> j(static_cast<std::size_t>(n_max) + 1, 0.0);
        j[0] = 1.0;
        return j;
    }
    const bool neg = x < 0.0;
    auto j = detail::bessel_j_ladder(n_max, std::abs(x));
    if (neg)
        for (int n = 1; n <= n_max; n += 2) j[static_cast<std::size_t>(n)] = -j[static_cast<std::size_t>(n)];
    return j;
}

}  // namespace rff
