// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rff/bessel.hpp"

namespace rff {

// Two-argument (generalized) Bessel function
//
//   A_m(x, y) = sum_k J_{m-2k}(x) J_k(y),
//
// the Fourier coefficient of exp(i(x sin t + y sin 2t)). Properties used
// throughout: A_m(0, 0) = delta_{m0}; A_m(x, 0) = J_m(x); A_{2k}(0, y) = J_k(y)
// with odd orders vanishing; sum_m A_m^2 = 1 (Parseval).

namespace detail {

// k-sum cutoff: J_k(y) is negligible (< 1e-16) once |k| exceeds |y| plus a
// fixed margin, so the tail beyond K is below the 1e-14 truncation target.
inline int gb_k_cutoff(double y)
{
    return static_cast<int>(std::ceil(std::abs(y))) + 22;
}

}  // namespace detail

// Safe default truncation order for sideband tables at arguments (x, y).
inline int gb_auto_order(double x, double y)
{
    return static_cast<int>(std::ceil(std::abs(x) + 2.0 * std::abs(y))) + 20;
}

// A_m(x, y) for all m in [-m_max, m_max]; result[m + m_max] is order m.
// One Bessel ladder per argument, shared across orders.
inline std::vector<double> generalized_bessel_row(int m_max, double x, double y)
{
    if (m_max < 0)
        throw std::invalid_argument("generalized_bessel_row: m_max must be >= 0");
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::invalid_argument("generalized_bessel_row: non-finite argument");

    const int kc = detail::gb_k_cutoff(y);
    const auto jy = bessel_j_row(kc, y);
    const auto jx = bessel_j_row(m_max + 2 * kc, x);

    auto jx_at = [&](int n) {
        double s = 1.0;
        if (n < 0) {
            n = -n;
            if (n & 1) s = -1.0;
        }
        return s * jx[static_cast<std::size_t>(n)];
    };
    auto jy_at = [&](int k) {
        double s = 1.0;
        if (k < 0) {
            k = -k;
            if (k & 1) s = -1.0;
        }
        return s * jy[static_cast<std::size_t>(k)];
    };

    std::vector<double> a(2 * static_cast<std::size_t>(m_max) + 1, 0.0);
    for (int m = -m_max; m <= m_max; ++m) {
        double sum = 0.0;
        for (int k = -kc; k <= kc; ++k)
            sum += jx_at(m - 2 * k) * jy_at(k);
        a[static_cast<std::size_t>(m + m_max)] = sum;
    }
    return a;
}

inline double generalized_bessel(int m, double x, double y)
{
    const int am = std::abs(m);
    return generalized_bessel_row(am, x, y)[static_cast<std::size_t>(m + am)];
}

}  // namespace rff
