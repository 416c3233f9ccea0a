// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace rff::detail {

// Cyclic Jacobi diagonalization of a dense real symmetric matrix (row-major).
// Returns eigenvalues in w; columns of v are the eigenvectors. Intended for
// the small (dim <= 21) collective Hamiltonians, where its quadratic-in-sweep
// convergence and machine-precision orthogonality matter more than speed.
inline void jacobi_eigh(std::vector<double> a, int n, std::vector<double>& w,
                        std::vector<double>& v)
{
    w.assign(static_cast<std::size_t>(n), 0.0);
    v.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto at = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-30) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = 0.5 * (at(q, q) - at(p, p)) / apq;
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[static_cast<std::size_t>(k) * n + p];
                    const double vkq = v[static_cast<std::size_t>(k) * n + q];
                    v[static_cast<std::size_t>(k) * n + p] = c * vkp - s * vkq;
                    v[static_cast<std::size_t>(k) * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = at(i, i);
}

// psi <- V diag(exp(-i phase_k)) V^T psi, for real symmetric H = V diag(w) V^T.
inline void apply_exp_unitary(const std::vector<double>& w, const std::vector<double>& v, int n,
                              double phase_scale, std::vector<std::complex<double>>& psi,
                              std::vector<std::complex<double>>& scratch)
{
    scratch.assign(static_cast<std::size_t>(n), {0.0, 0.0});
    for (int k = 0; k < n; ++k) {
        std::complex<double> proj{0.0, 0.0};
        for (int r = 0; r < n; ++r) proj += v[static_cast<std::size_t>(r) * n + k] * psi[static_cast<std::size_t>(r)];
        const double ph = phase_scale * w[static_cast<std::size_t>(k)];
        scratch[static_cast<std::size_t>(k)] = proj * std::complex<double>(std::cos(ph), -std::sin(ph));
    }
    for (int r = 0; r < n; ++r) {
        std::complex<double> acc{0.0, 0.0};
        for (int k = 0; k < n; ++k) acc += v[static_cast<std::size_t>(r) * n + k] * scratch[static_cast<std::size_t>(k)];
        psi[static_cast<std::size_t>(r)] = acc;
    }
}

}  // namespace rff::detail
