// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rff/collective.hpp"
#include "rff/linalg.hpp"

namespace rff {

class StepUnderflowError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct EvolveOptions {
    double local_tol = 1e-8;   // per-step error estimate bound (state norm units)
    double dt_init_us = 2e-3;
    double dt_min_us = 1e-9;
};

struct EvolveResult {
    std::vector<double> populations;  // per collective basis state
    double transfer = 0.0;            // total population outside the initial state
    double norm_drift = 0.0;          // |  ||psi||^2 - 1  | at the end
    long steps = 0;
};

// Brute-force propagation of the collective state from |ii...i> over [0, T]
// under the full time-dependent Hamiltonian. Each step applies the midpoint
// Magnus propagator exp(-i 2 pi H(t + dt/2) dt) through an exact
// eigendecomposition, so every step is unitary to machine precision and the
// step-doubling error estimate controls only the time-discretization error.
// The energy of the initial collective state is subtracted from the diagonal
// before exponentiation (a global phase) to keep step sizes set by the
// physics of the defect and couplings rather than by absolute energies.
inline EvolveResult evolve_collective(const std::vector<Position>& pos, const ResolvedChannel& ch,
                                      const FieldDrive& drive, double rf_phase, double t_total_us,
                                      const EvolveOptions& opt = {})
{
    if (!(t_total_us > 0.0))
        throw std::invalid_argument("evolve_collective: T must be > 0");
    drive.validate();

    const auto basis = build_collective_basis(static_cast<int>(pos.size()));
    const int dim = basis.dim();

    std::vector<std::complex<double>> psi(static_cast<std::size_t>(dim), {0.0, 0.0});
    psi[0] = {1.0, 0.0};

    std::vector<double> w, v;
    std::vector<std::complex<double>> scratch;

    auto apply_step = [&](std::vector<std::complex<double>>& state, double t0, double dt) {
        auto h = hamiltonian_at(t0 + 0.5 * dt, pos, ch, drive, rf_phase);
        const double e_ref = h[0];
        for (int k = 0; k < dim; ++k) h[static_cast<std::size_t>(k) * dim + k] -= e_ref;
        detail::jacobi_eigh(std::move(h), dim, w, v);
        detail::apply_exp_unitary(w, v, dim, 2.0 * std::numbers::pi * dt, state, scratch);
    };

    EvolveResult res;
    double t = 0.0;
    double dt = std::min(opt.dt_init_us, t_total_us);
    while (t < t_total_us) {
        dt = std::min(dt, t_total_us - t);
        if (dt < opt.dt_min_us)
            throw StepUnderflowError("evolve_collective: step size underflow at t = " +
                                     std::to_string(t) + " us");

        auto full = psi;
        apply_step(full, t, dt);
        auto half = psi;
        apply_step(half, t, 0.5 * dt);
        apply_step(half, t + 0.5 * dt, 0.5 * dt);

        double err2 = 0.0;
        for (int k = 0; k < dim; ++k) {
            const auto d = full[static_cast<std::size_t>(k)] - half[static_cast<std::size_t>(k)];
            err2 += std::norm(d);
        }
        const double err = std::sqrt(err2);

        if (err <= opt.local_tol) {
            psi.swap(half);
            t += dt;
            ++res.steps;
            const double grow = (err > 0.0) ? 0.9 * std::cbrt(opt.local_tol / err) : 2.0;
            dt *= std::min(2.0, std::max(1.0, grow));
        } else {
            dt *= std::max(0.1, 0.9 * std::cbrt(opt.local_tol / err));
        }
    }

    res.populations.resize(static_cast<std::size_t>(dim));
    double norm = 0.0;
    for (int k = 0; k < dim; ++k) {
        res.populations[static_cast<std::size_t>(k)] = std::norm(psi[static_cast<std::size_t>(k)]);
        norm += res.populations[static_cast<std::size_t>(k)];
    }
    for (int k = 1; k < dim; ++k) res.transfer += res.populations[static_cast<std::size_t>(k)];
    res.norm_drift = std::abs(norm - 1.0);
    return res;
}

}  // namespace rff
