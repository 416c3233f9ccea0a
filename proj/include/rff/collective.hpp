// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rff/interaction.hpp"
#include "rff/stark_floquet.hpp"

namespace rff {

using Position = std::array<double, 3>;  // um, quantization axis along z

// Single-transfer collective basis for N atoms prepared in the channel's
// initial state: index 0 is |ii...i>, index 1 + k enumerates the ordered
// pairs (i, j), i != j, with atom i flipped to the first final state and atom
// j to the second. Dimension 1 + N(N-1).
struct CollectiveBasis {
    struct Flip {
        int i = 0;
        int j = 0;
    };
    int n_atoms = 0;
    std::vector<Flip> flips;

    int dim() const { return 1 + static_cast<int>(flips.size()); }
};

inline CollectiveBasis build_collective_basis(int n_atoms)
{
    if (n_atoms < 2 || n_atoms > 5)
        throw std::invalid_argument("build_collective_basis: N must be in [2, 5]");
    CollectiveBasis b;
    b.n_atoms = n_atoms;
    for (int i = 0; i < n_atoms; ++i)
        for (int j = 0; j < n_atoms; ++j)
            if (i != j) b.flips.push_back({i, j});
    return b;
}

// Dipole-dipole couplings <flip_k| H |all-initial> in MHz for one geometry.
inline std::vector<double> coupling_vector(const CollectiveBasis& b,
                                           const std::vector<Position>& pos,
                                           const ResolvedChannel& ch)
{
    if (static_cast<int>(pos.size()) != b.n_atoms)
        throw std::invalid_argument("coupling_vector: positions size mismatch");
    std::vector<double> v;
    v.reserve(b.flips.size());
    for (const auto& f : b.flips) {
        const double dx = pos[static_cast<std::size_t>(f.i)][0] - pos[static_cast<std::size_t>(f.j)][0];
        const double dy = pos[static_cast<std::size_t>(f.i)][1] - pos[static_cast<std::size_t>(f.j)][1];
        const double dz = pos[static_cast<std::size_t>(f.i)][2] - pos[static_cast<std::size_t>(f.j)][2];
        const double r2 = dx * dx + dy * dy + dz * dz;
        if (r2 < 1e-12)
            throw std::invalid_argument("coupling_vector: coincident atom positions");
        const double r = std::sqrt(r2);
        const double cos2 = (dz * dz) / r2;
        v.push_back(ch.meta.c3_mhz_um3 * (1.0 - 3.0 * cos2) / (r * r2));
    }
    return v;
}

inline double instantaneous_field(const FieldDrive& d, double t_us, double rf_phase)
{
    return d.f_dc_vcm +
           d.f_rf_vcm * std::cos(2.0 * std::numbers::pi * d.freq_rf_mhz * t_us + rf_phase);
}

// Dense real symmetric Hamiltonian (MHz, row-major) at time t: instantaneous
// quadratic Stark energies on the diagonal, couplings between the initial
// collective state and each single-flip state, no flip-flip couplings.
inline std::vector<double> hamiltonian_at(double t_us, const std::vector<Position>& pos,
                                          const ResolvedChannel& ch, const FieldDrive& drive,
                                          double rf_phase = 0.0)
{
    const auto b = build_collective_basis(static_cast<int>(pos.size()));
    const auto v = coupling_vector(b, pos, ch);
    const double f = instantaneous_field(drive, t_us, rf_phase);

    const double e_i1 = stark_energy(ch.initial_states[0], f);
    const double e_i2 = stark_energy(ch.initial_states[1], f);
    const double e_f1 = stark_energy(ch.final_states[0], f);
    const double e_f2 = stark_energy(ch.final_states[1], f);
    // all atoms share the initial state; a flip replaces one (i1, i2) pair
    const double e_atom = 0.5 * (e_i1 + e_i2);
    const double e_all = b.n_atoms * e_atom;
    const double e_flip = e_all - (e_i1 + e_i2) + e_f1 + e_f2;

    const int dim = b.dim();
    std::vector<double> h(static_cast<std::size_t>(dim) * dim, 0.0);
    h[0] = e_all;
    for (int k = 1; k < dim; ++k) {
        h[static_cast<std::size_t>(k) * dim + k] = e_flip;
        h[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(k - 1)];
        h[static_cast<std::size_t>(k) * dim] = v[static_cast<std::size_t>(k - 1)];
    }
    return h;
}

}  // namespace rff
