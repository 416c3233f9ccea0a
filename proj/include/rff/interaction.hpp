// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

#include "rff/atomic_data.hpp"

namespace rff {

// Relative geometry of one atom pair. cos_theta is the cosine of the angle
// between the interatomic axis and the quantization (field) axis. With
// orientation_averaged set, the angular factor is replaced by its RMS value
// sqrt(<(1-3cos^2)^2>) = sqrt(4/5).
struct PairGeometry {
    double r_um = 10.0;
    double cos_theta = 0.0;
    bool orientation_averaged = false;
};

// Channel with member states resolved and the collective polarizability
// prepared: alpha_ch = sum(final alphas) - sum(initial alphas), so that
// defect(F) = delta0 - alpha_ch F^2 / 2.
struct ResolvedChannel {
    InteractionChannel meta;
    RydbergState initial_states[2];
    RydbergState final_states[2];
    double alpha_ch_mhz_vcm2 = 0.0;

    // true when the initial pair lies above the final pair at zero field;
    // fixes the sign in pair_shift.
    bool pp_above() const { return meta.delta0_mhz < 0.0; }
};

inline ResolvedChannel resolve_channel(const ParameterSet& ps, std::string_view label)
{
    const auto& c = ps.channel(label);
    ResolvedChannel rc;
    rc.meta = c;
    rc.initial_states[0] = ps.state(c.initial_labels[0]);
    rc.initial_states[1] = ps.state(c.initial_labels[1]);
    rc.final_states[0] = ps.state(c.final_labels[0]);
    rc.final_states[1] = ps.state(c.final_labels[1]);
    rc.alpha_ch_mhz_vcm2 = rc.final_states[0].alpha_mhz_vcm2 + rc.final_states[1].alpha_mhz_vcm2 -
                           rc.initial_states[0].alpha_mhz_vcm2 - rc.initial_states[1].alpha_mhz_vcm2;
    return rc;
}

// Field-dependent collective defect Delta(F) in MHz, even in F.
inline double forster_defect(const ResolvedChannel& c, double f_dc_vcm)
{
    if (!std::isfinite(f_dc_vcm))
        throw std::invalid_argument("forster_defect: non-finite field");
    return c.meta.delta0_mhz - 0.5 * c.alpha_ch_mhz_vcm2 * f_dc_vcm * f_dc_vcm;
}

// d(Delta)/dF in MHz/(V/cm); the quadratic Stark model makes this exact.
inline double forster_defect_slope(const ResolvedChannel& c, double f_dc_vcm)
{
    return -c.alpha_ch_mhz_vcm2 * f_dc_vcm;
}

// Whether a dc field alone can tune the defect to zero.
inline bool dc_accessible(const ResolvedChannel& c)
{
    if (c.meta.delta0_mhz == 0.0) return true;
    if (c.alpha_ch_mhz_vcm2 == 0.0) return false;
    return (c.meta.delta0_mhz > 0.0) == (c.alpha_ch_mhz_vcm2 > 0.0);
}

// Dipole-dipole matrix element V(R, theta) = C3 (1 - 3 cos^2 theta) / R^3, MHz.
inline double dd_coupling(const ResolvedChannel& c, const PairGeometry& g)
{
    if (!(g.r_um > 0.0))
        throw std::invalid_argument("dd_coupling: R must be positive");
    if (std::abs(g.cos_theta) > 1.0)
        throw std::invalid_argument("dd_coupling: |cos_theta| must be <= 1");
    const double angular = g.orientation_averaged
                               ? std::sqrt(4.0 / 5.0)
                               : 1.0 - 3.0 * g.cos_theta * g.cos_theta;
    return c.meta.c3_mhz_um3 * angular / (g.r_um * g.r_um * g.r_um);
}

// Energy shift of the initial pair state at coupling V and defect Delta:
//   |dE| = sqrt(Delta^2/4 + 2 V^2) - |Delta|/2,
// positive when the initial pair lies above the final pair.
inline double pair_shift(double v_mhz, double delta_mhz, bool pp_above)
{
    if (!std::isfinite(v_mhz) || !std::isfinite(delta_mhz))
        throw std::invalid_argument("pair_shift: non-finite input");
    const double mag =
        std::sqrt(0.25 * delta_mhz * delta_mhz + 2.0 * v_mhz * v_mhz) - 0.5 * std::abs(delta_mhz);
    return pp_above ? mag : -mag;
}

// Van der Waals limit C6/R^6 in MHz (C6 given in GHz um^6).
inline double vdw_energy(double c6_ghz_um6, double r_um)
{
    if (!(r_um > 0.0))
        throw std::invalid_argument("vdw_energy: R must be positive");
    const double r3 = r_um * r_um * r_um;
    return 1.0e3 * c6_ghz_um6 / (r3 * r3);
}

// Resonant dipole-dipole energy unlocked when an rf field compensates the
// defect: pair_shift evaluated at Delta = 0.
inline double rf_tuned_dd_strength(const ResolvedChannel& c, const PairGeometry& g)
{
    return pair_shift(dd_coupling(c, g), 0.0, c.pp_above());
}

}  // namespace rff
