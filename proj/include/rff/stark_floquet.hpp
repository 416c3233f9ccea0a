// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rff/atomic_data.hpp"
#include "rff/gen_bessel.hpp"

namespace rff {

// Raised when a sideband table's truncation order is too small to satisfy the
// Parseval completeness bound; the caller must raise m_max.
class TruncationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Composite drive F(t) = F_dc + F_rf cos(2 pi freq_rf t). Fields in V/cm,
// freq_rf is the ordinary frequency in MHz (converted to angular form only
// inside the sideband-argument formulas, where the 2 pi factors cancel).
struct FieldDrive {
    double f_dc_vcm = 0.0;
    double f_rf_vcm = 0.0;
    double freq_rf_mhz = 0.0;

    void validate() const
    {
        if (!(f_dc_vcm >= 0.0) || !(f_rf_vcm >= 0.0))
            throw std::invalid_argument("FieldDrive: fields must be >= 0");
        if (f_rf_vcm > 0.0 && !(freq_rf_mhz > 0.0))
            throw std::invalid_argument("FieldDrive: freq_rf must be > 0 when F_rf > 0");
    }
};

// The quadratic Stark response of one level under the composite drive,
// split into its static part and the cos(wt), cos(2wt) amplitudes (MHz):
//   E(t) = energy0 + shift_static + amp_1omega cos(wt) + amp_2omega cos(2wt).
struct StarkExpansion {
    double shift_static_mhz = 0.0;
    double amp_1omega_mhz = 0.0;
    double amp_2omega_mhz = 0.0;
};

inline StarkExpansion stark_expansion(const RydbergState& s, const FieldDrive& d)
{
    d.validate();
    const double a = s.alpha_mhz_vcm2;
    StarkExpansion e;
    e.shift_static_mhz = -0.5 * a * (d.f_dc_vcm * d.f_dc_vcm + 0.5 * d.f_rf_vcm * d.f_rf_vcm);
    e.amp_1omega_mhz = -a * d.f_dc_vcm * d.f_rf_vcm;
    e.amp_2omega_mhz = -0.25 * a * d.f_rf_vcm * d.f_rf_vcm;
    return e;
}

// Dimensionless generalized-Bessel arguments of the sideband expansion for a
// level of polarizability alpha under drive d. Both are ratios of modulation
// energies to the photon energy, so ordinary-MHz units cancel the 2 pi.
inline double sideband_arg_x(double alpha_mhz_vcm2, const FieldDrive& d)
{
    return alpha_mhz_vcm2 * d.f_dc_vcm * d.f_rf_vcm / d.freq_rf_mhz;
}

inline double sideband_arg_y(double alpha_mhz_vcm2, const FieldDrive& d)
{
    return alpha_mhz_vcm2 * d.f_rf_vcm * d.f_rf_vcm / (8.0 * d.freq_rf_mhz);
}

// Floquet sideband amplitudes a_m of one level under one drive, for
// m in [-m_max, m_max]. Signed wave-function amplitudes; intensities are the
// squares and sum to 1 within eps_norm (default 1e-9) at a sufficient m_max.
struct SidebandTable {
    RydbergState state;
    FieldDrive drive;
    int m_max = 0;
    std::vector<double> amplitudes;  // index m + m_max

    double amplitude(int m) const
    {
        if (m < -m_max || m > m_max)
            throw std::out_of_range("SidebandTable: order " + std::to_string(m) +
                                    " outside truncation |m| <= " + std::to_string(m_max));
        return amplitudes[static_cast<std::size_t>(m + m_max)];
    }

    double intensity_sum() const
    {
        double s = 0.0;
        for (double a : amplitudes) s += a * a;
        return s;
    }
};

inline constexpr double sideband_norm_tolerance = 1e-9;

inline int auto_m_max(const RydbergState& s, const FieldDrive& d)
{
    if (d.f_rf_vcm == 0.0) return 0;
    return gb_auto_order(sideband_arg_x(s.alpha_mhz_vcm2, d), sideband_arg_y(s.alpha_mhz_vcm2, d));
}

inline SidebandTable sideband_table(const RydbergState& s, const FieldDrive& d, int m_max)
{
    d.validate();
    if (m_max < 0)
        throw std::invalid_argument("sideband_table: m_max must be >= 0");
    if (!(d.freq_rf_mhz > 0.0))
        throw std::invalid_argument("sideband_table: freq_rf must be > 0");

    SidebandTable t;
    t.state = s;
    t.drive = d;
    t.m_max = m_max;
    if (d.f_rf_vcm == 0.0) {
        t.amplitudes.assign(2 * static_cast<std::size_t>(m_max) + 1, 0.0);
        t.amplitudes[static_cast<std::size_t>(m_max)] = 1.0;  // undriven: a_m = delta_m0
        return t;
    }
    t.amplitudes = generalized_bessel_row(m_max, sideband_arg_x(s.alpha_mhz_vcm2, d),
                                          sideband_arg_y(s.alpha_mhz_vcm2, d));
    const double deficit = 1.0 - t.intensity_sum();
    if (deficit > sideband_norm_tolerance)
        throw TruncationError("sideband_table: normalization deficit " + std::to_string(deficit) +
                              " at m_max " + std::to_string(m_max) + "; raise m_max");
    return t;
}

inline SidebandTable sideband_table(const RydbergState& s, const FieldDrive& d)
{
    return sideband_table(s, d, auto_m_max(s, d));
}

// Energy of sideband m (MHz): the dc Stark energy plus the ac Stark shift of
// the rf drive plus m rf quanta. Adjacent orders are spaced by exactly
// freq_rf.
inline double sideband_energy(const RydbergState& s, const FieldDrive& d, int m)
{
    return stark_energy(s, d.f_dc_vcm) - 0.25 * s.alpha_mhz_vcm2 * d.f_rf_vcm * d.f_rf_vcm +
           static_cast<double>(m) * d.freq_rf_mhz;
}

struct SidebandEnergy {
    int order = 0;
    double energy_mhz = 0.0;
};

inline std::vector<SidebandEnergy> sideband_energies(const RydbergState& s, const FieldDrive& d,
                                                     int m_max)
{
    d.validate();
    if (m_max < 0)
        throw std::invalid_argument("sideband_energies: m_max must be >= 0");
    if (!(d.freq_rf_mhz > 0.0))
        throw std::invalid_argument("sideband_energies: freq_rf must be > 0");
    std::vector<SidebandEnergy> out;
    out.reserve(2 * static_cast<std::size_t>(m_max) + 1);
    for (int m = -m_max; m <= m_max; ++m)
        out.push_back({m, sideband_energy(s, d, m)});
    return out;
}

}  // namespace rff
