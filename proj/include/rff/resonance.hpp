// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rff/interaction.hpp"
#include "rff/stark_floquet.hpp"

namespace rff {

// One dc field at which the defect matches m rf quanta: Delta(F) = m freq_rf.
struct ResonanceLocus {
    int order_m = 0;
    double f_resonance_vcm = 0.0;
    double defect_slope_mhz_per_vcm = 0.0;  // d(Delta)/dF at the locus
    double freq_rf_mhz = 0.0;
    bool degenerate = false;  // root with vanishing slope (flagged, not refined)
};

inline constexpr double resonance_residual_tol_mhz = 1e-6;

namespace detail {

// Bisection on a bracketed sign change of f, to |f| < tol or width exhaustion.
template <class F>
inline double bisect_root(const F& f, double lo, double hi, double f_lo, double tol)
{
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) < tol || 0.5 * (hi - lo) < 1e-15 * std::max(1.0, std::abs(mid)))
            return mid;
        if ((fm < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// All roots of Delta(F) - m freq_rf on [f_lo, f_hi] for each order in
// [m_lo, m_hi]: coarse scan (default 2000 points) brackets sign changes,
// bisection refines each to |residual| < 1e-6 MHz. Sorted by field.
inline std::vector<ResonanceLocus> find_resonances(const ResolvedChannel& ch, double freq_rf_mhz,
                                                   double f_lo, double f_hi, int m_lo, int m_hi,
                                                   int scan_points = 2000)
{
    if (!(freq_rf_mhz > 0.0))
        throw std::invalid_argument("find_resonances: freq_rf must be > 0");
    if (!(f_lo >= 0.0) || !(f_hi > f_lo))
        throw std::invalid_argument("find_resonances: need 0 <= F_lo < F_hi");
    if (m_lo > m_hi)
        throw std::invalid_argument("find_resonances: empty order range");
    if (scan_points < 2)
        throw std::invalid_argument("find_resonances: need at least 2 scan points");

    std::vector<ResonanceLocus> loci;
    const double h = (f_hi - f_lo) / (scan_points - 1);
    for (int m = m_lo; m <= m_hi; ++m) {
        const double target = m * freq_rf_mhz;
        auto g = [&](double f) { return forster_defect(ch, f) - target; };
        double prev_f = f_lo;
        double prev_g = g(prev_f);
        for (int i = 1; i < scan_points; ++i) {
            const double cur_f = (i == scan_points - 1) ? f_hi : f_lo + i * h;
            const double cur_g = g(cur_f);
            double root = 0.0;
            bool found = false;
            if (prev_g == 0.0) {
                root = prev_f;
                found = true;
            } else if ((prev_g < 0.0) != (cur_g < 0.0)) {
                root = detail::bisect_root(g, prev_f, cur_f, prev_g, resonance_residual_tol_mhz);
                found = true;
            } else if (i == scan_points - 1 && cur_g == 0.0) {
                root = cur_f;
                found = true;
            }
            if (found) {
                ResonanceLocus loc;
                loc.order_m = m;
                loc.f_resonance_vcm = root;
                loc.defect_slope_mhz_per_vcm = forster_defect_slope(ch, root);
                loc.freq_rf_mhz = freq_rf_mhz;
                loc.degenerate = std::abs(loc.defect_slope_mhz_per_vcm) < 1e-9;
                loci.push_back(loc);
            }
            prev_f = cur_f;
            prev_g = cur_g;
        }
    }
    std::sort(loci.begin(), loci.end(), [](const ResonanceLocus& a, const ResonanceLocus& b) {
        return a.f_resonance_vcm < b.f_resonance_vcm;
    });
    // a root landing exactly on a scan point is seen by both adjacent segments
    loci.erase(std::unique(loci.begin(), loci.end(),
                           [](const ResonanceLocus& a, const ResonanceLocus& b) {
                               return a.order_m == b.order_m &&
                                      std::abs(a.f_resonance_vcm - b.f_resonance_vcm) < 1e-7;
                           }),
               loci.end());
    return loci;
}

// Converts a field width at a locus into the equivalent frequency width.
inline double field_to_frequency_width(const ResonanceLocus& loc, double width_field_vcm)
{
    if (loc.degenerate || loc.defect_slope_mhz_per_vcm == 0.0)
        throw std::invalid_argument("field_to_frequency_width: zero defect slope at locus");
    return std::abs(loc.defect_slope_mhz_per_vcm) * width_field_vcm;
}

namespace detail {

// Discrete convolution c[s] = sum_i a[i] b[s-i] of two centered sequences.
inline std::vector<double> convolve_centered(const std::vector<double>& a,
                                             const std::vector<double>& b)
{
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t k = 0; k < b.size(); ++k) c[i + k] += a[i] * b[k];
    }
    return c;
}

inline std::vector<double> reversed(std::vector<double> v)
{
    std::reverse(v.begin(), v.end());
    return v;
}

}  // namespace detail

// Effective weight of the order-m resonance: the coherent sum of sideband
// amplitude products over all four-state order assignments with
// m_i1 + m_i2 - m_f1 - m_f2 = m. Returned as |.|, the factor multiplying V in
// the transfer model. Computed as a chained convolution of the four amplitude
// sequences (final-state sequences order-reversed).
inline std::vector<double> resonance_strength_row(const SidebandTable& i1, const SidebandTable& i2,
                                                  const SidebandTable& f1, const SidebandTable& f2)
{
    using detail::convolve_centered;
    using detail::reversed;
    auto c = convolve_centered(i1.amplitudes, i2.amplitudes);
    c = convolve_centered(c, reversed(f1.amplitudes));
    return convolve_centered(c, reversed(f2.amplitudes));  // center index shifts to sum of m_max
}

inline double resonance_strength(int order_m, const SidebandTable& i1, const SidebandTable& i2,
                                 const SidebandTable& f1, const SidebandTable& f2)
{
    const int span = i1.m_max + i2.m_max + f1.m_max + f2.m_max;
    if (std::abs(order_m) > span)
        throw TruncationError("resonance_strength: order " + std::to_string(order_m) +
                              " exceeds combined sideband truncation " + std::to_string(span));
    const auto row = resonance_strength_row(i1, i2, f1, f2);
    return std::abs(row[static_cast<std::size_t>(order_m + span)]);
}

// Convenience: weight of a locus for a channel under a drive whose dc field
// sits at the locus. Sideband truncations are chosen automatically. The locus
// with defect +m freq_rf couples through the order -m assignment sum: the
// defect's phase factor enters the transfer amplitude as exp(+i chi), so its
// resonant Fourier coefficient is the -m one (verified against exact
// integration; the asymmetry is a second-order effect of the 2-omega term).
inline double resonance_strength(const ResolvedChannel& ch, const ResonanceLocus& loc,
                                 const FieldDrive& drive)
{
    if (std::abs(drive.f_dc_vcm - loc.f_resonance_vcm) > 1e-9)
        throw std::invalid_argument("resonance_strength: drive.f_dc must sit at the locus");
    if (drive.f_rf_vcm == 0.0)  // undriven tables are exact delta_m0 at any order
        return loc.order_m == 0 ? 1.0 : 0.0;
    const auto t_i1 = sideband_table(ch.initial_states[0], drive);
    const auto t_i2 = sideband_table(ch.initial_states[1], drive);
    const auto t_f1 = sideband_table(ch.final_states[0], drive);
    const auto t_f2 = sideband_table(ch.final_states[1], drive);
    return resonance_strength(-loc.order_m, t_i1, t_i2, t_f1, t_f2);
}

}  // namespace rff
