// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rff/evolve.hpp"
#include "rff/gen_bessel.hpp"
#include "rff/interaction.hpp"
#include "rff/resonance.hpp"
#include "rff/rng.hpp"
#include "rff/version.hpp"

namespace rff {

enum class VolumeShape { sphere_uniform, gaussian };
enum class SpectrumBackend { sideband, integrator };

// Monte Carlo ensemble description. n_atoms is the largest atom number
// simulated; transfer fractions are reported for every N in [2, n_atoms].
// volume_size_um is the sphere diameter (sphere_uniform) or 4 sigma
// (gaussian). detection_efficiency < 1 folds the scan through the binomial
// detection model at the end.
struct EnsembleConfig {
    int n_atoms = 5;
    double volume_size_um = 35.0;
    VolumeShape shape = VolumeShape::sphere_uniform;
    int samples = 500;
    std::uint64_t seed = 1;
    double interaction_time_us = 3.0;
    double detection_efficiency = 1.0;

    void validate() const
    {
        if (n_atoms < 2 || n_atoms > 5)
            throw std::invalid_argument("EnsembleConfig: n_atoms must be in [2, 5]");
        if (!(volume_size_um > 0.0))
            throw std::invalid_argument("EnsembleConfig: volume_size must be > 0");
        if (samples < 1)
            throw std::invalid_argument("EnsembleConfig: samples must be >= 1");
        if (!(interaction_time_us > 0.0))
            throw std::invalid_argument("EnsembleConfig: interaction_time must be > 0");
        if (!(detection_efficiency > 0.0) || detection_efficiency > 1.0)
            throw std::invalid_argument("EnsembleConfig: detection_efficiency must be in (0, 1]");
    }
};

// Atom-number-resolved transfer spectrum over a dc-field grid. s[n][g] is the
// mean fraction of atoms found in the first final state (one atom per
// transferred pair) for atom number n at grid point g; stderr_of_mean[n][g]
// the Monte Carlo standard error.
struct SpectrumScan {
    std::vector<double> f_grid_vcm;
    FieldDrive drive_template;  // f_dc swept along the grid
    std::map<int, std::vector<double>> s;
    std::map<int, std::vector<double>> stderr_of_mean;
    std::string channel_label;
    EnsembleConfig config;
    SpectrumBackend backend = SpectrumBackend::sideband;
    long dropped_evolutions = 0;
    std::string version = version_string;
};

namespace detail {

inline Position sample_position(SplitMix64& rng, const EnsembleConfig& cfg)
{
    if (cfg.shape == VolumeShape::sphere_uniform) {
        // rejection sampling in the unit ball, scaled to the radius
        const double radius = 0.5 * cfg.volume_size_um;
        for (;;) {
            const double x = rng.uniform(-1.0, 1.0);
            const double y = rng.uniform(-1.0, 1.0);
            const double z = rng.uniform(-1.0, 1.0);
            if (x * x + y * y + z * z <= 1.0)
                return {radius * x, radius * y, radius * z};
        }
    }
    // isotropic gaussian, sigma = size/4, via Box-Muller
    const double sigma = 0.25 * cfg.volume_size_um;
    auto normal = [&]() {
        double u1 = rng.uniform01();
        while (u1 <= 0.0) u1 = rng.uniform01();
        const double u2 = rng.uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    };
    return {sigma * normal(), sigma * normal(), sigma * normal()};
}

struct SampleGeometry {
    std::vector<Position> positions;       // n_atoms entries
    std::vector<double> coupling2_prefix;  // sum of V_ij^2 over ordered pairs i,j < N
    double rf_phase = 0.0;
};

// Draw every sample's geometry once; grid points and both backends then see
// identical ensembles (common random numbers).
inline std::vector<SampleGeometry> draw_samples(const ResolvedChannel& ch,
                                                const EnsembleConfig& cfg)
{
    std::vector<SampleGeometry> out(static_cast<std::size_t>(cfg.samples));
    for (int sidx = 0; sidx < cfg.samples; ++sidx) {
        auto rng = sample_stream(cfg.seed, static_cast<std::uint64_t>(sidx));
        auto& g = out[static_cast<std::size_t>(sidx)];
        g.positions.reserve(static_cast<std::size_t>(cfg.n_atoms));
        for (int a = 0; a < cfg.n_atoms; ++a) g.positions.push_back(sample_position(rng, cfg));
        g.rf_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

        g.coupling2_prefix.assign(static_cast<std::size_t>(cfg.n_atoms) + 1, 0.0);
        for (int n = 2; n <= cfg.n_atoms; ++n) {
            double add = 0.0;
            for (int i = 0; i < n - 1; ++i) {
                const auto& a = g.positions[static_cast<std::size_t>(i)];
                const auto& b = g.positions[static_cast<std::size_t>(n - 1)];
                const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
                const double r2 = dx * dx + dy * dy + dz * dz;
                const double v = ch.meta.c3_mhz_um3 * (1.0 - 3.0 * dz * dz / r2) /
                                 (std::sqrt(r2) * r2);
                add += 2.0 * v * v;  // ordered pairs (i,j) and (j,i)
            }
            g.coupling2_prefix[static_cast<std::size_t>(n)] =
                g.coupling2_prefix[static_cast<std::size_t>(n - 1)] + add;
        }
    }
    return out;
}

// Fast backend: the degenerate single-flip manifold reduces the N-body
// problem to a two-level system |all-initial> <-> |bright> with coupling
// V_eff = sqrt(sum over ordered pairs V_ij^2). Under the rf drive the
// transition splits into sideband lines of weight w_m at detunings
// Delta_static - m freq_rf; lines are summed incoherently (they are separated
// by freq_rf) and the total is clamped at 1.
inline double sideband_model_transfer(double v_eff, double delta_static, double t_us,
                                      double freq_rf, const std::vector<double>& w_row, int m_max)
{
    double p = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        // the line resonant at delta_static = m freq_rf carries the A_{-m}
        // Fourier coefficient of the defect's phase factor; the 2-omega term
        // makes the +-m weights asymmetric
        const double w = w_row[static_cast<std::size_t>(-m + m_max)];
        if (std::abs(w) < 1e-9) continue;
        const double g = std::abs(w) * v_eff;
        const double delta = delta_static - m * freq_rf;
        const double omega = std::sqrt(g * g + 0.25 * delta * delta);
        if (omega == 0.0) continue;
        const double sn = std::sin(2.0 * std::numbers::pi * omega * t_us);
        p += (g * g) / (omega * omega) * sn * sn;
    }
    return std::min(p, 1.0);
}

struct Accumulator {
    double sum = 0.0;
    double sum2 = 0.0;
    long count = 0;

    void add(double x)
    {
        sum += x;
        sum2 += x * x;
        ++count;
    }
    double mean() const { return count > 0 ? sum / count : 0.0; }
    double stderr_of_mean() const
    {
        if (count < 2) return 0.0;
        const double m = mean();
        const double var = std::max(0.0, (sum2 - count * m * m) / (count - 1));
        return std::sqrt(var / count);
    }
};

}  // namespace detail

// Normalized P(true M | detected N) weights under binomial thinning of the
// true-number distribution p_true at the given detection efficiency.
inline std::map<int, double> detection_weights(int n_detected, double efficiency,
                                               const std::map<int, double>& p_true)
{
    if (!(efficiency > 0.0) || efficiency > 1.0)
        throw std::invalid_argument("detection_weights: efficiency must be in (0, 1]");

    auto binom = [](int m, int n) {
        double b = 1.0;
        for (int k = 0; k < n; ++k) b = b * (m - k) / (k + 1);
        return b;
    };

    std::map<int, double> w;
    double wsum = 0.0;
    for (const auto& [m, pm] : p_true) {
        if (m < n_detected || pm <= 0.0) continue;
        const double v = pm * binom(m, n_detected) * std::pow(efficiency, n_detected) *
                         std::pow(1.0 - efficiency, m - n_detected);
        w[m] = v;
        wsum += v;
    }
    if (wsum > 0.0)
        for (auto& [m, v] : w) v /= wsum;
    return w;
}

// Binomial detection-efficiency mixing: for detected atom number N, the
// expected signal is the average of the true-M signals weighted by
// P(M | detected N). A detected subsample is unbiased in the transferred
// fraction, so mixing the fractions is exact. efficiency = 1 is the identity.
inline std::map<int, double> detection_mixing(const std::map<int, double>& s_true,
                                              double efficiency,
                                              const std::map<int, double>& p_true)
{
    std::map<int, double> out;
    for (const auto& [n, unused] : s_true) {
        (void)unused;
        const auto w = detection_weights(n, efficiency, p_true);
        double acc = 0.0;
        for (const auto& [m, wm] : w) {
            const auto it = s_true.find(m);
            if (it == s_true.end())
                throw std::invalid_argument("detection_mixing: p_true includes M = " +
                                            std::to_string(m) + " with no S value");
            acc += wm * it->second;
        }
        out[n] = acc;
    }
    return out;
}

// Flat key-value text form of EnsembleConfig ('#' comments allowed):
//   n_atoms 5
//   volume_size_um 35
//   volume_shape sphere-uniform | gaussian
//   samples 500
//   seed 1
//   interaction_time_us 3
//   detection_efficiency 1
inline EnsembleConfig parse_ensemble_config(std::string_view text,
                                            EnsembleConfig base = EnsembleConfig{})
{
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        ++line_no;
        const auto eol = text.find('\n', pos);
        std::string line(text.substr(pos, eol == std::string_view::npos ? eol : eol - pos));
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string key, value;
        if (!(ss >> key)) continue;
        if (!(ss >> value) || (ss >> std::ws, !ss.eof()))
            throw std::invalid_argument("ensemble config line " + std::to_string(line_no) +
                                        ": expected 'key value'");
        try {
            if (key == "n_atoms")
                base.n_atoms = std::stoi(value);
            else if (key == "volume_size_um")
                base.volume_size_um = std::stod(value);
            else if (key == "volume_shape")
                base.shape = (value == "gaussian") ? VolumeShape::gaussian
                             : (value == "sphere-uniform")
                                 ? VolumeShape::sphere_uniform
                                 : throw std::invalid_argument("unknown volume_shape " + value);
            else if (key == "samples")
                base.samples = std::stoi(value);
            else if (key == "seed")
                base.seed = std::stoull(value);
            else if (key == "interaction_time_us")
                base.interaction_time_us = std::stod(value);
            else if (key == "detection_efficiency")
                base.detection_efficiency = std::stod(value);
            else
                throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("ensemble config line " + std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
    base.validate();
    return base;
}

// Atom-number-resolved spectrum over f_grid. Per sample, the transfer
// probability P into the flipped manifold comes from the chosen backend; the
// recorded signal is P/N, the mean fraction of atoms ending in the first
// final state (each transferred pair parks exactly one of N atoms there,
// which caps a disordered ensemble's time-averaged signal at 0.25).
// Threading is over grid points; per-point accumulation runs in sample order,
// so results are bit-identical for every thread count.
inline SpectrumScan simulate_spectrum(const ResolvedChannel& ch, const EnsembleConfig& cfg,
                                      const FieldDrive& drive_template,
                                      const std::vector<double>& f_grid,
                                      SpectrumBackend backend = SpectrumBackend::sideband,
                                      int n_threads = 1)
{
    cfg.validate();
    if (f_grid.empty())
        throw std::invalid_argument("simulate_spectrum: empty field grid");
    for (std::size_t i = 1; i < f_grid.size(); ++i)
        if (!(f_grid[i] > f_grid[i - 1]))
            throw std::invalid_argument("simulate_spectrum: grid must be strictly increasing");
    if (n_threads < 1) n_threads = 1;

    const auto samples = detail::draw_samples(ch, cfg);
    const double t_us = cfg.interaction_time_us;
    const bool rf_on = drive_template.f_rf_vcm > 0.0;

    SpectrumScan scan;
    scan.f_grid_vcm = f_grid;
    scan.drive_template = drive_template;
    scan.channel_label = ch.meta.label;
    scan.config = cfg;
    scan.backend = backend;
    for (int n = 2; n <= cfg.n_atoms; ++n) {
        scan.s[n].assign(f_grid.size(), 0.0);
        scan.stderr_of_mean[n].assign(f_grid.size(), 0.0);
    }

    std::vector<long> dropped_per_point(f_grid.size(), 0);

    auto run_point = [&](std::size_t gi) {
        FieldDrive drive = drive_template;
        drive.f_dc_vcm = f_grid[gi];
        drive.validate();

        // channel sideband weights at this dc field (fast backend)
        std::vector<double> w_row{1.0};
        int m_max = 0;
        double delta_static = forster_defect(ch, drive.f_dc_vcm);
        if (rf_on) {
            // net phase-modulation arguments of the defect; the ac Stark term
            // shifts the static defect
            const double a_net = -ch.alpha_ch_mhz_vcm2;
            const double x = sideband_arg_x(a_net, drive);
            const double y = sideband_arg_y(a_net, drive);
            m_max = gb_auto_order(x, y);
            w_row = generalized_bessel_row(m_max, x, y);
            delta_static -= 0.25 * ch.alpha_ch_mhz_vcm2 * drive.f_rf_vcm * drive.f_rf_vcm;
        }

        std::vector<detail::Accumulator> acc(static_cast<std::size_t>(cfg.n_atoms) + 1);
        for (const auto& smp : samples) {
            for (int n = 2; n <= cfg.n_atoms; ++n) {
                double transfer = 0.0;
                if (backend == SpectrumBackend::sideband) {
                    const double v_eff =
                        std::sqrt(smp.coupling2_prefix[static_cast<std::size_t>(n)]);
                    transfer = detail::sideband_model_transfer(v_eff, delta_static, t_us,
                                                               drive.freq_rf_mhz, w_row, m_max);
                } else {
                    try {
                        std::vector<Position> pos(smp.positions.begin(),
                                                  smp.positions.begin() + n);
                        transfer =
                            evolve_collective(pos, ch, drive, smp.rf_phase, t_us).transfer;
                    } catch (const StepUnderflowError&) {
                        ++dropped_per_point[gi];
                        continue;
                    }
                }
                acc[static_cast<std::size_t>(n)].add(transfer / n);
            }
        }
        for (int n = 2; n <= cfg.n_atoms; ++n) {
            // keys were created before the worker pool started; at() keeps the
            // concurrent map access insert-free
            scan.s.at(n)[gi] = acc[static_cast<std::size_t>(n)].mean();
            scan.stderr_of_mean.at(n)[gi] = acc[static_cast<std::size_t>(n)].stderr_of_mean();
        }
    };

    if (n_threads == 1) {
        for (std::size_t gi = 0; gi < f_grid.size(); ++gi) run_point(gi);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t gi = next.fetch_add(1);
                    if (gi >= f_grid.size()) return;
                    run_point(gi);
                }
            });
        for (auto& th : pool) th.join();
    }

    for (long d : dropped_per_point) scan.dropped_evolutions += d;
    const long total = static_cast<long>(f_grid.size()) * cfg.samples * (cfg.n_atoms - 1);
    if (backend == SpectrumBackend::integrator && scan.dropped_evolutions * 100 > total)
        throw std::runtime_error("simulate_spectrum: more than 1% of evolutions failed (" +
                                 std::to_string(scan.dropped_evolutions) + " of " +
                                 std::to_string(total) + ")");

    if (cfg.detection_efficiency < 1.0) {
        // uniform true-number distribution over the simulated range
        std::map<int, double> p_true;
        for (int n = 2; n <= cfg.n_atoms; ++n) p_true[n] = 1.0;
        for (std::size_t gi = 0; gi < f_grid.size(); ++gi) {
            std::map<int, double> s_true;
            for (int n = 2; n <= cfg.n_atoms; ++n) s_true[n] = scan.s[n][gi];
            const auto s_det = detection_mixing(s_true, cfg.detection_efficiency, p_true);
            std::map<int, double> e_det;
            for (int n = 2; n <= cfg.n_atoms; ++n) {
                double var = 0.0;
                for (const auto& [m, wm] : detection_weights(n, cfg.detection_efficiency, p_true))
                    var += wm * wm * scan.stderr_of_mean[m][gi] * scan.stderr_of_mean[m][gi];
                e_det[n] = std::sqrt(var);
            }
            for (int n = 2; n <= cfg.n_atoms; ++n) {
                scan.s[n][gi] = s_det.at(n);
                scan.stderr_of_mean[n][gi] = e_det.at(n);
            }
        }
    }
    return scan;
}

}  // namespace rff
