// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "rff/spectrum.hpp"

using namespace rff;

namespace {

const ParameterSet& reference()
{
    static const ParameterSet ps = load_parameters(std::string(RFF_DATA_DIR) + "/rb.params");
    return ps;
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("identical seed and config give bit-identical scans at any thread count")
{
    const auto ch = resolve_channel(reference(), "37P");
    EnsembleConfig cfg;
    cfg.n_atoms = 3;
    cfg.samples = 60;
    cfg.seed = 20260412;
    const auto grid = linspace(1.7, 1.9, 21);
    const FieldDrive tmpl{0.0, 0.08, 15.0};

    const auto a = simulate_spectrum(ch, cfg, tmpl, grid, SpectrumBackend::sideband, 1);
    const auto b = simulate_spectrum(ch, cfg, tmpl, grid, SpectrumBackend::sideband, 4);
    for (int n = 2; n <= 3; ++n) {
        REQUIRE(a.s.at(n).size() == b.s.at(n).size());
        for (std::size_t i = 0; i < a.s.at(n).size(); ++i) {
            CHECK(a.s.at(n)[i] == b.s.at(n)[i]);
            CHECK(a.stderr_of_mean.at(n)[i] == b.stderr_of_mean.at(n)[i]);
        }
    }

    EnsembleConfig cfg2 = cfg;
    cfg2.seed = 7;
    const auto c = simulate_spectrum(ch, cfg2, tmpl, grid, SpectrumBackend::sideband, 1);
    bool any_diff = false;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (c.s.at(2)[i] != a.s.at(2)[i]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("dc-only scan peaks at the calibrated resonance")
{
    const auto ch = resolve_channel(reference(), "37P");
    EnsembleConfig cfg;
    cfg.n_atoms = 2;
    cfg.samples = 150;
    cfg.seed = 11;
    const auto grid = linspace(1.6, 2.0, 81);
    const auto scan =
        simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, grid, SpectrumBackend::sideband, 2);

    const auto& s2 = scan.s.at(2);
    const auto it = std::max_element(s2.begin(), s2.end());
    const double f_peak = grid[static_cast<std::size_t>(it - s2.begin())];
    CHECK(std::abs(f_peak - 1.79) <= (grid[1] - grid[0]) + 1e-12);
    CHECK(*it > 0.01);
}

TEST_CASE("integrator and sideband backends agree on a small dc scan")
{
    const auto ch = resolve_channel(reference(), "37P");
    EnsembleConfig cfg;
    cfg.n_atoms = 2;
    cfg.samples = 25;
    cfg.seed = 99;
    cfg.volume_size_um = 40.0;
    const auto grid = linspace(1.77, 1.81, 5);
    const auto fast =
        simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, grid, SpectrumBackend::sideband, 1);
    const auto slow =
        simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, grid, SpectrumBackend::integrator, 2);
    CHECK(slow.dropped_evolutions == 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = fast.s.at(2)[i], b = slow.s.at(2)[i];
        CHECK(std::abs(a - b) <= 0.05 * std::max(a, b) + 1e-4);
    }
}

TEST_CASE("backends agree for three atoms on the dc resonance")
{
    const auto ch = resolve_channel(reference(), "37P");
    EnsembleConfig cfg;
    cfg.n_atoms = 3;
    cfg.samples = 30;
    cfg.seed = 123;
    const std::vector<double> grid{1.78, 1.79, 1.8};
    const auto fast =
        simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, grid, SpectrumBackend::sideband, 1);
    const auto slow =
        simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, grid, SpectrumBackend::integrator, 2);
    for (int n = 2; n <= 3; ++n)
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double a = fast.s.at(n)[i], b = slow.s.at(n)[i];
            CHECK(std::abs(a - b) <= 0.05 * std::max(a, b) + 1e-4);
        }
}

TEST_CASE("odd-order suppression at zero dc field")
{
    // artificial channel whose defect equals one rf quantum at F = 0
    ParameterSet ps = reference();
    for (auto& c : ps.channels)
        if (c.label == "37P") {
            const double shift = (15.0 - c.delta0_mhz) / 2.0;
            for (auto& s : ps.states)
                if (s.label == "37S" || s.label == "38S") s.energy0_mhz += shift;
            c.delta0_mhz = 15.0;
        }
    const auto ch = resolve_channel(ps, "37P");

    EnsembleConfig cfg;
    cfg.n_atoms = 2;
    cfg.samples = 150;
    cfg.seed = 5;
    const FieldDrive tmpl{0.0, 0.12, 15.0};

    // F = 0 satisfies Delta = 1 * freq_rf exactly; F = 0.3 V/cm sits between
    // orders. Parity kills the first-order weight, so the on-condition signal
    // must stay at the far-detuned background level.
    const auto on = simulate_spectrum(ch, cfg, tmpl, {1e-6}, SpectrumBackend::sideband, 1);
    const auto off = simulate_spectrum(ch, cfg, tmpl, {0.3}, SpectrumBackend::sideband, 1);
    const double s_on = on.s.at(2)[0], s_off = off.s.at(2)[0];
    const double noise = 3.0 * std::sqrt(on.stderr_of_mean.at(2)[0] * on.stderr_of_mean.at(2)[0] +
                                         off.stderr_of_mean.at(2)[0] * off.stderr_of_mean.at(2)[0]);
    CHECK(std::abs(s_on - s_off) <= noise + 1e-3);
    CHECK(s_on < 0.02);
}

TEST_CASE("detection mixing")
{
    const std::map<int, double> s_true{{2, 0.10}, {3, 0.15}, {4, 0.20}, {5, 0.25}};
    const std::map<int, double> uniform{{2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}};

    SUBCASE("efficiency 1 is the identity")
    {
        const auto out = detection_mixing(s_true, 1.0, uniform);
        for (const auto& [n, v] : s_true) CHECK(out.at(n) == doctest::Approx(v));
    }
    SUBCASE("degenerate true distribution at 5 passes S_5 through")
    {
        const std::map<int, double> only5{{5, 1.0}};
        const auto out = detection_mixing(s_true, 0.65, only5);
        CHECK(out.at(5) == doctest::Approx(0.25));
        // every detected N mixes only M = 5 here
        CHECK(out.at(2) == doctest::Approx(0.25));
    }
    SUBCASE("weights sum to one for every detected N")
    {
        for (int n = 2; n <= 5; ++n) {
            double sum = 0.0;
            for (const auto& [m, w] : detection_weights(n, 0.65, uniform)) {
                (void)m;
                sum += w;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("mixed signal lies between the contributing true signals")
    {
        const auto out = detection_mixing(s_true, 0.65, uniform);
        for (int n = 2; n <= 5; ++n) {
            CHECK(out.at(n) >= s_true.at(n) - 1e-12);
            CHECK(out.at(n) <= 0.25 + 1e-12);
        }
    }
}

TEST_CASE("gaussian volume shape samples a different but deterministic ensemble")
{
    const auto ch = resolve_channel(reference(), "37P");
    EnsembleConfig cfg;
    cfg.n_atoms = 2;
    cfg.samples = 50;
    cfg.seed = 31;
    EnsembleConfig gauss = cfg;
    gauss.shape = VolumeShape::gaussian;
    const std::vector<double> grid{1.79};
    const auto a = simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, grid, SpectrumBackend::sideband, 1);
    const auto b = simulate_spectrum(ch, gauss, {0.0, 0.0, 0.0}, grid, SpectrumBackend::sideband, 1);
    const auto b2 = simulate_spectrum(ch, gauss, {0.0, 0.0, 0.0}, grid, SpectrumBackend::sideband, 1);
    CHECK(a.s.at(2)[0] != b.s.at(2)[0]);
    CHECK(b.s.at(2)[0] == b2.s.at(2)[0]);
    CHECK(b.s.at(2)[0] > 0.0);
}

TEST_CASE("ensemble config text round trip")
{
    const auto cfg = parse_ensemble_config(
        "n_atoms 4\nvolume_size_um 30 # crossed beams\nvolume_shape gaussian\n"
        "samples 123\nseed 99\ninteraction_time_us 2.5\ndetection_efficiency 0.65\n");
    CHECK(cfg.n_atoms == 4);
    CHECK(cfg.volume_size_um == 30.0);
    CHECK(cfg.shape == VolumeShape::gaussian);
    CHECK(cfg.samples == 123);
    CHECK(cfg.seed == 99);
    CHECK(cfg.interaction_time_us == 2.5);
    CHECK(cfg.detection_efficiency == 0.65);
    CHECK_THROWS_AS(parse_ensemble_config("bogus 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_ensemble_config("n_atoms 9\n"), std::invalid_argument);
}

TEST_CASE("invalid configs are rejected")
{
    const auto ch = resolve_channel(reference(), "37P");
    EnsembleConfig cfg;
    cfg.n_atoms = 7;
    CHECK_THROWS_AS(
        simulate_spectrum(ch, cfg, {0.0, 0.0, 0.0}, {1.0, 1.1}, SpectrumBackend::sideband),
        std::invalid_argument);
    EnsembleConfig ok;
    CHECK_THROWS_AS(
        simulate_spectrum(ch, ok, {0.0, 0.0, 0.0}, {1.1, 1.0}, SpectrumBackend::sideband),
        std::invalid_argument);
}
