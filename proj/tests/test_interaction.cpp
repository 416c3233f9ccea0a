// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "rff/interaction.hpp"

using namespace rff;

namespace {

const ParameterSet& reference()
{
    static const ParameterSet ps = load_parameters(std::string(RFF_DATA_DIR) + "/rb.params");
    return ps;
}

// Synthetic channel for the high-n enhancement chain: delta0 = +213 MHz
// (initial pair below the final pair), C3 chosen so that V at 10 um and
// cos_theta = 0 equals the value back-computed from |C6| = 1500 GHz um^6 via
// C6 = 2 V^2 R^6 / Delta.
ResolvedChannel synthetic_70p()
{
    const double delta = 213.0;
    const double r = 10.0;
    const double c6_mhz_um6 = 1500.0 * 1e3;
    const double v = std::sqrt(c6_mhz_um6 * delta / (2.0 * std::pow(r, 6.0)));
    ParameterSet ps;
    auto add = [&](const char* lbl, int n, int l, double j, double e0) {
        RydbergState s;
        s.label = lbl;
        s.n = n;
        s.l = l;
        s.j = j;
        s.abs_mj = 0.5;
        s.energy0_mhz = e0;
        s.alpha_mhz_vcm2 = 0.0;
        ps.states.push_back(s);
    };
    add("70P", 70, 1, 1.5, 0.0);
    add("70S", 70, 0, 0.5, 106.5);
    add("71S", 71, 0, 0.5, 106.5);
    InteractionChannel c;
    c.label = "70P";
    c.initial_labels = {"70P", "70P"};
    c.final_labels = {"70S", "71S"};
    c.delta0_mhz = delta;
    c.c3_mhz_um3 = v * r * r * r;
    ps.channels.push_back(c);
    return resolve_channel(ps, "70P");
}

}  // namespace

TEST_CASE("forster_defect: zero-field value, parity, channel accessibility")
{
    const auto c37 = resolve_channel(reference(), "37P");
    const auto c39 = resolve_channel(reference(), "39P");

    CHECK(forster_defect(c37, 0.0) == c37.meta.delta0_mhz);
    CHECK(forster_defect(c37, 1.2) == forster_defect(c37, -1.2));

    // calibrated zero crossing at 1.79 V/cm
    CHECK(std::abs(forster_defect(c37, 1.79)) < 1e-9);

    // 39 channel: |defect| strictly increasing in F
    double prev = std::abs(forster_defect(c39, 0.0));
    for (double f = 0.25; f <= 3.0; f += 0.25) {
        const double cur = std::abs(forster_defect(c39, f));
        CHECK(cur > prev);
        prev = cur;
    }

    CHECK(dc_accessible(c37));
    CHECK(!dc_accessible(c39));
}

TEST_CASE("dd_coupling geometry")
{
    const auto c37 = resolve_channel(reference(), "37P");
    const double c3 = c37.meta.c3_mhz_um3;

    CHECK(dd_coupling(c37, {10.0, 0.0, false}) == doctest::Approx(c3 / 1000.0));
    CHECK(dd_coupling(c37, {10.0, std::sqrt(1.0 / 3.0), false}) == doctest::Approx(0.0).scale(1e-3));
    CHECK(dd_coupling(c37, {20.0, 0.0, false}) == doctest::Approx(c3 / 8000.0));
    CHECK(dd_coupling(c37, {10.0, 0.7, true}) ==
          doctest::Approx(std::sqrt(0.8) * c3 / 1000.0));  // averaged form ignores cos_theta
    CHECK_THROWS_AS(dd_coupling(c37, {0.0, 0.0, false}), std::invalid_argument);
}

TEST_CASE("pair_shift limits, signs and asymptotics")
{
    CHECK(pair_shift(3.0, 0.0, true) == doctest::Approx(std::sqrt(2.0) * 3.0));
    CHECK(pair_shift(-3.0, 0.0, true) == doctest::Approx(std::sqrt(2.0) * 3.0));
    CHECK(pair_shift(3.0, 0.0, false) == doctest::Approx(-std::sqrt(2.0) * 3.0));
    CHECK(pair_shift(0.0, 17.0, true) == 0.0);

    // vdW limit: within 1% of 2V^2/|Delta| once |Delta| >= 20 |V|
    std::mt19937_64 rng(314u);
    std::uniform_real_distribution<double> uv(0.01, 5.0), uratio(20.0, 500.0);
    for (int i = 0; i < 200; ++i) {
        const double v = uv(rng);
        const double delta = uratio(rng) * v;
        const double exact = pair_shift(v, delta, true);
        const double vdw = 2.0 * v * v / delta;
        CHECK(std::abs(exact - vdw) / vdw < 0.01);
    }

    // evenness and monotonicity
    std::uniform_real_distribution<double> ud(-40.0, 40.0);
    for (int i = 0; i < 100; ++i) {
        const double v = uv(rng), d = ud(rng);
        CHECK(pair_shift(v, d, true) == pair_shift(-v, d, true));
        CHECK(pair_shift(v, d, true) == pair_shift(v, -d, true));
        CHECK(pair_shift(v, d, true) >= pair_shift(v, 1.5 * std::abs(d) + 0.1, true));
        CHECK(pair_shift(v + 0.1, d, true) > pair_shift(v, d, true));
    }
}

TEST_CASE("vdw_energy conversion and scaling")
{
    CHECK(vdw_energy(-1500.0, 10.0) == doctest::Approx(-1.5));
    CHECK(vdw_energy(-1500.0, 20.0) == doctest::Approx(-1.5 / 64.0));

    // consistency with the large-defect limit of pair_shift at V = dd_coupling
    const auto syn = synthetic_70p();
    std::mt19937_64 rng(2718u);
    std::uniform_real_distribution<double> ur(8.0, 30.0);
    for (int i = 0; i < 50; ++i) {
        const double r = ur(rng);
        const double v = dd_coupling(syn, {r, 0.0, false});
        const double delta = syn.meta.delta0_mhz;
        if (std::abs(delta) < 20.0 * std::abs(v)) continue;
        const double c6_ghz = 2.0 * v * v * std::pow(r, 6.0) / delta / 1e3;
        const double lim = vdw_energy(c6_ghz, r);
        const double exact = pair_shift(v, delta, syn.pp_above());
        CHECK(std::abs(std::abs(exact) - std::abs(lim)) / std::abs(lim) < 0.01);
    }
}

TEST_CASE("high-n enhancement chain: 1.5 MHz vdW to ~18 MHz resonant DD at 10 um")
{
    const auto syn = synthetic_70p();
    const PairGeometry g{10.0, 0.0, false};

    CHECK(std::abs(vdw_energy(-1500.0, 10.0)) == doctest::Approx(1.5));
    const double v = dd_coupling(syn, g);
    CHECK(v == doctest::Approx(12.639).epsilon(1e-3));

    const double dd = rf_tuned_dd_strength(syn, g);
    CHECK(!syn.pp_above());
    CHECK(std::abs(dd) == doctest::Approx(18.0).epsilon(0.05));
    CHECK(std::abs(dd) / 1.5 == doctest::Approx(12.0).epsilon(0.10));

    CHECK(rf_tuned_dd_strength(syn, {10.0, std::sqrt(1.0 / 3.0), false}) ==
          doctest::Approx(0.0).scale(1e-3));
}
