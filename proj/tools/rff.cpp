// Copyright (c) 2026 the rff developers
// SPDX-License-Identifier: Apache-2.0
//
// rff: command-line front end. Subcommands emit CSV plus a JSON manifest
// sidecar that fully determines the run; `rff replay` re-executes a manifest
// and reproduces the outputs byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rff/io.hpp"
#include "rff/resonance.hpp"
#include "rff/spectrum.hpp"
#include "rff/version.hpp"

using nlohmann::json;

namespace {

constexpr double default_rf_field_per_volt = 2.5;  // (V/cm) of rf field per volt of generator drive

std::string manifest_path(const std::string& csv_path)
{
    if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
        return csv_path.substr(0, csv_path.size() - 4) + ".meta.json";
    return csv_path + ".meta.json";
}

void write_outputs(const std::string& subcommand, const json& flags, const std::string& csv,
                   const json& summary, const json& data)
{
    const std::string out = flags.at("out").get<std::string>();
    rff::write_text_file(out, csv);

    json manifest;
    manifest["tool"] = "rff";
    manifest["version"] = rff::version_string;
    manifest["subcommand"] = subcommand;
    manifest["flags"] = flags;
    manifest["outputs"] = {{"csv", out}};
    manifest["summary"] = summary;
    if (flags.value("json", false)) manifest["data"] = data;
    rff::write_text_file(manifest_path(out), manifest.dump(2) + "\n");
}

rff::ParameterSet load_params(const json& flags)
{
    return rff::load_parameters(flags.at("params").get<std::string>());
}

double resolved_rf_amp(const json& flags)
{
    const double amp = flags.value("rf_amp_vcm", 0.0);
    const double mv = flags.value("rf_amp_mv", 0.0);
    if (amp > 0.0) return amp;
    return mv * 1e-3 * flags.value("rf_field_per_volt", default_rf_field_per_volt);
}

std::vector<double> linspace(double lo, double hi, int n)
{
    if (n < 2 || !(hi > lo))
        throw std::invalid_argument("scan range needs hi > lo and at least 2 points");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// ---------------------------------------------------------------- sidebands

void run_sidebands(const json& flags)
{
    const auto ps = load_params(flags);
    const auto& state = ps.state(flags.at("state").get<std::string>());
    rff::FieldDrive d;
    d.f_dc_vcm = flags.at("f_dc").get<double>();
    d.f_rf_vcm = resolved_rf_amp(flags);
    d.freq_rf_mhz = flags.at("rf_freq").get<double>();

    const int m_max =
        flags.value("m_max", -1) >= 0 ? flags.at("m_max").get<int>() : rff::auto_m_max(state, d);
    const auto table = rff::sideband_table(state, d, m_max);

    std::string csv = rff::csv_row({"m", "amplitude", "intensity", "energy_MHz"});
    json rows = json::array();
    for (int m = -table.m_max; m <= table.m_max; ++m) {
        const double a = table.amplitude(m);
        const double e = rff::sideband_energy(state, d, m);
        csv += rff::csv_row({std::to_string(m), rff::format_double17(a),
                             rff::format_double17(a * a), rff::format_double17(e)});
        rows.push_back({{"m", m}, {"amplitude", a}, {"intensity", a * a}, {"energy_MHz", e}});
    }

    json summary = {{"orders", 2 * table.m_max + 1}, {"intensity_sum", table.intensity_sum()}};
    write_outputs("sidebands", flags, csv, summary, rows);
    std::printf("sidebands: state %s, %d orders, intensity sum %.12f -> %s\n",
                state.label.c_str(), 2 * table.m_max + 1, table.intensity_sum(),
                flags.at("out").get<std::string>().c_str());
}

// --------------------------------------------------------------- resonances

void run_resonances(const json& flags)
{
    const auto ps = load_params(flags);
    const auto ch = rff::resolve_channel(ps, flags.at("channel").get<std::string>());
    const double freq = flags.at("rf_freq").get<double>();
    const double f_lo = flags.at("f_lo").get<double>();
    const double f_hi = flags.at("f_hi").get<double>();
    const int m_lo = flags.at("m_lo").get<int>();
    const int m_hi = flags.at("m_hi").get<int>();
    const int scan_points = flags.value("scan_points", 2000);
    const double f_rf = resolved_rf_amp(flags);

    const auto loci = rff::find_resonances(ch, freq, f_lo, f_hi, m_lo, m_hi, scan_points);

    std::string csv = rff::csv_row({"m", "F_resonance_Vcm", "defect_slope_MHz_per_Vcm", "weight"});
    json rows = json::array();
    for (const auto& loc : loci) {
        rff::FieldDrive d{loc.f_resonance_vcm, f_rf, freq};
        const double w = rff::resonance_strength(ch, loc, d);
        csv += rff::csv_row({std::to_string(loc.order_m),
                             rff::format_double17(loc.f_resonance_vcm),
                             rff::format_double17(loc.defect_slope_mhz_per_vcm),
                             rff::format_double17(w)});
        rows.push_back({{"m", loc.order_m},
                        {"F_resonance_Vcm", loc.f_resonance_vcm},
                        {"defect_slope_MHz_per_Vcm", loc.defect_slope_mhz_per_vcm},
                        {"weight", w},
                        {"degenerate", loc.degenerate}});
    }

    json summary = {{"loci", loci.size()}, {"channel", ch.meta.label}};
    write_outputs("resonances", flags, csv, summary, rows);
    std::printf("resonances: channel %s, %zu loci in [%g, %g] V/cm -> %s\n", ch.meta.label.c_str(),
                loci.size(), f_lo, f_hi, flags.at("out").get<std::string>().c_str());
}

// --------------------------------------------------------------- pair-shift

void run_pair_shift(const json& flags)
{
    const auto ps = load_params(flags);
    const auto ch = rff::resolve_channel(ps, flags.at("channel").get<std::string>());
    const double f_dc = flags.at("f_dc").get<double>();
    const auto grid = linspace(flags.at("r_lo").get<double>(), flags.at("r_hi").get<double>(),
                               flags.at("points").get<int>());
    rff::PairGeometry geom;
    geom.cos_theta = flags.value("cos_theta", 0.0);
    geom.orientation_averaged = flags.value("orientation_averaged", false);

    const double delta = rff::forster_defect(ch, f_dc);
    std::string csv = rff::csv_row({"R_um", "delta_MHz", "V_MHz", "pair_shift_MHz", "vdw_limit_MHz"});
    json rows = json::array();
    for (double r : grid) {
        geom.r_um = r;
        const double v = rff::dd_coupling(ch, geom);
        const double de = rff::pair_shift(v, delta, ch.pp_above());
        const double sign = ch.pp_above() ? 1.0 : -1.0;
        const double vdw = sign * 2.0 * v * v / std::abs(delta);  // inf at delta = 0
        csv += rff::csv_row({rff::format_double17(r), rff::format_double17(delta),
                             rff::format_double17(v), rff::format_double17(de),
                             rff::format_double17(vdw)});
        rows.push_back({{"R_um", r},
                        {"delta_MHz", delta},
                        {"V_MHz", v},
                        {"pair_shift_MHz", de},
                        {"vdw_limit_MHz", vdw}});
    }

    json summary = {{"channel", ch.meta.label}, {"delta_MHz", delta}, {"points", grid.size()}};
    write_outputs("pair-shift", flags, csv, summary, rows);
    std::printf("pair-shift: channel %s at %g V/cm (defect %.6g MHz), %zu radii -> %s\n",
                ch.meta.label.c_str(), f_dc, delta, grid.size(),
                flags.at("out").get<std::string>().c_str());
}

// ----------------------------------------------------------------- spectrum

void run_spectrum(const json& flags)
{
    const auto ps = load_params(flags);
    const auto ch = rff::resolve_channel(ps, flags.at("channel").get<std::string>());

    rff::EnsembleConfig cfg;
    cfg.n_atoms = flags.at("n_atoms").get<int>();
    cfg.volume_size_um = flags.at("volume_size_um").get<double>();
    cfg.shape = flags.at("volume_shape").get<std::string>() == "gaussian"
                    ? rff::VolumeShape::gaussian
                    : rff::VolumeShape::sphere_uniform;
    cfg.samples = flags.at("samples").get<int>();
    cfg.seed = flags.at("seed").get<std::uint64_t>();
    cfg.interaction_time_us = flags.at("interaction_time_us").get<double>();
    cfg.detection_efficiency = flags.at("detection_efficiency").get<double>();

    rff::FieldDrive tmpl;
    tmpl.f_rf_vcm = resolved_rf_amp(flags);
    tmpl.freq_rf_mhz = flags.at("rf_freq").get<double>();

    const auto grid = linspace(flags.at("f_lo").get<double>(), flags.at("f_hi").get<double>(),
                               flags.at("points").get<int>());
    const auto backend = flags.at("backend").get<std::string>() == "integrator"
                             ? rff::SpectrumBackend::integrator
                             : rff::SpectrumBackend::sideband;
    const int threads = flags.value("threads", 1);

    const auto scan = rff::simulate_spectrum(ch, cfg, tmpl, grid, backend, threads);

    std::vector<std::string> header{"F_dc_Vcm"};
    for (int n = 2; n <= cfg.n_atoms; ++n) {
        header.push_back("S_" + std::to_string(n));
        header.push_back("err_" + std::to_string(n));
    }
    std::string csv = rff::csv_row(header);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        std::vector<std::string> row{rff::format_double17(grid[gi])};
        for (int n = 2; n <= cfg.n_atoms; ++n) {
            row.push_back(rff::format_double17(scan.s.at(n)[gi]));
            row.push_back(rff::format_double17(scan.stderr_of_mean.at(n)[gi]));
        }
        csv += rff::csv_row(row);
    }

    json data;
    data["F_dc_Vcm"] = grid;
    for (int n = 2; n <= cfg.n_atoms; ++n) {
        data["S_" + std::to_string(n)] = scan.s.at(n);
        data["err_" + std::to_string(n)] = scan.stderr_of_mean.at(n);
    }
    json summary = {{"channel", ch.meta.label},
                    {"points", grid.size()},
                    {"samples", cfg.samples},
                    {"backend", flags.at("backend").get<std::string>()},
                    {"dropped_evolutions", scan.dropped_evolutions}};
    write_outputs("spectrum", flags, csv, summary, data);
    std::printf("spectrum: channel %s, %zu points x %d samples, N <= %d (%s backend) -> %s\n",
                ch.meta.label.c_str(), grid.size(), cfg.samples, cfg.n_atoms,
                flags.at("backend").get<std::string>().c_str(),
                flags.at("out").get<std::string>().c_str());
}

// ---------------------------------------------------------------- stark-map

void run_stark_map(const json& flags)
{
    const auto ps = load_params(flags);
    const auto ch = rff::resolve_channel(ps, flags.at("channel").get<std::string>());
    const auto grid = linspace(flags.at("f_lo").get<double>(), flags.at("f_hi").get<double>(),
                               flags.at("points").get<int>());
    const double freq = flags.value("rf_freq", 0.0);
    const int m_lo = flags.value("m_lo", 0);
    const int m_hi = flags.value("m_hi", 0);

    std::vector<std::string> header{"F_Vcm", "E_initial_MHz", "E_final_MHz", "defect_MHz"};
    if (freq > 0.0)
        for (int m = m_lo; m <= m_hi; ++m)
            header.push_back("E_final_m" + std::to_string(m) + "_MHz");
    std::string csv = rff::csv_row(header);

    json rows = json::array();
    for (double f : grid) {
        const double e_i = rff::stark_energy(ch.initial_states[0], f) +
                           rff::stark_energy(ch.initial_states[1], f);
        const double e_f =
            rff::stark_energy(ch.final_states[0], f) + rff::stark_energy(ch.final_states[1], f);
        std::vector<std::string> row{rff::format_double17(f), rff::format_double17(e_i),
                                     rff::format_double17(e_f), rff::format_double17(e_f - e_i)};
        json jr = {{"F_Vcm", f}, {"E_initial_MHz", e_i}, {"E_final_MHz", e_f},
                   {"defect_MHz", e_f - e_i}};
        if (freq > 0.0)
            for (int m = m_lo; m <= m_hi; ++m) {
                row.push_back(rff::format_double17(e_f + m * freq));
                jr["E_final_m" + std::to_string(m) + "_MHz"] = e_f + m * freq;
            }
        csv += rff::csv_row(row);
        rows.push_back(jr);
    }

    json summary = {{"channel", ch.meta.label}, {"points", grid.size()}};
    write_outputs("stark-map", flags, csv, summary, rows);
    std::printf("stark-map: channel %s, %zu fields -> %s\n", ch.meta.label.c_str(), grid.size(),
                flags.at("out").get<std::string>().c_str());
}

void dispatch(const std::string& sub, const json& flags)
{
    if (sub == "sidebands")
        run_sidebands(flags);
    else if (sub == "resonances")
        run_resonances(flags);
    else if (sub == "pair-shift")
        run_pair_shift(flags);
    else if (sub == "spectrum")
        run_spectrum(flags);
    else if (sub == "stark-map")
        run_stark_map(flags);
    else
        throw std::runtime_error("unknown subcommand in manifest: " + sub);
}

std::pair<double, double> parse_range(const std::string& text, const char* what)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError(what, "expected LO:HI, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(what, "expected LO:HI, got '" + text + "'");
    }
}

std::pair<int, int> parse_int_range(const std::string& text, const char* what)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError(what, "expected LO:HI, got '" + text + "'");
    try {
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError(what, "expected LO:HI, got '" + text + "'");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"rf-assisted Foerster resonance toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rff::version_string);

    // shared flag storage; each subcommand copies what it uses into its json
    std::string params_file, out_file, state_label, channel_label, config_file;
    std::string volume_shape = "sphere-uniform", backend = "fast";
    std::string f_range, orders_range = "-6:6", r_range;
    double f_dc = 0.0, rf_amp = 0.0, rf_amp_mv = 0.0, rf_freq = 0.0;
    double rf_field_per_volt = default_rf_field_per_volt;
    double cos_theta = 0.0, volume_size = 35.0, interaction_time = 3.0, detect_eff = 1.0;
    bool orientation_averaged = false, mirror_json = false;
    int m_max = -1, points = 200, scan_points = 2000, n_atoms = 5, samples = 500, threads = 1;
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub, bool needs_out = true) {
        sub->add_option("--params", params_file, "parameter file (env RFF_PARAMS)")
            ->envname("RFF_PARAMS")
            ->required();
        if (needs_out)
            sub->add_option("--out", out_file, "output CSV path")->required();
        sub->add_flag("--json", mirror_json, "mirror CSV data into the JSON sidecar");
    };
    auto add_rf_amp = [&](CLI::App* sub) {
        auto* a = sub->add_option("--rf-amp", rf_amp, "rf field amplitude at the atoms, V/cm");
        auto* b = sub->add_option("--rf-amp-mv", rf_amp_mv,
                                  "rf generator amplitude, mV (scaled by --rf-field-per-volt)");
        sub->add_option("--rf-field-per-volt", rf_field_per_volt,
                        "electrode calibration, (V/cm) per generator volt")
            ->capture_default_str();
        a->excludes(b);
        b->excludes(a);
    };
    auto base_flags = [&]() {
        json j;
        j["params"] = params_file;
        j["out"] = out_file;
        j["json"] = mirror_json;
        return j;
    };

    // sidebands
    auto* sb = app.add_subcommand("sidebands", "Floquet sideband table of one state");
    add_common(sb);
    sb->add_option("--state", state_label, "state label")->required();
    sb->add_option("--f-dc", f_dc, "dc field, V/cm")->required();
    add_rf_amp(sb);
    sb->add_option("--rf-freq", rf_freq, "rf frequency, MHz")->required();
    sb->add_option("--m-max", m_max, "truncation order (default: auto)");
    sb->callback([&] {
        json j = base_flags();
        j["state"] = state_label;
        j["f_dc"] = f_dc;
        j["rf_amp_vcm"] = rf_amp;
        j["rf_amp_mv"] = rf_amp_mv;
        j["rf_field_per_volt"] = rf_field_per_volt;
        j["rf_freq"] = rf_freq;
        j["m_max"] = m_max;
        run_sidebands(j);
    });

    // resonances
    auto* re = app.add_subcommand("resonances", "rf-assisted resonance loci of a channel");
    add_common(re);
    re->add_option("--channel", channel_label, "channel label")->required();
    re->add_option("--rf-freq", rf_freq, "rf frequency, MHz")->required();
    re->add_option("--f-range", f_range, "dc field range LO:HI, V/cm")->required();
    re->add_option("--orders", orders_range, "order range LO:HI")->capture_default_str();
    re->add_option("--scan-points", scan_points, "bracketing scan resolution")
        ->capture_default_str();
    add_rf_amp(re);
    re->callback([&] {
        const auto [lo, hi] = parse_range(f_range, "--f-range");
        const auto [mlo, mhi] = parse_int_range(orders_range, "--orders");
        json j = base_flags();
        j["channel"] = channel_label;
        j["rf_freq"] = rf_freq;
        j["f_lo"] = lo;
        j["f_hi"] = hi;
        j["m_lo"] = mlo;
        j["m_hi"] = mhi;
        j["scan_points"] = scan_points;
        j["rf_amp_vcm"] = rf_amp;
        j["rf_amp_mv"] = rf_amp_mv;
        j["rf_field_per_volt"] = rf_field_per_volt;
        run_resonances(j);
    });

    // pair-shift
    auto* psh = app.add_subcommand("pair-shift", "pair energy shift and vdW limit over R");
    add_common(psh);
    psh->add_option("--channel", channel_label, "channel label")->required();
    psh->add_option("--f-dc", f_dc, "dc field fixing the defect, V/cm")->required();
    psh->add_option("--r-range", r_range, "distance range LO:HI, um")->required();
    psh->add_option("--points", points, "grid points")->capture_default_str();
    psh->add_option("--cos-theta", cos_theta, "pair axis cosine vs quantization axis")
        ->capture_default_str();
    psh->add_flag("--orientation-averaged", orientation_averaged,
                  "use the RMS angular factor sqrt(4/5)");
    psh->callback([&] {
        const auto [lo, hi] = parse_range(r_range, "--r-range");
        json j = base_flags();
        j["channel"] = channel_label;
        j["f_dc"] = f_dc;
        j["r_lo"] = lo;
        j["r_hi"] = hi;
        j["points"] = points;
        j["cos_theta"] = cos_theta;
        j["orientation_averaged"] = orientation_averaged;
        run_pair_shift(j);
    });

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "atom-number-resolved transfer spectrum");
    add_common(sp);
    sp->add_option("--channel", channel_label, "channel label")->required();
    sp->add_option("--f-range", f_range, "dc field range LO:HI, V/cm")->required();
    sp->add_option("--points", points, "field grid points")->capture_default_str();
    add_rf_amp(sp);
    sp->add_option("--rf-freq", rf_freq, "rf frequency, MHz (0 with no rf amplitude)")
        ->capture_default_str();
    sp->add_option("--config", config_file, "ensemble config file (flat key-value)");
    sp->add_option("--n-atoms", n_atoms, "largest atom number (2-5)")->capture_default_str();
    sp->add_option("--volume", volume_size, "excitation volume size, um")->capture_default_str();
    sp->add_option("--shape", volume_shape, "sphere-uniform | gaussian")
        ->check(CLI::IsMember({"sphere-uniform", "gaussian"}))
        ->capture_default_str();
    sp->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
    sp->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sp->add_option("--time", interaction_time, "interaction window, us")->capture_default_str();
    sp->add_option("--detect-eff", detect_eff, "detection efficiency in (0, 1]")
        ->capture_default_str();
    sp->add_option("--backend", backend, "fast | integrator")
        ->check(CLI::IsMember({"fast", "integrator"}))
        ->capture_default_str();
    sp->add_option("--threads", threads, "worker threads (outputs are thread-count invariant)")
        ->capture_default_str();
    sp->callback([&] {
        rff::EnsembleConfig cfg;
        if (!config_file.empty()) {
            std::ifstream in(config_file, std::ios::binary);
            if (!in) throw std::runtime_error(config_file + ": cannot open config");
            std::ostringstream ss;
            ss << in.rdbuf();
            cfg = rff::parse_ensemble_config(ss.str());
        }
        // explicit flags override the config file
        if (sp->count("--n-atoms")) cfg.n_atoms = n_atoms;
        if (sp->count("--volume")) cfg.volume_size_um = volume_size;
        if (sp->count("--shape"))
            cfg.shape = volume_shape == "gaussian" ? rff::VolumeShape::gaussian
                                                   : rff::VolumeShape::sphere_uniform;
        if (sp->count("--samples")) cfg.samples = samples;
        if (sp->count("--seed")) cfg.seed = seed;
        if (sp->count("--time")) cfg.interaction_time_us = interaction_time;
        if (sp->count("--detect-eff")) cfg.detection_efficiency = detect_eff;

        const auto [lo, hi] = parse_range(f_range, "--f-range");
        json j = base_flags();
        j["channel"] = channel_label;
        j["f_lo"] = lo;
        j["f_hi"] = hi;
        j["points"] = points;
        j["rf_amp_vcm"] = rf_amp;
        j["rf_amp_mv"] = rf_amp_mv;
        j["rf_field_per_volt"] = rf_field_per_volt;
        j["rf_freq"] = rf_freq;
        j["n_atoms"] = cfg.n_atoms;
        j["volume_size_um"] = cfg.volume_size_um;
        j["volume_shape"] = cfg.shape == rff::VolumeShape::gaussian ? "gaussian" : "sphere-uniform";
        j["samples"] = cfg.samples;
        j["seed"] = cfg.seed;
        j["interaction_time_us"] = cfg.interaction_time_us;
        j["detection_efficiency"] = cfg.detection_efficiency;
        j["backend"] = backend;
        j["threads"] = threads;
        run_spectrum(j);
    });

    // stark-map
    auto* sm = app.add_subcommand("stark-map", "collective-state energies over dc field");
    add_common(sm);
    sm->add_option("--channel", channel_label, "channel label")->required();
    sm->add_option("--f-range", f_range, "dc field range LO:HI, V/cm")->required();
    sm->add_option("--points", points, "grid points")->capture_default_str();
    sm->add_option("--rf-freq", rf_freq, "rf frequency for sideband columns, MHz");
    sm->add_option("--orders", orders_range, "sideband order range LO:HI")->capture_default_str();
    sm->callback([&] {
        const auto [lo, hi] = parse_range(f_range, "--f-range");
        const auto [mlo, mhi] = parse_int_range(orders_range, "--orders");
        json j = base_flags();
        j["channel"] = channel_label;
        j["f_lo"] = lo;
        j["f_hi"] = hi;
        j["points"] = points;
        j["rf_freq"] = rf_freq;
        j["m_lo"] = mlo;
        j["m_hi"] = mhi;
        run_stark_map(j);
    });

    // replay
    std::string manifest_file, out_override;
    int threads_override = -1;
    auto* rp = app.add_subcommand("replay", "re-run a manifest; outputs are byte-identical");
    rp->add_option("manifest", manifest_file, "manifest JSON written by a previous run")
        ->required();
    rp->add_option("--out", out_override, "redirect the CSV output path");
    rp->add_option("--threads", threads_override, "override worker threads (spectrum only)");
    rp->callback([&] {
        std::ifstream in(manifest_file, std::ios::binary);
        if (!in) throw std::runtime_error(manifest_file + ": cannot open manifest");
        json manifest = json::parse(in);
        json flags = manifest.at("flags");
        if (!out_override.empty()) flags["out"] = out_override;
        if (threads_override >= 1) flags["threads"] = threads_override;
        dispatch(manifest.at("subcommand").get<std::string>(), flags);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
