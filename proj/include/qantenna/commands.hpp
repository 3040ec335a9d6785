// Copyright 2026 The qantenna Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <future>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qantenna/config.hpp"
#include "qantenna/dressed.hpp"
#include "qantenna/dynamics.hpp"
#include "qantenna/params.hpp"
#include "qantenna/radiation.hpp"
#include "qantenna/table.hpp"

namespace qantenna {

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> header_lines(const RunConfig& cfg, const ValidatedParams& vp)
{
    std::vector<std::string> m;
    m.push_back("config: " + to_json(cfg).dump());
    m.push_back("modes: psi_mode=" + std::string(to_string(cfg.flags.psi_mode)) +
                " obliquity=" + std::string(to_string(cfg.flags.obliquity)) +
                " resonant_source=" + std::string(to_string(cfg.flags.resonant_source)));
    for (const auto& w : vp.warnings)
        m.push_back("warning: " + w);
    return m;
}

inline nlohmann::json line_analysis_json(const LineAnalysis& a)
{
    nlohmann::json j;
    for (Line line : kLines) {
        const auto& l = a[line];
        nlohmann::json e;
        e["beam_angle_deg"] = l.beam_angle ? nlohmann::json(*l.beam_angle / kDeg) : nlohmann::json("invisible");
        e["grid_peak_deg"] = l.grid_peak_angle ? nlohmann::json(*l.grid_peak_angle / kDeg) : nlohmann::json(nullptr);
        e["phi_critical"] = l.phi_critical;
        e["lobe_count"] = l.lobe_count;
        j["lines"][std::string(to_string(line))] = e;
    }
    const char* names[] = {"central_plus", "central_minus", "plus_minus"};
    for (std::size_t i = 0; i < 3; ++i)
        j["splitting_deg"][names[i]] =
            a.splitting_deg[i] ? nlohmann::json(*a.splitting_deg[i]) : nlohmann::json(nullptr);
    j["visible_main_lobes"] = a.visible_count();
    return j;
}

inline nlohmann::json density_json(const DensityMatrix& r)
{
    return {{"rho11", r.rho11},
            {"rho12", {r.rho12.real(), r.rho12.imag()}},
            {"rho21", {r.rho21.real(), r.rho21.imag()}}};
}

inline std::vector<double> theta_values(const RunConfig& cfg, ThetaGridSpec fallback)
{
    const auto g = cfg.theta.value_or(fallback);
    return theta_grid(g.start, g.stop, g.step);
}

inline Table pattern_table(const std::vector<PatternPoint>& pts)
{
    Table t;
    t.columns = {"theta_deg", "xi_total", "xi_central", "xi_plus", "xi_minus"};
    for (const auto& p : pts)
        t.rows.push_back({p.theta / kDeg, p.xi_total, p.xi_central, p.xi_plus, p.xi_minus});
    return t;
}

/// Log-scale plot data: dB relative to the global maximum, clamped at -60 dB.
inline Table polar_table(const std::vector<PatternPoint>& pts)
{
    double peak = 0.0;
    for (const auto& p : pts)
        peak = std::max(peak, p.xi_total);
    auto db = [&](double x) {
        if (!(peak > 0.0) || !(x > 0.0))
            return -60.0;
        return std::max(-60.0, 10.0 * std::log10(x / peak));
    };
    Table t;
    t.metadata.push_back("plot: polar, log scale, dB relative to max xi_total, clamped at -60 dB");
    t.columns = {"theta_deg", "db_total", "db_central", "db_plus", "db_minus"};
    for (const auto& p : pts)
        t.rows.push_back({p.theta / kDeg, db(p.xi_total), db(p.xi_central), db(p.xi_plus), db(p.xi_minus)});
    return t;
}

inline RunResult run_pattern(const RunConfig& cfg, const ValidatedParams& vp, const std::string& prefix,
                             ThetaGridSpec fallback, bool polar)
{
    RunResult res;
    const auto thetas = theta_values(cfg, fallback);
    const auto w = WireGeometry::from(vp);
    const auto pts = pattern(thetas, w, cfg.flags.psi_mode);
    const auto header = header_lines(cfg, vp);
    const auto jcfg = to_json(cfg);

    auto data = pattern_table(pts);
    data.metadata.insert(data.metadata.begin(), header.begin(), header.end());
    res.files.push_back(write_table(cfg.out_dir, prefix + "pattern", data, cfg.format, jcfg));
    if (polar) {
        auto plot = polar_table(pts);
        plot.metadata.insert(plot.metadata.begin(), header.begin(), header.end());
        res.files.push_back(write_table(cfg.out_dir, prefix + "polar", plot, cfg.format, jcfg));
    }
    auto lines = line_analysis_json(line_analysis(w, cfg.flags.psi_mode, thetas));
    lines["config"] = jcfg;
    res.files.push_back(write_json(cfg.out_dir / (prefix + "lines.json"), lines));
    return res;
}

inline RunResult run_spectrum(const RunConfig& cfg, const ValidatedParams& vp)
{
    RunResult res;
    const RateModel rates(vp);
    const double gamma = rates.gamma();
    const auto model = SpectrumModel::from(vp, gamma, cfg.spectrum_prefactor);
    const auto thetas = theta_values(cfg, ThetaGridSpec{0.0, 85.0, 5.0});
    const double center = cfg.omega_grid.center.value_or(vp.raw.omega0);
    const double half = cfg.omega_grid.half_span.value_or(2.0 * vp.raw.rabi + 20.0 * gamma);
    const int n = cfg.omega_grid.points;

    Table t;
    t.metadata = header_lines(cfg, vp);
    t.metadata.push_back("gamma: " + format_double(gamma));
    t.columns = {"omega", "theta_deg", "s_total", "s_central", "s_plus", "s_minus"};
    for (double th : thetas) {
        for (int i = 0; i < n; ++i) {
            const double w = center - half + 2.0 * half * static_cast<double>(i) / static_cast<double>(n - 1);
            const auto s = spectrum(w, th, model, cfg.flags);
            t.rows.push_back({s.omega, th / kDeg, s.s_total, s.s_central, s.s_plus, s.s_minus});
        }
    }
    res.files.push_back(write_table(cfg.out_dir, "spectrum", t, cfg.format, to_json(cfg)));
    return res;
}

inline RunResult run_dynamics(const RunConfig& cfg, const ValidatedParams& vp)
{
    RunResult res;
    const RateModel rates(vp);
    const auto rho0 = DensityMatrix::hermitian(cfg.dynamics.rho11, {cfg.dynamics.rho12_re, cfg.dynamics.rho12_im});
    IntegrateOptions opt;
    opt.stride = static_cast<std::size_t>(cfg.dynamics.stride);

    const double gamma = rates.gamma();
    const auto basis = dressed_basis(vp.detuning, vp.raw.rabi);
    const double nu = basis.nu;
    double t_end = 0.0;
    if (cfg.dynamics.t_end)
        t_end = *cfg.dynamics.t_end;
    else if (gamma > 0.0)
        t_end = 40.0 / gamma;
    else if (nu > 0.0)
        t_end = 100.0 / (2.0 * nu);
    else
        throw Error(ErrorCode::InvalidParameter, "dynamics needs gamma > 0 or rabi/detuning > 0 to pick t_end");

    Trajectory traj;
    DensityMatrix fixed_point;
    if (cfg.dynamics.system == "resonant") {
        const ResonantSystem sys{gamma, nu, cfg.flags.resonant_source};
        traj = integrate(rho0, sys, t_end, cfg.dynamics.dt.value_or(max_step(sys)), opt);
        fixed_point = steady_state_linear(sys);
    } else {
        const auto model = dressed_model(rates);
        const GeneralSystem sys{model.basis, model.rates};
        traj = integrate(rho0, sys, t_end, cfg.dynamics.dt.value_or(max_step(sys)), opt);
        fixed_point = steady_state_linear(sys);
    }

    Table t;
    t.metadata = header_lines(cfg, vp);
    t.metadata.push_back("system: " + traj.system + " dt: " + format_double(traj.dt) +
                         " params_hash: " + std::to_string(traj.params_hash));
    t.columns = {"t", "rho11", "re_rho12", "im_rho12", "re_rho21", "im_rho21"};
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const auto& r = traj.rho[i];
        t.rows.push_back({traj.t[i], r.rho11, r.rho12.real(), r.rho12.imag(), r.rho21.real(), r.rho21.imag()});
    }
    res.files.push_back(write_table(cfg.out_dir, "trajectory", t, cfg.format, to_json(cfg)));

    nlohmann::json s;
    s["config"] = to_json(cfg);
    s["system"] = traj.system;
    s["gamma"] = gamma;
    s["nu"] = nu;
    s["final_state"] = density_json(traj.final_state());
    s["linear_solve"] = density_json(fixed_point);
    s["final_vs_linear_solve"] = max_abs_difference(traj.final_state(), fixed_point);
    const bool rho11_half = std::abs(fixed_point.rho11 - 0.5) <= 1e-9;
    s["rho11_matches_half"] = rho11_half;
    if (!rho11_half) {
        s["mismatch"] = "steady-state rho11 = " + format_double(fixed_point.rho11) +
                        " differs from the expected 1/2 of the closed-form steady state";
        res.warnings.push_back(s["mismatch"].get<std::string>());
    }
    try {
        const auto closed = steady_state_closed_form(gamma, nu);
        s["closed_form"] = density_json(closed);
        s["discrepancy"] = max_abs_difference(fixed_point, closed);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularSystem)
            throw;
        s["closed_form"] = nullptr;
        s["discrepancy"] = nullptr;
        s["closed_form_error"] = e.what();
    }
    res.files.push_back(write_json(cfg.out_dir / "steady_state.json", s));
    return res;
}

inline RunResult run_gamma(const RunConfig& cfg, const ValidatedParams& vp)
{
    RunResult res;
    const RateModel rates(vp);
    Table t;
    t.metadata = header_lines(cfg, vp);
    t.metadata.push_back("angular_integral: gamma / A(omega_k); point_limit: 2/3 for a point dipole");
    t.columns = {"omega_k", "gamma", "angular_integral", "point_limit"};
    const auto& g = cfg.gamma_grid;
    for (int i = 0; i < g.points; ++i) {
        const double w = g.points == 1 ? g.start
                                       : g.start + (g.stop - g.start) * static_cast<double>(i) /
                                                       static_cast<double>(g.points - 1);
        const double ratio = gamma_of_omega(w, rates.envelope(), vp.length, 1.0);
        t.rows.push_back({w, rates(w), ratio, 2.0 / 3.0});
    }
    res.files.push_back(write_table(cfg.out_dir, "gamma", t, cfg.format, to_json(cfg)));
    return res;
}

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

} // namespace detail

inline RunResult run_command(const RunConfig& config);

/// Writes the three-component pattern, the log-scale polar plot data and the
/// line analysis for a figure preset.
inline RunResult run_preset(const std::string& preset_id, const RunConfig& base = {})
{
    RunConfig cfg = base;
    cfg.preset_id = preset_id;
    cfg = resolve(cfg);
    const auto vp = validate(cfg.params);
    return detail::run_pattern(cfg, vp, preset_id + "_", ThetaGridSpec{}, true);
}

inline RunResult run_sweep(const RunConfig& cfg)
{
    RunResult res;
    std::vector<std::future<RunResult>> jobs;
    std::vector<RunConfig> points;
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        RunConfig p = cfg;
        p.command = cfg.sweep.command;
        set_parameter(p.params, cfg.sweep.parameter, cfg.sweep.values[i]);
        std::ostringstream name;
        name << "point_" << std::setw(3) << std::setfill('0') << i;
        p.out_dir = cfg.out_dir / name.str();
        points.push_back(std::move(p));
    }
    jobs.reserve(points.size());
    for (const auto& p : points)
        jobs.push_back(std::async(std::launch::async, [p] { return run_command(p); }));

    nlohmann::json manifest;
    manifest["config"] = to_json(cfg);
    manifest["generated_utc"] = detail::utc_timestamp();
    manifest["parameter"] = cfg.sweep.parameter;
    manifest["command"] = std::string(to_string(cfg.sweep.command));
    manifest["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto r = jobs[i].get();
        nlohmann::json entry;
        entry["index"] = i;
        entry["value"] = cfg.sweep.values[i];
        entry["files"] = nlohmann::json::array();
        for (const auto& f : r.files) {
            entry["files"].push_back(std::filesystem::relative(f, cfg.out_dir).generic_string());
            res.files.push_back(f);
        }
        manifest["points"].push_back(entry);
        res.warnings.insert(res.warnings.end(), r.warnings.begin(), r.warnings.end());
    }
    res.files.push_back(write_json(cfg.out_dir / "manifest.json", manifest));
    return res;
}

inline RunResult run_command(const RunConfig& config)
{
    const RunConfig cfg = resolve(config);
    if (cfg.command == Command::Preset)
        return run_preset(*cfg.preset_id, cfg);
    if (cfg.command == Command::Sweep)
        return run_sweep(cfg);

    const auto vp = validate(cfg.params);
    switch (cfg.command) {
    case Command::Pattern: return detail::run_pattern(cfg, vp, "", ThetaGridSpec{}, false);
    case Command::Spectrum: return detail::run_spectrum(cfg, vp);
    case Command::Dynamics: return detail::run_dynamics(cfg, vp);
    case Command::Gamma: return detail::run_gamma(cfg, vp);
    default: break;
    }
    throw Error(ErrorCode::ConfigParseError, "unhandled command");
}

} // namespace qantenna
