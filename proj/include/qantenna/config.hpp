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

#include <array>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qantenna/error.hpp"
#include "qantenna/params.hpp"
#include "qantenna/table.hpp"

namespace qantenna {

enum class Command { Pattern, Spectrum, Dynamics, Gamma, Sweep, Preset };

inline constexpr std::array<std::string_view, 6> kCommandNames{"pattern", "spectrum", "dynamics",
                                                               "gamma",   "sweep",    "preset"};

constexpr std::string_view to_string(Command c) { return kCommandNames[static_cast<std::size_t>(c)]; }

inline Command parse_command(std::string_view s)
{
    for (std::size_t i = 0; i < kCommandNames.size(); ++i)
        if (kCommandNames[i] == s)
            return static_cast<Command>(i);
    throw Error(ErrorCode::ConfigParseError, "unknown command '" + std::string(s) + "'");
}

/// Figure presets: kl/2, phi and rabi / omega.
struct Preset {
    std::string_view id;
    double kl_half;
    double phi;
    double rabi;
};

inline constexpr std::array<Preset, 6> kPresets{{
    {"fig2a", 2.0 * std::numbers::pi, 0.8, 0.001},
    {"fig2b", 2.0 * std::numbers::pi, 0.8, 0.2},
    {"fig3a", 4.0 * std::numbers::pi, 1.0, 0.2},
    {"fig3b", 4.0 * std::numbers::pi, 1.2, 0.2},
    {"fig4a", 15.0 * std::numbers::pi, 0.8, 0.2},
    {"fig4b", 15.0 * std::numbers::pi, 1.2, 0.2},
}};

inline const Preset& find_preset(std::string_view id)
{
    for (const auto& p : kPresets)
        if (p.id == id)
            return p;
    throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(id) + "'");
}

struct ThetaGridSpec {
    double start = 0.0;
    double stop = 89.75;
    double step = 0.25;
};

struct OmegaGridSpec {
    std::optional<double> center;    ///< defaults to omega0
    std::optional<double> half_span; ///< defaults to 2 rabi + 20 gamma
    int points = 2001;
};

struct GammaGridSpec {
    double start = 0.5;
    double stop = 1.5;
    int points = 101;
};

struct DynamicsSpec {
    std::string system = "resonant"; ///< resonant | general
    std::optional<double> t_end;     ///< defaults to 40 / Gamma
    std::optional<double> dt;        ///< defaults to the stability bound
    int stride = 1;
    double rho11 = 1.0;
    double rho12_re = 0.0;
    double rho12_im = 0.0;
};

struct SweepSpec {
    Command command = Command::Pattern;
    std::string parameter = "rabi";
    std::vector<double> values;
};

struct RunConfig {
    Command command = Command::Pattern;
    AntennaParams params{};
    ModeFlags flags{};
    std::optional<ThetaGridSpec> theta; ///< empty: per-command default
    OmegaGridSpec omega_grid{};
    GammaGridSpec gamma_grid{};
    DynamicsSpec dynamics{};
    SweepSpec sweep{};
    double spectrum_prefactor = 1.0;
    std::filesystem::path out_dir = "out";
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> preset_id;
};

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& target)
{
    if (j.contains(key) && !j.at(key).is_null())
        target = j.at(key).get<T>();
}

template <class T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& target)
{
    if (j.contains(key) && !j.at(key).is_null())
        target = j.at(key).get<T>();
}

inline void check_keys(const nlohmann::json& j, std::string_view where, std::initializer_list<std::string_view> known)
{
    if (!j.is_object())
        throw Error(ErrorCode::ConfigParseError, std::string(where) + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto k : known)
            ok = ok || it.key() == k;
        if (!ok)
            throw Error(ErrorCode::ConfigParseError, "unknown key '" + it.key() + "' in " + std::string(where));
    }
}

inline OutputFormat parse_format(std::string_view s)
{
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw Error(ErrorCode::ConfigParseError, "format must be csv|json, got '" + std::string(s) + "'");
}

} // namespace detail

/// Sets a named antenna parameter (used by sweeps and tests).
inline void set_parameter(AntennaParams& p, std::string_view name, double v)
{
    if (name == "omega0") p.omega0 = v;
    else if (name == "omega") p.omega = v;
    else if (name == "rabi") p.rabi = v;
    else if (name == "kl_half") p.kl_half = v;
    else if (name == "phi") p.phi = v;
    else if (name == "dipole") p.dipole = v;
    else if (name == "prefactor") p.prefactor = v;
    else if (name == "gamma") p.gamma_override = v;
    else throw Error(ErrorCode::ConfigParseError, "unknown sweep parameter '" + std::string(name) + "'");
}

/// Parses the structured configuration; every key is optional.
inline RunConfig parse_config(const nlohmann::json& j)
{
    using detail::check_keys;
    using detail::read_opt;
    RunConfig cfg;
    try {
        check_keys(j, "config",
                   {"command", "params", "si", "modes", "theta", "omega", "gamma_grid", "dynamics", "sweep",
                    "spectrum", "output", "preset"});
        if (j.contains("command"))
            cfg.command = parse_command(j.at("command").get<std::string>());
        if (j.contains("params")) {
            const auto& p = j.at("params");
            check_keys(p, "params", {"omega0", "omega", "rabi", "kl_half", "phi", "dipole", "prefactor", "gamma"});
            read_opt(p, "omega0", cfg.params.omega0);
            read_opt(p, "omega", cfg.params.omega);
            read_opt(p, "rabi", cfg.params.rabi);
            read_opt(p, "kl_half", cfg.params.kl_half);
            read_opt(p, "phi", cfg.params.phi);
            read_opt(p, "dipole", cfg.params.dipole);
            read_opt(p, "prefactor", cfg.params.prefactor);
            read_opt(p, "gamma", cfg.params.gamma_override);
        }
        if (j.contains("si")) {
            const auto& s = j.at("si");
            check_keys(s, "si", {"omega0_rad_s", "omega_rad_s", "rabi_rad_s", "length_m", "phi", "gamma_per_s"});
            SiParams si;
            read_opt(s, "omega0_rad_s", si.omega0_rad_s);
            read_opt(s, "omega_rad_s", si.omega_rad_s);
            read_opt(s, "rabi_rad_s", si.rabi_rad_s);
            read_opt(s, "length_m", si.length_m);
            read_opt(s, "phi", si.phi);
            read_opt(s, "gamma_per_s", si.gamma_per_s);
            const auto converted = from_si(si);
            cfg.params.omega0 = converted.omega0;
            cfg.params.omega = converted.omega;
            cfg.params.rabi = converted.rabi;
            cfg.params.kl_half = converted.kl_half;
            cfg.params.phi = converted.phi;
            if (converted.gamma_override)
                cfg.params.gamma_override = converted.gamma_override;
        }
        if (j.contains("modes")) {
            const auto& m = j.at("modes");
            check_keys(m, "modes", {"psi_mode", "obliquity", "resonant_source"});
            if (m.contains("psi_mode")) cfg.flags.psi_mode = parse_psi_mode(m.at("psi_mode").get<std::string>());
            if (m.contains("obliquity")) cfg.flags.obliquity = parse_obliquity(m.at("obliquity").get<std::string>());
            if (m.contains("resonant_source"))
                cfg.flags.resonant_source = parse_resonant_source(m.at("resonant_source").get<std::string>());
        }
        if (j.contains("theta")) {
            const auto& t = j.at("theta");
            check_keys(t, "theta", {"start", "stop", "step"});
            ThetaGridSpec g;
            read_opt(t, "start", g.start);
            read_opt(t, "stop", g.stop);
            read_opt(t, "step", g.step);
            cfg.theta = g;
        }
        if (j.contains("omega")) {
            const auto& o = j.at("omega");
            check_keys(o, "omega", {"center", "half_span", "points"});
            read_opt(o, "center", cfg.omega_grid.center);
            read_opt(o, "half_span", cfg.omega_grid.half_span);
            read_opt(o, "points", cfg.omega_grid.points);
        }
        if (j.contains("gamma_grid")) {
            const auto& g = j.at("gamma_grid");
            check_keys(g, "gamma_grid", {"start", "stop", "points"});
            read_opt(g, "start", cfg.gamma_grid.start);
            read_opt(g, "stop", cfg.gamma_grid.stop);
            read_opt(g, "points", cfg.gamma_grid.points);
        }
        if (j.contains("dynamics")) {
            const auto& d = j.at("dynamics");
            check_keys(d, "dynamics", {"system", "t_end", "dt", "stride", "rho11", "rho12_re", "rho12_im"});
            read_opt(d, "system", cfg.dynamics.system);
            read_opt(d, "t_end", cfg.dynamics.t_end);
            read_opt(d, "dt", cfg.dynamics.dt);
            read_opt(d, "stride", cfg.dynamics.stride);
            read_opt(d, "rho11", cfg.dynamics.rho11);
            read_opt(d, "rho12_re", cfg.dynamics.rho12_re);
            read_opt(d, "rho12_im", cfg.dynamics.rho12_im);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            check_keys(s, "sweep", {"command", "parameter", "values"});
            if (s.contains("command"))
                cfg.sweep.command = parse_command(s.at("command").get<std::string>());
            read_opt(s, "parameter", cfg.sweep.parameter);
            read_opt(s, "values", cfg.sweep.values);
        }
        if (j.contains("spectrum")) {
            const auto& s = j.at("spectrum");
            check_keys(s, "spectrum", {"prefactor"});
            read_opt(s, "prefactor", cfg.spectrum_prefactor);
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            check_keys(o, "output", {"dir", "format"});
            if (o.contains("dir"))
                cfg.out_dir = o.at("dir").get<std::string>();
            if (o.contains("format"))
                cfg.format = detail::parse_format(o.at("format").get<std::string>());
        }
        if (j.contains("preset") && !j.at("preset").is_null()) {
            cfg.preset_id = j.at("preset").get<std::string>();
            cfg.command = Command::Preset;
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigParseError, e.what());
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw Error(ErrorCode::IoError, "cannot read config '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is, nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigParseError, e.what());
    }
    return parse_config(j);
}

/// Resolved configuration, embedded verbatim in every output file.
inline nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json j;
    j["command"] = std::string(to_string(c.command));
    auto& p = j["params"];
    p["omega0"] = c.params.omega0;
    p["omega"] = c.params.omega;
    p["rabi"] = c.params.rabi;
    p["kl_half"] = c.params.kl_half;
    p["phi"] = c.params.phi;
    p["dipole"] = c.params.dipole ? nlohmann::json(*c.params.dipole) : nlohmann::json(nullptr);
    p["prefactor"] = c.params.prefactor ? nlohmann::json(*c.params.prefactor) : nlohmann::json(nullptr);
    p["gamma"] = c.params.gamma_override ? nlohmann::json(*c.params.gamma_override) : nlohmann::json(nullptr);
    j["modes"] = {{"psi_mode", std::string(to_string(c.flags.psi_mode))},
                  {"obliquity", std::string(to_string(c.flags.obliquity))},
                  {"resonant_source", std::string(to_string(c.flags.resonant_source))}};
    if (c.theta)
        j["theta"] = {{"start", c.theta->start}, {"stop", c.theta->stop}, {"step", c.theta->step}};
    j["omega"] = {{"center", c.omega_grid.center ? nlohmann::json(*c.omega_grid.center) : nlohmann::json(nullptr)},
                  {"half_span",
                   c.omega_grid.half_span ? nlohmann::json(*c.omega_grid.half_span) : nlohmann::json(nullptr)},
                  {"points", c.omega_grid.points}};
    j["gamma_grid"] = {{"start", c.gamma_grid.start}, {"stop", c.gamma_grid.stop}, {"points", c.gamma_grid.points}};
    j["dynamics"] = {{"system", c.dynamics.system},
                     {"t_end", c.dynamics.t_end ? nlohmann::json(*c.dynamics.t_end) : nlohmann::json(nullptr)},
                     {"dt", c.dynamics.dt ? nlohmann::json(*c.dynamics.dt) : nlohmann::json(nullptr)},
                     {"stride", c.dynamics.stride},
                     {"rho11", c.dynamics.rho11},
                     {"rho12_re", c.dynamics.rho12_re},
                     {"rho12_im", c.dynamics.rho12_im}};
    j["sweep"] = {{"command", std::string(to_string(c.sweep.command))},
                  {"parameter", c.sweep.parameter},
                  {"values", c.sweep.values}};
    j["spectrum"] = {{"prefactor", c.spectrum_prefactor}};
    j["output"] = {{"format", c.format == OutputFormat::Csv ? "csv" : "json"}};
    j["preset"] = c.preset_id ? nlohmann::json(*c.preset_id) : nlohmann::json(nullptr);
    return j;
}

/// Checks grid invariants and applies a preset.
inline RunConfig resolve(RunConfig c)
{
    if (c.preset_id) {
        const auto& pr = find_preset(*c.preset_id);
        c.command = Command::Preset;
        c.params.omega = 1.0;
        c.params.omega0 = 1.0;
        c.params.kl_half = pr.kl_half;
        c.params.phi = pr.phi;
        c.params.rabi = pr.rabi;
    } else if (c.command == Command::Preset) {
        throw Error(ErrorCode::ConfigParseError, "preset command needs a preset id");
    }
    if (c.theta) {
        if (!(c.theta->step > 0.0) || c.theta->stop < c.theta->start || c.theta->start < 0.0 || c.theta->stop >= 90.0)
            throw Error(ErrorCode::ConfigParseError, "theta grid must satisfy 0 <= start <= stop < 90, step > 0");
    }
    if (c.omega_grid.points < 2 || (c.omega_grid.half_span && !(*c.omega_grid.half_span > 0.0)))
        throw Error(ErrorCode::ConfigParseError, "omega grid needs >= 2 points and half_span > 0");
    if (c.gamma_grid.points < 1 || !(c.gamma_grid.start > 0.0) || c.gamma_grid.stop < c.gamma_grid.start)
        throw Error(ErrorCode::ConfigParseError, "gamma grid needs points >= 1 and 0 < start <= stop");
    if (c.dynamics.system != "resonant" && c.dynamics.system != "general")
        throw Error(ErrorCode::ConfigParseError, "dynamics.system must be resonant|general");
    if (c.dynamics.stride < 1)
        throw Error(ErrorCode::ConfigParseError, "dynamics.stride must be >= 1");
    if (c.command == Command::Sweep) {
        if (c.sweep.values.empty())
            throw Error(ErrorCode::ConfigParseError, "sweep needs a non-empty value list");
        if (c.sweep.command == Command::Sweep || c.sweep.command == Command::Preset)
            throw Error(ErrorCode::ConfigParseError, "sweep command must be pattern|spectrum|dynamics|gamma");
        AntennaParams probe;
        set_parameter(probe, c.sweep.parameter, 0.0);
    }
    validate(c.params);
    return c;
}

} // namespace qantenna
