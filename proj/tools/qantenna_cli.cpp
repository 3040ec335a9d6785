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

// Command-line front end: qantenna <pattern|spectrum|dynamics|gamma|sweep|preset> [flags]

#include <cstddef>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qantenna/qantenna.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Driven two-level wire antenna: decay rates, dressed dynamics, Mollow-split patterns and spectra"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir, format, psi_mode, obliquity, resonant_source, preset;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--psi-mode", psi_mode, "derived|paper-literal")->check(CLI::IsMember({"derived", "paper-literal"}));
    app.add_option("--obliquity", obliquity, "sin2|cos2")->check(CLI::IsMember({"sin2", "cos2"}));
    app.add_option("--resonant-source", resonant_source, "consistent|paper-literal")
        ->check(CLI::IsMember({"consistent", "paper-literal"}));
    app.add_option("--preset", preset, "figure preset id (fig2a ... fig4b)");

    const char* descriptions[] = {
        "three-component radiation pattern and line analysis",
        "angle-resolved power spectrum over an omega x theta grid",
        "density-matrix trajectory and steady-state summary",
        "emission rate over a frequency grid with the point-dipole reference",
        "repeat a command over a list of parameter values",
        "figure preset (fig2a, fig2b, fig3a, fig3b, fig4a, fig4b)",
    };
    for (std::size_t i = 0; i < qantenna::kCommandNames.size(); ++i) {
        const auto name = qantenna::kCommandNames[i];
        auto* sub = app.add_subcommand(std::string(name), descriptions[i]);
        if (name == "preset")
            sub->add_option("id", preset, "figure preset id");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        qantenna::RunConfig cfg = config_path.empty() ? qantenna::RunConfig{} : qantenna::load_config(config_path);
        cfg.command = qantenna::parse_command(app.get_subcommands().front()->get_name());
        if (out_dir) cfg.out_dir = *out_dir;
        if (format) cfg.format = *format == "json" ? qantenna::OutputFormat::Json : qantenna::OutputFormat::Csv;
        if (psi_mode) cfg.flags.psi_mode = qantenna::parse_psi_mode(*psi_mode);
        if (obliquity) cfg.flags.obliquity = qantenna::parse_obliquity(*obliquity);
        if (resonant_source) cfg.flags.resonant_source = qantenna::parse_resonant_source(*resonant_source);
        if (preset) cfg.preset_id = *preset;
        if (cfg.command != qantenna::Command::Preset && preset) {
            std::cerr << "error: --preset is only valid with the preset command\n";
            return kExitUsage;
        }

        const auto result = qantenna::run_command(cfg);
        for (const auto& w : result.warnings)
            std::cerr << "warning: " << w << '\n';
        for (const auto& f : result.files)
            std::cout << f.string() << '\n';
        return kExitOk;
    } catch (const qantenna::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_numerical() ? kExitNumerical : kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
