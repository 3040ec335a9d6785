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

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qantenna/error.hpp"

namespace qantenna {

// Internal units: omega = 1, c = 1, hbar = 1, eps0 = 1.

/// Decay rate used when neither a dipole, a prefactor nor an explicit rate is configured.
inline constexpr double kDefaultGamma = 1e-3;

/// Raw physical/driving configuration of the wire antenna.
struct AntennaParams {
    double omega0 = 1.0;  ///< transition frequency
    double omega = 1.0;   ///< drive frequency; wavenumber k = omega / c
    double rabi = 0.0;    ///< Rabi frequency
    double kl_half = 0.0; ///< half electrical length k*l/2
    double phi = 0.0;     ///< envelope phase shift per unit length
    std::optional<double> dipole;         ///< d_ab, gives A = d^2 omega^3 / pi
    std::optional<double> prefactor;      ///< A at the drive frequency, overrides dipole
    std::optional<double> gamma_override; ///< Gamma(omega), overrides both

    bool operator==(const AntennaParams&) const = default;
};

/// Parameters after range checks, with derived quantities filled in.
struct ValidatedParams {
    AntennaParams raw;
    double detuning = 0.0;   ///< omega0 - omega
    double wavenumber = 1.0; ///< omega / c
    double length = 0.0;     ///< antenna length l
    std::vector<std::string> warnings;

    double rabi_ratio() const noexcept { return raw.rabi / raw.omega; }

    /// Emission prefactor A(omega_k) = d^2 omega_k^3 / pi, or the scaled configured prefactor.
    double prefactor_at(double omega_k) const noexcept
    {
        if (raw.prefactor) {
            const double s = omega_k / raw.omega;
            return *raw.prefactor * s * s * s;
        }
        const double d = raw.dipole.value_or(0.0);
        return d * d * omega_k * omega_k * omega_k / std::numbers::pi;
    }

    /// True when Gamma must come from the kDefaultGamma fallback.
    bool uses_default_gamma() const noexcept
    {
        return !raw.gamma_override && !raw.prefactor && !raw.dipole;
    }

    bool operator==(const ValidatedParams&) const = default;
};

inline ValidatedParams validate(const AntennaParams& p)
{
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.omega) || !finite(p.omega0) || p.omega <= 0.0 || p.omega0 <= 0.0)
        throw Error(ErrorCode::NonPositiveFrequency, "omega and omega0 must be finite and > 0");
    if (!finite(p.rabi) || p.rabi < 0.0)
        throw Error(ErrorCode::InvalidParameter, "rabi must be finite and >= 0");
    if (p.rabi >= p.omega)
        throw Error(ErrorCode::UltraStrongCoupling,
                    "rabi >= omega is outside the rotating-wave regime");
    if (!finite(p.kl_half) || p.kl_half < 0.0)
        throw Error(ErrorCode::NegativeLength, "kl_half must be finite and >= 0");
    if (!finite(p.phi))
        throw Error(ErrorCode::InvalidParameter, "phi must be finite");
    for (auto [name, v] : {std::pair{"dipole", p.dipole}, std::pair{"prefactor", p.prefactor},
                           std::pair{"gamma", p.gamma_override}}) {
        if (v && (!finite(*v) || *v < 0.0))
            throw Error(ErrorCode::InvalidParameter, std::string(name) + " must be finite and >= 0");
    }

    ValidatedParams v;
    v.raw = p;
    v.detuning = p.omega0 - p.omega;
    v.wavenumber = p.omega;
    v.length = 2.0 * p.kl_half / v.wavenumber;
    if (p.gamma_override && (p.dipole || p.prefactor))
        v.warnings.emplace_back("gamma override given together with dipole/prefactor; override wins");
    if (p.dipole && p.prefactor)
        v.warnings.emplace_back("prefactor given together with dipole; prefactor wins");
    return v;
}

inline ValidatedParams validate(const ValidatedParams& v) { return validate(v.raw); }

/// SI-unit input; converted to the dimensionless model by scaling with omega.
struct SiParams {
    double omega0_rad_s = 0.0;
    double omega_rad_s = 0.0;
    double rabi_rad_s = 0.0;
    double length_m = 0.0;
    double phi = 0.0;
    std::optional<double> gamma_per_s;
};

inline constexpr double kSpeedOfLight = 299792458.0;

inline AntennaParams from_si(const SiParams& si)
{
    if (!(si.omega_rad_s > 0.0))
        throw Error(ErrorCode::NonPositiveFrequency, "SI omega must be > 0");
    AntennaParams p;
    p.omega = 1.0;
    p.omega0 = si.omega0_rad_s / si.omega_rad_s;
    p.rabi = si.rabi_rad_s / si.omega_rad_s;
    p.kl_half = 0.5 * si.length_m * si.omega_rad_s / kSpeedOfLight;
    p.phi = si.phi;
    if (si.gamma_per_s)
        p.gamma_override = *si.gamma_per_s / si.omega_rad_s;
    return p;
}

/// Inverse of from_si for a given physical drive frequency.
inline SiParams to_si(const AntennaParams& p, double omega_rad_s)
{
    const double scale = omega_rad_s / p.omega;
    SiParams si;
    si.omega_rad_s = omega_rad_s;
    si.omega0_rad_s = p.omega0 * scale;
    si.rabi_rad_s = p.rabi * scale;
    si.length_m = 2.0 * p.kl_half * kSpeedOfLight / omega_rad_s;
    si.phi = p.phi;
    if (p.gamma_override)
        si.gamma_per_s = *p.gamma_override * scale;
    return si;
}

// Switches between the reference closed forms and their self-consistent variants.

enum class PsiMode { Literal, Derived };
enum class Obliquity { Cos2, Sin2 };
enum class ResonantSource { Literal, Consistent };

struct ModeFlags {
    PsiMode psi_mode = PsiMode::Derived;
    Obliquity obliquity = Obliquity::Sin2;
    ResonantSource resonant_source = ResonantSource::Consistent;

    bool operator==(const ModeFlags&) const = default;
};

constexpr std::string_view to_string(PsiMode m) { return m == PsiMode::Derived ? "derived" : "paper-literal"; }
constexpr std::string_view to_string(Obliquity o) { return o == Obliquity::Sin2 ? "sin2" : "cos2"; }
constexpr std::string_view to_string(ResonantSource s)
{
    return s == ResonantSource::Consistent ? "consistent" : "paper-literal";
}

inline PsiMode parse_psi_mode(std::string_view s)
{
    if (s == "derived") return PsiMode::Derived;
    if (s == "paper-literal") return PsiMode::Literal;
    throw Error(ErrorCode::ConfigParseError, "psi_mode must be derived|paper-literal, got '" + std::string(s) + "'");
}

inline Obliquity parse_obliquity(std::string_view s)
{
    if (s == "sin2") return Obliquity::Sin2;
    if (s == "cos2") return Obliquity::Cos2;
    throw Error(ErrorCode::ConfigParseError, "obliquity must be sin2|cos2, got '" + std::string(s) + "'");
}

inline ResonantSource parse_resonant_source(std::string_view s)
{
    if (s == "consistent") return ResonantSource::Consistent;
    if (s == "paper-literal") return ResonantSource::Literal;
    throw Error(ErrorCode::ConfigParseError,
                "resonant_source must be consistent|paper-literal, got '" + std::string(s) + "'");
}

} // namespace qantenna
