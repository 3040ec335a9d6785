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
#include <cmath>
#include <numbers>

#include "qantenna/envelope.hpp"
#include "qantenna/error.hpp"
#include "qantenna/params.hpp"
#include "qantenna/quadrature.hpp"

namespace qantenna {

/// Eigen-quantities of the driven two-level Hamiltonian in the rotating frame.
///
/// |Psi_1> = C (g|a> + |b>) has energy -nu, |Psi_2> = C (|a> - g|b>) has +nu.
struct DressedBasis {
    double nu = 0.0;
    double g = 0.0;
    double c_norm = 1.0;
    std::array<std::array<double, 2>, 2> kappa{}; ///< C^2 [[g, 1], [-g^2, -g]]
    bool degenerate = false;                      ///< no drive and no detuning: bare states

    double c2() const noexcept { return c_norm * c_norm; }
    double c4() const noexcept { return c2() * c2(); }
};

inline DressedBasis dressed_basis(double detuning, double rabi)
{
    if (!(rabi >= 0.0) || !std::isfinite(detuning))
        throw Error(ErrorCode::InvalidParameter, "dressed basis needs rabi >= 0 and finite detuning");

    DressedBasis b;
    b.nu = 0.5 * std::hypot(detuning, rabi);
    if (rabi == 0.0) {
        // Without drive the dressed states are the bare ones. For detuning <= 0 the
        // labelling limit is singular (g -> infinity), so bare states are flagged.
        b.g = 0.0;
        b.degenerate = detuning <= 0.0;
    } else if (detuning >= 0.0) {
        b.g = rabi / (detuning + 2.0 * b.nu);
    } else {
        // (detuning + 2 nu)(2 nu - detuning) = rabi^2 avoids cancellation for detuning < 0.
        b.g = (2.0 * b.nu - detuning) / rabi;
    }
    b.c_norm = 1.0 / std::sqrt(1.0 + b.g * b.g);
    const double c2 = b.c2();
    b.kappa = {{{c2 * b.g, c2}, {-c2 * b.g * b.g, -c2 * b.g}}};
    return b;
}

/// A(omega_k) * integral_0^pi sin(theta) cos^2(theta) |F(theta, omega_k)|^2 dtheta.
///
/// The linear-phase envelope uses the closed-form form factor; tabulated
/// envelopes nest the generic form-factor quadrature.
inline double gamma_of_omega(double omega_k, const Envelope& env, double length, double prefactor)
{
    if (!(omega_k > 0.0))
        throw Error(ErrorCode::NonPositiveFrequency, "gamma_of_omega needs omega_k > 0");
    if (prefactor == 0.0)
        return 0.0;

    quad::Options opt;
    opt.rel_tol = 1e-12;
    opt.abs_floor = 1e-15;
    opt.initial_panels = 1 + static_cast<int>(omega_k * length / std::numbers::pi);

    double integral = 0.0;
    if (env.kind() == Envelope::Kind::LinearPhase) {
        const double half = 0.5 * length;
        const double kphi = env.wavenumber() * env.phi();
        auto integrand = [&](double theta) {
            const double c = std::cos(theta);
            const double f = sinc(half * (kphi - omega_k * c));
            return std::sin(theta) * c * c * f * f;
        };
        integral = quad::integrate(integrand, 0.0, std::numbers::pi, opt).value;
    } else {
        quad::Options inner;
        inner.rel_tol = 1e-12;
        auto integrand = [&](double theta) {
            const double c = std::cos(theta);
            return std::sin(theta) * c * c * std::norm(form_factor(theta, omega_k, env, length, inner));
        };
        opt.rel_tol = 1e-10;
        integral = quad::integrate(integrand, 0.0, std::numbers::pi, opt).value;
    }
    return prefactor * integral;
}

enum class RateSource { Literal, ResonantApproximation };

/// Relaxation coefficients of the dressed-basis master equation.
struct RelaxationRates {
    double gamma_omega = 0.0; ///< Gamma(omega)
    double gamma_plus = 0.0;  ///< Gamma(omega + 2 nu)
    double gamma_minus = 0.0; ///< Gamma(omega - 2 nu)
    double g11 = 0.0, g12 = 0.0, g21 = 0.0, g22 = 0.0;
    RateSource source = RateSource::Literal;
};

inline RelaxationRates relaxation_params(const DressedBasis& b, double gamma_omega, double gamma_plus,
                                         double gamma_minus)
{
    if (gamma_omega < 0.0 || gamma_plus < 0.0 || gamma_minus < 0.0)
        throw Error(ErrorCode::InvalidParameter, "relaxation rates must be >= 0");
    const double g = b.g;
    const double c2 = b.c2();
    const double c4 = b.c4();

    RelaxationRates r;
    r.gamma_omega = gamma_omega;
    r.gamma_plus = gamma_plus;
    r.gamma_minus = gamma_minus;
    r.g12 = c2 * ((2.0 - c2) * gamma_plus + g * g * (1.0 + c2) * gamma_minus);
    r.g21 = g * g * c4 * (gamma_plus - gamma_minus);
    r.g22 = (g * c2 * (2.0 - c2) + g * g * g * c4) * gamma_omega;
    r.g11 = g * c2 * (1.0 + 2.0 * c2) * gamma_omega;
    return r;
}

/// Exact-resonance values g12 = 3G/2, g21 = G/2, g11 = g22 = G.
///
/// These cannot come out of relaxation_params with equal shifted rates (g21 is
/// then 0); they are the approximation the resonant equations are built on.
inline RelaxationRates resonant_approximation(double gamma)
{
    if (gamma < 0.0)
        throw Error(ErrorCode::InvalidParameter, "gamma must be >= 0");
    RelaxationRates r;
    r.gamma_omega = r.gamma_plus = r.gamma_minus = gamma;
    r.g12 = 1.5 * gamma;
    r.g21 = 0.5 * gamma;
    r.g11 = gamma;
    r.g22 = gamma;
    r.source = RateSource::ResonantApproximation;
    return r;
}

/// Gamma(omega_k) for a validated antenna, honouring the override/prefactor/dipole precedence.
///
/// An explicit or default rate fixes Gamma(omega); the frequency dependence at
/// shifted omega_k keeps the shape of the emission integral.
class RateModel {
public:
    RateModel(ValidatedParams params, Envelope env) : p_(std::move(params)), env_(std::move(env)) {}

    explicit RateModel(const ValidatedParams& params)
        : RateModel(params, Envelope::linear_phase(params.wavenumber, params.raw.phi))
    {
    }

    const ValidatedParams& params() const noexcept { return p_; }
    const Envelope& envelope() const noexcept { return env_; }

    /// Emission rate at omega_k; 0 for omega_k <= 0 where no reservoir modes exist.
    double operator()(double omega_k) const
    {
        if (omega_k <= 0.0)
            return 0.0;
        const auto& raw = p_.raw;
        if (!raw.gamma_override && (raw.prefactor || raw.dipole))
            return gamma_of_omega(omega_k, env_, p_.length, p_.prefactor_at(omega_k));

        const double target = raw.gamma_override.value_or(kDefaultGamma);
        if (omega_k == raw.omega || target == 0.0)
            return target;
        return target * shape(omega_k) / shape(raw.omega);
    }

    double gamma() const { return (*this)(p_.raw.omega); }

private:
    double shape(double omega_k) const
    {
        const double unit = omega_k * omega_k * omega_k / std::numbers::pi;
        return gamma_of_omega(omega_k, env_, p_.length, unit);
    }

    ValidatedParams p_;
    Envelope env_;
};

struct DressedModel {
    DressedBasis basis;
    RelaxationRates rates;
};

/// Dressed basis plus literal relaxation coefficients with distinct Gamma(omega +- 2 nu).
inline DressedModel dressed_model(const RateModel& model)
{
    const auto& p = model.params();
    DressedModel m;
    m.basis = dressed_basis(p.detuning, p.raw.rabi);
    const double w = p.raw.omega;
    m.rates = relaxation_params(m.basis, model(w), model(w + 2.0 * m.basis.nu), model(w - 2.0 * m.basis.nu));
    return m;
}

} // namespace qantenna
