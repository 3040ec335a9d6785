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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qantenna/dressed.hpp"
#include "qantenna/error.hpp"
#include "qantenna/params.hpp"

namespace qantenna {

/// Dressed-basis density matrix. rho22 = 1 - rho11; rho21 is stored on its own
/// so Hermiticity stays a measurable property of the integrator.
struct DensityMatrix {
    double rho11 = 0.0;
    cplx rho12{};
    cplx rho21{};

    double rho22() const noexcept { return 1.0 - rho11; }
    double hermiticity_defect() const noexcept { return std::abs(rho21 - std::conj(rho12)); }
    /// det(rho) = rho11 rho22 - |rho12|^2; negative means not positive semidefinite.
    double positivity_margin() const noexcept { return rho11 * rho22() - std::norm(rho12); }

    static DensityMatrix diagonal(double p11) noexcept { return {p11, {}, {}}; }
    static DensityMatrix hermitian(double p11, cplx p12) noexcept { return {p11, p12, std::conj(p12)}; }

    friend DensityMatrix operator+(const DensityMatrix& a, const DensityMatrix& b) noexcept
    {
        return {a.rho11 + b.rho11, a.rho12 + b.rho12, a.rho21 + b.rho21};
    }
    friend DensityMatrix operator*(double s, const DensityMatrix& a) noexcept
    {
        return {s * a.rho11, s * a.rho12, s * a.rho21};
    }
    bool operator==(const DensityMatrix&) const = default;
};

inline double max_abs_difference(const DensityMatrix& a, const DensityMatrix& b) noexcept
{
    return std::max({std::abs(a.rho11 - b.rho11), std::abs(a.rho12 - b.rho12), std::abs(a.rho21 - b.rho21)});
}

namespace detail {

inline std::uint64_t fnv1a(std::initializer_list<double> values) noexcept
{
    std::uint64_t h = 14695981039346656037ull;
    for (double v : values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return h;
}

} // namespace detail

/// Right-hand side of the general dressed-basis equations (any detuning).
inline DensityMatrix rhs_general(const DensityMatrix& rho, const RelaxationRates& r, const DressedBasis& b)
{
    const double g = b.g;
    const double c4 = b.c4();
    const double g4 = g * g * g * g;
    const cplx i{0.0, 1.0};
    const double two_nu = 2.0 * b.nu;

    DensityMatrix d;
    const cplx coherence_sum = rho.rho12 + rho.rho21;
    d.rho11 = -0.5 * (2.0 * r.gamma_omega * c4 * (1.0 + g4) * rho.rho11 - 2.0 * r.gamma_omega * c4 * g4 +
                      g * c4 * (r.gamma_plus - r.gamma_minus) * coherence_sum.real());
    const double source = 0.5 * r.g22 + 0.5 * (r.g11 - r.g22) * rho.rho11;
    d.rho12 = -i * (two_nu - i * 0.5 * r.g12) * rho.rho12 - 0.5 * r.g21 * rho.rho21 + source;
    d.rho21 = i * (two_nu + i * 0.5 * r.g12) * rho.rho21 - 0.5 * r.g21 * rho.rho12 + source;
    return d;
}

/// Right-hand side of the exact-resonance equations.
///
/// The population source is Gamma/4 in consistent mode (the value the general
/// equations reduce to at g = 1) and Gamma/2 in literal mode.
inline DensityMatrix rhs_resonant(const DensityMatrix& rho, double gamma, double nu, ResonantSource mode)
{
    const cplx i{0.0, 1.0};
    const double source = mode == ResonantSource::Consistent ? 0.25 * gamma : 0.5 * gamma;
    DensityMatrix d;
    d.rho11 = -0.5 * gamma * rho.rho11 + source;
    d.rho12 = -i * (2.0 * nu - i * 0.75 * gamma) * rho.rho12 - 0.25 * gamma * rho.rho21 + 0.5 * gamma;
    d.rho21 = i * (2.0 * nu + i * 0.75 * gamma) * rho.rho21 - 0.25 * gamma * rho.rho12 + 0.5 * gamma;
    return d;
}

struct GeneralSystem {
    DressedBasis basis;
    RelaxationRates rates;

    DensityMatrix operator()(const DensityMatrix& rho) const { return rhs_general(rho, rates, basis); }
    double oscillation() const noexcept { return 2.0 * basis.nu; }
    double relaxation() const noexcept
    {
        return std::max({rates.gamma_omega, rates.gamma_plus, rates.gamma_minus, rates.g11, rates.g12,
                         std::abs(rates.g21), rates.g22});
    }
    std::string_view name() const noexcept { return "general"; }
    std::uint64_t hash() const noexcept
    {
        return detail::fnv1a({basis.nu, basis.g, rates.gamma_omega, rates.gamma_plus, rates.gamma_minus, rates.g11,
                              rates.g12, rates.g21, rates.g22});
    }
};

struct ResonantSystem {
    double gamma = 0.0;
    double nu = 0.0;
    ResonantSource source = ResonantSource::Consistent;

    DensityMatrix operator()(const DensityMatrix& rho) const { return rhs_resonant(rho, gamma, nu, source); }
    double oscillation() const noexcept { return 2.0 * nu; }
    double relaxation() const noexcept { return gamma; }
    std::string_view name() const noexcept
    {
        return source == ResonantSource::Consistent ? "resonant-consistent" : "resonant-literal";
    }
    std::uint64_t hash() const noexcept
    {
        return detail::fnv1a({gamma, nu, source == ResonantSource::Consistent ? 1.0 : 0.0});
    }
};

/// Largest stable step: 0.05 * min(1/(2 nu), 1/Gamma); infinite for a static system.
template <class System>
double max_step(const System& sys) noexcept
{
    double bound = std::numeric_limits<double>::infinity();
    if (sys.oscillation() > 0.0)
        bound = std::min(bound, 0.05 / sys.oscillation());
    if (sys.relaxation() > 0.0)
        bound = std::min(bound, 0.05 / sys.relaxation());
    return bound;
}

struct Trajectory {
    std::vector<double> t;
    std::vector<DensityMatrix> rho;
    double dt = 0.0;
    std::string system;
    std::uint64_t params_hash = 0;

    const DensityMatrix& final_state() const { return rho.back(); }
};

struct IntegrateOptions {
    bool auto_shrink = true;
    std::size_t stride = 1; ///< keep every stride-th step (the final step is always kept)
};

/// Fixed-step classical RK4. The step is shrunk to the stability bound (unless
/// disabled) and then adjusted so that t_end is hit exactly.
template <class System>
Trajectory integrate(const DensityMatrix& rho0, const System& sys, double t_end, double dt,
                     const IntegrateOptions& opt = {})
{
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw Error(ErrorCode::InvalidParameter, "integrate needs t_end > 0 and dt > 0");
    if (rho0.hermiticity_defect() > 1e-12)
        throw Error(ErrorCode::NonHermitianInitialState, "rho21 must equal conj(rho12)");
    const double bound = max_step(sys);
    if (dt > bound) {
        if (!opt.auto_shrink)
            throw Error(ErrorCode::StepTooLarge,
                        "dt = " + std::to_string(dt) + " exceeds the bound " + std::to_string(bound));
        dt = bound;
    }
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt * (1.0 - 1e-12))));
    const double h = t_end / static_cast<double>(steps);
    const std::size_t stride = std::max<std::size_t>(1, opt.stride);

    Trajectory traj;
    traj.dt = h;
    traj.system = std::string(sys.name());
    traj.params_hash = sys.hash();
    traj.t.reserve(steps / stride + 2);
    traj.rho.reserve(steps / stride + 2);
    traj.t.push_back(0.0);
    traj.rho.push_back(rho0);

    DensityMatrix y = rho0;
    for (std::size_t n = 1; n <= steps; ++n) {
        const DensityMatrix k1 = sys(y);
        const DensityMatrix k2 = sys(y + (0.5 * h) * k1);
        const DensityMatrix k3 = sys(y + (0.5 * h) * k2);
        const DensityMatrix k4 = sys(y + h * k3);
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (n % stride == 0 || n == steps) {
            traj.t.push_back(n == steps ? t_end : static_cast<double>(n) * h);
            traj.rho.push_back(y);
        }
    }
    return traj;
}

/// Fixed point of an affine right-hand side, solved as a 3x3 real system in
/// (rho11, Re rho12, Im rho12) with rho21 = conj(rho12).
///
/// A population equation that degenerates to 0 = 0 (no relaxation) is closed
/// with rho11 = 1/2, the zero-rate limit.
template <class System>
DensityMatrix steady_state_linear(const System& sys)
{
    auto f = [&](double p, double re, double im) {
        auto d = sys(DensityMatrix::hermitian(p, {re, im}));
        return Eigen::Vector3d(d.rho11, d.rho12.real(), d.rho12.imag());
    };
    const Eigen::Vector3d f0 = f(0, 0, 0);
    Eigen::Matrix3d jac;
    jac.col(0) = f(1, 0, 0) - f0;
    jac.col(1) = f(0, 1, 0) - f0;
    jac.col(2) = f(0, 0, 1) - f0;
    Eigen::Vector3d rhs = -f0;

    if (jac.row(0).cwiseAbs().maxCoeff() == 0.0 && f0(0) == 0.0) {
        jac.row(0) = Eigen::RowVector3d(1, 0, 0);
        rhs(0) = 0.5;
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(jac);
    lu.setThreshold(1e-14);
    if (!lu.isInvertible())
        throw Error(ErrorCode::SingularSystem, "steady-state linear system is singular");
    const Eigen::Vector3d y = lu.solve(rhs);
    return DensityMatrix::hermitian(y(0), {y(1), y(2)});
}

/// Reference closed form: rho11 = 1/2, rho12 = G (2 i nu - G/2) / (2 (4 nu^2 - G^2/2)).
/// Its denominator has a pole at 4 nu^2 = G^2/2.
inline DensityMatrix steady_state_closed_form(double gamma, double nu)
{
    const double denom = 2.0 * (4.0 * nu * nu - 0.5 * gamma * gamma);
    const double scale = std::max(4.0 * nu * nu, 0.5 * gamma * gamma);
    if (std::abs(denom) <= 1e-12 * scale || denom == 0.0)
        throw Error(ErrorCode::SingularSystem, "closed-form steady state has a pole at 4 nu^2 = Gamma^2 / 2");
    const cplx rho12 = gamma * cplx(-0.5 * gamma, 2.0 * nu) / denom;
    return DensityMatrix::hermitian(0.5, rho12);
}

/// Both steady-state routes side by side.
struct SteadyStateReport {
    DensityMatrix linear_solve;
    std::optional<DensityMatrix> closed_form; ///< empty at the closed form's pole
    double discrepancy = std::numeric_limits<double>::quiet_NaN();
    double magnitude_discrepancy = std::numeric_limits<double>::quiet_NaN(); ///< ||rho12| - |rho12'||
    bool rho11_matches_half = false; ///< linear-solve rho11 == 1/2 within 1e-9
};

inline SteadyStateReport steady_state(double gamma, double nu, ResonantSource source = ResonantSource::Consistent)
{
    if (!(gamma > 0.0) && !(nu > 0.0))
        throw Error(ErrorCode::InvalidParameter, "steady state needs gamma > 0 or nu > 0");
    SteadyStateReport rep;
    rep.linear_solve = steady_state_linear(ResonantSystem{gamma, nu, source});
    rep.rho11_matches_half = std::abs(rep.linear_solve.rho11 - 0.5) <= 1e-9;
    try {
        rep.closed_form = steady_state_closed_form(gamma, nu);
        rep.discrepancy = max_abs_difference(rep.linear_solve, *rep.closed_form);
        rep.magnitude_discrepancy = std::abs(std::abs(rep.linear_solve.rho12) - std::abs(rep.closed_form->rho12));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularSystem)
            throw;
    }
    return rep;
}

} // namespace qantenna
