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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qantenna/dynamics.hpp"

using namespace qantenna;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

template <class System>
void check_invariants(const Trajectory& traj, const System&, bool positivity)
{
    REQUIRE(traj.t.size() == traj.rho.size());
    double herm = 0.0;
    double pos = 0.0;
    for (std::size_t i = 0; i < traj.rho.size(); ++i) {
        if (i > 0)
            REQUIRE(traj.t[i] > traj.t[i - 1]);
        herm = std::max(herm, traj.rho[i].hermiticity_defect());
        pos = std::min(pos, traj.rho[i].positivity_margin());
        CHECK(traj.rho[i].rho11 >= -1e-9);
        CHECK(traj.rho[i].rho11 <= 1.0 + 1e-9);
    }
    CHECK(herm <= 1e-9);
    if (positivity)
        CHECK(pos >= -1e-9);
}

GeneralSystem general_system(double detuning, double rabi, double g0, double gp, double gm)
{
    GeneralSystem s;
    s.basis = dressed_basis(detuning, rabi);
    s.rates = relaxation_params(s.basis, g0, gp, gm);
    return s;
}

} // namespace

TEST_CASE("resonant fixed points", "[dynamics]")
{
    const ResonantSystem consistent{0.01, 0.1, ResonantSource::Consistent};
    const auto ss = steady_state_linear(consistent);
    CHECK_THAT(ss.rho11, WithinAbs(0.5, 1e-15));
    const auto d = consistent(ss);
    CHECK(std::abs(d.rho11) <= 1e-12);
    CHECK(std::abs(d.rho12) <= 1e-12);
    CHECK(std::abs(d.rho21) <= 1e-12);

    const ResonantSystem literal{0.01, 0.1, ResonantSource::Literal};
    CHECK_THAT(steady_state_linear(literal).rho11, WithinAbs(1.0, 1e-15));
}

TEST_CASE("linear-solve steady state regression value", "[dynamics][oracle]")
{
    // Gamma (Gamma/2 - 2 i nu) / (Gamma^2 + 8 nu^2) at Gamma = 0.01, nu = 0.1.
    const auto rep = steady_state(0.01, 0.1);
    CHECK_THAT(rep.linear_solve.rho12.real(), WithinAbs(6.24219725343320849e-4, 1e-16));
    CHECK_THAT(rep.linear_solve.rho12.imag(), WithinAbs(-0.0249687890137328340, 1e-16));
    CHECK(rep.rho11_matches_half);
    REQUIRE(rep.closed_form);
    CHECK_THAT(rep.closed_form->rho12.real(), WithinAbs(-6.25782227784730914e-4, 1e-16));
    CHECK_THAT(rep.closed_form->rho12.imag(), WithinAbs(0.0250312891113892365, 1e-16));
    // The reference closed form carries the opposite sign; the report makes that visible.
    CHECK(rep.discrepancy > 0.04);
    CHECK(rep.magnitude_discrepancy < 1e-3);
}

TEST_CASE("closed-form magnitude agrees when nu >> Gamma", "[dynamics]")
{
    const double gamma = 1e-4;
    const double nu = 0.1;
    const auto rep = steady_state(gamma, nu);
    REQUIRE(rep.closed_form);
    const double scale = (gamma / nu) * (gamma / nu);
    CHECK(std::abs(rep.linear_solve.rho12) < 10.0 * gamma / nu);
    CHECK(rep.magnitude_discrepancy <= scale * std::abs(rep.linear_solve.rho12));
}

TEST_CASE("undamped steady state", "[dynamics]")
{
    const auto rep = steady_state(0.0, 0.1);
    CHECK(rep.linear_solve.rho11 == 0.5);
    CHECK(std::abs(rep.linear_solve.rho12) == 0.0);
    REQUIRE(rep.closed_form);
    CHECK(rep.closed_form->rho11 == 0.5);
    CHECK(std::abs(rep.closed_form->rho12) == 0.0);
}

TEST_CASE("closed form pole is reported", "[dynamics][errors]")
{
    const double gamma = 0.01;
    const double nu = gamma / (2.0 * std::sqrt(2.0));
    try {
        (void)steady_state_closed_form(gamma, nu);
        FAIL("expected SingularSystem");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularSystem);
    }
    const auto rep = steady_state(gamma, nu);
    CHECK_FALSE(rep.closed_form);
    CHECK(rep.rho11_matches_half);
    CHECK_THROWS_AS(steady_state(0.0, 0.0), Error);
}

TEST_CASE("closed system rotates coherences", "[dynamics]")
{
    const double nu = 0.1;
    const ResonantSystem sys{0.0, nu, ResonantSource::Consistent};
    const auto rho0 = DensityMatrix::hermitian(0.7, {0.2, 0.1});
    const auto d = sys(rho0);
    CHECK(d.rho11 == 0.0);
    const auto traj = integrate(rho0, sys, 50.0, 0.01);
    const auto& end = traj.final_state();
    CHECK(end.rho11 == 0.7);
    const cplx expected = rho0.rho12 * std::polar(1.0, -2.0 * nu * 50.0);
    CHECK(std::abs(end.rho12 - expected) <= 1e-9);
}

TEST_CASE("resonant integration relaxes to one half", "[dynamics]")
{
    const double gamma = 0.01;
    const ResonantSystem sys{gamma, 0.1, ResonantSource::Consistent};
    const auto ss = steady_state_linear(sys);
    const auto rho0 = GENERATE(DensityMatrix::diagonal(1.0), DensityMatrix::diagonal(0.0),
                               DensityMatrix::hermitian(0.5, {0.3, -0.4}), DensityMatrix::hermitian(0.2, {0.0, 0.4}));
    const auto traj = integrate(rho0, sys, 40.0 / gamma, 1.0);
    CHECK(traj.rho.front() == rho0);
    CHECK(traj.t.back() == 40.0 / gamma);
    CHECK(traj.dt <= max_step(sys));
    CHECK_THAT(traj.final_state().rho11, WithinAbs(0.5, 1e-6));
    CHECK(max_abs_difference(traj.final_state(), ss) <= 1e-6);
    check_invariants(traj, sys, true);
}

TEST_CASE("steady state start stays put", "[dynamics]")
{
    const ResonantSystem sys{0.01, 0.1, ResonantSource::Consistent};
    const auto ss = steady_state_linear(sys);
    const auto traj = integrate(ss, sys, 1000.0, 1.0);
    double worst = 0.0;
    for (const auto& r : traj.rho)
        worst = std::max(worst, max_abs_difference(r, ss));
    CHECK(worst <= 1e-9);
}

TEST_CASE("population relaxes at Gamma / 2", "[dynamics]")
{
    const double gamma = 0.02;
    const ResonantSystem sys{gamma, 0.1, ResonantSource::Consistent};
    IntegrateOptions opt;
    opt.stride = 100;
    const auto traj = integrate(DensityMatrix::diagonal(1.0), sys, 10.0 / gamma, 1.0, opt);
    // Least-squares slope of log|rho11 - 1/2|.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double y = std::log(std::abs(traj.rho[i].rho11 - 0.5));
        sx += traj.t[i];
        sy += y;
        sxx += traj.t[i] * traj.t[i];
        sxy += traj.t[i] * y;
        n += 1;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK_THAT(-slope, WithinRel(0.5 * gamma, 0.02));
}

TEST_CASE("undriven excited state decays at Gamma", "[dynamics]")
{
    const double gamma = 0.05;
    const auto sys = general_system(0.2, 0.0, gamma, 0.07, 0.03);
    REQUIRE(sys.basis.g == 0.0);
    const auto traj = integrate(DensityMatrix::diagonal(1.0), sys, 60.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.t.size(); ++i)
        worst = std::max(worst, std::abs(traj.rho[i].rho11 - std::exp(-gamma * traj.t[i])));
    CHECK(worst <= 1e-9);
}

TEST_CASE("general equations reduce to the consistent resonant population equation", "[dynamics]")
{
    const double gamma = 0.03;
    const auto sys = general_system(0.0, 0.2, gamma, gamma, gamma);
    for (double p : {0.0, 0.3, 1.0}) {
        const auto rho = DensityMatrix::hermitian(p, {0.1, 0.05});
        CHECK_THAT(sys(rho).rho11, WithinAbs(-0.5 * gamma * p + 0.25 * gamma, 1e-15));
    }
}

TEST_CASE("general system invariants and fixed point", "[dynamics][property]")
{
    const double detuning = GENERATE(0.0, 0.05, -0.08);
    const auto sys = general_system(detuning, 0.2, 0.01, 0.012, 0.008);
    const auto ss = steady_state_linear(sys);
    const auto d = sys(ss);
    CHECK(std::abs(d.rho11) + std::abs(d.rho12) + std::abs(d.rho21) <= 1e-12);
    for (const auto& rho0 : {DensityMatrix::diagonal(1.0), DensityMatrix::diagonal(0.0)}) {
        const auto traj = integrate(rho0, sys, 40.0 / 0.006, 1.0, {true, 50});
        check_invariants(traj, sys, true);
        CHECK(max_abs_difference(traj.final_state(), ss) <= 1e-6);
    }
}

TEST_CASE("general equations with resonant-approximation rates are the consistent resonant system", "[dynamics]")
{
    const double gamma = 0.01;
    GeneralSystem general;
    general.basis = dressed_basis(0.0, 0.2);
    general.rates = resonant_approximation(gamma);
    const ResonantSystem resonant{gamma, general.basis.nu, ResonantSource::Consistent};
    for (const auto& rho : {DensityMatrix::diagonal(0.3), DensityMatrix::hermitian(0.5, {0.5, 0.0}),
                            DensityMatrix::hermitian(0.1, {-0.2, 0.25})}) {
        CHECK(max_abs_difference(general(rho), resonant(rho)) <= 1e-17);
    }
}

TEST_CASE("literal relaxation coefficients do not preserve positivity of coherent states", "[dynamics]")
{
    // With Gamma(w + 2nu) ~ Gamma(w - 2nu) the literal g21 is ~0, so the constant
    // coherence source Gamma/2 is no longer balanced at the Bloch-sphere surface:
    // at rho11 = 1/2, rho12 = 1/2, d|rho12|^2/dt = rho12 (g22 - g12/2 - g21/2) > 0.
    GeneralSystem sys;
    sys.basis = dressed_basis(0.0, 0.2);
    sys.rates = relaxation_params(sys.basis, 0.01, 0.012, 0.008);
    const auto rho0 = DensityMatrix::hermitian(0.5, {0.5, 0.0});
    const auto d = sys(rho0);
    CHECK_THAT(2.0 * (std::conj(rho0.rho12) * d.rho12).real(), WithinAbs(1e-3, 1e-15));
    double margin = 0.0;
    for (const auto& r : integrate(rho0, sys, 20.0, max_step(sys)).rho)
        margin = std::min(margin, r.positivity_margin());
    CHECK(margin < -1e-3);

    sys.rates = resonant_approximation(0.01);
    margin = 0.0;
    for (const auto& r : integrate(rho0, sys, 20.0, max_step(sys)).rho)
        margin = std::min(margin, r.positivity_margin());
    CHECK(margin >= -1e-9);
}

TEST_CASE("RK4 converges at fourth order", "[dynamics]")
{
    const ResonantSystem sys{0.5, 0.5, ResonantSource::Consistent};
    const auto rho0 = DensityMatrix::diagonal(1.0);
    const double h = max_step(sys);
    const double t_end = 10.0;
    const auto ref = integrate(rho0, sys, t_end, h / 10.0).final_state();
    const double e1 = max_abs_difference(integrate(rho0, sys, t_end, h).final_state(), ref);
    const double e2 = max_abs_difference(integrate(rho0, sys, t_end, h / 2.0).final_state(), ref);
    CHECK_THAT(e1 / e2, WithinAbs(16.0, 3.0));
}

TEST_CASE("integrator input checks", "[dynamics][errors]")
{
    const ResonantSystem sys{0.01, 0.1, ResonantSource::Consistent};
    const DensityMatrix bad{0.5, {0.1, 0.0}, {0.2, 0.0}};
    try {
        (void)integrate(bad, sys, 10.0, 0.1);
        FAIL("expected NonHermitianInitialState");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonHermitianInitialState);
    }
    try {
        (void)integrate(DensityMatrix::diagonal(1.0), sys, 10.0, 1.0, {false, 1});
        FAIL("expected StepTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepTooLarge);
        CHECK(e.is_numerical());
    }
    const auto traj = integrate(DensityMatrix::diagonal(1.0), sys, 10.0, 1.0);
    CHECK(traj.dt <= 0.05 / 0.2);
    CHECK(traj.system == "resonant-consistent");
}

TEST_CASE("trajectory metadata is stable", "[dynamics]")
{
    const ResonantSystem a{0.01, 0.1, ResonantSource::Consistent};
    const ResonantSystem b{0.01, 0.1, ResonantSource::Literal};
    CHECK(a.hash() == ResonantSystem{0.01, 0.1, ResonantSource::Consistent}.hash());
    CHECK(a.hash() != b.hash());
    IntegrateOptions opt;
    opt.stride = 7;
    const auto traj = integrate(DensityMatrix::diagonal(1.0), a, 100.0, 0.25, opt);
    CHECK(traj.t.front() == 0.0);
    CHECK(traj.t.back() == 100.0);
    CHECK(traj.params_hash == a.hash());
}
