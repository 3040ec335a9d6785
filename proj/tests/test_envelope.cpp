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
#include <vector>

#include "qantenna/envelope.hpp"

using namespace qantenna;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

// Composite trapezoid of (1/l) int f(x) exp(-i k x cos(theta)) dx over n panels.
cplx trapezoid_form_factor(double theta, double kl_half, double phi, std::size_t n)
{
    const double length = 2.0 * kl_half;
    const double c = std::cos(theta);
    auto f = [&](double u) { return std::polar(1.0, (phi - c) * u * length); };
    const double h = 1.0 / static_cast<double>(n);
    cplx sum = 0.5 * (f(-0.5) + f(0.5));
    for (std::size_t i = 1; i < n; ++i)
        sum += f(-0.5 + static_cast<double>(i) * h);
    return sum * h;
}

std::vector<double> uniform_thetas(std::size_t n, double hi)
{
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = hi * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

} // namespace

TEST_CASE("sinc uses the series branch near zero", "[envelope]")
{
    CHECK(sinc(0.0) == 1.0);
    CHECK_THAT(sinc(1e-7), WithinAbs(1.0 - 1e-14 / 6.0, 1e-18));
    // Both branches agree across the switch point.
    CHECK_THAT(sinc(0.999999e-6), WithinAbs(std::sin(1.000001e-6) / 1.000001e-6, 1e-15));
    CHECK_THAT(sinc(0.4 * pi), WithinAbs(0.756826728640656954, 1e-15));
}

TEST_CASE("stationary phase gives unit form factor", "[envelope]")
{
    const double kl_half = 2.0 * pi;
    const auto env = Envelope::linear_phase(1.0, 0.8);
    const cplx f = form_factor(std::acos(0.8), 1.0, env, 2.0 * kl_half);
    CHECK_THAT(f.real(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(f.imag(), WithinAbs(0.0, 1e-12));
    CHECK(form_factor_linear_phase(std::acos(0.8), kl_half, 0.8) == 1.0);
}

TEST_CASE("point emitter limit", "[envelope]")
{
    const auto env = Envelope::linear_phase(1.0, 0.8);
    for (double theta : {0.0, 0.7, 1.5, pi}) {
        CHECK_THAT(std::abs(form_factor(theta, 1.0, env, 2e-8)), WithinAbs(1.0, 1e-15));
        CHECK_THAT(form_factor_linear_phase(theta, 1e-8, 0.8), WithinAbs(1.0, 1e-15));
    }
    CHECK(form_factor(0.3, 1.0, env, 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("broadside form factor matches the trapezoid oracle", "[envelope][oracle]")
{
    const double kl_half = 2.0 * pi;
    const cplx oracle = trapezoid_form_factor(pi / 2, kl_half, 0.8, 1'000'000);
    // sin(1.6 pi) / (1.6 pi)
    CHECK_THAT(oracle.real(), WithinAbs(-0.189206682160164217, 1e-10));
    CHECK_THAT(oracle.imag(), WithinAbs(0.0, 1e-10));

    const auto env = Envelope::linear_phase(1.0, 0.8);
    const cplx f = form_factor(pi / 2, 1.0, env, 2.0 * kl_half);
    CHECK_THAT(f.real(), WithinAbs(oracle.real(), 1e-10));
    CHECK_THAT(f.imag(), WithinAbs(0.0, 1e-12));
    CHECK_THAT(form_factor_linear_phase(pi / 2, kl_half, 0.8), WithinAbs(-0.189206682160164217, 1e-15));
}

TEST_CASE("axial form factor", "[envelope]")
{
    const double expected = 0.756826728640656954; // sin(0.4 pi) / (0.4 pi)
    CHECK_THAT(form_factor_linear_phase(0.0, 2.0 * pi, 0.8), WithinAbs(expected, 1e-15));
    const auto env = Envelope::linear_phase(1.0, 0.8);
    CHECK_THAT(form_factor(0.0, 1.0, env, 4.0 * pi).real(), WithinAbs(expected, 1e-12));
}

TEST_CASE("first pattern null", "[envelope]")
{
    CHECK_THAT(form_factor_linear_phase(std::acos(0.3), 2.0 * pi, 0.8), WithinAbs(0.0, 1e-14));
}

TEST_CASE("closed form agrees with quadrature on a 181-point grid", "[envelope][property]")
{
    const auto kl_half = GENERATE(0.5, 2.0 * pi, 4.0 * pi, 15.0 * pi, 20.0 * pi);
    const auto phi = GENERATE(0.0, 0.8, 1.2);
    const auto env = Envelope::linear_phase(1.0, phi);
    double worst = 0.0;
    for (double theta : uniform_thetas(181, pi)) {
        const cplx q = form_factor(theta, 1.0, env, 2.0 * kl_half);
        const double closed = form_factor_linear_phase(theta, kl_half, phi);
        worst = std::max(worst, std::abs(q - closed));
        CHECK(std::abs(q) <= 1.0 + 1e-12);
    }
    INFO("kl/2 = " << kl_half << ", phi = " << phi);
    CHECK(worst <= 1e-8);
}

TEST_CASE("linear-phase form factor depends on theta only through cos", "[envelope][property]")
{
    for (double theta : uniform_thetas(37, pi)) {
        CHECK(form_factor_linear_phase(theta, 4.0 * pi, 0.8) == form_factor_linear_phase(-theta, 4.0 * pi, 0.8));
        CHECK_THAT(form_factor_linear_phase(theta, 4.0 * pi, 0.8),
                   WithinAbs(form_factor_linear_phase(2.0 * pi - theta, 4.0 * pi, 0.8), 1e-13));
    }
}

TEST_CASE("shifted frequency enters the form factor through k", "[envelope]")
{
    const auto env = Envelope::linear_phase(1.0, 0.8);
    const double theta = 0.9;
    const cplx q = form_factor(theta, 1.2, env, 4.0 * pi);
    CHECK_THAT(q.real(), WithinAbs(form_factor_linear_phase(theta, 2.0 * pi, 0.8, 1.2), 1e-10));
}

TEST_CASE("tabulated envelope reproduces the linear-phase result", "[envelope][tabulated]")
{
    const double kl_half = 2.0 * pi;
    const double length = 2.0 * kl_half;
    std::vector<EnvelopeSample> samples;
    const std::size_t n = 2001;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -0.5 * length + length * static_cast<double>(i) / static_cast<double>(n - 1);
        samples.push_back({x, std::polar(1.0, 0.8 * x)});
    }
    const auto env = Envelope::tabulated(samples);
    for (double theta : uniform_thetas(19, pi)) {
        const cplx q = form_factor(theta, 1.0, env, length);
        CHECK_THAT(q.real(), WithinAbs(form_factor_linear_phase(theta, kl_half, 0.8), 1e-6));
        CHECK_THAT(q.imag(), WithinAbs(0.0, 1e-6));
    }
    CHECK_THROWS_AS(form_factor(0.3, 1.0, env, 2.0 * length), Error);
}

TEST_CASE("tabulated envelope input checks", "[envelope][tabulated][errors]")
{
    std::vector<EnvelopeSample> few(8, EnvelopeSample{0.0, 1.0});
    for (std::size_t i = 0; i < few.size(); ++i)
        few[i].x = static_cast<double>(i);
    CHECK_THROWS_AS(Envelope::tabulated(few), Error);

    std::vector<EnvelopeSample> unordered(9, EnvelopeSample{0.0, 1.0});
    for (std::size_t i = 0; i < unordered.size(); ++i)
        unordered[i].x = static_cast<double>(i);
    unordered[4].x = unordered[3].x;
    CHECK_THROWS_AS(Envelope::tabulated(unordered), Error);
}

TEST_CASE("quadrature reports non-convergence", "[envelope][errors]")
{
    quad::Options opt;
    opt.max_depth = 3;
    opt.rel_tol = 1e-14;
    auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
    try {
        (void)quad::integrate(step, 0.0, 1.0, opt);
        FAIL("expected QuadratureNonConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::QuadratureNonConvergence);
        CHECK(e.is_numerical());
    }
}

TEST_CASE("quadrature integrates polynomials and oscillatory integrands", "[envelope][quadrature]")
{
    auto poly = [](double x) { return x * x * x * x; };
    CHECK_THAT(quad::integrate(poly, 0.0, 1.0).value, WithinRel(0.2, 1e-14));
    auto osc = [](double x) { return std::cos(200.0 * x); };
    quad::Options opt;
    opt.initial_panels = 32;
    CHECK_THAT(quad::integrate(osc, 0.0, 1.0, opt).value, WithinAbs(std::sin(200.0) / 200.0, 1e-13));
}
