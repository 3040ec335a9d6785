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
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "qantenna/envelope.hpp"
#include "qantenna/error.hpp"
#include "qantenna/params.hpp"
#include "qantenna/quadrature.hpp"

namespace qantenna {

inline constexpr double kDeg = std::numbers::pi / 180.0;

/// Strong-field steady-state dipole correlation <sigma+(0) sigma-(tau)>.
/// Negative tau uses g(-tau) = conj(g(tau)).
inline cplx correlation_ss(double tau, double gamma, double rabi, double omega)
{
    if (tau < 0.0)
        return std::conj(correlation_ss(-tau, gamma, rabi, omega));
    const double central = std::exp(-0.5 * gamma * tau);
    const double side = 0.5 * std::exp(-0.75 * gamma * tau);
    const cplx lines = central + side * std::polar(1.0, -rabi * tau) + side * std::polar(1.0, rabi * tau);
    return 0.25 * lines * std::polar(1.0, -omega * tau);
}

/// The three lines of the triplet: central at omega0, plus at omega0 + rabi, minus at omega0 - rabi.
enum class Line { Central, Plus, Minus };

inline constexpr std::array<Line, 3> kLines{Line::Central, Line::Plus, Line::Minus};

constexpr std::string_view to_string(Line l)
{
    switch (l) {
    case Line::Central: return "central";
    case Line::Plus: return "plus";
    case Line::Minus: return "minus";
    }
    return "";
}

struct PsiArguments {
    double psi = 0.0;
    double plus = 0.0;
    double minus = 0.0;
};

/// Psi = kl/2 (cos(theta) - phi); the side-line shift is rabi_ratio cos(theta)
/// in literal mode or kl/2 rabi_ratio cos(theta) when carried through the
/// double integral (derived mode).
inline PsiArguments psi_arguments(double theta, double kl_half, double phi, double rabi_ratio, PsiMode mode)
{
    const double c = std::cos(theta);
    PsiArguments a;
    a.psi = kl_half * (c - phi);
    const double shift = (mode == PsiMode::Derived ? kl_half : 1.0) * rabi_ratio * c;
    a.plus = a.psi + shift;
    a.minus = a.psi - shift;
    return a;
}

/// Geometry of the linear-phase wire seen by the radiation module.
struct WireGeometry {
    double kl_half = 0.0;
    double phi = 0.0;
    double rabi_ratio = 0.0; ///< rabi / omega

    static WireGeometry from(const ValidatedParams& p) { return {p.raw.kl_half, p.raw.phi, p.rabi_ratio()}; }
};

struct PatternPoint {
    double theta = 0.0; ///< radians
    double xi_total = 0.0;
    double xi_central = 0.0;
    double xi_plus = 0.0;
    double xi_minus = 0.0;
    double psi = 0.0;
    double psi_plus = 0.0;
    double psi_minus = 0.0;

    double component(Line l) const noexcept
    {
        return l == Line::Central ? xi_central : (l == Line::Plus ? xi_plus : xi_minus);
    }
};

/// Weight of each component at its maximum: 1/2, 1/4, 1/4.
constexpr double line_weight(Line l) noexcept { return l == Line::Central ? 0.5 : 0.25; }

/// xi(theta) = 1/2 { sinc^2 Psi + 1/2 sinc^2 Psi+ + 1/2 sinc^2 Psi- }, components kept apart.
inline PatternPoint xi_pattern(double theta, const WireGeometry& w, PsiMode mode)
{
    const auto a = psi_arguments(theta, w.kl_half, w.phi, w.rabi_ratio, mode);
    auto sq = [](double x) { return x * x; };
    PatternPoint p;
    p.theta = theta;
    p.psi = a.psi;
    p.psi_plus = a.plus;
    p.psi_minus = a.minus;
    p.xi_central = 0.5 * sq(sinc(a.psi));
    p.xi_plus = 0.25 * sq(sinc(a.plus));
    p.xi_minus = 0.25 * sq(sinc(a.minus));
    p.xi_total = p.xi_central + p.xi_plus + p.xi_minus;
    return p;
}

inline std::vector<PatternPoint> pattern(const std::vector<double>& thetas, const WireGeometry& w, PsiMode mode)
{
    std::vector<PatternPoint> out;
    out.reserve(thetas.size());
    for (double t : thetas)
        out.push_back(xi_pattern(t, w, mode));
    return out;
}

/// Direct two-dimensional quadrature of the pattern integral
///
///   2 Re int dx conj(f(x)) int_x^{l/2} f(x') g((x' - x) cos(theta)) dx'
///
/// with f(x) = exp(i k phi x) and g the steady-state correlation (k = omega = 1),
/// normalised by 2 / l^2 so a coherent maximum equals the closed form.
/// gamma_l is the product Gamma * l / c used inside the correlation.
inline double xi_pattern_bruteforce(double theta, const WireGeometry& w, double gamma_l = 1e-12)
{
    const double length = 2.0 * w.kl_half; // k = 1
    const double rabi = w.rabi_ratio;
    if (length == 0.0)
        return 2.0 * correlation_ss(0.0, 0.0, rabi, 1.0).real();
    const double gamma = gamma_l / length;
    const double c = std::cos(theta);
    const double rate = std::abs(w.phi) + (1.0 + rabi) * std::abs(c);

    quad::Options inner_opt;
    inner_opt.rel_tol = 1e-12;
    inner_opt.abs_floor = 1e-16;
    quad::Options outer_opt;
    outer_opt.rel_tol = 1e-12;
    outer_opt.abs_floor = 1e-14;
    outer_opt.initial_panels = 1 + static_cast<int>(rate * length / (2.0 * std::numbers::pi));

    // Variables scaled to u = x / l on [-1/2, 1/2].
    auto outer = [&](double u) {
        auto inner = [&](double v) {
            const double s = (v - u) * length; // x' - x
            return std::polar(1.0, w.phi * s) * correlation_ss(s * c, gamma, rabi, 1.0);
        };
        quad::Options opt = inner_opt;
        opt.initial_panels = 1 + static_cast<int>(rate * (0.5 - u) * length / (2.0 * std::numbers::pi));
        return quad::integrate(inner, u, 0.5, opt).value;
    };
    const cplx total = quad::integrate(outer, -0.5, 0.5, outer_opt).value;
    return 4.0 * total.real();
}

inline double obliquity_factor(double theta, Obliquity o) noexcept
{
    const double s = o == Obliquity::Sin2 ? std::sin(theta) : std::cos(theta);
    return s * s;
}

/// Emitter parameters entering the angle-resolved spectrum.
struct SpectrumModel {
    WireGeometry wire;
    double omega0 = 1.0;
    double rabi = 0.0;
    double gamma = kDefaultGamma;
    double prefactor = 1.0; ///< collapses k^4 d^2 / (4 pi (4 pi eps0)^2 R^2)

    static SpectrumModel from(const ValidatedParams& p, double gamma, double prefactor = 1.0)
    {
        return {WireGeometry::from(p), p.raw.omega0, p.raw.rabi, gamma, prefactor};
    }
};

struct SpectrumPoint {
    double omega = 0.0;
    double theta = 0.0;
    double s_total = 0.0;
    double s_central = 0.0;
    double s_plus = 0.0;
    double s_minus = 0.0;
};

/// S(omega; theta) = K obliquity Gamma { sinc^2 Psi / ((w - w0)^2 + (G/2)^2)
///   + 3/4 sinc^2 Psi+ / ((w - w0 - W)^2 + (3G/4)^2) + 3/4 sinc^2 Psi- / ((w - w0 + W)^2 + (3G/4)^2) }.
inline SpectrumPoint spectrum(double omega_detect, double theta, const SpectrumModel& m, const ModeFlags& modes)
{
    const auto a = psi_arguments(theta, m.wire.kl_half, m.wire.phi, m.wire.rabi_ratio, modes.psi_mode);
    auto sq = [](double x) { return x * x; };
    const double scale = m.prefactor * obliquity_factor(theta, modes.obliquity) * m.gamma;
    const double dw = omega_detect - m.omega0;
    const double hw_c = 0.5 * m.gamma;
    const double hw_s = 0.75 * m.gamma;

    SpectrumPoint s;
    s.omega = omega_detect;
    s.theta = theta;
    s.s_central = scale * sq(sinc(a.psi)) / (dw * dw + hw_c * hw_c);
    s.s_plus = scale * 0.75 * sq(sinc(a.plus)) / (sq(dw - m.rabi) + hw_s * hw_s);
    s.s_minus = scale * 0.75 * sq(sinc(a.minus)) / (sq(dw + m.rabi) + hw_s * hw_s);
    s.s_total = s.s_central + s.s_plus + s.s_minus;
    return s;
}

/// Per-line main-lobe geometry.
struct LineLobe {
    std::optional<double> beam_angle;      ///< radians; empty when the main lobe is invisible
    std::optional<double> grid_peak_angle; ///< grid maximum of the component closest to beam_angle
    double phi_critical = 1.0;
    int lobe_count = 0;
};

struct LineAnalysis {
    std::array<LineLobe, 3> lines; ///< indexed by Line
    /// Pairwise separations in degrees: central-plus, central-minus, plus-minus; empty if either is invisible.
    std::array<std::optional<double>, 3> splitting_deg;

    const LineLobe& operator[](Line l) const { return lines[static_cast<std::size_t>(l)]; }
    LineLobe& operator[](Line l) { return lines[static_cast<std::size_t>(l)]; }

    int visible_count() const
    {
        return static_cast<int>(std::count_if(lines.begin(), lines.end(),
                                              [](const LineLobe& l) { return l.beam_angle.has_value(); }));
    }

    double max_splitting_deg() const
    {
        double m = 0.0;
        for (const auto& s : splitting_deg)
            if (s)
                m = std::max(m, *s);
        return m;
    }
};

/// cos(theta) at which the main lobe of a line sits.
///
/// Derived mode: the zero of the derived Psi_line, phi / (1 +- r). Literal
/// mode: the beam directions cos(theta) = phi (1 +- r).
inline double main_lobe_cosine(Line line, double phi, double rabi_ratio, PsiMode mode)
{
    if (line == Line::Central)
        return phi;
    const double sign = line == Line::Plus ? 1.0 : -1.0;
    return mode == PsiMode::Derived ? phi / (1.0 + sign * rabi_ratio) : phi * (1.0 + sign * rabi_ratio);
}

/// Phase shift beyond which a line's main lobe leaves the visible region.
inline double critical_phase_shift(Line line, double rabi_ratio, PsiMode mode)
{
    if (line == Line::Central)
        return 1.0;
    const double sign = line == Line::Plus ? 1.0 : -1.0;
    return mode == PsiMode::Derived ? 1.0 + sign * rabi_ratio : 1.0 / (1.0 + sign * rabi_ratio);
}

/// Angle of the main lobe, or empty when its cosine leaves (0, 1].
inline std::optional<double> beam_angle(Line line, double phi, double rabi_ratio, PsiMode mode)
{
    const double c = main_lobe_cosine(line, phi, rabi_ratio, mode);
    constexpr double tol = 1e-12;
    if (!(c > 0.0) || c > 1.0 + tol)
        return std::nullopt;
    return std::acos(std::min(c, 1.0));
}

/// Indices of strict local maxima. theta = 0 is a symmetry axis of the pattern,
/// so a first sample at 0 counts when it exceeds its neighbour.
inline std::vector<std::size_t> local_maxima(const std::vector<double>& thetas, const std::vector<double>& values)
{
    std::vector<std::size_t> idx;
    const std::size_t n = values.size();
    if (n >= 2 && thetas.front() == 0.0 && values[0] > values[1])
        idx.push_back(0);
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (values[i] > values[i - 1] && values[i] > values[i + 1])
            idx.push_back(i);
    return idx;
}

inline LineAnalysis line_analysis(const WireGeometry& w, PsiMode mode, const std::vector<double>& thetas)
{
    const auto pts = pattern(thetas, w, mode);
    LineAnalysis out;
    for (Line line : kLines) {
        auto& lobe = out[line];
        lobe.phi_critical = critical_phase_shift(line, w.rabi_ratio, mode);
        lobe.beam_angle = beam_angle(line, w.phi, w.rabi_ratio, mode);

        std::vector<double> values(pts.size());
        std::transform(pts.begin(), pts.end(), values.begin(),
                       [&](const PatternPoint& p) { return p.component(line); });
        const auto peaks = local_maxima(thetas, values);
        lobe.lobe_count = static_cast<int>(peaks.size());
        if (lobe.beam_angle && !peaks.empty()) {
            auto best = std::min_element(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
                return std::abs(thetas[a] - *lobe.beam_angle) < std::abs(thetas[b] - *lobe.beam_angle);
            });
            lobe.grid_peak_angle = thetas[*best];
        }
    }
    auto sep = [&](Line a, Line b) -> std::optional<double> {
        if (!out[a].beam_angle || !out[b].beam_angle)
            return std::nullopt;
        return std::abs(*out[a].beam_angle - *out[b].beam_angle) / kDeg;
    };
    out.splitting_deg = {sep(Line::Central, Line::Plus), sep(Line::Central, Line::Minus), sep(Line::Plus, Line::Minus)};
    return out;
}

/// Inclusive angle grid in degrees, returned in radians.
inline std::vector<double> theta_grid(double start_deg, double stop_deg, double step_deg)
{
    if (!(step_deg > 0.0) || stop_deg < start_deg)
        throw Error(ErrorCode::InvalidParameter, "theta grid needs step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = (start_deg + static_cast<double>(i) * step_deg) * kDeg;
    return out;
}

} // namespace qantenna
