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
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/interpolators/makima.hpp>

#include "qantenna/error.hpp"
#include "qantenna/quadrature.hpp"

namespace qantenna {

using cplx = std::complex<double>;

/// sin(x)/x with the Taylor branch 1 - x^2/6 for |x| < 1e-6.
inline double sinc(double x) noexcept
{
    if (std::abs(x) < 1e-6)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

struct EnvelopeSample {
    double x;
    cplx f;
};

/// Spatial quantum envelope f(x) of the wire on [-l/2, l/2].
class Envelope {
public:
    enum class Kind { LinearPhase, Tabulated };

    /// f(x) = exp(i k phi x).
    static Envelope linear_phase(double wavenumber, double phi)
    {
        Envelope e;
        e.kind_ = Kind::LinearPhase;
        e.wavenumber_ = wavenumber;
        e.phi_ = phi;
        return e;
    }

    /// Piecewise-cubic (modified Akima) interpolation of complex samples.
    /// Requires at least 9 samples with strictly increasing x.
    static Envelope tabulated(std::span<const EnvelopeSample> samples)
    {
        if (samples.size() < 9)
            throw Error(ErrorCode::InvalidParameter, "tabulated envelope needs >= 9 samples");
        std::vector<double> x, re, im;
        x.reserve(samples.size());
        re.reserve(samples.size());
        im.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!std::isfinite(samples[i].x) || (i > 0 && samples[i].x <= samples[i - 1].x))
                throw Error(ErrorCode::InvalidParameter, "tabulated envelope x must be strictly increasing");
            x.push_back(samples[i].x);
            re.push_back(samples[i].f.real());
            im.push_back(samples[i].f.imag());
        }
        Envelope e;
        e.kind_ = Kind::Tabulated;
        e.x_min_ = x.front();
        e.x_max_ = x.back();
        auto x2 = x;
        e.re_ = std::make_shared<Spline>(std::move(x), std::move(re));
        e.im_ = std::make_shared<Spline>(std::move(x2), std::move(im));
        return e;
    }

    Kind kind() const noexcept { return kind_; }
    double phi() const noexcept { return phi_; }
    double wavenumber() const noexcept { return wavenumber_; }

    /// Whether the samples cover [-l/2, l/2] (always true for linear phase).
    bool covers(double length) const noexcept
    {
        if (kind_ == Kind::LinearPhase)
            return true;
        const double tol = 1e-12 * std::max(1.0, length);
        return x_min_ <= -0.5 * length + tol && x_max_ >= 0.5 * length - tol;
    }

    cplx operator()(double x) const
    {
        if (kind_ == Kind::LinearPhase)
            return std::polar(1.0, wavenumber_ * phi_ * x);
        return {(*re_)(x), (*im_)(x)};
    }

    /// Largest |d(arg f)/dx| bound used to size quadrature panels.
    double phase_rate() const noexcept
    {
        return kind_ == Kind::LinearPhase ? std::abs(wavenumber_ * phi_) : 0.0;
    }

private:
    using Spline = boost::math::interpolators::makima<std::vector<double>>;

    Kind kind_ = Kind::LinearPhase;
    double wavenumber_ = 1.0;
    double phi_ = 0.0;
    double x_min_ = 0.0;
    double x_max_ = 0.0;
    std::shared_ptr<Spline> re_;
    std::shared_ptr<Spline> im_;
};

/// Closed-form form factor of the linear-phase envelope, sin(psi)/psi with
/// psi = kl/2 * (phi - (omega_k/omega) cos(theta)).
inline double form_factor_linear_phase(double theta, double kl_half, double phi, double freq_ratio = 1.0) noexcept
{
    return sinc(kl_half * (phi - freq_ratio * std::cos(theta)));
}

/// F(theta, omega_k) = (1/l) * integral_{-l/2}^{l/2} f(x) exp(-i omega_k x cos(theta)) dx, c = 1.
///
/// Evaluated by adaptive quadrature for any envelope kind; the l -> 0 limit returns f(0).
inline cplx form_factor(double theta, double omega_k, const Envelope& env, double length,
                        const quad::Options& base = {})
{
    if (length < 0.0)
        throw Error(ErrorCode::NegativeLength, "antenna length must be >= 0");
    if (length == 0.0)
        return env(0.0);
    if (!env.covers(length))
        throw Error(ErrorCode::InvalidParameter, "tabulated envelope does not cover [-l/2, l/2]");

    const double kc = omega_k * std::cos(theta);
    // Integrate over u = x / l in [-1/2, 1/2] so the result is O(1).
    auto integrand = [&](double u) {
        const double x = u * length;
        return env(x) * std::polar(1.0, -kc * x);
    };
    quad::Options opt = base;
    const double cycles = (env.phase_rate() + std::abs(kc)) * length / (2.0 * std::numbers::pi);
    opt.initial_panels = std::max(opt.initial_panels, 1 + static_cast<int>(cycles));
    return quad::integrate(integrand, -0.5, 0.5, opt).value;
}

} // namespace qantenna
