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
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qantenna/error.hpp"

namespace qantenna::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;
    int max_depth = 30;
    /// Equal-width panels the interval is cut into before refinement starts.
    int initial_panels = 1;
    std::size_t max_intervals = 1u << 18;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    std::size_t evaluations = 0;
};

namespace detail {

template <class T>
struct Interval {
    double a, b;
    T value;
    double error;
    double magnitude; ///< K15 estimate of the integral of |f|
    int depth;

    bool operator<(const Interval& o) const { return error < o.error; }
};

/// 15-point Kronrod rule with embedded 7-point Gauss error estimate on [a, b].
template <class F, class T>
Interval<T> gk15(F& f, double a, double b, int depth)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    using std::abs;
    T f0 = f(mid);
    T kronrod = f0 * wk[0];
    T gauss = f0 * wg[0];
    double magnitude = abs(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double dx = half * x[i];
        const T fl = f(mid - dx);
        const T fr = f(mid + dx);
        kronrod += (fl + fr) * wk[i];
        magnitude += (abs(fl) + abs(fr)) * wk[i];
        if (i % 2 == 0)
            gauss += (fl + fr) * wg[i / 2];
    }
    return {a, b, kronrod * half, abs(kronrod - gauss) * half, magnitude * std::abs(half), depth};
}

} // namespace detail

/// Global adaptive Gauss-Kronrod (G7/K15) integration of a real or complex integrand.
///
/// Refinement bisects the interval with the largest error estimate until the
/// summed estimate drops below max(abs_floor, rel_tol * |integral|, roundoff),
/// where roundoff = 50 eps * integral of |f| is the accuracy floor of a
/// cancelling integrand in double precision. Throws
/// QuadratureNonConvergence when an interval would exceed max_depth bisections.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<std::invoke_result_t<F&, double>>>
{
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    using detail::Interval;

    Result<T> out;
    if (a == b)
        return out;

    std::priority_queue<Interval<T>> heap;
    const int panels = std::max(1, opt.initial_panels);
    const double width = (b - a) / panels;
    T total{};
    double total_err = 0.0;
    double total_mag = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * width;
        const double hi = (i + 1 == panels) ? b : a + (i + 1) * width;
        auto iv = detail::gk15<F, T>(f, lo, hi, 0);
        total += iv.value;
        total_err += iv.error;
        total_mag += iv.magnitude;
        heap.push(iv);
    }
    out.evaluations = 15 * static_cast<std::size_t>(panels);

    constexpr double roundoff = 50.0 * std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({opt.abs_floor, opt.rel_tol * std::abs(total), roundoff * total_mag});
    };

    while (total_err > target()) {
        Interval<T> worst = heap.top();
        if (worst.depth >= opt.max_depth || heap.size() >= opt.max_intervals) {
            throw Error(ErrorCode::QuadratureNonConvergence,
                        "adaptive refinement limit reached on [" + std::to_string(worst.a) + ", " +
                            std::to_string(worst.b) + "], error estimate " + std::to_string(total_err));
        }
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gk15<F, T>(f, worst.a, mid, worst.depth + 1);
        auto right = detail::gk15<F, T>(f, mid, worst.b, worst.depth + 1);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_mag += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to drop the rounding accumulated by the running updates.
    T sum{};
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error = err;
    return out;
}

} // namespace qantenna::quad
