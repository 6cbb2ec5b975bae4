// Copyright 2026 The phasebound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace phasebound {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Nodes and weights of a quadrature rule: ∫ f ≈ Σ weights[i] f(nodes[i]).
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }
};

/// Gauss–Legendre rule of the given order on [-1, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(std::size_t order) {
    QuadratureRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const std::size_t half = (order + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(order) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= order; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = w;
    }
    if (order == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return rule;
}

/// Appends a composite Gauss–Legendre rule on [a, b] with `panels` equal panels.
inline void append_gauss_legendre(QuadratureRule& out, double a, double b, std::size_t panels,
                                  std::size_t order = 8) {
    if (!(b > a) || panels == 0) return;
    const QuadratureRule ref = gauss_legendre(order);
    const double width = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + width * static_cast<double>(p);
        for (std::size_t i = 0; i < ref.size(); ++i) {
            out.nodes.push_back(lo + 0.5 * width * (ref.nodes[i] + 1.0));
            out.weights.push_back(0.5 * width * ref.weights[i]);
        }
    }
}

/// Shannon entropy in nats with 0 ln 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

/// Binary entropy h_b(x) in nats.
inline double binary_entropy(double x) {
    const double pair[2] = {x, 1.0 - x};
    return shannon_entropy(pair);
}

/// x ln x with the 0 ln 0 = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Wraps an angle into [0, 2π).
inline double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace phasebound
