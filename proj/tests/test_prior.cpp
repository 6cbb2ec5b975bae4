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

#include "phasebound/prior.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace phasebound;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

// Dense midpoint Riemann sum of −P ln P for a wrapped Gaussian, written
// independently of the library's quadrature.
double riemann_entropy_wrapped_gaussian(double mean, double sigma, std::size_t K) {
    const double d = 2 * pi / static_cast<double>(K);
    double h = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double phi = (static_cast<double>(k) + 0.5) * d;
        double p = 0.0;
        for (int j = -5; j <= 5; ++j) {
            const double z = (phi - mean + 2 * pi * j) / sigma;
            p += std::exp(-0.5 * z * z) / (sigma * std::sqrt(2 * pi));
        }
        if (p > 0) h -= p * std::log(p) * d;
    }
    return h;
}

std::vector<PhasePrior> sample_priors() {
    std::vector<PhasePrior> priors = {
        PhasePrior::uniform(2 * pi),       PhasePrior::uniform(pi),
        PhasePrior::uniform(1.0, 0.2),     PhasePrior::uniform(0.01, 5.0),
        PhasePrior::wrapped_gaussian(pi, 0.05), PhasePrior::wrapped_gaussian(1.0, 0.7),
        PhasePrior::wrapped_gaussian(0.1, 2.5), PhasePrior::point_mass(2.0),
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t K : {4u, 64u, 1000u}) {
        std::vector<double> v(K);
        double total = 0.0;
        for (auto& x : v) total += (x = unit(rng));
        for (auto& x : v) x *= static_cast<double>(K) / (2 * pi * total);
        priors.push_back(PhasePrior::tabulated(v));
    }
    std::vector<double> spike(4096, 0.0);
    spike[1234] = 4096 / (2 * pi);
    priors.push_back(PhasePrior::tabulated(spike));
    return priors;
}

}  // namespace

TEST(differential_entropy, uniform_closed_form) {
    EXPECT_NEAR(differential_entropy(PhasePrior::uniform(2 * pi)), std::log(2 * pi), 1e-15);
    EXPECT_NEAR(differential_entropy(PhasePrior::uniform(1.0)), 0.0, 1e-15);
}

TEST(differential_entropy, narrow_wrapped_gaussian) {
    const double oracle = riemann_entropy_wrapped_gaussian(pi, 0.05, 1u << 20);
    EXPECT_NEAR(oracle, -1.5767937403493189, 1e-9);  // frozen from the same Riemann sum
    const auto prior = PhasePrior::wrapped_gaussian(pi, 0.05);
    EXPECT_NEAR(differential_entropy(prior), oracle, 1e-6);
    EXPECT_NEAR(differential_entropy(prior), 0.5 * std::log(2 * pi * e * 0.05 * 0.05), 1e-6);
}

TEST(differential_entropy, wide_wrapped_gaussian_matches_riemann_sum) {
    const auto prior = PhasePrior::wrapped_gaussian(0.3, 0.9);
    EXPECT_NEAR(differential_entropy(prior), riemann_entropy_wrapped_gaussian(0.3, 0.9, 1u << 16), 1e-9);
}

TEST(differential_entropy, point_mass_is_minus_infinity) {
    EXPECT_TRUE(std::isinf(differential_entropy(PhasePrior::point_mass(1.0))));
    EXPECT_EQ(entropy_power(PhasePrior::point_mass(1.0)), 0.0);
}

TEST(tabulated_prior, rejects_unnormalized_density) {
    EXPECT_THROW(PhasePrior::tabulated(std::vector<double>(16, 1.0)), InvalidInput);
    EXPECT_THROW(PhasePrior::tabulated({1.0 / pi}), InvalidInput);
    std::vector<double> negative(4, 4 / (2 * pi));
    negative[0] = -1.0;
    EXPECT_THROW(PhasePrior::tabulated(negative), InvalidInput);
}

TEST(uniform_prior, rejects_bad_width) {
    EXPECT_THROW(PhasePrior::uniform(0.0), InvalidInput);
    EXPECT_THROW(PhasePrior::uniform(7.0), InvalidInput);
    EXPECT_THROW(PhasePrior::wrapped_gaussian(0.0, 0.0), InvalidInput);
}

TEST(entropy_power, uniform_prior) {
    EXPECT_NEAR(entropy_power(PhasePrior::uniform(2 * pi)), 2 * pi / e, 1e-14);
    for (double L : {0.5, 1.0, pi, 5.0})
        EXPECT_NEAR(entropy_power(PhasePrior::uniform(L)), L * L / (2 * pi * e), 1e-14);
}

TEST(entropy_power, unit_when_entropy_equals_gaussian_unit_variance) {
    // uniform of length √(2πe) has h = ½ ln(2πe)
    EXPECT_NEAR(entropy_power(PhasePrior::uniform(std::sqrt(2 * pi * e))), 1.0, 1e-14);
}

TEST(prior_max_density, examples) {
    EXPECT_NEAR(prior_max_density(PhasePrior::uniform(2 * pi)), 1 / (2 * pi), 1e-15);
    EXPECT_NEAR(prior_max_density(PhasePrior::uniform(pi)), 1 / pi, 1e-15);
    const auto g = PhasePrior::wrapped_gaussian(pi, 0.05);
    double grid_max = 0.0;  // dense grid oracle
    for (int k = 0; k < (1 << 20); ++k) grid_max = std::max(grid_max, g.density(2 * pi * k / (1 << 20)));
    EXPECT_NEAR(prior_max_density(g), grid_max, 1e-4);
    EXPECT_NEAR(prior_max_density(g), 1 / (0.05 * std::sqrt(2 * pi)), 1e-4);
}

TEST(prior_variance, examples) {
    EXPECT_NEAR(prior_variance(PhasePrior::uniform(2 * pi)), pi * pi / 3, 1e-13);
    EXPECT_NEAR(prior_variance(PhasePrior::uniform(1.0)), 1.0 / 12, 1e-14);
    std::vector<double> spike(64, 0.0);
    spike[10] = 64 / (2 * pi);
    const double w = 2 * pi / 64;
    EXPECT_LE(prior_variance(PhasePrior::tabulated(spike)), w * w / 12 + 1e-15);
    EXPECT_EQ(prior_variance(PhasePrior::point_mass(3.0)), 0.0);
}

TEST(prior_variance, wrapped_uniform_arc_is_treated_non_periodically) {
    // width π centred at 0 occupies [0, π/2] ∪ [3π/2, 2π)
    const auto p = PhasePrior::uniform(pi, 0.0);
    const double m1 = ((pi / 2) * (pi / 2) / 2 + (4 * pi * pi - 9 * pi * pi / 4) / 2) / pi;
    const double m2 = (std::pow(pi / 2, 3) / 3 + (8 * pi * pi * pi - 27 * pi * pi * pi / 8) / 3) / pi;
    EXPECT_NEAR(prior_variance(p), m2 - m1 * m1, 1e-12);
}

TEST(prior_invariants, entropy_power_never_exceeds_variance) {
    for (const auto& p : sample_priors()) EXPECT_LE(entropy_power(p), prior_variance(p) + 1e-9) << p.describe();
}

TEST(prior_invariants, max_density_at_least_uniform_level) {
    for (const auto& p : sample_priors()) EXPECT_GE(prior_max_density(p), 1 / (2 * pi) - 1e-12) << p.describe();
}

TEST(prior_invariants, quadrature_integrates_density_to_one) {
    for (const auto& p : sample_priors()) {
        const auto rule = p.quadrature(512);
        EXPECT_NEAR(rule.integrate([](double) { return 1.0; }), 1.0, 1e-10) << p.describe();
    }
}

TEST(prior_invariants, uniform_closed_form_matches_tabulation) {
    constexpr std::size_t K = 4096;
    for (double L : {pi / 2, pi, 2 * pi}) {
        const auto closed = PhasePrior::uniform(L);
        const auto masses = closed.cell_masses(K);
        std::vector<double> density(K);
        for (std::size_t k = 0; k < K; ++k) density[k] = masses[k] * K / (2 * pi);
        const auto tab = PhasePrior::tabulated(density);
        EXPECT_NEAR(differential_entropy(tab), differential_entropy(closed), 1e-8) << L;
        EXPECT_NEAR(entropy_power(tab), entropy_power(closed), 1e-8) << L;
        EXPECT_NEAR(prior_variance(tab), prior_variance(closed), 1e-8) << L;
    }
}

TEST(fourier_coefficient, closed_forms_match_quadrature) {
    for (const auto& p : sample_priors()) {
        const auto rule = p.quadrature(1 << 14);
        for (int k : {0, 1, 2, 5, 11}) {
            const double re = rule.integrate([k](double phi) { return std::cos(k * phi); });
            const double im = rule.integrate([k](double phi) { return std::sin(k * phi); });
            const auto c = p.fourier_coefficient(k);
            EXPECT_NEAR(c.real(), re, 1e-10) << p.describe() << " k=" << k;
            EXPECT_NEAR(c.imag(), im, 1e-10) << p.describe() << " k=" << k;
        }
    }
}

TEST(fourier_coefficient, width_pi_window) {
    const auto c = PhasePrior::uniform(pi, 0.0).fourier_coefficient(1);
    EXPECT_NEAR(c.real(), 2 / pi, 1e-15);
    EXPECT_NEAR(c.imag(), 0.0, 1e-15);
}

TEST(cell_masses, normalized_and_consistent_with_density) {
    for (const auto& p : sample_priors()) {
        const auto m = p.cell_masses(256);
        double total = 0.0;
        for (double v : m) total += v;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
    const auto g = PhasePrior::wrapped_gaussian(1.0, 0.7);
    const auto m = g.cell_masses(256);
    const double d = 2 * pi / 256;
    for (std::size_t k = 0; k < 256; k += 17)  // midpoint estimate of each bin's mass
        EXPECT_NEAR(m[k], g.density((k + 0.5) * d) * d, 1e-5);
}

TEST(sample, draws_lie_on_support) {
    std::mt19937_64 rng(3);
    const auto p = PhasePrior::uniform(1.0, 0.1);
    for (int i = 0; i < 1000; ++i) {
        const double x = p.sample(rng);
        EXPECT_GT(p.density(x), 0.0);
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 2 * pi);
    }
}
