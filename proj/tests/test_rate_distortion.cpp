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

#include "phasebound/rate_distortion.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace phasebound;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double e = std::numbers::e;

// Minimum mutual information of a binary-symmetric-source test channel with
// Hamming distortion ≤ D, by exhaustive search over the two crossover
// probabilities on a 1e-3 grid.
double binary_rd_exhaustive(double D) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000; ++i) {
        for (int j = 0; j <= 1000; ++j) {
            const double a = i * 1e-3;  // P(1|0)
            const double b = j * 1e-3;  // P(0|1)
            if (0.5 * (a + b) > D + 1e-12) continue;
            const double joint[2][2] = {{0.5 * (1 - a), 0.5 * a}, {0.5 * b, 0.5 * (1 - b)}};
            const double out[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
            double I = 0.0;
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    if (joint[x][y] > 0) I += joint[x][y] * std::log(joint[x][y] / (0.5 * out[y]));
            best = std::min(best, I);
        }
    }
    return best;
}

Eigen::MatrixXd hamming(std::size_t K) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    d.diagonal().setZero();
    return d;
}

}  // namespace

TEST(shannon_lb_rate, examples) {
    EXPECT_NEAR(shannon_lb_rate(2.3, 2.3), 0.0, 1e-15);
    EXPECT_NEAR(shannon_lb_rate(1.7, 1.7 / (e * e)), 1.0, 1e-14);
    EXPECT_NEAR(shannon_lb_rate(2.311305, 0.1), 1.5701986965, 1e-9);
    EXPECT_EQ(shannon_lb_rate(1.0, 5.0), 0.0);
}

TEST(shannon_lb_rate, rejects_nonpositive_arguments) {
    EXPECT_THROW(shannon_lb_rate(1.0, 0.0), DomainError);
    EXPECT_THROW(shannon_lb_rate(0.0, 1.0), DomainError);
    EXPECT_THROW(shannon_lb_rate(1.0, -1.0), DomainError);
}

TEST(shannon_lb_distortion, examples) {
    EXPECT_NEAR(shannon_lb_distortion(2.0, 0.0), 2.0, 1e-15);
    EXPECT_NEAR(shannon_lb_distortion(1.0, 1.0), std::exp(-2.0), 1e-15);
    EXPECT_THROW(shannon_lb_distortion(1.0, -0.1), DomainError);
    EXPECT_THROW(shannon_lb_distortion(0.0, 0.1), DomainError);
}

TEST(shannon_lb, rate_and_distortion_are_inverse) {
    for (double Q : {0.01, 0.3, 2 * pi / e})
        for (double R = 0.0; R < 5.0; R += 0.37) EXPECT_NEAR(shannon_lb_rate(Q, shannon_lb_distortion(Q, R)), R, 1e-12);
    double prev = std::numeric_limits<double>::infinity();
    for (double R = 0.0; R < 5.0; R += 0.1) {
        const double D = shannon_lb_distortion(1.3, R);
        EXPECT_LT(D, prev);
        prev = D;
    }
}

TEST(blahut_arimoto, zero_slope_is_zero_rate) {
    const std::vector<double> p = {0.2, 0.5, 0.3};
    const std::vector<double> x = {0.0, 1.0, 2.0};
    const auto r = blahut_arimoto_point(p, squared_error_matrix(x, x), 0.0);
    EXPECT_EQ(r.rate, 0.0);
    // best constant reproduction is x = 1: 0.2·1 + 0.3·1
    EXPECT_NEAR(r.distortion, 0.5, 1e-15);
}

TEST(blahut_arimoto, binary_hamming_closed_form) {
    const std::vector<double> p = {0.5, 0.5};
    BlahutArimotoOptions opt;
    opt.tolerance = 1e-14;
    const auto r = blahut_arimoto_point(p, hamming(2), std::log(9.0), opt);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.distortion, 0.1, 1e-9);
    EXPECT_NEAR(r.rate, 0.3680642071684971, 1e-6);  // ln 2 − h_b(0.1)
    EXPECT_NEAR(r.rate, std::log(2.0) - binary_entropy(0.1), 1e-6);
}

TEST(blahut_arimoto, binary_hamming_matches_exhaustive_search) {
    const double oracle = binary_rd_exhaustive(0.1);
    EXPECT_NEAR(oracle, std::log(2.0) - binary_entropy(0.1), 1e-3);
    const std::vector<double> p = {0.5, 0.5};
    for (double D : {0.05, 0.2, 0.35}) {
        const auto r = blahut_arimoto_point(p, hamming(2), std::log((1 - D) / D));
        EXPECT_NEAR(r.rate, binary_rd_exhaustive(D), 2e-3) << D;
    }
}

TEST(blahut_arimoto, large_slope_reaches_source_entropy) {
    constexpr std::size_t K = 8;
    const std::vector<double> p(K, 1.0 / K);
    std::vector<double> x(K);
    for (std::size_t i = 0; i < K; ++i) x[i] = static_cast<double>(i);
    const auto r = blahut_arimoto_point(p, squared_error_matrix(x, x), 60.0);
    EXPECT_NEAR(r.rate, std::log(8.0), 1e-6);
    EXPECT_NEAR(r.distortion, 0.0, 1e-6);
}

TEST(blahut_arimoto, rejects_bad_input) {
    const std::vector<double> bad = {0.5, 0.6};
    EXPECT_THROW(blahut_arimoto_point(bad, hamming(2), 1.0), InvalidInput);
    const std::vector<double> p = {0.5, 0.5};
    EXPECT_THROW(blahut_arimoto_point(p, hamming(3), 1.0), InvalidInput);
    EXPECT_THROW(blahut_arimoto_point(p, hamming(2), -1.0), InvalidInput);
}

TEST(blahut_arimoto, objective_is_monotone) {
    const auto prior = PhasePrior::wrapped_gaussian(2.0, 0.8);
    const auto masses = prior.cell_masses(64);
    std::vector<double> x(64);
    for (std::size_t k = 0; k < 64; ++k) x[k] = (k + 0.5) * 2 * pi / 64;
    BlahutArimotoOptions opt;
    opt.record_history = true;
    for (bool accelerate : {false, true})
    for (double s : {0.5, 3.0, 20.0}) {
        opt.accelerate = accelerate;
        const auto r = blahut_arimoto_point(masses, squared_error_matrix(x, x), s, opt);
        ASSERT_GT(r.lagrangian_history.size(), 1u);
        for (std::size_t i = 1; i < r.lagrangian_history.size(); ++i) {
            // the objective I + sD; the rate alone can overshoot by ~1e-6 and come back
            EXPECT_LE(r.lagrangian_history[i], r.lagrangian_history[i - 1] + 1e-12) << "s=" << s << " it=" << i;
        }
    }
}

TEST(rd_curve, zero_rate_point_for_uniform_prior) {
    constexpr std::size_t K = 64;
    const std::vector<double> slopes = {0.0, 1.0};
    const auto curve = rd_curve(PhasePrior::uniform(2 * pi), K, slopes);
    const double delta = 2 * pi / K;
    // midpoint grid: variance π²/3 − δ²/12, nearest reproduction sits δ/2 off the mean
    const auto& top = curve.points.back();
    EXPECT_EQ(top.rate, 0.0);
    EXPECT_NEAR(top.distortion, pi * pi / 3 + delta * delta / 6, 1e-12);
}

TEST(rd_curve, small_grid_rejected) {
    const std::vector<double> slopes = {1.0};
    EXPECT_THROW(rd_curve(PhasePrior::uniform(2 * pi), 8, slopes), InvalidInput);
}

TEST(rd_curve, convex_and_above_shannon_bound) {
    std::vector<double> slopes;
    for (double s = 0.0; s <= 40.0; s += 2.5) slopes.push_back(s);
    for (const auto& prior : {PhasePrior::uniform(2 * pi), PhasePrior::wrapped_gaussian(1.0, 0.6)}) {
        const auto curve = rd_curve(prior, 128, slopes);
        EXPECT_TRUE(curve.is_convex_nonincreasing());
        const double Q = discretized_entropy_power(curve.source_masses);
        for (const auto& pt : curve.points) {
            EXPECT_TRUE(pt.converged);
            if (pt.distortion > 0.0) EXPECT_GE(pt.rate, shannon_lb_rate(Q, pt.distortion) - 0.02) << prior.describe();
        }
    }
}

TEST(rd_curve, envelopes_bracket_the_points) {
    const std::vector<double> slopes = {0.5, 2.0, 8.0};
    const auto curve = rd_curve(PhasePrior::uniform(2 * pi), 64, slopes);
    for (const auto& pt : curve.points) {
        EXPECT_NEAR(curve.rate_lower_envelope(pt.distortion), pt.rate, 1e-6);
        EXPECT_NEAR(curve.distortion_lower_envelope(pt.rate), pt.distortion, 1e-6);
    }
}

TEST(discretized_entropy_power, uniform_grid) {
    const std::vector<double> m(256, 1.0 / 256);
    EXPECT_NEAR(discretized_entropy_power(m), 2 * pi / e, 1e-12);
}

TEST(blahut_arimoto, extrapolation_reaches_the_same_point) {
    const auto prior = PhasePrior::wrapped_gaussian(3.0, 1.0);
    const auto masses = prior.cell_masses(32);
    std::vector<double> x(32);
    for (std::size_t k = 0; k < 32; ++k) x[k] = (k + 0.5) * 2 * pi / 32;
    BlahutArimotoOptions plain;
    plain.accelerate = false;
    plain.tolerance = 1e-13;
    for (double s : {0.3, 2.0, 10.0}) {
        const auto a = blahut_arimoto_point(masses, squared_error_matrix(x, x), s, plain);
        const auto b = blahut_arimoto_point(masses, squared_error_matrix(x, x), s);
        // both are near-optimal for the same Lagrangian; compare objective values
        EXPECT_NEAR(a.rate + s * a.distortion, b.rate + s * b.distortion, 1e-6) << s;
        EXPECT_LE(b.rate_lower_bound, b.rate + 1e-12);
        EXPECT_LE(b.rate - b.rate_lower_bound, 1e-3);
    }
}

TEST(blahut_arimoto, certified_bound_never_exceeds_rate) {
    const std::vector<double> p = {0.5, 0.5};
    for (double D : {0.01, 0.1, 0.3}) {
        const auto r = blahut_arimoto_point(p, hamming(2), std::log((1 - D) / D));
        EXPECT_LE(r.rate_lower_bound, std::log(2.0) - binary_entropy(D) + 1e-9);
        EXPECT_NEAR(r.rate_lower_bound, r.rate, 1e-6);
    }
}
