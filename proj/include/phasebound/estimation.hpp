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

// Simulated phase estimation: canonical phase measurement on the signal mode
// (idler traced out) followed by the posterior-mean estimator. The Bayesian
// MSE and the measurement mutual information are evaluated by deterministic
// quadrature; a seeded Monte Carlo run provides an independent check.

#include <Eigen/Dense>
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <random>
#include <vector>

#include "phasebound/capacity.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/fock.hpp"
#include "phasebound/numeric.hpp"
#include "phasebound/prior.hpp"

namespace phasebound {

/// `phi` is the node budget for the prior quadrature, `theta` the number of
/// equally spaced measurement outcomes on [0, 2π).
struct SimGrid {
    std::size_t phi = 256;
    std::size_t theta = 512;

    void validate() const {
        if (phi < 128 || theta < 256 || !is_power_of_two(phi) || !is_power_of_two(theta))
            throw InvalidInput("SimGrid: need powers of two with phi >= 128 and theta >= 256");
    }
    SimGrid doubled() const { return {2 * phi, 2 * theta}; }
};

/// a_k = Σ_m ρ_{m+k, m}, k = 0..cutoff: the outcome density is
/// p(θ) = (1/2π) [a_0 + 2 Re Σ_{k≥1} a_k e^{−ikθ}].
inline std::vector<cplx> phase_coefficients(const Eigen::MatrixXcd& rho_signal) {
    const Eigen::Index dim = rho_signal.rows();
    std::vector<cplx> a(static_cast<std::size_t>(dim), 0.0);
    for (Eigen::Index k = 0; k < dim; ++k)
        for (Eigen::Index m = 0; m + k < dim; ++m) a[static_cast<std::size_t>(k)] += rho_signal(m + k, m);
    return a;
}

namespace detail {

inline double phase_density_from_coefficients(std::span<const cplx> a, double theta) {
    double acc = a[0].real();
    for (std::size_t k = 1; k < a.size(); ++k) acc += 2.0 * (a[k] * std::polar(1.0, -static_cast<double>(k) * theta)).real();
    const double p = acc / kTwoPi;
    if (p < -1e-10) throw NumericalFailure("canonical phase density is negative");
    return std::max(p, 0.0);
}

}  // namespace detail

/// Outcome density of the canonical phase POVM |θ⟩⟨θ| dθ, |θ⟩ = (2π)^{−1/2} Σ_m e^{imθ}|m⟩.
inline double canonical_phase_density(const Eigen::MatrixXcd& rho_signal, double theta) {
    const auto a = phase_coefficients(rho_signal);
    return detail::phase_density_from_coefficients(a, theta);
}

struct GridValue {
    double value;
    double refined;  // same quantity on the doubled grid
    bool converged;
};

struct EstimationResult {
    SimGrid grid;
    double mse = 0.0;
    double mutual_information = 0.0;
    double mse_refined = 0.0;
    double mutual_information_refined = 0.0;
    bool converged = false;
    std::vector<double> theta_nodes;
    std::vector<double> estimator;  // posterior mean E[Φ | θ_j]
};

namespace detail {

struct ChannelEvaluation {
    double mse;
    double mutual_information;
    std::vector<double> theta_nodes;
    std::vector<double> estimator;
};

inline ChannelEvaluation evaluate_channel(const ChiDecomposition& decomp, const PhasePrior& prior, const SimGrid& grid) {
    const QuadratureRule rule = prior.quadrature(grid.phi);
    double total_weight = 0.0;
    for (double w : rule.weights) total_weight += w;

    const std::size_t G = grid.theta;
    const double dtheta = kTwoPi / static_cast<double>(G);
    const std::size_t K = decomp.basis.cutoff() + 1;
    std::vector<cplx> phases(G * K);
    ChannelEvaluation out;
    out.theta_nodes.resize(G);
    for (std::size_t j = 0; j < G; ++j) {
        out.theta_nodes[j] = dtheta * static_cast<double>(j);
        for (std::size_t k = 0; k < K; ++k) phases[j * K + k] = std::polar(1.0, -static_cast<double>(k) * out.theta_nodes[j]);
    }

    std::vector<double> marginal(G, 0.0), first_moment(G, 0.0), p(G);
    double second_moment = 0.0;
    double conditional_entropy = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double phi = rule.nodes[i];
        const double w = rule.weights[i] / total_weight;
        const auto a = phase_coefficients(modulated_state(decomp, phi).reduced_signal());
        double h = 0.0;
        for (std::size_t j = 0; j < G; ++j) {
            double acc = a[0].real();
            for (std::size_t k = 1; k < K; ++k) acc += 2.0 * (a[k] * phases[j * K + k]).real();
            double pj = acc / kTwoPi;
            if (pj < -1e-10) throw NumericalFailure("canonical phase density is negative");
            pj = std::max(pj, 0.0);
            p[j] = pj;
            h -= xlogx(pj);
            marginal[j] += w * pj;
            first_moment[j] += w * phi * pj;
        }
        conditional_entropy += w * h * dtheta;
        second_moment += w * phi * phi;
    }

    double explained = 0.0;
    double outcome_entropy = 0.0;
    out.estimator.resize(G);
    const double mean = std::inner_product(rule.nodes.begin(), rule.nodes.end(), rule.weights.begin(), 0.0) / total_weight;
    for (std::size_t j = 0; j < G; ++j) {
        if (marginal[j] > 0.0) {
            out.estimator[j] = first_moment[j] / marginal[j];
            explained += dtheta * first_moment[j] * out.estimator[j];
        } else {
            out.estimator[j] = mean;
        }
        outcome_entropy -= dtheta * xlogx(marginal[j]);
    }
    out.mse = std::max(0.0, second_moment - explained);
    out.mutual_information = std::max(0.0, outcome_entropy - conditional_entropy);
    return out;
}

}  // namespace detail

/// Posterior-mean MSE and I(Φ;Θ) on `grid`, with the doubled grid as convergence check
/// (converged when the MSE moves by at most 1e-4).
inline EstimationResult simulate_estimation(const ProbeSpec& probe, LossChannel channel, const PhasePrior& prior,
                                            const SimGrid& grid = {}) {
    grid.validate();
    const ChiDecomposition decomp = chi_decompose(probe, channel);
    auto coarse = detail::evaluate_channel(decomp, prior, grid);
    const auto fine = detail::evaluate_channel(decomp, prior, grid.doubled());
    EstimationResult r;
    r.grid = grid;
    r.mse = coarse.mse;
    r.mutual_information = coarse.mutual_information;
    r.mse_refined = fine.mse;
    r.mutual_information_refined = fine.mutual_information;
    r.converged = std::abs(fine.mse - coarse.mse) <= 1e-4;
    r.theta_nodes = std::move(coarse.theta_nodes);
    r.estimator = std::move(coarse.estimator);
    return r;
}

inline GridValue bayesian_mmse(const ProbeSpec& probe, LossChannel channel, const PhasePrior& prior, const SimGrid& grid = {}) {
    const auto r = simulate_estimation(probe, channel, prior, grid);
    return {r.mse, r.mse_refined, r.converged};
}

inline GridValue measurement_mutual_information(const ProbeSpec& probe, LossChannel channel, const PhasePrior& prior,
                                                const SimGrid& grid = {}) {
    const auto r = simulate_estimation(probe, channel, prior, grid);
    return {r.mutual_information, r.mutual_information_refined,
            std::abs(r.mutual_information - r.mutual_information_refined) <= 1e-4};
}

struct MonteCarloResult {
    double mean;
    double standard_error;
};

/// Samples φ from the prior and θ from p(θ|φ), applies the tabulated estimator
/// (linear interpolation between outcome nodes) and averages the squared error.
/// θ is drawn as φ + x with x from the φ = 0 outcome density, which is exact
/// because p(θ|φ) = p(θ − φ | 0) for phase modulation of the signal.
inline MonteCarloResult monte_carlo_mse(const ProbeSpec& probe, LossChannel channel, const PhasePrior& prior,
                                        const EstimationResult& table, std::size_t samples, std::uint64_t seed) {
    if (samples < 10000) throw InvalidInput("monte_carlo_mse: need at least 10^4 samples");
    const std::size_t G = table.theta_nodes.size();
    if (G == 0 || table.estimator.size() != G) throw InvalidInput("monte_carlo_mse: empty estimator table");
    const double dtheta = kTwoPi / static_cast<double>(G);

    const auto a = phase_coefficients(modulated_state(chi_decompose(probe, channel), 0.0).reduced_signal());
    std::vector<double> density(G + 1);
    for (std::size_t j = 0; j <= G; ++j)
        density[j] = detail::phase_density_from_coefficients(a, dtheta * static_cast<double>(j));
    std::vector<double> cdf(G + 1, 0.0);
    for (std::size_t j = 0; j < G; ++j) cdf[j + 1] = cdf[j] + 0.5 * dtheta * (density[j] + density[j + 1]);
    for (double& c : cdf) c /= cdf[G];

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double phi = prior.sample(rng);
        const double u = unit(rng);
        const auto cell = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin()) - 1;
        const std::size_t j = std::min(cell, G - 1);
        const double mass = cdf[j + 1] - cdf[j];
        const double x = dtheta * (static_cast<double>(j) + (mass > 0.0 ? (u - cdf[j]) / mass : 0.5));
        const double theta = wrap_phase(x + phi);

        const double pos = theta / dtheta;
        const auto lo = std::min(static_cast<std::size_t>(pos), G - 1);
        const double frac = pos - static_cast<double>(lo);
        double estimate;
        if (lo + 1 < G)
            estimate = (1.0 - frac) * table.estimator[lo] + frac * table.estimator[lo + 1];
        else
            estimate = frac < 0.5 ? table.estimator[lo] : table.estimator[0];
        const double err2 = (estimate - phi) * (estimate - phi);

        const double delta = err2 - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (err2 - mean);
    }
    const double variance = m2 / static_cast<double>(samples - 1);
    return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

}  // namespace phasebound
