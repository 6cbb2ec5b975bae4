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

// Shannon lower bounds on the squared-error rate-distortion function and a
// Blahut–Arimoto solver for the exact R(D) of a discretized source.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "phasebound/errors.hpp"
#include "phasebound/numeric.hpp"
#include "phasebound/prior.hpp"

namespace phasebound {

/// R(D) ≥ max(0, ½ ln(Q/D)).
inline double shannon_lb_rate(double entropy_power, double distortion) {
    if (!(entropy_power > 0.0) || !(distortion > 0.0))
        throw DomainError("shannon_lb_rate: entropy power and distortion must be positive");
    return std::max(0.0, 0.5 * std::log(entropy_power / distortion));
}

/// D(R) ≥ Q e^{−2R}.
inline double shannon_lb_distortion(double entropy_power, double rate) {
    if (!(entropy_power > 0.0)) throw DomainError("shannon_lb_distortion: entropy power must be positive");
    if (!(rate >= 0.0)) throw DomainError("shannon_lb_distortion: rate must be nonnegative");
    return entropy_power * std::exp(-2.0 * rate);
}

struct BlahutArimotoOptions {
    double tolerance = 1e-9;  // nats, on successive rate iterates
    std::size_t max_iterations = 100000;
    /// Squared extrapolation between plain updates (safeguarded so the
    /// objective still never increases). Off gives the textbook iteration.
    bool accelerate = true;
    bool record_history = false;
    /// Starting reproduction marginal; empty means uniform. Zero entries stay zero.
    std::vector<double> initial_marginal;
};

struct BlahutArimotoResult {
    double distortion = 0.0;
    double rate = 0.0;
    /// Blahut's bound: R(D) ≥ rate_lower_bound at D = distortion, valid at any iterate.
    double rate_lower_bound = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> output_marginal;
    /// Rate and objective −Σ p ln c (= I + sD at the optimum) per iteration,
    /// filled only when requested.
    std::vector<double> rate_history;
    std::vector<double> lagrangian_history;
};

namespace detail {

// One plain update q → q⊙u at a fixed marginal q, with everything the rate needs.
struct BAStep {
    Eigen::VectorXd c;      // c(x) = Σ_y q(y) e^{−s d(x,y)}
    Eigen::VectorXd ratio;  // p(x) / c(x)
    Eigen::VectorXd u;      // Σ_x ratio(x) e^{−s d(x,y)}
    Eigen::VectorXd next;
    double objective = 0.0;  // −Σ p ln c
};

inline BAStep ba_step(const Eigen::VectorXd& p, const Eigen::MatrixXd& kernel, const Eigen::VectorXd& q) {
    BAStep st;
    st.c = kernel * q;
    if ((st.c.array() <= 0.0).any())
        throw NumericalFailure("blahut_arimoto_point: kernel underflow; slope too large for this grid");
    st.ratio = p.cwiseQuotient(st.c);
    st.u = kernel.transpose() * st.ratio;
    st.next = q.cwiseProduct(st.u);
    st.next /= st.next.sum();
    for (Eigen::Index x = 0; x < p.size(); ++x)
        if (p[x] > 0.0) st.objective -= p[x] * std::log(st.c[x]);
    return st;
}

}  // namespace detail

/// One point of the R(D) curve at Lagrange slope −s, by alternating
/// minimization over the reproduction marginal and the test channel.
/// `distortion` is K×K' (source × reproduction), entries ≥ 0.
inline BlahutArimotoResult blahut_arimoto_point(std::span<const double> source,
                                                const Eigen::MatrixXd& distortion, double slope,
                                                const BlahutArimotoOptions& options = {}) {
    const auto K = static_cast<Eigen::Index>(source.size());
    if (K == 0 || distortion.rows() != K || distortion.cols() == 0)
        throw InvalidInput("blahut_arimoto_point: distortion matrix must be K x K' with K = source size");
    if (!(slope >= 0.0) || !std::isfinite(slope)) throw InvalidInput("blahut_arimoto_point: slope must be >= 0");
    double total = 0.0;
    std::size_t atoms = 0;
    for (double p : source) {
        if (!(p >= 0.0)) throw InvalidInput("blahut_arimoto_point: source probabilities must be nonnegative");
        total += p;
        atoms += p > 0.0 ? 1 : 0;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidInput("blahut_arimoto_point: source is not normalized");
    if ((distortion.array() < 0.0).any()) throw InvalidInput("blahut_arimoto_point: distortion must be >= 0");

    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(source.data(), K);
    const Eigen::Index Kr = distortion.cols();
    BlahutArimotoResult result;

    // Zero rate: the best constant reproduction. A single-atom source never needs rate.
    if (slope == 0.0 || atoms == 1) {
        const Eigen::VectorXd expected = distortion.transpose() * p;
        Eigen::Index best = 0;
        result.distortion = expected.minCoeff(&best);
        result.rate = 0.0;
        result.rate_lower_bound = 0.0;
        result.converged = true;
        result.output_marginal.assign(static_cast<std::size_t>(Kr), 0.0);
        result.output_marginal[static_cast<std::size_t>(best)] = 1.0;
        return result;
    }

    const Eigen::MatrixXd kernel = (-slope * distortion).array().exp().matrix();
    const Eigen::MatrixXd weighted = kernel.cwiseProduct(distortion);
    Eigen::VectorXd q = Eigen::VectorXd::Constant(Kr, 1.0 / static_cast<double>(Kr));
    if (!options.initial_marginal.empty()) {
        if (options.initial_marginal.size() != static_cast<std::size_t>(Kr))
            throw InvalidInput("blahut_arimoto_point: initial marginal has the wrong size");
        q = Eigen::Map<const Eigen::VectorXd>(options.initial_marginal.data(), Kr);
        if ((q.array() < 0.0).any() || !(q.sum() > 0.0))
            throw InvalidInput("blahut_arimoto_point: initial marginal must be nonnegative and nonzero");
        q /= q.sum();
    }

    detail::BAStep st = detail::ba_step(p, kernel, q);
    double previous_rate = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        // Rate of the channel W(y|x) = q(y) e^{−s d}/c(x): I = −sD − Σ p ln c − KL(q⊙u ‖ q).
        const double D = q.dot(weighted.transpose() * st.ratio);
        double kl = 0.0;
        for (Eigen::Index y = 0; y < Kr; ++y)
            if (st.next[y] > 0.0) kl += st.next[y] * std::log(st.next[y] / q[y]);
        const double R = std::max(0.0, -slope * D + st.objective - kl);

        result.distortion = D;
        result.rate = R;
        result.rate_lower_bound = std::max(0.0, -slope * D + st.objective - std::log(st.u.maxCoeff()));
        result.iterations = it;
        if (options.record_history) {
            result.rate_history.push_back(R);
            result.lagrangian_history.push_back(st.objective);
        }
        if (std::abs(R - previous_rate) < options.tolerance) {
            result.converged = true;
            break;
        }
        previous_rate = R;
        if (it == options.max_iterations) break;

        if (!options.accelerate) {
            q = st.next;
            st = detail::ba_step(p, kernel, q);
            continue;
        }
        // Squared extrapolation from q0 = q through two plain updates; the step
        // length backs off toward the plain double update until the objective
        // at the extrapolated point is no worse than at q0.
        const Eigen::VectorXd& q1 = st.next;
        const detail::BAStep st1 = detail::ba_step(p, kernel, q1);
        const Eigen::VectorXd r = q1 - q;
        const Eigen::VectorXd v = st1.next - q1 - r;
        double alpha = v.norm() > 0.0 ? -r.norm() / v.norm() : -1.0;
        alpha = std::min(alpha, -1.0);
        for (int attempt = 0;; ++attempt) {
            if (attempt == 3) alpha = -1.0;
            Eigen::VectorXd trial = st1.next;
            if (alpha < -1.0) {
                trial = q - 2.0 * alpha * r + alpha * alpha * v;
                trial = trial.cwiseMax(1e-3 * q);  // never shrink a coordinate by more than 1000x per cycle
                trial /= trial.sum();
            }
            const detail::BAStep probe = detail::ba_step(p, kernel, trial);
            if (alpha == -1.0 || probe.objective <= st.objective) {
                q = probe.next;  // stabilizing plain update
                st = detail::ba_step(p, kernel, q);
                break;
            }
            alpha = 0.5 * (alpha - 1.0);
        }
    }
    result.output_marginal.assign(q.data(), q.data() + Kr);
    return result;
}

struct RDPoint {
    double distortion;
    double rate;
    double slope;
    bool converged;
    double rate_lower_bound;  // certified: R(distortion) ≥ this
};

/// Points of the discretized R(D) curve, sorted by increasing distortion.
struct RDCurve {
    std::vector<RDPoint> points;
    std::vector<double> source_points;  // bin centres on [0, 2π)
    std::vector<double> source_masses;

    /// Lower envelope of the supporting lines R_i − s_i (D − D_i); a rigorous
    /// lower estimate of the convex curve between computed points.
    double rate_lower_envelope(double D) const {
        double best = 0.0;
        for (const auto& pt : points) best = std::max(best, pt.rate - pt.slope * (D - pt.distortion));
        return best;
    }

    /// Lower estimate of D(R) from the same supporting lines.
    double distortion_lower_envelope(double R) const {
        double best = 0.0;
        for (const auto& pt : points) {
            if (pt.slope <= 0.0) continue;
            best = std::max(best, pt.distortion - (R - pt.rate) / pt.slope);
        }
        return best;
    }

    /// Chord slopes are non-decreasing along the curve (R convex) and R is non-increasing.
    bool is_convex_nonincreasing(double tol = 1e-7) const {
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].rate > points[i - 1].rate + tol) return false;
        double previous = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < points.size(); ++i) {
            const double dD = points[i].distortion - points[i - 1].distortion;
            if (dD <= 1e-12) continue;
            const double chord = (points[i].rate - points[i - 1].rate) / dD;
            if (chord < previous - tol * (1.0 + std::abs(previous))) return false;
            previous = chord;
        }
        return true;
    }
};

/// Squared-error distortion between bin centres of a K-point grid on [0, 2π).
inline Eigen::MatrixXd squared_error_matrix(std::span<const double> source, std::span<const double> reproduction) {
    Eigen::MatrixXd d(static_cast<Eigen::Index>(source.size()), static_cast<Eigen::Index>(reproduction.size()));
    for (std::size_t i = 0; i < source.size(); ++i)
        for (std::size_t j = 0; j < reproduction.size(); ++j) {
            const double e = source[i] - reproduction[j];
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e * e;
        }
    return d;
}

/// Entropy power of a K-bin discretization, treating each bin as uniform
/// (h = H(masses) + ln δ).
inline double discretized_entropy_power(std::span<const double> masses) {
    const double delta = kTwoPi / static_cast<double>(masses.size());
    const double h = shannon_entropy(masses) + std::log(delta);
    return std::exp(2.0 * h) / (kTwoPi * std::numbers::e);
}

/// Sweeps Blahut–Arimoto over `slopes` for the prior discretized onto K bin centres.
inline RDCurve rd_curve(const PhasePrior& prior, std::size_t K, std::span<const double> slopes,
                        const BlahutArimotoOptions& options = {}) {
    if (K < 16) throw InvalidInput("rd_curve: grid size K must be at least 16");
    RDCurve curve;
    curve.source_masses = prior.cell_masses(K);
    const double delta = kTwoPi / static_cast<double>(K);
    for (std::size_t k = 0; k < K; ++k) curve.source_points.push_back((static_cast<double>(k) + 0.5) * delta);
    const Eigen::MatrixXd d = squared_error_matrix(curve.source_points, curve.source_points);
    for (double s : slopes) {
        const auto r = blahut_arimoto_point(curve.source_masses, d, s, options);
        curve.points.push_back({r.distortion, r.rate, s, r.converged, r.rate_lower_bound});
    }
    std::stable_sort(curve.points.begin(), curve.points.end(),
                     [](const RDPoint& a, const RDPoint& b) { return a.distortion < b.distortion; });
    return curve;
}

}  // namespace phasebound
