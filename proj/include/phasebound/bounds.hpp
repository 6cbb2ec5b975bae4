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

// Lower bounds on the Bayesian mean-squared error of phase estimation, and the
// report that collects them for one (prior, probe, η) point.
//
// Every Bayesian bound here is the Shannon lower bound D(R) ≥ Q e^{−2R}
// evaluated at some rate R that upper-bounds the information a single use of
// the phase channel can carry.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/capacity.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/estimation.hpp"
#include "phasebound/fock.hpp"
#include "phasebound/numeric.hpp"
#include "phasebound/prior.hpp"
#include "phasebound/rate_distortion.hpp"

namespace phasebound {

/// Information-transmission bound δΦ² ≥ Q e^{−2C}. Q = 0 (point-mass prior) gives 0.
inline double iti_bound(double entropy_power, double capacity) {
    if (!(entropy_power >= 0.0)) throw DomainError("iti_bound: entropy power must be nonnegative");
    if (!(capacity >= 0.0)) throw DomainError("iti_bound: capacity must be nonnegative");
    return entropy_power * std::exp(-2.0 * capacity);
}

/// Lossless H-limit bound (Q / e²) / (N_S + 1)².
inline double h_limit_bound(double entropy_power, double mean_photons) {
    if (!(entropy_power >= 0.0)) throw DomainError("h_limit_bound: entropy power must be nonnegative");
    if (!(mean_photons >= 0.0)) throw DomainError("h_limit_bound: N_S must be nonnegative");
    const double n1 = mean_photons + 1.0;
    return entropy_power / (std::numbers::e * std::numbers::e * n1 * n1);
}

/// 1 / (2π e³ P_max² (N_S + 1)²).
inline double hall_wiseman_bound(double max_density, double mean_photons) {
    if (!(max_density >= 1.0 / kTwoPi - 1e-12))
        throw DomainError("hall_wiseman_bound: P_max below 1/(2*pi) is impossible for a normalized prior");
    if (!(mean_photons >= 0.0)) throw DomainError("hall_wiseman_bound: N_S must be nonnegative");
    if (std::isinf(max_density)) return 0.0;
    const double e3 = std::numbers::e * std::numbers::e * std::numbers::e;
    const double n1 = mean_photons + 1.0;
    return 1.0 / (kTwoPi * e3 * max_density * max_density * n1 * n1);
}

/// Lossy SQL bound Q (1−η)² / (2πe [η(1−η) N_S + 1/12]), for η < 1.
inline double lossy_sql_bound(double entropy_power, double mean_photons, LossChannel channel) {
    if (!(entropy_power >= 0.0)) throw DomainError("lossy_sql_bound: entropy power must be nonnegative");
    if (!(mean_photons >= 0.0)) throw DomainError("lossy_sql_bound: N_S must be nonnegative");
    const double eta = channel.eta();
    if (eta >= 1.0) throw DomainError("lossy_sql_bound: undefined without loss (eta = 1)");
    const double loss = 1.0 - eta;
    return entropy_power * loss * loss / (kTwoPi * std::numbers::e * (eta * loss * mean_photons + 1.0 / 12.0));
}

/// Per-φ unbiased-estimator bound (1−η)/(4ηN_S) + 1/(4 Var N). Not a Bayesian
/// bound; reported for comparison only.
inline double escher_bound(double mean_photons, double photon_variance, LossChannel channel) {
    if (!(mean_photons > 0.0) || !(photon_variance > 0.0))
        throw DomainError("escher_bound: N_S and photon-number variance must be positive");
    const double eta = channel.eta();
    if (eta <= 0.0) throw DomainError("escher_bound: requires eta > 0");
    return (1.0 - eta) / (4.0 * eta * mean_photons) + 1.0 / (4.0 * photon_variance);
}

struct ProbeMoments {
    double mean;
    double variance;
};

struct ReportOptions {
    bool holevo = true;
    std::optional<SimGrid> simulate;  // run the estimation simulation when set
    std::size_t monte_carlo_samples = 0;
    std::uint64_t seed = 0;
    std::size_t rd_grid = 0;  // > 0 attaches the discretized D(C) diagnostic
    std::vector<double> rd_slopes;
};

struct BoundReport {
    std::string prior;
    std::string probe;
    double eta = 1.0;
    double mean_photons = 0.0;
    double photon_variance = 0.0;

    double entropy_power = 0.0;
    double max_density = 0.0;
    double prior_variance = 0.0;

    double capacity = 0.0;                       // C(N_S)
    std::optional<double> capacity_lossy_upper;  // C̄_ph(N_S), 0 < η < 1

    double iti_capacity = 0.0;  // Q e^{−2C}
    double h_limit = 0.0;
    double hall_wiseman = 0.0;
    std::optional<double> lossy_sql;
    std::optional<double> escher;

    std::optional<double> holevo;  // χ
    std::optional<double> iti_holevo;
    std::optional<double> mutual_information;  // I(Φ;Θ) of the simulated measurement
    std::optional<double> iti_mutual_information;
    std::optional<double> mse_sim;
    std::optional<double> mse_sim_refined;
    std::optional<bool> sim_converged;
    std::optional<double> mc_mean;
    std::optional<double> mc_stderr;
    std::optional<double> distortion_exact;  // discretized D(C), lower envelope
};

/// Bounds that need only the prior and the first two photon-number moments.
inline BoundReport analytic_report(const PhasePrior& prior, ProbeMoments moments, LossChannel channel) {
    BoundReport r;
    r.prior = prior.describe();
    r.eta = channel.eta();
    r.mean_photons = moments.mean;
    r.photon_variance = moments.variance;
    r.entropy_power = entropy_power(prior);
    r.max_density = prior_max_density(prior);
    r.prior_variance = prior_variance(prior);

    r.capacity = unrestricted_capacity(moments.mean);
    r.iti_capacity = iti_bound(r.entropy_power, r.capacity);
    r.h_limit = h_limit_bound(r.entropy_power, moments.mean);
    r.hall_wiseman = hall_wiseman_bound(r.max_density, moments.mean);
    if (r.eta > 0.0 && r.eta < 1.0) r.capacity_lossy_upper = capacity_upper_bound_lossy(moments.mean, channel);
    if (r.eta < 1.0) r.lossy_sql = lossy_sql_bound(r.entropy_power, moments.mean, channel);
    if (moments.mean > 0.0 && moments.variance > 0.0 && r.eta > 0.0)
        r.escher = escher_bound(moments.mean, moments.variance, channel);
    return r;
}

inline std::string describe(const ProbeSpec& probe) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "probe(cutoff=%zu,N_S=%.10g,idler=%s)", probe.cutoff(), probe.mean_photon_number(),
                  to_string(probe.idler()));
    return buf;
}

/// Every bound plus the Holevo quantity and, on request, the simulated
/// canonical-phase estimation and a discretized exact D(C).
inline BoundReport build_report(const PhasePrior& prior, const ProbeSpec& probe, LossChannel channel,
                                const ReportOptions& options = {}) {
    BoundReport r = analytic_report(prior, {probe.mean_photon_number(), probe.photon_number_variance()}, channel);
    r.probe = describe(probe);
    if (options.holevo) {
        r.holevo = std::max(0.0, holevo_quantity(chi_decompose(probe, channel), prior));
        r.iti_holevo = iti_bound(r.entropy_power, *r.holevo);
    }
    if (options.simulate) {
        const EstimationResult sim = simulate_estimation(probe, channel, prior, *options.simulate);
        r.mse_sim = sim.mse;
        r.mse_sim_refined = sim.mse_refined;
        r.sim_converged = sim.converged;
        r.mutual_information = sim.mutual_information;
        r.iti_mutual_information = iti_bound(r.entropy_power, sim.mutual_information);
        if (options.monte_carlo_samples > 0) {
            const auto mc = monte_carlo_mse(probe, channel, prior, sim, options.monte_carlo_samples, options.seed);
            r.mc_mean = mc.mean;
            r.mc_stderr = mc.standard_error;
        }
    }
    if (options.rd_grid > 0 && !options.rd_slopes.empty()) {
        const RDCurve curve = rd_curve(prior, options.rd_grid, options.rd_slopes);
        r.distortion_exact = curve.distortion_lower_envelope(r.capacity);
    }
    return r;
}

}  // namespace phasebound
