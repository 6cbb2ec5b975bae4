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

// Capacity formulas and entropy bounds for phase modulation through a pure-loss channel.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "phasebound/errors.hpp"
#include "phasebound/numeric.hpp"

namespace phasebound {

/// Beam-splitter loss with power transmittance η ∈ [0, 1].
class LossChannel {
   public:
    explicit LossChannel(double eta) : eta_(eta) {
        if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("LossChannel: transmittance must lie in [0, 1]");
    }
    double eta() const { return eta_; }
    bool lossless() const { return eta_ == 1.0; }

   private:
    double eta_;
};

/// g(N) = (N+1) ln(N+1) − N ln N, the energy-constrained single-mode capacity.
inline double unrestricted_capacity(double mean_photons) {
    if (!(mean_photons >= 0.0)) throw DomainError("unrestricted_capacity: N_S must be nonnegative");
    return xlogx(mean_photons + 1.0) - xlogx(mean_photons);
}

/// B_η(n, l) = C(n, l) η^{n−l} (1−η)^l: probability that l of n photons are lost.
inline double binomial_loss_kernel(std::size_t n, std::size_t l, LossChannel channel) {
    if (l > n) throw DomainError("binomial_loss_kernel: cannot lose more photons than were sent");
    const double eta = channel.eta();
    const std::size_t kept = n - l;
    if (eta == 1.0) return l == 0 ? 1.0 : 0.0;
    if (eta == 0.0) return kept == 0 ? 1.0 : 0.0;
    if (n <= 60) {
        double coeff = 1.0;
        for (std::size_t i = 1; i <= l; ++i) coeff = coeff * static_cast<double>(n - l + i) / static_cast<double>(i);
        return coeff * std::pow(eta, static_cast<double>(kept)) * std::pow(1.0 - eta, static_cast<double>(l));
    }
    const double nd = static_cast<double>(n);
    const double ld = static_cast<double>(l);
    const double log_coeff = std::lgamma(nd + 1.0) - std::lgamma(ld + 1.0) - std::lgamma(nd - ld + 1.0);
    return std::exp(log_coeff + (nd - ld) * std::log(eta) + ld * std::log1p(-eta));
}

/// q_l = Σ_{n≥l} p_n B_η(n, l), l = 0..cutoff.
inline std::vector<double> loss_distribution(std::span<const double> photon_distribution, LossChannel channel) {
    double total = 0.0;
    for (double v : photon_distribution) {
        if (!(v >= 0.0)) throw InvalidInput("loss_distribution: probabilities must be nonnegative");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidInput("loss_distribution: photon distribution is not normalized");
    std::vector<double> q(photon_distribution.size(), 0.0);
    for (std::size_t n = 0; n < photon_distribution.size(); ++n) {
        if (photon_distribution[n] == 0.0) continue;
        for (std::size_t l = 0; l <= n; ++l) q[l] += photon_distribution[n] * binomial_loss_kernel(n, l, channel);
    }
    return q;
}

/// H(X) ≤ ½ ln[2πe (Var X + 1/12)] for an integer-valued X.
inline double entropy_variance_bound(double variance) {
    if (!(variance >= 0.0)) throw DomainError("entropy_variance_bound: variance must be nonnegative");
    return 0.5 * std::log(kTwoPi * std::numbers::e * (variance + 1.0 / 12.0));
}

/// H(L) − H(N): output minus input entropy of the loss channel for a number-diagonal input.
inline double entropy_gain(std::span<const double> photon_distribution, LossChannel channel) {
    const std::vector<double> q = loss_distribution(photon_distribution, channel);
    return shannon_entropy(q) - shannon_entropy(photon_distribution);
}

/// C̄_ph = ½ ln[2πe (η(1−η)N_S + 1/12) / (1−η)²], defined for 0 < η < 1.
inline double capacity_upper_bound_lossy(double mean_photons, LossChannel channel) {
    if (!(mean_photons >= 0.0)) throw DomainError("capacity_upper_bound_lossy: N_S must be nonnegative");
    const double eta = channel.eta();
    if (eta <= 0.0 || eta >= 1.0) throw DomainError("capacity_upper_bound_lossy: requires 0 < eta < 1");
    const double loss = 1.0 - eta;
    return 0.5 * std::log(kTwoPi * std::numbers::e * (eta * loss * mean_photons + 1.0 / 12.0) / (loss * loss));
}

}  // namespace phasebound
