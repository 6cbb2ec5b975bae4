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

// Runs every invariant of the library on a configured grid and reports each
// check with its margin. Used by `phasebound verify`.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "phasebound/scenario.hpp"

namespace phasebound {

struct Check {
    std::string group;
    std::string name;
    std::string relation;  // e.g. "lhs <= rhs"
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // ≥ 0 when satisfied
    std::string context;
    bool passed = true;
};

struct VerifyConfig {
    std::vector<PhasePrior> priors;
    std::vector<ProbePoint> probes;
    std::vector<double> etas;
    SimGrid grid;
    std::size_t random_probes = 20;
    std::size_t random_cutoff = 30;
    std::size_t random_distributions = 200;
    std::size_t distribution_cutoff = 40;
    std::vector<double> scaling_photons = {1, 10, 100, 1000};
    std::vector<std::size_t> rd_grids = {256, 512, 1024};
    std::vector<double> rd_slopes = {0.5, 1.0, 5.0, 10.0};
    std::uint64_t seed = 1;
    /// Test hook: "iti_sign" flips the exponent sign of the ITI bound inside the checks.
    std::string inject_fault;
};

inline VerifyConfig default_verify_config() {
    VerifyConfig c;
    c.priors = {PhasePrior::uniform(kTwoPi), PhasePrior::uniform(std::numbers::pi), PhasePrior::uniform(std::numbers::pi / 2),
                PhasePrior::wrapped_gaussian(std::numbers::pi, 0.5)};
    const double h = 1.0 / std::numbers::sqrt2;
    c.probes = {parse_probe(json{{"family", "coherent"}, {"alpha", 1.0}}).front(),
                parse_probe(json{{"family", "flat-superposition"}, {"d", 4}}).front(),
                parse_probe(json{{"amplitudes", {h, h}}, {"label", "plus"}}).front()};
    c.etas = {0.0, 0.25, 0.5, 0.75, 1.0};
    return c;
}

inline VerifyConfig parse_verify_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    detail::reject_unknown_keys(j, {"priors", "probes", "eta", "grid", "random_probes", "random_cutoff", "random_distributions",
                                    "distribution_cutoff", "scaling_N_S", "rd_curve", "seed", "inject_fault"},
                                "");
    VerifyConfig c = default_verify_config();
    if (j.contains("priors")) {
        if (!j["priors"].is_array() || j["priors"].empty()) throw ConfigError("priors: expected a non-empty list");
        c.priors.clear();
        for (std::size_t i = 0; i < j["priors"].size(); ++i)
            c.priors.push_back(parse_prior(j["priors"][i], "priors[" + std::to_string(i) + "]"));
    }
    if (j.contains("probes")) {
        if (!j["probes"].is_array() || j["probes"].empty()) throw ConfigError("probes: expected a non-empty list");
        c.probes.clear();
        for (std::size_t i = 0; i < j["probes"].size(); ++i) {
            for (auto& p : parse_probe(j["probes"][i], "probes[" + std::to_string(i) + "]")) {
                if (!p.state) throw ConfigError("probes[" + std::to_string(i) + "]: " + p.label + " exceeds the photon-number cutoff");
                c.probes.push_back(std::move(p));
            }
        }
    }
    if (j.contains("eta")) {
        c.etas = detail::number_list(j, "eta", "");
        for (double eta : c.etas)
            if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta: values must lie in [0, 1]");
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) throw ConfigError("grid: expected an object");
        detail::reject_unknown_keys(g, {"phi", "theta"}, "grid");
        c.grid.phi = detail::count_at(g, "phi", c.grid.phi, "grid");
        c.grid.theta = detail::count_at(g, "theta", c.grid.theta, "grid");
    }
    try {
        c.grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    c.random_probes = detail::count_at(j, "random_probes", c.random_probes, "");
    c.random_cutoff = detail::count_at(j, "random_cutoff", c.random_cutoff, "");
    c.random_distributions = detail::count_at(j, "random_distributions", c.random_distributions, "");
    c.distribution_cutoff = detail::count_at(j, "distribution_cutoff", c.distribution_cutoff, "");
    if (c.random_cutoff < 1 || c.random_cutoff > kMaxCutoff) throw ConfigError("random_cutoff: must lie in [1, 128]");
    if (c.distribution_cutoff < 1) throw ConfigError("distribution_cutoff: must be at least 1");
    if (j.contains("scaling_N_S")) {
        c.scaling_photons = detail::number_list(j, "scaling_N_S", "");
        for (double n : c.scaling_photons)
            if (!(n > 0.0)) throw ConfigError("scaling_N_S: values must be positive");
    }
    if (j.contains("rd_curve")) {
        const json& r = j["rd_curve"];
        if (!r.is_object()) throw ConfigError("rd_curve: expected an object");
        detail::reject_unknown_keys(r, {"K", "slopes"}, "rd_curve");
        if (r.contains("K")) {
            c.rd_grids.clear();
            for (double k : detail::number_list(r, "K", "rd_curve")) {
                const std::size_t K = detail::integral(k, "rd_curve.K");
                if (K < 16) throw ConfigError("rd_curve.K: must be at least 16");
                c.rd_grids.push_back(K);
            }
        }
        if (r.contains("slopes")) {
            c.rd_slopes = detail::number_list(r, "slopes", "rd_curve");
            for (double s : c.rd_slopes)
                if (!(s > 0.0)) throw ConfigError("rd_curve.slopes: values must be positive");
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("inject_fault")) {
        c.inject_fault = j["inject_fault"].is_string() ? j["inject_fault"].get<std::string>() : "";
        if (c.inject_fault != "iti_sign") throw ConfigError("inject_fault: unknown fault '" + c.inject_fault + "'");
    }
    return c;
}

namespace detail {

class CheckList {
   public:
    CheckList(std::string group, std::string context = {}) : group_(std::move(group)), context_(std::move(context)) {}

    void at_most(const std::string& name, double lhs, double rhs, double slack, const std::string& context = {}) {
        add(name, "<=", lhs, rhs + slack, context);
    }
    void at_least(const std::string& name, double lhs, double rhs, double slack, const std::string& context = {}) {
        add(name, ">=", lhs, rhs - slack, context);
    }
    void near(const std::string& name, double lhs, double rhs, double tol, const std::string& context = {}) {
        Check c{group_, name, "|lhs - rhs| <= " + format_number(tol), lhs, rhs, tol - std::abs(lhs - rhs), join(context), true};
        c.passed = c.margin >= 0.0;
        checks_.push_back(std::move(c));
    }
    std::vector<Check> take() { return std::move(checks_); }

   private:
    void add(const std::string& name, const char* rel, double lhs, double rhs, const std::string& context) {
        Check c{group_, name, std::string("lhs ") + rel + " rhs", lhs, rhs, 0.0, join(context), true};
        c.margin = rel[0] == '<' ? rhs - lhs : lhs - rhs;
        c.passed = c.margin >= 0.0 && std::isfinite(c.margin);
        checks_.push_back(std::move(c));
    }
    std::string join(const std::string& context) const {
        if (context_.empty()) return context;
        return context.empty() ? context_ : context_ + " " + context;
    }
    std::string group_;
    std::string context_;
    std::vector<Check> checks_;
};

inline std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t size) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(size);
    double total = 0.0;
    for (auto& v : p) total += (v = unit(rng) < 0.3 ? 0.0 : -std::log1p(-unit(rng)));
    if (total == 0.0) {
        p[0] = 1.0;
        total = 1.0;
    }
    for (auto& v : p) v /= total;
    return p;
}

inline ProbeSpec random_probe(std::mt19937_64& rng, std::size_t cutoff, Idler idler) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    const auto p = random_distribution(rng, cutoff + 1);
    std::vector<cplx> c(cutoff + 1);
    double norm = 0.0;
    for (std::size_t n = 0; n <= cutoff; ++n) norm += std::norm(c[n] = std::polar(std::sqrt(p[n]), angle(rng)));
    for (auto& v : c) v /= std::sqrt(norm);
    return ProbeSpec(std::move(c), idler);
}

inline std::string eta_context(double eta) { return "eta=" + format_number(eta); }

}  // namespace detail

/// Every check, grouped; order is fixed by the configuration, not by scheduling.
inline std::vector<Check> run_verification(const VerifyConfig& c, std::size_t threads) {
    using detail::CheckList;
    const bool flip = c.inject_fault == "iti_sign";
    auto iti = [flip](double Q, double C) { return flip ? Q * std::exp(2.0 * C) : iti_bound(Q, C); };

    std::vector<std::function<std::vector<Check>()>> tasks;

    // Priors.
    tasks.emplace_back([&] {
        CheckList out("phase_prior");
        for (const auto& p : c.priors) {
            out.at_most("entropy_power <= prior_variance", entropy_power(p), prior_variance(p), 1e-9, p.describe());
            out.at_least("prior_max_density >= 1/(2pi)", prior_max_density(p), 1.0 / kTwoPi, 1e-12, p.describe());
        }
        for (double L : {std::numbers::pi / 2, std::numbers::pi, kTwoPi}) {
            const auto closed = PhasePrior::uniform(L);
            const auto masses = closed.cell_masses(4096);
            std::vector<double> density(masses.size());
            for (std::size_t k = 0; k < masses.size(); ++k) density[k] = masses[k] * 4096 / kTwoPi;
            out.near("uniform entropy closed form = tabulated (K=4096)", differential_entropy(closed),
                     differential_entropy(PhasePrior::tabulated(density)), 1e-8, "L=" + format_number(L));
            out.near("uniform entropy = ln L", differential_entropy(closed), std::log(L), 1e-14, "L=" + format_number(L));
        }
        return out.take();
    });

    // Rate-distortion.
    tasks.emplace_back([&] {
        CheckList out("rate_distortion");
        for (double Q : {0.05, 1.0, kTwoPi / std::numbers::e})
            for (double f : {1.0, 0.5, 0.1, 1e-3}) {
                const double D = f * Q;
                out.near("shannon_lb_distortion(Q, shannon_lb_rate(Q, D)) = D", shannon_lb_distortion(Q, shannon_lb_rate(Q, D)), D,
                         1e-12 * D, "Q=" + format_number(Q) + " D=" + format_number(D));
            }
        const std::vector<double> binary = {0.5, 0.5};
        Eigen::MatrixXd hamming = Eigen::MatrixXd::Ones(2, 2);
        hamming.diagonal().setZero();
        BlahutArimotoOptions tight;
        tight.tolerance = 1e-14;
        const auto b = blahut_arimoto_point(binary, hamming, std::log(9.0), tight);
        out.near("binary source R(0.1) = ln2 - h_b(0.1)", b.rate, std::log(2.0) - binary_entropy(0.1), 1e-6);

        const auto prior = PhasePrior::uniform(kTwoPi);
        const auto masses = prior.cell_masses(64);
        std::vector<double> x(64);
        for (std::size_t k = 0; k < 64; ++k) x[k] = (static_cast<double>(k) + 0.5) * kTwoPi / 64;
        BlahutArimotoOptions hist;
        hist.record_history = true;
        for (double s : c.rd_slopes) {
            const auto r = blahut_arimoto_point(masses, squared_error_matrix(x, x), s, hist);
            double worst = -INFINITY;
            for (std::size_t i = 1; i < r.lagrangian_history.size(); ++i)
                worst = std::max(worst, r.lagrangian_history[i] - r.lagrangian_history[i - 1]);
            if (r.lagrangian_history.size() > 1)
                out.at_most("blahut_arimoto objective never increases (largest step)", worst, 0.0, 1e-12, "K=64 s=" + format_number(s));
        }
        return out.take();
    });
    for (std::size_t K : c.rd_grids) {
        tasks.emplace_back([&, K] {
            CheckList out("rate_distortion", "K=" + std::to_string(K));
            const auto curve = rd_curve(PhasePrior::uniform(kTwoPi), K, c.rd_slopes);
            const double Qd = discretized_entropy_power(curve.source_masses);
            double eps = 0.0;
            for (const auto& p : curve.points) {
                eps = std::max(eps, shannon_lb_rate(Qd, p.distortion) - p.rate);
                out.at_least("R_BA >= shannon_lb_rate(Q_disc, D) - 0.05", p.rate, shannon_lb_rate(Qd, p.distortion), 0.05,
                             "s=" + format_number(p.slope));
                out.at_least("R_BA >= 0", p.rate, 0.0, 0.0, "s=" + format_number(p.slope));
            }
            out.at_least("rd_curve convex and non-increasing", curve.is_convex_nonincreasing() ? 1.0 : 0.0, 1.0, 0.0);
            Check e{"rate_distortion", "epsilon(K)", "value", eps, 0.0, 0.0, "K=" + std::to_string(K), true};
            auto list = out.take();
            list.push_back(e);
            return list;
        });
    }

    // Capacity and entropy inequalities.
    tasks.emplace_back([&] {
        CheckList out("channel_capacity");
        double prev = unrestricted_capacity(0.1), prev_step = INFINITY;
        for (int i = 2; i <= 500; ++i) {
            const double N = 0.1 * i;
            const double g = unrestricted_capacity(N);
            out.at_least("unrestricted_capacity strictly increasing", g - prev, 0.0, 0.0, "N_S=" + format_number(N));
            if (std::isfinite(prev_step))
                out.at_most("unrestricted_capacity second difference <= 0", (g - prev) - prev_step, 0.0, 1e-13, "N_S=" + format_number(N));
            prev_step = g - prev;
            prev = g;
        }
        std::mt19937_64 rng(c.seed);
        for (std::size_t t = 0; t < c.random_distributions; ++t) {
            const auto p = detail::random_distribution(rng, c.distribution_cutoff + 1);
            double mean_n = 0.0;
            for (std::size_t n = 0; n < p.size(); ++n) mean_n += static_cast<double>(n) * p[n];
            for (double eta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const std::string ctx = "p#" + std::to_string(t) + " " + detail::eta_context(eta);
                out.at_least("entropy_gain >= ln(1-eta)", entropy_gain(p, LossChannel(eta)), std::log(1 - eta), 1e-9, ctx);
                const auto q = loss_distribution(p, LossChannel(eta));
                double total = 0.0, mean_l = 0.0;
                for (std::size_t l = 0; l < q.size(); ++l) {
                    total += q[l];
                    mean_l += static_cast<double>(l) * q[l];
                }
                out.near("loss_distribution normalized", total, 1.0, 1e-10, ctx);
                out.near("mean loss = (1-eta) mean photons", mean_l, (1 - eta) * mean_n, 1e-9, ctx);
            }
        }
        for (std::size_t n = 0; n <= 60; ++n)
            for (int k = 0; k <= 20; ++k) {
                const double eta = k / 20.0;
                std::vector<double> b(n + 1);
                for (std::size_t l = 0; l <= n; ++l) b[l] = binomial_loss_kernel(n, l, LossChannel(eta));
                out.at_most("H(binomial) <= entropy_variance_bound(eta(1-eta)n)", shannon_entropy(b),
                            entropy_variance_bound(eta * (1 - eta) * static_cast<double>(n)), 1e-12,
                            "n=" + std::to_string(n) + " " + detail::eta_context(eta));
            }
        return out.take();
    });

    // Fock numerics on random NDS probes.
    {
        std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
        std::vector<ProbeSpec> probes;
        for (std::size_t t = 0; t < c.random_probes; ++t) probes.push_back(detail::random_probe(rng, c.random_cutoff, Idler::nds));
        for (std::size_t t = 0; t < probes.size(); ++t) {
            tasks.emplace_back([&, t, probe = probes[t]] {
                CheckList out("fock_numerics", "nds#" + std::to_string(t));
                const auto prior = PhasePrior::uniform(kTwoPi);
                const auto pn = probe.photon_distribution();
                for (double eta : c.etas) {
                    const LossChannel ch(eta);
                    const std::string ctx = detail::eta_context(eta);
                    const auto d = chi_decompose(probe, ch);
                    double worst = 0.0, total = 0.0;
                    for (std::size_t a = 0; a < d.terms.size(); ++a) {
                        total += d.terms[a].probability;
                        for (std::size_t b = 0; b < d.terms.size(); ++b)
                            worst = std::max(worst, std::abs(d.overlap(a, b) - cplx(a == b ? 1.0 : 0.0)));
                    }
                    out.near("chi branches orthonormal (max deviation)", worst, 0.0, 1e-12, ctx);
                    out.near("chi branch probabilities sum to 1", total, 1.0, 1e-12, ctx);

                    double h_joint = 0.0;
                    std::vector<double> q(pn.size(), 0.0);
                    for (std::size_t n = 0; n < pn.size(); ++n)
                        for (std::size_t l = 0; l <= n; ++l) {
                            const double w = pn[n] * binomial_loss_kernel(n, l, ch);
                            h_joint -= xlogx(w);
                            q[l] += w;
                        }
                    const double h_loss = shannon_entropy(q);
                    const double s_is = von_neumann_entropy(modulated_state(d, 0.0));
                    const auto avg = average_state(d, prior);
                    const double s_avg = von_neumann_entropy(avg);
                    const double s_rand = von_neumann_entropy(phase_randomize(avg));
                    const double chi = s_avg - s_is;
                    out.near("S(rho_IS) = H(L)", s_is, h_loss, 1e-8, ctx);
                    out.near("S(P rho_bar) = H(N, N-L)", s_rand, h_joint, 1e-8, ctx);
                    out.at_most("chi <= S(P rho_bar) - S(rho_IS)", chi, s_rand - s_is, 1e-8, ctx);
                    const double N = probe.mean_photon_number();
                    if (eta > 0.0 && eta < 1.0)
                        out.at_most("S(P rho_bar) - S(rho_IS) <= capacity_upper_bound_lossy", s_rand - s_is,
                                    capacity_upper_bound_lossy(N, ch), 1e-8, ctx);
                    if (eta == 1.0) out.at_most("chi <= unrestricted_capacity (lossless)", chi, unrestricted_capacity(N), 1e-8, ctx);
                }
                return out.take();
            });
        }
    }

    // Analytic bounds and scaling.
    tasks.emplace_back([&] {
        CheckList out("mse_bounds");
        for (double L : {std::numbers::pi / 2, std::numbers::pi, kTwoPi})
            for (double N : {0.0, 1.0, 10.0}) {
                const double hl = h_limit_bound(L * L / (kTwoPi * std::numbers::e), N);
                out.near("hall_wiseman = h_limit for uniform priors", hall_wiseman_bound(1.0 / L, N), hl, 1e-12,
                         "L=" + format_number(L) + " N_S=" + format_number(N));
            }
        const double Q = kTwoPi / std::numbers::e;
        const double c0 = h_limit_bound(Q, c.scaling_photons.front()) * std::pow(c.scaling_photons.front() + 1, 2);
        for (double N : c.scaling_photons)
            out.near("h_limit (N_S+1)^2 constant", h_limit_bound(Q, N) * (N + 1) * (N + 1), c0, 1e-12 * c0, "N_S=" + format_number(N));
        for (double eta : c.etas) {
            if (!(eta > 0.0 && eta < 1.0)) continue;
            const LossChannel ch(eta);
            const double limit = Q * (1 - eta) / (kTwoPi * std::numbers::e * eta);
            double prev = INFINITY;
            for (double N : c.scaling_photons) {
                const double rel = std::abs(lossy_sql_bound(Q, N, ch) * N / limit - 1);
                const std::string ctx = detail::eta_context(eta) + " N_S=" + format_number(N);
                out.at_most("lossy_sql N_S relative distance to Q(1-eta)/(2 pi e eta)", rel, 1 / (12 * eta * (1 - eta) * N), 1e-12, ctx);
                if (std::isfinite(prev)) out.at_most("lossy_sql N_S distance shrinks as N_S grows", rel, prev, 0.0, ctx);
                prev = rel;
            }
        }
        return out.take();
    });

    // Simulation-backed chains, one task per (prior, probe).
    for (std::size_t pi_ = 0; pi_ < c.priors.size(); ++pi_) {
        for (std::size_t pr = 0; pr < c.probes.size(); ++pr) {
            tasks.emplace_back([&, pi_, pr] {
                const PhasePrior& prior = c.priors[pi_];
                const ProbePoint& probe = c.probes[pr];
                CheckList out("estimation", prior.describe() + " " + probe.label);
                const double Q = entropy_power(prior);
                const double var = prior_variance(prior);
                const double N = probe.moments.mean;
                std::vector<double> etas = c.etas;
                std::sort(etas.begin(), etas.end());
                double prev_mse = INFINITY, prev_eta = -1.0;
                for (double eta : etas) {
                    const LossChannel ch(eta);
                    const std::string ctx = detail::eta_context(eta);
                    const auto sim = simulate_estimation(*probe.state, ch, prior, c.grid);
                    const double chi = std::max(0.0, holevo_quantity(chi_decompose(*probe.state, ch), prior));
                    out.at_least("mse >= Q exp(-2 I)", sim.mse, iti(Q, sim.mutual_information), 1e-6, ctx);
                    out.at_most("mse <= prior_variance", sim.mse, var, 1e-8, ctx);
                    out.at_most("grid doubling changes mse by < 1e-5", std::abs(sim.mse - sim.mse_refined), 1e-5, 0.0, ctx);
                    out.at_most("I(Phi;Theta) <= chi", sim.mutual_information, chi, 1e-6, ctx);
                    if (eta == 0.0) out.near("eta = 0 gives prior variance", sim.mse, var, 1e-8, ctx);
                    if (prev_eta >= 0.0)
                        out.at_most("mse non-increasing in eta", sim.mse, prev_mse, 1e-8, ctx + " vs eta=" + format_number(prev_eta));
                    prev_mse = sim.mse;
                    prev_eta = eta;
                    if (eta == 1.0) {
                        const double C = unrestricted_capacity(N);
                        out.at_least("chain: mse >= iti(Q, I)", sim.mse, iti(Q, sim.mutual_information), 1e-9, ctx);
                        out.at_least("chain: iti(Q, I) >= iti(Q, chi)", iti(Q, sim.mutual_information), iti(Q, chi), 1e-9, ctx);
                        out.at_least("chain: iti(Q, chi) >= iti(Q, C(N_S))", iti(Q, chi), iti(Q, C), 1e-9, ctx);
                        out.at_least("chain: iti(Q, C(N_S)) >= h_limit", iti(Q, C), h_limit_bound(Q, N), 1e-9, ctx);
                    } else if (eta > 0.0) {
                        const double sql = lossy_sql_bound(Q, N, ch);
                        out.at_least("chain: mse >= iti(Q, chi)", sim.mse, iti(Q, chi), 1e-9, ctx);
                        out.at_least("chain: iti(Q, chi) >= lossy_sql", iti(Q, chi), sql, 1e-9, ctx);
                        // the same amplitudes with an idler: the traced signal carries no phase
                        const ProbeSpec nds(std::vector<cplx>(probe.state->amplitudes().begin(), probe.state->amplitudes().end()), Idler::nds);
                        const auto sim_nds = simulate_estimation(nds, ch, prior, c.grid);
                        const double chi_nds = std::max(0.0, holevo_quantity(chi_decompose(nds, ch), prior));
                        out.at_least("NDS chain: mse >= iti(Q, chi)", sim_nds.mse, iti(Q, chi_nds), 1e-9, ctx);
                        out.at_least("NDS chain: iti(Q, chi) >= lossy_sql", iti(Q, chi_nds), sql, 1e-9, ctx);
                    }
                }
                return out.take();
            });
        }
        tasks.emplace_back([&, pi_] {
            const PhasePrior& prior = c.priors[pi_];
            CheckList out("estimation", prior.describe() + " vacuum");
            for (double eta : c.etas) {
                const auto sim = simulate_estimation(ProbeSpec::number(0), LossChannel(eta), prior, c.grid);
                out.near("vacuum gives prior variance", sim.mse, prior_variance(prior), 1e-8, detail::eta_context(eta));
            }
            const auto d = chi_decompose(ProbeSpec::coherent(1.0), LossChannel(0.5));
            out.near("chi = 0 for a point-mass prior", holevo_quantity(d, PhasePrior::point_mass(prior_mean(prior))), 0.0, 1e-9);
            return out.take();
        });
    }

    auto groups = parallel_map<std::vector<Check>>(tasks.size(), threads, [&](std::size_t i) { return tasks[i](); });

    // ε(K) values must shrink at least by half per doubling and sit below 0.05 at K = 512.
    std::vector<Check> all;
    std::vector<std::pair<std::size_t, double>> eps;
    for (auto& g : groups)
        for (auto& ch : g) {
            if (ch.name == "epsilon(K)") {
                eps.emplace_back(std::stoul(ch.context.substr(2)), ch.lhs);
                continue;
            }
            all.push_back(std::move(ch));
        }
    CheckList tail("rate_distortion");
    std::sort(eps.begin(), eps.end());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i].first == 512) tail.at_most("epsilon(512) <= 0.05", eps[i].second, 0.05, 0.0);
        if (i > 0 && eps[i].first == 2 * eps[i - 1].first)
            tail.at_most("epsilon halves as K doubles", eps[i].second, 0.5 * eps[i - 1].second, 1e-12,
                         "K=" + std::to_string(eps[i].first));
    }
    for (auto& ch : tail.take()) all.push_back(std::move(ch));
    return all;
}

inline json verification_json(const std::vector<Check>& checks) {
    json list = json::array();
    std::size_t failed = 0;
    for (const auto& c : checks) {
        failed += c.passed ? 0 : 1;
        list.push_back({{"group", c.group},
                        {"name", c.name},
                        {"context", c.context},
                        {"relation", c.relation},
                        {"lhs", json_number(c.lhs)},
                        {"rhs", json_number(c.rhs)},
                        {"margin", json_number(c.margin)},
                        {"passed", c.passed}});
    }
    return {{"checks", checks.size()}, {"failed", failed}, {"results", list}};
}

/// Human-readable summary: one line per group, then every failing check.
inline std::string verification_text(const std::vector<Check>& checks) {
    std::vector<std::string> order;
    std::map<std::string, std::pair<std::size_t, double>> stats;  // count, smallest margin
    std::string failures;
    for (const auto& c : checks) {
        if (!stats.count(c.group)) {
            order.push_back(c.group);
            stats[c.group] = {0, INFINITY};
        }
        auto& [n, m] = stats[c.group];
        ++n;
        m = std::min(m, c.margin);
        if (!c.passed)
            failures += "FAIL " + c.group + ": " + c.name + " [" + c.context + "] " + c.relation + " with lhs=" + format_number(c.lhs) +
                        " rhs=" + format_number(c.rhs) + " margin=" + format_number(c.margin) + "\n";
    }
    std::string out;
    std::size_t failed = 0;
    for (const auto& c : checks) failed += c.passed ? 0 : 1;
    for (const auto& g : order)
        out += g + ": " + std::to_string(stats[g].first) + " checks, smallest margin " + format_number(stats[g].second) + "\n";
    out += failures;
    out += failed == 0 ? "verify: all " + std::to_string(checks.size()) + " checks passed\n"
                       : "verify: " + std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed\n";
    return out;
}

}  // namespace phasebound
