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


// phasebound command line: bounds, capacity, rd-curve, simulate, verify.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "phasebound/phasebound.hpp"
#include "phasebound/scenario.hpp"
#include "phasebound/verify.hpp"

namespace pb = phasebound;
namespace fs = std::filesystem;

namespace {

struct Globals {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
};

pb::json load_config(const Globals& g) { return g.config.empty() ? pb::json::object() : pb::load_json_file(g.config); }

void emit(const Globals& g, const std::string& file, const std::string& text) {
    std::cout << text;
    if (g.out.empty()) return;
    pb::ensure_directory(g.out);
    pb::write_text_file(fs::path(g.out) / file, text);
}

std::vector<double> list_or(const pb::json& cfg, const char* key, const std::vector<double>& flag, std::vector<double> fallback) {
    if (!flag.empty()) return flag;
    if (cfg.contains(key)) return pb::detail::number_list(cfg, key, "");
    return fallback;
}

int run_bounds(const Globals& g) {
    if (g.config.empty()) throw pb::ConfigError("bounds: --config is required");
    pb::ScenarioConfig c = pb::parse_scenario(pb::load_json_file(g.config));
    if (g.seed) c.seed = *g.seed;
    const fs::path out = g.out.empty() ? fs::path(".") : fs::path(g.out);
    const int code = pb::run_scenario(c, out, g.threads);
    std::cout << "wrote " << (out / (c.name + ".csv")).string() << " and " << (out / (c.name + ".json")).string() << "\n";
    if (code != pb::kExitOk) std::cerr << "phasebound: some grid points failed; see the status column\n";
    return code;
}

int run_capacity(const Globals& g, const std::vector<double>& photons_flag, const std::vector<double>& etas_flag) {
    const pb::json cfg = load_config(g);
    pb::detail::reject_unknown_keys(cfg, {"N_S", "eta"}, "");
    const auto photons = list_or(cfg, "N_S", photons_flag, {0.0, 1.0, 10.0, 100.0});
    const auto etas = list_or(cfg, "eta", etas_flag, {0.5, 0.9, 1.0});
    for (double N : photons)
        if (!(N >= 0.0)) throw pb::ConfigError("N_S: values must be nonnegative");
    for (double eta : etas)
        if (!(eta >= 0.0 && eta <= 1.0)) throw pb::ConfigError("eta: values must lie in [0, 1]");
    emit(g, "capacity.csv", pb::capacity_csv(photons, etas));
    return pb::kExitOk;
}

int run_rd_curve(const Globals& g, const std::string& prior_flag, std::size_t K_flag, const std::vector<double>& slopes_flag) {
    const pb::json cfg = load_config(g);
    pb::detail::reject_unknown_keys(cfg, {"prior", "K", "slopes"}, "");
    pb::PhasePrior prior = pb::PhasePrior::uniform(pb::kTwoPi);
    if (!prior_flag.empty()) prior = pb::parse_prior_shorthand(prior_flag);
    else if (cfg.contains("prior")) prior = pb::parse_prior(cfg["prior"]);
    const std::size_t K = K_flag ? K_flag : pb::detail::count_at(cfg, "K", 256, "");
    if (K < 16) throw pb::ConfigError("K: must be at least 16");
    const auto slopes = list_or(cfg, "slopes", slopes_flag, {0.25, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0});
    for (double s : slopes)
        if (!(s > 0.0)) throw pb::ConfigError("slopes: values must be positive");

    // One curve per slope so the slopes can run concurrently; merged in slope order.
    auto parts = pb::parallel_map<pb::RDCurve>(slopes.size(), g.threads, [&](std::size_t i) {
        return pb::rd_curve(prior, K, std::span<const double>(&slopes[i], 1));
    });
    pb::RDCurve curve = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) curve.points.push_back(parts[i].points.front());
    std::stable_sort(curve.points.begin(), curve.points.end(),
                     [](const pb::RDPoint& a, const pb::RDPoint& b) { return a.distortion < b.distortion; });
    emit(g, "rd_curve.csv", pb::rd_curve_csv(curve));
    return pb::kExitOk;
}

struct SimulateFlags {
    std::string probe, prior;
    std::optional<double> eta;
    std::size_t phi = 0, theta = 0, mc = 0;
};

int run_simulate(const Globals& g, const SimulateFlags& f) {
    const pb::json cfg = load_config(g);
    pb::detail::reject_unknown_keys(cfg, {"prior", "probe", "eta", "grid", "monte_carlo", "seed"}, "");
    pb::PhasePrior prior = pb::PhasePrior::uniform(pb::kTwoPi);
    if (!f.prior.empty()) prior = pb::parse_prior_shorthand(f.prior);
    else if (cfg.contains("prior")) prior = pb::parse_prior(cfg["prior"]);

    std::optional<pb::ProbePoint> probe;
    if (!f.probe.empty()) {
        probe = pb::parse_probe_shorthand(f.probe);
    } else if (cfg.contains("probe")) {
        auto pts = pb::parse_probe(cfg["probe"]);
        if (pts.size() != 1) throw pb::ConfigError("probe: simulate takes exactly one probe");
        if (!pts.front().state) throw pb::ConfigError("probe: state exceeds the 128-photon cutoff");
        probe = pts.front();
    } else {
        throw pb::ConfigError("simulate: --probe is required");
    }

    double eta = 1.0;
    if (f.eta) eta = *f.eta;
    else if (cfg.contains("eta")) eta = pb::detail::number_at(cfg, "eta", "");
    if (!(eta >= 0.0 && eta <= 1.0)) throw pb::ConfigError("eta: must lie in [0, 1]");

    pb::SimGrid grid;
    if (cfg.contains("grid")) {
        pb::detail::reject_unknown_keys(cfg["grid"], {"phi", "theta"}, "grid");
        grid.phi = pb::detail::count_at(cfg["grid"], "phi", grid.phi, "grid");
        grid.theta = pb::detail::count_at(cfg["grid"], "theta", grid.theta, "grid");
    }
    if (f.phi) grid.phi = f.phi;
    if (f.theta) grid.theta = f.theta;
    try {
        grid.validate();
    } catch (const pb::InvalidInput& e) {
        throw pb::ConfigError(std::string("grid: ") + e.what());
    }
    const std::size_t samples = f.mc ? f.mc : pb::detail::count_at(cfg, "monte_carlo", 0, "");
    if (samples != 0 && samples < 10000) throw pb::ConfigError("monte_carlo: need at least 10000 samples");
    std::uint64_t seed = 0;
    if (g.seed) seed = *g.seed;
    else if (cfg.contains("seed")) {
        if (!cfg["seed"].is_number_unsigned()) throw pb::ConfigError("seed: expected a nonnegative integer");
        seed = cfg["seed"].get<std::uint64_t>();
    }

    const pb::LossChannel channel(eta);
    const auto sim = pb::simulate_estimation(*probe->state, channel, prior, grid);
    std::optional<pb::MonteCarloResult> mc;
    if (samples) mc = pb::monte_carlo_mse(*probe->state, channel, prior, sim, samples, seed);
    pb::json j;
    j["probe"] = probe->label;
    j["prior"] = prior.describe();
    j["eta"] = eta;
    j["seed"] = seed;
    j.update(pb::simulation_json(sim, mc));
    emit(g, "simulate.json", j.dump(2) + "\n");
    return pb::kExitOk;
}

int run_verify(const Globals& g) {
    pb::VerifyConfig c = g.config.empty() ? pb::default_verify_config() : pb::parse_verify_config(pb::load_json_file(g.config));
    if (g.seed) c.seed = *g.seed;
    const auto checks = pb::run_verification(c, g.threads);
    const std::string text = pb::verification_text(checks);
    std::cout << text;
    if (!g.out.empty()) {
        pb::ensure_directory(g.out);
        pb::write_text_file(fs::path(g.out) / "verify.txt", text);
        pb::write_text_file(fs::path(g.out) / "verify.json", pb::verification_json(checks).dump(2) + "\n");
    }
    for (const auto& ch : checks)
        if (!ch.passed) return pb::kExitViolation;
    return pb::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian phase-estimation MSE bounds and their numerical checks", "phasebound"};
    app.require_subcommand(1);
    Globals g;
    std::size_t threads_flag = 0;
    app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", g.out, "output directory");
    app.add_option("--seed", g.seed, "random seed (overrides the config)");
    app.add_option("--threads", threads_flag, "worker threads (default: PHASEBOUND_THREADS, then all cores)")
        ->check(CLI::PositiveNumber);
    app.fallthrough();

    auto* bounds = app.add_subcommand("bounds", "bound table for a scenario config");

    auto* capacity = app.add_subcommand("capacity", "C(N_S) and the lossy phase-capacity bound");
    std::vector<double> cap_photons, cap_etas;
    capacity->add_option("--N_S", cap_photons, "mean photon numbers");
    capacity->add_option("--eta", cap_etas, "transmittances");

    auto* rd = app.add_subcommand("rd-curve", "discretized rate-distortion curve by slope sweep");
    std::string rd_prior;
    std::size_t rd_K = 0;
    std::vector<double> rd_slopes;
    rd->add_option("--prior", rd_prior, "prior, e.g. uniform:width=3.14 or wrapped_gaussian:sigma=0.5");
    rd->add_option("--K", rd_K, "grid size");
    rd->add_option("--slopes", rd_slopes, "Lagrange slopes s > 0");

    auto* simulate = app.add_subcommand("simulate", "canonical phase measurement with posterior-mean estimate");
    SimulateFlags sf;
    simulate->add_option("--probe", sf.probe, "probe, e.g. coherent:alpha=1, number:n=2, flat:d=4, binomial:N_S=3,idler=nds");
    simulate->add_option("--prior", sf.prior, "prior shorthand (default uniform)");
    simulate->add_option("--eta", sf.eta, "transmittance");
    simulate->add_option("--grid-phi", sf.phi, "prior quadrature nodes");
    simulate->add_option("--grid-theta", sf.theta, "measurement outcome grid");
    simulate->add_option("--mc-samples", sf.mc, "Monte Carlo samples (0 to skip)");

    auto* verify = app.add_subcommand("verify", "run every invariant check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? pb::kExitOk : pb::kExitInvalid;
    }

    g.threads = pb::resolve_threads(threads_flag);
    try {
        if (bounds->parsed()) return run_bounds(g);
        if (capacity->parsed()) return run_capacity(g, cap_photons, cap_etas);
        if (rd->parsed()) return run_rd_curve(g, rd_prior, rd_K, rd_slopes);
        if (simulate->parsed()) return run_simulate(g, sf);
        if (verify->parsed()) return run_verify(g);
    } catch (const pb::InvalidInput& e) {
        std::cerr << "phasebound: " << e.what() << "\n";
        return pb::kExitInvalid;
    } catch (const pb::DomainError& e) {
        std::cerr << "phasebound: " << e.what() << "\n";
        return pb::kExitInvalid;
    } catch (const pb::NumericalFailure& e) {
        std::cerr << "phasebound: numerical failure: " << e.what() << "\n";
        return pb::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "phasebound: " << e.what() << "\n";
        return pb::kExitNumerical;
    }
    return pb::kExitInvalid;
}
