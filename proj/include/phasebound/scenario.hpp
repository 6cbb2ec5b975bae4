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

// Scenario sweeps: JSON configuration in, one CSV table and one JSON report out.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "phasebound/bounds.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/estimation.hpp"
#include "phasebound/parallel.hpp"

namespace phasebound {

using json = nlohmann::ordered_json;

enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitInvalid = 2, kExitNumerical = 3 };

/// Rejected configuration; maps to exit status 2.
class ConfigError : public InvalidInput {
   public:
    using InvalidInput::InvalidInput;
};

/// Deterministic text for a double: %.12g, "nan"/"inf" spelled out.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

/// JSON value for a double; non-finite values become null.
inline json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json json_optional(const std::optional<double>& v) { return v ? json_number(*v) : json(nullptr); }

namespace detail {

inline std::string where(const std::string& context, const std::string& key) {
    return context.empty() ? key : context + "." + key;
}

inline double number_at(const json& j, const std::string& key, const std::string& context) {
    if (!j.contains(key)) throw ConfigError(where(context, key) + ": missing");
    if (!j[key].is_number()) throw ConfigError(where(context, key) + ": expected a number");
    const double v = j[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError(where(context, key) + ": must be finite");
    return v;
}

inline double number_or(const json& j, const std::string& key, double fallback, const std::string& context) {
    return j.contains(key) ? number_at(j, key, context) : fallback;
}

inline std::size_t count_at(const json& j, const std::string& key, std::size_t fallback, const std::string& context) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer() || j[key].get<long long>() < 0)
        throw ConfigError(where(context, key) + ": expected a nonnegative integer");
    return j[key].get<std::size_t>();
}

/// Scalar or list of numbers.
inline std::vector<double> number_list(const json& j, const std::string& key, const std::string& context) {
    const json& v = j.at(key);
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number()) throw ConfigError(where(context, key) + ": expected numbers");
            out.push_back(x.get<double>());
        }
    } else {
        throw ConfigError(where(context, key) + ": expected a number or a list of numbers");
    }
    if (out.empty()) throw ConfigError(where(context, key) + ": list is empty");
    for (double x : out)
        if (!std::isfinite(x)) throw ConfigError(where(context, key) + ": values must be finite");
    return out;
}

inline void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& context) {
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || k == a;
        if (!ok) throw ConfigError(where(context, k) + ": unknown key");
    }
}

inline std::size_t integral(double v, const std::string& what) {
    if (!(v >= 0.0) || std::abs(v - std::round(v)) > 1e-9) throw ConfigError(what + " must be a nonnegative integer");
    return static_cast<std::size_t>(std::llround(v));
}

inline std::string trimmed(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace detail

inline PhasePrior parse_prior(const json& j, const std::string& context = "prior") {
    if (!j.is_object()) throw ConfigError(context + ": expected an object");
    if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError(context + ".kind: missing or not a string");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "uniform") {
            detail::reject_unknown_keys(j, {"kind", "width", "center"}, context);
            return PhasePrior::uniform(detail::number_or(j, "width", kTwoPi, context),
                                       detail::number_or(j, "center", std::numbers::pi, context));
        }
        if (kind == "wrapped_gaussian") {
            detail::reject_unknown_keys(j, {"kind", "mean", "sigma"}, context);
            return PhasePrior::wrapped_gaussian(detail::number_or(j, "mean", std::numbers::pi, context),
                                                detail::number_at(j, "sigma", context));
        }
        if (kind == "tabulated") {
            detail::reject_unknown_keys(j, {"kind", "density"}, context);
            return PhasePrior::tabulated(detail::number_list(j, "density", context));
        }
        if (kind == "point_mass") {
            detail::reject_unknown_keys(j, {"kind", "location"}, context);
            return PhasePrior::point_mass(detail::number_at(j, "location", context));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(context + ": " + e.what());
    }
    throw ConfigError(context + ".kind: unknown prior kind '" + kind + "'");
}

/// One probe of a sweep. `state` is absent when the family member does not fit
/// the photon-number cutoff; analytic bounds still apply through `moments`.
struct ProbePoint {
    std::string label;
    ProbeMoments moments{0.0, 0.0};
    std::optional<ProbeSpec> state;
};

inline ProbePoint make_probe_point(std::string label, ProbeMoments analytic, const std::function<ProbeSpec()>& build) {
    ProbePoint pt{std::move(label), analytic, std::nullopt};
    try {
        pt.state = build();
        pt.moments = {pt.state->mean_photon_number(), pt.state->photon_number_variance()};
    } catch (const DomainError&) {
        // beyond the cutoff; keep the analytic moments
    }
    return pt;
}

inline std::vector<ProbePoint> parse_probe(const json& j, const std::string& context = "probe") {
    if (!j.is_object()) throw ConfigError(context + ": expected an object");
    Idler idler = Idler::none;
    if (j.contains("idler")) {
        const std::string s = j["idler"].is_string() ? j["idler"].get<std::string>() : "";
        if (s == "nds") idler = Idler::nds;
        else if (s != "none") throw ConfigError(context + ".idler: expected \"none\" or \"nds\"");
    }
    const std::string suffix = idler == Idler::nds ? ";nds" : "";
    std::vector<ProbePoint> out;

    if (j.contains("amplitudes")) {
        detail::reject_unknown_keys(j, {"amplitudes", "idler", "label"}, context);
        const json& a = j["amplitudes"];
        if (!a.is_array() || a.empty()) throw ConfigError(context + ".amplitudes: expected a non-empty list");
        std::vector<cplx> c;
        for (const auto& x : a) {
            if (x.is_number()) c.emplace_back(x.get<double>(), 0.0);
            else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number())
                c.emplace_back(x[0].get<double>(), x[1].get<double>());
            else throw ConfigError(context + ".amplitudes: entries must be numbers or [re, im] pairs");
        }
        try {
            ProbeSpec spec(std::move(c), idler);
            std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>()
                                                                              : "amplitudes(cutoff=" + std::to_string(spec.cutoff()) + suffix + ")";
            if (label.find_first_of(",\"\n") != std::string::npos) throw ConfigError(context + ".label: must not contain commas, quotes or newlines");
            out.push_back({label, {spec.mean_photon_number(), spec.photon_number_variance()}, spec});
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(context + ".amplitudes: " + e.what());
        }
        return out;
    }

    if (!j.contains("family") || !j["family"].is_string()) throw ConfigError(context + ".family: missing or not a string");
    const std::string family = j["family"].get<std::string>();
    const std::string param = family == "coherent" ? "alpha" : family == "number" ? "n" : "d";
    if (family != "coherent" && family != "number" && family != "flat-superposition" && family != "binomial-phase")
        throw ConfigError(context + ".family: unknown probe family '" + family + "'");
    detail::reject_unknown_keys(j, {"family", "idler", "N_S", "alpha", "n", "d"}, context);
    const bool by_energy = j.contains("N_S");
    if (by_energy == j.contains(param))
        throw ConfigError(context + ": give exactly one of N_S or " + param + " for family " + family);
    const std::vector<double> values = detail::number_list(j, by_energy ? "N_S" : param, context);

    for (double v : values) {
        if (by_energy && !(v >= 0.0)) throw ConfigError(context + ".N_S: values must be nonnegative");
        if (family == "coherent") {
            const double alpha = by_energy ? std::sqrt(v) : v;
            const double N = alpha * alpha;
            out.push_back(make_probe_point("coherent(alpha=" + detail::trimmed(alpha) + suffix + ")", {N, N},
                                           [=] { return ProbeSpec::coherent(alpha, idler); }));
        } else if (family == "number") {
            const std::size_t n = detail::integral(v, context + (by_energy ? ".N_S" : ".n"));
            const auto N = static_cast<double>(n);
            out.push_back(make_probe_point("number(n=" + std::to_string(n) + suffix + ")", {N, 0.0},
                                           [=] { return ProbeSpec::number(n, idler); }));
        } else {
            const std::size_t d = detail::integral(by_energy ? 2.0 * v + 1.0 : v, context + (by_energy ? ".N_S (as 2N_S+1)" : ".d"));
            if (d == 0) throw ConfigError(context + ".d: must be at least 1");
            const double dd = static_cast<double>(d);
            if (family == "flat-superposition")
                out.push_back(make_probe_point("flat-superposition(d=" + std::to_string(d) + suffix + ")",
                                               {(dd - 1) / 2, (dd * dd - 1) / 12},
                                               [=] { return ProbeSpec::flat_superposition(d, idler); }));
            else
                out.push_back(make_probe_point("binomial-phase(d=" + std::to_string(d) + suffix + ")", {(dd - 1) / 2, (dd - 1) / 4},
                                               [=] { return ProbeSpec::binomial(d, idler); }));
        }
    }
    return out;
}

inline const std::vector<std::string>& bound_names() {
    static const std::vector<std::string> names = {"h_limit", "hall_wiseman", "lossy_sql", "escher", "iti_C"};
    return names;
}

struct RDRequest {
    std::size_t grid = 256;
    std::vector<double> slopes;
};

struct ScenarioConfig {
    std::string name = "scenario";
    PhasePrior prior = PhasePrior::uniform(kTwoPi);
    std::vector<ProbePoint> probes;
    std::vector<double> etas;
    std::vector<std::string> bounds;  // explicitly requested; empty means every applicable bound
    bool holevo = true;
    std::optional<SimGrid> simulate;
    std::size_t monte_carlo_samples = 0;
    std::optional<RDRequest> rd_curve;
    std::uint64_t seed = 0;
    /// Test hook: "numerical_failure" makes the first grid point fail.
    std::string inject_fault;

    bool wants(const std::string& bound) const {
        return bounds.empty() || std::find(bounds.begin(), bounds.end(), bound) != bounds.end();
    }
};

inline ScenarioConfig parse_scenario(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    detail::reject_unknown_keys(j, {"name", "prior", "probe", "probes", "eta", "bounds", "holevo", "grid", "simulate",
                                    "monte_carlo", "rd_curve", "seed", "inject_fault"},
                                "");
    ScenarioConfig c;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ConfigError("name: expected a string");
        c.name = j["name"].get<std::string>();
        if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos || c.name[0] == '.')
            throw ConfigError("name: must be a plain file stem");
    }
    if (!j.contains("prior")) throw ConfigError("prior: missing");
    c.prior = parse_prior(j["prior"]);

    if (j.contains("probe") == j.contains("probes")) throw ConfigError("config: give exactly one of probe or probes");
    if (j.contains("probe")) {
        c.probes = parse_probe(j["probe"]);
    } else {
        if (!j["probes"].is_array() || j["probes"].empty()) throw ConfigError("probes: expected a non-empty list");
        for (std::size_t i = 0; i < j["probes"].size(); ++i) {
            auto pts = parse_probe(j["probes"][i], "probes[" + std::to_string(i) + "]");
            c.probes.insert(c.probes.end(), pts.begin(), pts.end());
        }
    }

    if (!j.contains("eta")) throw ConfigError("eta: missing");
    c.etas = detail::number_list(j, "eta", "");
    for (double eta : c.etas)
        if (!(eta >= 0.0 && eta <= 1.0)) throw ConfigError("eta: values must lie in [0, 1]");

    if (j.contains("bounds")) {
        if (!j["bounds"].is_array() || j["bounds"].empty()) throw ConfigError("bounds: expected a non-empty list of names");
        for (const auto& b : j["bounds"]) {
            const std::string name = b.is_string() ? b.get<std::string>() : "";
            if (std::find(bound_names().begin(), bound_names().end(), name) == bound_names().end())
                throw ConfigError("bounds: unknown bound '" + name + "'");
            c.bounds.push_back(name);
        }
    }
    if (j.contains("holevo")) {
        if (!j["holevo"].is_boolean()) throw ConfigError("holevo: expected true or false");
        c.holevo = j["holevo"].get<bool>();
    }

    SimGrid grid;
    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) throw ConfigError("grid: expected an object");
        detail::reject_unknown_keys(g, {"phi", "theta"}, "grid");
        grid.phi = detail::count_at(g, "phi", grid.phi, "grid");
        grid.theta = detail::count_at(g, "theta", grid.theta, "grid");
    }
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    if (j.contains("simulate")) {
        if (!j["simulate"].is_boolean()) throw ConfigError("simulate: expected true or false");
        if (j["simulate"].get<bool>()) c.simulate = grid;
    }
    c.monte_carlo_samples = detail::count_at(j, "monte_carlo", 0, "");
    if (c.monte_carlo_samples > 0) {
        if (!c.simulate) throw ConfigError("monte_carlo: requires simulate = true");
        if (c.monte_carlo_samples < 10000) throw ConfigError("monte_carlo: need at least 10000 samples");
    }
    if (j.contains("rd_curve")) {
        const json& r = j["rd_curve"];
        if (!r.is_object()) throw ConfigError("rd_curve: expected an object");
        detail::reject_unknown_keys(r, {"K", "slopes"}, "rd_curve");
        RDRequest req;
        req.grid = detail::count_at(r, "K", req.grid, "rd_curve");
        if (req.grid < 16) throw ConfigError("rd_curve.K: must be at least 16");
        if (!r.contains("slopes")) throw ConfigError("rd_curve.slopes: missing");
        req.slopes = detail::number_list(r, "slopes", "rd_curve");
        for (double s : req.slopes)
            if (!(s >= 0.0)) throw ConfigError("rd_curve.slopes: values must be nonnegative");
        c.rd_curve = req;
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("inject_fault")) {
        if (!j["inject_fault"].is_string()) throw ConfigError("inject_fault: expected a string");
        c.inject_fault = j["inject_fault"].get<std::string>();
        if (c.inject_fault != "numerical_failure") throw ConfigError("inject_fault: unknown fault '" + c.inject_fault + "'");
    }

    // Explicitly requested bounds must be defined at every grid point.
    for (const auto& b : c.bounds) {
        for (double eta : c.etas) {
            if (b == "lossy_sql" && eta == 1.0)
                throw ConfigError("bounds: lossy_sql is undefined at eta = 1 (no loss); drop it or remove eta = 1");
            if (b == "escher" && eta == 0.0) throw ConfigError("bounds: escher is undefined at eta = 0");
        }
        if (b == "escher")
            for (const auto& p : c.probes)
                if (!(p.moments.mean > 0.0 && p.moments.variance > 0.0))
                    throw ConfigError("bounds: escher needs positive N_S and photon-number variance; " + p.label + " has neither");
    }
    return c;
}

/// Parses JSON text; syntax errors report line and column.
inline json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        // keep nlohmann's explanation, drop its own position prefix
        if (const auto pos = what.find(": ", what.find("parse error")); pos != std::string::npos) what = what.substr(pos + 2);
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON: " + what);
    }
}

inline json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path.string());
}

/// Result of one (probe, η) grid point.
struct ScenarioRow {
    std::string probe;
    std::optional<BoundReport> report;
    std::string status = "ok";
    bool failed = false;
};

struct ScenarioResult {
    std::vector<ScenarioRow> rows;
    std::optional<RDCurve> rd_curve;
    bool any_failure = false;
};

/// Sweep over probes × η (probe-major); output order never depends on `threads`.
inline ScenarioResult compute_scenario(const ScenarioConfig& c, std::size_t threads) {
    ScenarioResult out;
    if (c.rd_curve) {
        const auto& req = *c.rd_curve;
        const auto pieces = parallel_map<RDCurve>(req.slopes.size(), threads, [&](std::size_t i) {
            return rd_curve(c.prior, req.grid, std::span<const double>(&req.slopes[i], 1));
        });
        RDCurve curve = pieces.front();
        curve.points.clear();
        for (const auto& p : pieces) curve.points.push_back(p.points.front());
        std::stable_sort(curve.points.begin(), curve.points.end(),
                         [](const RDPoint& a, const RDPoint& b) { return a.distortion < b.distortion; });
        out.rd_curve = std::move(curve);
    }

    const std::size_t n = c.probes.size() * c.etas.size();
    out.rows = parallel_map<ScenarioRow>(n, threads, [&](std::size_t i) {
        const ProbePoint& probe = c.probes[i / c.etas.size()];
        const LossChannel channel(c.etas[i % c.etas.size()]);
        ScenarioRow row;
        row.probe = probe.label;
        try {
            if (c.inject_fault == "numerical_failure" && i == 0) throw NumericalFailure("injected fault");
            BoundReport r;
            if (probe.state) {
                ReportOptions opt;
                opt.holevo = c.holevo;
                opt.simulate = c.simulate;
                opt.monte_carlo_samples = c.monte_carlo_samples;
                opt.seed = c.seed + i;  // distinct, reproducible stream per grid point
                r = build_report(c.prior, *probe.state, channel, opt);
            } else {
                r = analytic_report(c.prior, probe.moments, channel);
                r.probe = probe.label;
                if (c.holevo || c.simulate) row.status = "analytic_only";
            }
            if (out.rd_curve) r.distortion_exact = out.rd_curve->distortion_lower_envelope(r.capacity);
            row.report = std::move(r);
        } catch (const std::exception& e) {
            row.status = std::string("numerical_failure: ") + e.what();
            row.failed = true;
        }
        return row;
    });
    for (const auto& r : out.rows) out.any_failure = out.any_failure || r.failed;
    return out;
}

inline const char* scenario_csv_header() {
    return "probe,N_S,eta,Q,h_limit,hall_wiseman,lossy_sql,escher,iti_C,chi,I_meas,mse_sim,mc_mean,mc_stderr,status";
}

inline std::string scenario_csv(const ScenarioConfig& c, const ScenarioResult& res) {
    std::string out = scenario_csv_header();
    out += '\n';
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const ScenarioRow& row = res.rows[i];
        const ProbePoint& probe = c.probes[i / c.etas.size()];
        const double eta = c.etas[i % c.etas.size()];
        std::vector<std::string> cells = {row.probe, format_number(probe.moments.mean), format_number(eta)};
        if (row.report) {
            const BoundReport& r = *row.report;
            auto pick = [&](const std::string& name, const std::optional<double>& v) {
                cells.push_back(c.wants(name) ? format_optional(v) : std::string());
            };
            cells.push_back(format_number(r.entropy_power));
            pick("h_limit", r.h_limit);
            pick("hall_wiseman", r.hall_wiseman);
            pick("lossy_sql", r.lossy_sql);
            pick("escher", r.escher);
            pick("iti_C", r.iti_capacity);
            cells.push_back(format_optional(r.holevo));
            cells.push_back(format_optional(r.mutual_information));
            cells.push_back(format_optional(r.mse_sim));
            cells.push_back(format_optional(r.mc_mean));
            cells.push_back(format_optional(r.mc_stderr));
        } else {
            cells.resize(14);
        }
        cells.push_back(row.status);
        for (std::size_t k = 0; k < cells.size(); ++k) {
            if (k) out += ',';
            out += cells[k];
        }
        out += '\n';
    }
    return out;
}

inline json rd_curve_json(const RDCurve& curve) {
    json pts = json::array();
    for (const auto& p : curve.points)
        pts.push_back({{"D", json_number(p.distortion)},
                       {"R", json_number(p.rate)},
                       {"R_lower_bound", json_number(p.rate_lower_bound)},
                       {"slope", json_number(p.slope)},
                       {"converged", p.converged}});
    return {{"K", curve.source_points.size()}, {"points", pts}};
}

inline json report_json(const BoundReport& r) {
    json j;
    j["probe"] = r.probe;
    j["eta"] = json_number(r.eta);
    j["N_S"] = json_number(r.mean_photons);
    j["photon_variance"] = json_number(r.photon_variance);
    j["capacity"] = json_number(r.capacity);
    j["capacity_lossy_upper"] = json_optional(r.capacity_lossy_upper);
    j["bounds"] = {{"iti_C", json_number(r.iti_capacity)},
                   {"h_limit", json_number(r.h_limit)},
                   {"hall_wiseman", json_number(r.hall_wiseman)},
                   {"lossy_sql", json_optional(r.lossy_sql)},
                   {"escher", json_optional(r.escher)},
                   {"iti_chi", json_optional(r.iti_holevo)},
                   {"iti_I", json_optional(r.iti_mutual_information)},
                   {"distortion_exact", json_optional(r.distortion_exact)}};
    j["holevo"] = json_optional(r.holevo);
    j["mutual_information"] = json_optional(r.mutual_information);
    json sim = nullptr;
    if (r.mse_sim)
        sim = {{"mse", json_number(*r.mse_sim)},
               {"mse_refined", json_optional(r.mse_sim_refined)},
               {"converged", r.sim_converged.value_or(false)},
               {"mc_mean", json_optional(r.mc_mean)},
               {"mc_stderr", json_optional(r.mc_stderr)}};
    j["simulation"] = sim;
    return j;
}

inline json scenario_json(const ScenarioConfig& c, const ScenarioResult& res) {
    json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["status"] = res.any_failure ? "partial" : "ok";
    j["prior"] = {{"description", c.prior.describe()},
                  {"entropy_power", json_number(entropy_power(c.prior))},
                  {"variance", json_number(prior_variance(c.prior))},
                  {"max_density", json_number(prior_max_density(c.prior))}};
    json rows = json::array();
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const ScenarioRow& row = res.rows[i];
        json r = row.report ? report_json(*row.report) : json::object();
        r["probe"] = row.probe;
        r["eta"] = json_number(c.etas[i % c.etas.size()]);
        r["status"] = row.status;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    if (res.rd_curve) j["rd_curve"] = rd_curve_json(*res.rd_curve);
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(path.string() + ": cannot write");
    out << text;
    if (!out) throw ConfigError(path.string() + ": write failed");
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw ConfigError(dir.string() + ": output directory is not writable");
}

/// Computes the sweep and writes <out>/<name>.csv and <out>/<name>.json.
/// Returns 0, or 3 when any grid point failed (partial results are still written).
inline int run_scenario(const ScenarioConfig& c, const std::filesystem::path& out_dir, std::size_t threads) {
    ensure_directory(out_dir);
    const ScenarioResult res = compute_scenario(c, threads);
    write_text_file(out_dir / (c.name + ".csv"), scenario_csv(c, res));
    write_text_file(out_dir / (c.name + ".json"), scenario_json(c, res).dump(2) + "\n");
    return res.any_failure ? kExitNumerical : kExitOk;
}

/// "kind:key=value,key=value" shorthand used by the command line, as JSON.
inline json parse_shorthand(const std::string& text, const std::string& head_key, const std::string& context) {
    json j = json::object();
    const auto colon = text.find(':');
    j[head_key] = text.substr(0, colon);
    if (colon == std::string::npos) return j;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError(context + ": expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (end != value.c_str() && *end == '\0') {
            if (key == "n" || key == "d") j[key] = std::llround(v);
            else j[key] = v;
        } else {
            j[key] = value;
        }
    }
    return j;
}

inline PhasePrior parse_prior_shorthand(const std::string& text) {
    return parse_prior(parse_shorthand(text, "kind", "--prior"), "--prior");
}

inline ProbePoint parse_probe_shorthand(const std::string& text) {
    json j = parse_shorthand(text, "family", "--probe");
    if (j["family"] == "flat") j["family"] = "flat-superposition";
    if (j["family"] == "binomial") j["family"] = "binomial-phase";
    auto pts = parse_probe(j, "--probe");
    if (pts.size() != 1) throw ConfigError("--probe: expected exactly one probe");
    if (!pts.front().state) throw ConfigError("--probe: state exceeds the 128-photon cutoff");
    return pts.front();
}

/// CSV N_S,eta,C_unrestricted,C_ph_upper; the lossy bound is blank unless 0 < η < 1.
inline std::string capacity_csv(std::span<const double> photons, std::span<const double> etas) {
    std::string out = "N_S,eta,C_unrestricted,C_ph_upper\n";
    for (double N : photons)
        for (double eta : etas) {
            const LossChannel ch(eta);
            out += format_number(N) + "," + format_number(eta) + "," + format_number(unrestricted_capacity(N)) + ",";
            if (eta > 0.0 && eta < 1.0) out += format_number(capacity_upper_bound_lossy(N, ch));
            out += '\n';
        }
    return out;
}

inline std::string rd_curve_csv(const RDCurve& curve) {
    std::string out = "D,R,slope,converged\n";
    for (const auto& p : curve.points)
        out += format_number(p.distortion) + "," + format_number(p.rate) + "," + format_number(p.slope) + "," +
               (p.converged ? "true" : "false") + "\n";
    return out;
}

inline json simulation_json(const EstimationResult& sim, const std::optional<MonteCarloResult>& mc) {
    json j;
    j["mse"] = json_number(sim.mse);
    j["mutual_information"] = json_number(sim.mutual_information);
    j["converged"] = sim.converged;
    j["mse_refined"] = json_number(sim.mse_refined);
    j["grid"] = {{"phi", sim.grid.phi}, {"theta", sim.grid.theta}};
    j["mc_mean"] = mc ? json_number(mc->mean) : json(nullptr);
    j["mc_stderr"] = mc ? json_number(mc->standard_error) : json(nullptr);
    return j;
}

}  // namespace phasebound
