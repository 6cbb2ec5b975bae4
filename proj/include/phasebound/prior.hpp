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

// Prior distributions of the phase Φ on [0, 2π) and their information functionals.
//
// Squared error is taken non-periodically, (φ̂ − φ)² with φ ∈ [0, 2π), so the
// moments below treat Φ as a real variable on that interval. Entropies are in nats.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phasebound/errors.hpp"
#include "phasebound/numeric.hpp"

namespace phasebound {

/// Uniform density on an arc of length `width` centred at `center` (wrapped into [0, 2π)).
struct UniformPrior {
    double center;
    double width;
};

/// Gaussian of standard deviation `sigma` wrapped onto the circle.
struct WrappedGaussianPrior {
    double mean;
    double sigma;
};

/// Piecewise-constant density on K equal bins [kΔ, (k+1)Δ), Δ = 2π/K.
/// `density[k]` is the value on bin k (per radian). Integrals over the grid use
/// the bin-centred rule Δ Σ f((k+½)Δ) v_k, which is exact for the histogram
/// entropy and normalization.
struct TabulatedPrior {
    std::vector<double> density;

    double bin_width() const { return kTwoPi / static_cast<double>(density.size()); }
    double bin_center(std::size_t k) const { return (static_cast<double>(k) + 0.5) * bin_width(); }
};

/// All prior mass on a single phase value. Its differential entropy is −∞ and
/// entropy power 0, so every entropy-power bound degenerates to zero.
struct PointMassPrior {
    double location;
};

class PhasePrior {
   public:
    using Form = std::variant<UniformPrior, WrappedGaussianPrior, TabulatedPrior, PointMassPrior>;

    static PhasePrior uniform(double width, double center = std::numbers::pi) {
        if (!std::isfinite(width) || !std::isfinite(center) || width <= 0.0 || width > kTwoPi + 1e-12)
            throw InvalidInput("uniform prior: width must satisfy 0 < L <= 2*pi");
        return PhasePrior(UniformPrior{center, std::min(width, kTwoPi)});
    }

    static PhasePrior wrapped_gaussian(double mean, double sigma) {
        if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma <= 0.0)
            throw InvalidInput("wrapped_gaussian prior: sigma must be positive and finite");
        return PhasePrior(WrappedGaussianPrior{mean, sigma});
    }

    static PhasePrior tabulated(std::vector<double> density) {
        if (density.size() < 2) throw InvalidInput("tabulated prior: need at least 2 grid values");
        double total = 0.0;
        for (double v : density) {
            if (!std::isfinite(v) || v < 0.0)
                throw InvalidInput("tabulated prior: density values must be finite and nonnegative");
            total += v;
        }
        total *= kTwoPi / static_cast<double>(density.size());
        if (std::abs(total - 1.0) > 1e-8) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "tabulated prior: density integrates to %.12g, not 1", total);
            throw InvalidInput(buf);
        }
        return PhasePrior(TabulatedPrior{std::move(density)});
    }

    static PhasePrior point_mass(double location) {
        if (!std::isfinite(location)) throw InvalidInput("point_mass prior: location must be finite");
        return PhasePrior(PointMassPrior{wrap_phase(location)});
    }

    const Form& form() const { return form_; }

    std::string kind_name() const {
        return std::visit(
            [](const auto& f) -> std::string {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>) return "uniform";
                else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) return "wrapped_gaussian";
                else if constexpr (std::is_same_v<T, TabulatedPrior>) return "tabulated";
                else return "point_mass";
            },
            form_);
    }

    /// Arcs of [0, 2π) carrying the prior mass. Wrapped Gaussians are cut at
    /// ±12σ when that is narrower than the circle (tail mass < 1e-32).
    std::vector<std::pair<double, double>> support() const {
        return std::visit(
            [](const auto& f) -> std::vector<std::pair<double, double>> {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>) {
                    return wrapped_arc(f.center, f.width);
                } else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) {
                    return wrapped_arc(f.mean, std::min(24.0 * f.sigma, kTwoPi));
                } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                    std::vector<std::pair<double, double>> arcs;
                    const double w = f.bin_width();
                    for (std::size_t k = 0; k < f.density.size(); ++k) {
                        if (f.density[k] <= 0.0) continue;
                        const double lo = w * static_cast<double>(k);
                        if (!arcs.empty() && std::abs(arcs.back().second - lo) < 1e-15)
                            arcs.back().second = lo + w;
                        else
                            arcs.emplace_back(lo, lo + w);
                    }
                    return arcs;
                } else {
                    return {{f.location, f.location}};
                }
            },
            form_);
    }

    /// Density at φ (wrapped into [0, 2π)). A point mass reports +∞ on its atom and 0 elsewhere.
    double density(double phi) const {
        phi = wrap_phase(phi);
        return std::visit(
            [phi](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>) {
                    for (auto [a, b] : wrapped_arc(f.center, f.width))
                        if (phi >= a && phi <= b) return 1.0 / f.width;
                    return 0.0;
                } else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) {
                    return wrapped_gaussian_density(f, phi);
                } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                    auto k = static_cast<std::size_t>(phi / f.bin_width());
                    return f.density[std::min(k, f.density.size() - 1)];
                } else {
                    return phi == f.location ? std::numeric_limits<double>::infinity() : 0.0;
                }
            },
            form_);
    }

    /// ∫ P(φ) e^{ikφ} dφ. Closed form for every kind.
    std::complex<double> fourier_coefficient(int k) const {
        const double kd = static_cast<double>(k);
        return std::visit(
            [kd](const auto& f) -> std::complex<double> {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>) {
                    return std::polar(sinc(0.5 * kd * f.width), kd * f.center);
                } else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) {
                    return std::polar(std::exp(-0.5 * kd * kd * f.sigma * f.sigma), kd * f.mean);
                } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                    const double w = f.bin_width();
                    std::complex<double> acc = 0.0;
                    for (std::size_t j = 0; j < f.density.size(); ++j)
                        if (f.density[j] > 0.0) acc += f.density[j] * std::polar(1.0, kd * f.bin_center(j));
                    return acc * (w * sinc(0.5 * kd * w));
                } else {
                    return std::polar(1.0, kd * f.location);
                }
            },
            form_);
    }

    /// Quadrature rule whose weights already include the density:
    /// ∫ P(φ) g(φ) dφ ≈ Σ w_i g(φ_i). Composite Gauss–Legendre on the support,
    /// with panel breaks at every discontinuity of P and at 0 ≡ 2π.
    /// `nodes` is a budget hint; narrow densities get at least the resolution they need.
    QuadratureRule quadrature(std::size_t nodes = 256) const {
        constexpr std::size_t order = 8;
        QuadratureRule rule;
        const std::size_t budget_panels = std::max<std::size_t>(1, nodes / order);
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, PointMassPrior>) {
                    rule.nodes.push_back(f.location);
                    rule.weights.push_back(1.0);
                } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                    std::size_t occupied = 0;
                    for (double v : f.density) occupied += v > 0.0 ? 1 : 0;
                    // fine histograms get a low-order rule per bin, coarse ones several panels
                    const std::size_t per_bin = std::max<std::size_t>(nodes / std::max<std::size_t>(occupied, 1), 2);
                    const std::size_t bin_order = std::min(per_bin, order);
                    const std::size_t bin_panels = std::max<std::size_t>(1, per_bin / order);
                    const double w = f.bin_width();
                    for (std::size_t k = 0; k < f.density.size(); ++k) {
                        if (f.density[k] <= 0.0) continue;
                        const std::size_t first = rule.size();
                        append_gauss_legendre(rule, w * static_cast<double>(k), w * static_cast<double>(k + 1), bin_panels, bin_order);
                        for (std::size_t i = first; i < rule.size(); ++i) rule.weights[i] *= f.density[k];
                    }
                } else {
                    const auto arcs = support();
                    double total = 0.0;
                    for (auto [a, b] : arcs) total += b - a;
                    double max_panel = total;
                    if constexpr (std::is_same_v<T, WrappedGaussianPrior>) max_panel = 0.5 * f.sigma;
                    for (auto [a, b] : arcs) {
                        const double len = b - a;
                        auto panels = static_cast<std::size_t>(std::ceil(static_cast<double>(budget_panels) * len / total));
                        panels = std::max<std::size_t>({panels, 1, static_cast<std::size_t>(std::ceil(len / max_panel))});
                        const std::size_t first = rule.size();
                        append_gauss_legendre(rule, a, b, panels, order);
                        for (std::size_t i = first; i < rule.size(); ++i) rule.weights[i] *= density(rule.nodes[i]);
                    }
                }
            },
            form_);
        return rule;
    }

    /// Probability mass of each of `bins` equal bins [jδ, (j+1)δ), δ = 2π/bins.
    std::vector<double> cell_masses(std::size_t bins) const {
        if (bins == 0) throw InvalidInput("cell_masses: need at least one bin");
        const double delta = kTwoPi / static_cast<double>(bins);
        std::vector<double> mass(bins, 0.0);
        auto spread = [&](double a, double b, double value) {
            // adds value * |[a,b] ∩ bin| to each overlapped bin
            auto j0 = static_cast<std::size_t>(std::max(0.0, std::floor(a / delta)));
            for (std::size_t j = j0; j < bins; ++j) {
                const double lo = delta * static_cast<double>(j);
                const double hi = lo + delta;
                if (lo >= b) break;
                const double overlap = std::min(b, hi) - std::max(a, lo);
                if (overlap > 0.0) mass[j] += value * overlap;
            }
        };
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>) {
                    for (auto [a, b] : wrapped_arc(f.center, f.width)) spread(a, b, 1.0 / f.width);
                } else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) {
                    const int images = wrap_images(f);
                    for (std::size_t j = 0; j < bins; ++j) {
                        const double lo = delta * static_cast<double>(j);
                        const double hi = lo + delta;
                        double m = 0.0;
                        for (int i = -images; i <= images; ++i) {
                            const double shift = f.mean - kTwoPi * i;
                            m += normal_cdf((hi - shift) / f.sigma) - normal_cdf((lo - shift) / f.sigma);
                        }
                        mass[j] = m;
                    }
                } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                    const double w = f.bin_width();
                    for (std::size_t k = 0; k < f.density.size(); ++k)
                        if (f.density[k] > 0.0)
                            spread(w * static_cast<double>(k), w * static_cast<double>(k + 1), f.density[k]);
                } else {
                    mass[std::min(bins - 1, static_cast<std::size_t>(f.location / delta))] = 1.0;
                }
            },
            form_);
        double total = 0.0;
        for (double m : mass) total += m;
        for (double& m : mass) m /= total;
        return mass;
    }

    /// Draws one phase in [0, 2π).
    template <class Rng>
    double sample(Rng& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        return std::visit(
            [&](const auto& f) -> double {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>) {
                    return wrap_phase(f.center - 0.5 * f.width + f.width * unit(rng));
                } else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) {
                    std::normal_distribution<double> gauss(f.mean, f.sigma);
                    return wrap_phase(gauss(rng));
                } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                    const double w = f.bin_width();
                    double u = unit(rng) / w;
                    std::size_t k = 0;
                    for (; k + 1 < f.density.size(); ++k) {
                        if (u < f.density[k]) break;
                        u -= f.density[k];
                    }
                    return w * (static_cast<double>(k) + unit(rng));
                } else {
                    return f.location;
                }
            },
            form_);
    }

    std::string describe() const {
        char buf[128];
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, UniformPrior>)
                    std::snprintf(buf, sizeof buf, "uniform(center=%.10g,width=%.10g)", f.center, f.width);
                else if constexpr (std::is_same_v<T, WrappedGaussianPrior>)
                    std::snprintf(buf, sizeof buf, "wrapped_gaussian(mean=%.10g,sigma=%.10g)", f.mean, f.sigma);
                else if constexpr (std::is_same_v<T, TabulatedPrior>)
                    std::snprintf(buf, sizeof buf, "tabulated(K=%zu)", f.density.size());
                else
                    std::snprintf(buf, sizeof buf, "point_mass(location=%.10g)", f.location);
            },
            form_);
        return buf;
    }

   private:
    explicit PhasePrior(Form form) : form_(std::move(form)) {}

    static double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

    static double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

    static int wrap_images(const WrappedGaussianPrior& f) { return 5 + static_cast<int>(std::ceil(f.sigma)); }

    static double wrapped_gaussian_density(const WrappedGaussianPrior& f, double phi) {
        const int images = wrap_images(f);
        const double norm = 1.0 / (f.sigma * std::sqrt(kTwoPi));
        double acc = 0.0;
        for (int i = -images; i <= images; ++i) {
            const double z = (phi - f.mean + kTwoPi * i) / f.sigma;
            acc += std::exp(-0.5 * z * z);
        }
        return norm * acc;
    }

    static std::vector<std::pair<double, double>> wrapped_arc(double center, double width) {
        if (width >= kTwoPi) return {{0.0, kTwoPi}};
        const double a = wrap_phase(center - 0.5 * width);
        const double b = a + width;
        if (b <= kTwoPi) return {{a, b}};
        return {{0.0, b - kTwoPi}, {a, kTwoPi}};
    }

    Form form_;
};

/// h(Φ) = −∫ P ln P dφ in nats (−∞ for a point mass).
inline double differential_entropy(const PhasePrior& prior) {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, UniformPrior>) {
                return std::log(f.width);
            } else if constexpr (std::is_same_v<T, WrappedGaussianPrior>) {
                const QuadratureRule rule = prior.quadrature(4096);
                return rule.integrate([&](double phi) {
                    const double p = prior.density(phi);
                    return p > 0.0 ? -std::log(p) : 0.0;
                });
            } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                double h = 0.0;
                for (double v : f.density) h -= xlogx(v);
                return h * f.bin_width();
            } else {
                return -std::numeric_limits<double>::infinity();
            }
        },
        prior.form());
}

/// Q_Φ = e^{2h(Φ)} / (2πe), the variance of a Gaussian with the same entropy.
inline double entropy_power(const PhasePrior& prior) {
    return std::exp(2.0 * differential_entropy(prior)) / (kTwoPi * std::numbers::e);
}

/// sup_φ P_Φ(φ); ≥ 1/(2π) for any normalized prior.
inline double prior_max_density(const PhasePrior& prior) {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, UniformPrior>)
                return 1.0 / f.width;
            else if constexpr (std::is_same_v<T, WrappedGaussianPrior>)
                return prior.density(f.mean);
            else if constexpr (std::is_same_v<T, TabulatedPrior>)
                return *std::max_element(f.density.begin(), f.density.end());
            else
                return std::numeric_limits<double>::infinity();
        },
        prior.form());
}

/// First and second raw moments of Φ on [0, 2π).
inline std::pair<double, double> prior_moments(const PhasePrior& prior) {
    return std::visit(
        [&](const auto& f) -> std::pair<double, double> {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, UniformPrior>) {
                double m1 = 0.0, m2 = 0.0;
                for (auto [a, b] : prior.support()) {
                    m1 += (b * b - a * a) / (2.0 * f.width);
                    m2 += (b * b * b - a * a * a) / (3.0 * f.width);
                }
                return {m1, m2};
            } else if constexpr (std::is_same_v<T, TabulatedPrior>) {
                const double w = f.bin_width();
                double m1 = 0.0, m2 = 0.0;
                for (std::size_t k = 0; k < f.density.size(); ++k) {
                    const double c = f.bin_center(k);
                    m1 += w * f.density[k] * c;
                    m2 += w * f.density[k] * (c * c + w * w / 12.0);
                }
                return {m1, m2};
            } else if constexpr (std::is_same_v<T, PointMassPrior>) {
                return {f.location, f.location * f.location};
            } else {
                const QuadratureRule rule = prior.quadrature(4096);
                return {rule.integrate([](double phi) { return phi; }),
                        rule.integrate([](double phi) { return phi * phi; })};
            }
        },
        prior.form());
}

inline double prior_mean(const PhasePrior& prior) { return prior_moments(prior).first; }

/// Var(Φ) with Φ a real variable on [0, 2π): the MSE of the best constant estimate.
inline double prior_variance(const PhasePrior& prior) {
    const auto [m1, m2] = prior_moments(prior);
    return std::max(0.0, m2 - m1 * m1);
}

}  // namespace phasebound
