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

// Truncated Fock-space engine for a single signal mode with an optional
// number-diagonal-signal (NDS) idler.
//
// The idler is never given an explicit Hilbert space: an NDS probe
// Σ c_n |Ψ_n⟩|n⟩ is carried by the orthonormal index n alone, so basis
// vectors are labelled (n, m) with n the photon number originally sent and
// m ≤ n the signal photons that survive loss.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phasebound/capacity.hpp"
#include "phasebound/errors.hpp"
#include "phasebound/numeric.hpp"
#include "phasebound/prior.hpp"

namespace phasebound {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxCutoff = 128;
inline constexpr double kTailMass = 1e-12;

enum class Idler {
    none,  // signal-only probe Σ c_n |n⟩
    nds,   // Σ c_n |Ψ_n⟩|n⟩ with orthonormal idler states
};

inline const char* to_string(Idler idler) { return idler == Idler::nds ? "nds" : "none"; }

/// Single-signal-mode probe given by photon-number amplitudes c_0..c_cutoff.
class ProbeSpec {
   public:
    explicit ProbeSpec(std::vector<cplx> amplitudes, Idler idler = Idler::none)
        : amplitudes_(std::move(amplitudes)), idler_(idler) {
        while (amplitudes_.size() > 1 && amplitudes_.back() == cplx{}) amplitudes_.pop_back();
        if (amplitudes_.empty()) throw InvalidInput("ProbeSpec: no amplitudes");
        if (amplitudes_.size() - 1 > kMaxCutoff)
            throw InvalidInput("ProbeSpec: photon-number cutoff exceeds " + std::to_string(kMaxCutoff));
        double norm = 0.0;
        for (const cplx& c : amplitudes_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InvalidInput("ProbeSpec: non-finite amplitude");
            norm += std::norm(c);
        }
        if (std::abs(norm - 1.0) > 1e-10) throw InvalidInput("ProbeSpec: amplitudes are not normalized");
    }

    /// Coherent state |α⟩ truncated where the remaining tail mass drops below 1e-12.
    static ProbeSpec coherent(cplx alpha, Idler idler = Idler::none) {
        const double mean = std::norm(alpha);
        constexpr std::size_t scan = 4 * kMaxCutoff;
        std::vector<double> log_p(scan);
        for (std::size_t n = 0; n < scan; ++n) {
            const double nd = static_cast<double>(n);
            log_p[n] = mean > 0.0 ? -mean + nd * std::log(mean) - std::lgamma(nd + 1.0) : (n == 0 ? 0.0 : -INFINITY);
        }
        std::vector<double> tail(scan + 1, 0.0);  // tail[n] = Σ_{k≥n} p_k
        for (std::size_t n = scan; n-- > 0;) tail[n] = tail[n + 1] + std::exp(log_p[n]);
        // for a large mean the scan window misses the bulk of the Poisson mass entirely
        if (!(mean <= static_cast<double>(kMaxCutoff)) || tail[0] < 1.0 - 1e-9)
            throw DomainError("coherent probe: |alpha|^2 too large for the 128-photon cutoff");
        std::size_t cutoff = 0;
        while (tail[cutoff + 1] >= kTailMass) {
            ++cutoff;
            if (cutoff > kMaxCutoff)
                throw DomainError("coherent probe: |alpha|^2 too large for the 128-photon cutoff");
        }
        std::vector<cplx> c(cutoff + 1);
        double norm = 0.0;
        for (std::size_t n = 0; n <= cutoff; ++n) {
            c[n] = std::polar(std::exp(0.5 * log_p[n]), static_cast<double>(n) * std::arg(alpha));
            norm += std::norm(c[n]);
        }
        for (cplx& v : c) v /= std::sqrt(norm);
        return ProbeSpec(std::move(c), idler);
    }

    static ProbeSpec number(std::size_t n, Idler idler = Idler::none) {
        if (n > kMaxCutoff) throw DomainError("number probe: n exceeds the 128-photon cutoff");
        std::vector<cplx> c(n + 1);
        c[n] = 1.0;
        return ProbeSpec(std::move(c), idler);
    }

    /// Equal-weight superposition of |0⟩..|d−1⟩.
    static ProbeSpec flat_superposition(std::size_t d, Idler idler = Idler::none) {
        if (d == 0 || d - 1 > kMaxCutoff) throw DomainError("flat-superposition probe: need 1 <= d <= 129");
        return ProbeSpec(std::vector<cplx>(d, cplx(1.0 / std::sqrt(static_cast<double>(d)))), idler);
    }

    /// Amplitudes √(C(d−1, n) / 2^{d−1}), n = 0..d−1.
    static ProbeSpec binomial(std::size_t d, Idler idler = Idler::none) {
        if (d == 0 || d - 1 > kMaxCutoff) throw DomainError("binomial probe: need 1 <= d <= 129");
        std::vector<cplx> c(d);
        const double top = static_cast<double>(d - 1);
        double norm = 0.0;
        for (std::size_t n = 0; n < d; ++n) {
            const double nd = static_cast<double>(n);
            const double log_w = std::lgamma(top + 1.0) - std::lgamma(nd + 1.0) - std::lgamma(top - nd + 1.0) - top * std::log(2.0);
            c[n] = std::exp(0.5 * log_w);
            norm += std::norm(c[n]);
        }
        for (cplx& v : c) v /= std::sqrt(norm);
        return ProbeSpec(std::move(c), idler);
    }

    std::size_t cutoff() const { return amplitudes_.size() - 1; }
    Idler idler() const { return idler_; }
    std::span<const cplx> amplitudes() const { return amplitudes_; }

    std::vector<double> photon_distribution() const {
        std::vector<double> p(amplitudes_.size());
        for (std::size_t n = 0; n < p.size(); ++n) p[n] = std::norm(amplitudes_[n]);
        return p;
    }

    double mean_photon_number() const {
        double mean = 0.0;
        for (std::size_t n = 0; n < amplitudes_.size(); ++n) mean += static_cast<double>(n) * std::norm(amplitudes_[n]);
        return mean;
    }

    double photon_number_variance() const {
        const double mean = mean_photon_number();
        double second = 0.0;
        for (std::size_t n = 0; n < amplitudes_.size(); ++n)
            second += static_cast<double>(n * n) * std::norm(amplitudes_[n]);
        return std::max(0.0, second - mean * mean);
    }

   private:
    std::vector<cplx> amplitudes_;
    Idler idler_;
};

/// Basis label: n is the photon number sent (the NDS idler index), m the signal photons.
struct FockLabel {
    std::size_t sent;
    std::size_t signal;
};

class FockBasis {
   public:
    static FockBasis signal_only(std::size_t cutoff) {
        FockBasis b(cutoff, false);
        for (std::size_t m = 0; m <= cutoff; ++m) b.labels_.push_back({m, m});
        return b;
    }

    /// Pairs (n, m), 0 ≤ m ≤ n ≤ cutoff, ordered by n then m.
    static FockBasis nds(std::size_t cutoff) {
        FockBasis b(cutoff, true);
        for (std::size_t n = 0; n <= cutoff; ++n)
            for (std::size_t m = 0; m <= n; ++m) b.labels_.push_back({n, m});
        return b;
    }

    static FockBasis for_probe(const ProbeSpec& probe) {
        return probe.idler() == Idler::nds ? nds(probe.cutoff()) : signal_only(probe.cutoff());
    }

    std::size_t size() const { return labels_.size(); }
    std::size_t cutoff() const { return cutoff_; }
    bool has_idler() const { return has_idler_; }
    const FockLabel& label(std::size_t i) const { return labels_[i]; }

    std::size_t index(std::size_t sent, std::size_t signal) const {
        return has_idler_ ? sent * (sent + 1) / 2 + signal : signal;
    }

    /// Eigenvalue of the phase generator on basis vector i: the photon number
    /// that picked up e^{inφ}. With an idler that is n; without one the signal
    /// number m (the two differ by a per-loss-branch global phase).
    std::size_t generator(std::size_t i) const { return has_idler_ ? labels_[i].sent : labels_[i].signal; }

    /// Whether basis vectors i and j share the same idler state.
    bool same_idler(std::size_t i, std::size_t j) const { return !has_idler_ || labels_[i].sent == labels_[j].sent; }

   private:
    FockBasis(std::size_t cutoff, bool idler) : cutoff_(cutoff), has_idler_(idler) {}

    std::size_t cutoff_;
    bool has_idler_;
    std::vector<FockLabel> labels_;
};

/// Hermitian unit-trace operator stored as a direct sum of dense blocks over
/// disjoint sets of basis indices (entries outside the blocks are zero).
class DensityMatrix {
   public:
    struct Block {
        std::vector<std::size_t> indices;
        Eigen::MatrixXcd matrix;
    };

    DensityMatrix(FockBasis basis, std::vector<Block> blocks) : basis_(std::move(basis)), blocks_(std::move(blocks)) {
        std::vector<char> seen(basis_.size(), 0);
        cplx trace = 0.0;
        for (const Block& b : blocks_) {
            const auto dim = static_cast<Eigen::Index>(b.indices.size());
            if (b.matrix.rows() != dim || b.matrix.cols() != dim)
                throw InvalidInput("DensityMatrix: block shape does not match its index list");
            for (std::size_t i : b.indices) {
                if (i >= basis_.size() || seen[i]) throw InvalidInput("DensityMatrix: blocks must use distinct basis indices");
                seen[i] = 1;
            }
            if ((b.matrix - b.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
                throw InvalidInput("DensityMatrix: not Hermitian");
            trace += b.matrix.trace();
        }
        if (std::abs(trace - 1.0) > 1e-10) throw InvalidInput("DensityMatrix: trace differs from 1");
    }

    /// Splits a dense matrix into its connected blocks.
    static DensityMatrix from_dense(FockBasis basis, const Eigen::MatrixXcd& dense) {
        const auto n = static_cast<std::size_t>(dense.rows());
        if (dense.cols() != dense.rows() || n != basis.size()) throw InvalidInput("DensityMatrix: dimension mismatch");
        std::vector<std::vector<std::size_t>> groups = connected_components(n, [&](std::size_t i, std::size_t j) {
            return dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != cplx{};
        });
        std::vector<Block> blocks;
        for (auto& g : groups) {
            Block b{std::move(g), {}};
            b.matrix = gather(dense, b.indices);
            if (b.indices.size() == 1 && b.matrix(0, 0) == cplx{}) continue;
            blocks.push_back(std::move(b));
        }
        return DensityMatrix(std::move(basis), std::move(blocks));
    }

    const FockBasis& basis() const { return basis_; }
    std::span<const Block> blocks() const { return blocks_; }

    Eigen::MatrixXcd to_dense() const {
        const auto n = static_cast<Eigen::Index>(basis_.size());
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
        for (const Block& b : blocks_)
            for (std::size_t r = 0; r < b.indices.size(); ++r)
                for (std::size_t c = 0; c < b.indices.size(); ++c)
                    out(static_cast<Eigen::Index>(b.indices[r]), static_cast<Eigen::Index>(b.indices[c])) =
                        b.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        return out;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (const Block& b : blocks_) t += b.matrix.trace();
        return t;
    }

    /// Partial trace over the idler: the (cutoff+1)² signal density matrix.
    Eigen::MatrixXcd reduced_signal() const {
        const auto dim = static_cast<Eigen::Index>(basis_.cutoff() + 1);
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
        for (const Block& b : blocks_)
            for (std::size_t r = 0; r < b.indices.size(); ++r)
                for (std::size_t c = 0; c < b.indices.size(); ++c) {
                    const std::size_t i = b.indices[r];
                    const std::size_t j = b.indices[c];
                    if (!basis_.same_idler(i, j)) continue;
                    out(static_cast<Eigen::Index>(basis_.label(i).signal), static_cast<Eigen::Index>(basis_.label(j).signal)) +=
                        b.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                }
        return out;
    }

    template <class Linked>
    static std::vector<std::vector<std::size_t>> connected_components(std::size_t n, Linked&& linked) {
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (linked(i, j)) parent[find(i)] = find(j);
        std::vector<std::vector<std::size_t>> groups;
        std::vector<std::size_t> slot(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t root = find(i);
            if (slot[root] == n) {
                slot[root] = groups.size();
                groups.emplace_back();
            }
            groups[slot[root]].push_back(i);
        }
        return groups;
    }

    static Eigen::MatrixXcd gather(const Eigen::MatrixXcd& m, std::span<const std::size_t> idx) {
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd out(k, k);
        for (Eigen::Index r = 0; r < k; ++r)
            for (Eigen::Index c = 0; c < k; ++c)
                out(r, c) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                              static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
        return out;
    }

   private:
    FockBasis basis_;
    std::vector<Block> blocks_;
};

/// Pure state left after losing exactly `lost` photons, normalized; amplitudes[k]
/// belongs to sent photon number n = lost + k.
struct ChiTerm {
    std::size_t lost;
    double probability;
    std::vector<cplx> amplitudes;
};

/// ρ_IS = Σ_l q_l |χ_l⟩⟨χ_l| for a probe sent through a loss channel.
struct ChiDecomposition {
    FockBasis basis;
    std::vector<ChiTerm> terms;

    /// χ_l(φ) as a vector over `basis`, with e^{inφ} on the component of sent photon number n.
    Eigen::VectorXcd state_vector(const ChiTerm& term, double phi = 0.0) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
        for (std::size_t k = 0; k < term.amplitudes.size(); ++k) {
            const std::size_t n = term.lost + k;
            v(static_cast<Eigen::Index>(basis.index(n, k))) += term.amplitudes[k] * std::polar(1.0, static_cast<double>(n) * phi);
        }
        return v;
    }

    /// ⟨χ_a|χ_b⟩.
    cplx overlap(std::size_t a, std::size_t b) const { return state_vector(terms[a]).dot(state_vector(terms[b])); }

    /// q_l for l = 0..cutoff (omitted terms report 0).
    std::vector<double> loss_probabilities() const {
        std::vector<double> q(basis.cutoff() + 1, 0.0);
        for (const ChiTerm& t : terms) q[t.lost] = t.probability;
        return q;
    }
};

inline ChiDecomposition chi_decompose(const ProbeSpec& probe, LossChannel channel) {
    ChiDecomposition out{FockBasis::for_probe(probe), {}};
    const auto c = probe.amplitudes();
    const std::size_t cutoff = probe.cutoff();
    for (std::size_t l = 0; l <= cutoff; ++l) {
        ChiTerm term{l, 0.0, std::vector<cplx>(cutoff + 1 - l)};
        for (std::size_t n = l; n <= cutoff; ++n) {
            const double b = binomial_loss_kernel(n, l, channel);
            term.amplitudes[n - l] = c[n] * std::sqrt(b);
            term.probability += std::norm(c[n]) * b;
        }
        if (term.probability < 1e-14) continue;
        const double scale = 1.0 / std::sqrt(term.probability);
        for (cplx& a : term.amplitudes) a *= scale;
        out.terms.push_back(std::move(term));
    }
    return out;
}

namespace detail {

/// Block layout shared by every state built from one decomposition: one block
/// per loss branch with an idler, a single block without one.
inline std::vector<DensityMatrix::Block> empty_blocks(const ChiDecomposition& d) {
    std::vector<DensityMatrix::Block> blocks;
    if (d.basis.has_idler()) {
        for (const ChiTerm& t : d.terms) {
            DensityMatrix::Block b;
            for (std::size_t k = 0; k < t.amplitudes.size(); ++k) b.indices.push_back(d.basis.index(t.lost + k, k));
            const auto dim = static_cast<Eigen::Index>(b.indices.size());
            b.matrix = Eigen::MatrixXcd::Zero(dim, dim);
            blocks.push_back(std::move(b));
        }
    } else {
        DensityMatrix::Block b;
        b.indices.resize(d.basis.size());
        std::iota(b.indices.begin(), b.indices.end(), std::size_t{0});
        const auto dim = static_cast<Eigen::Index>(b.indices.size());
        b.matrix = Eigen::MatrixXcd::Zero(dim, dim);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

/// Adds weight·|χ_l(φ)⟩⟨χ_l(φ)| for every branch into `blocks`.
inline void accumulate_modulated(const ChiDecomposition& d, double phi, double weight, std::vector<DensityMatrix::Block>& blocks) {
    for (std::size_t t = 0; t < d.terms.size(); ++t) {
        const ChiTerm& term = d.terms[t];
        DensityMatrix::Block& b = blocks[d.basis.has_idler() ? t : 0];
        const auto len = static_cast<Eigen::Index>(term.amplitudes.size());
        Eigen::VectorXcd v(len);
        for (Eigen::Index k = 0; k < len; ++k)
            v(k) = term.amplitudes[static_cast<std::size_t>(k)] *
                   std::polar(1.0, static_cast<double>(term.lost + static_cast<std::size_t>(k)) * phi);
        const double w = weight * term.probability;
        if (d.basis.has_idler())
            b.matrix.noalias() += w * v * v.adjoint();
        else
            b.matrix.topLeftCorner(len, len).noalias() += w * v * v.adjoint();  // signal m = n − l = k
    }
}

inline void symmetrize(std::vector<DensityMatrix::Block>& blocks) {
    for (auto& b : blocks) b.matrix = 0.5 * (b.matrix + b.matrix.adjoint()).eval();
}

}  // namespace detail

/// ρ_φ = Σ_l q_l |χ_l(φ)⟩⟨χ_l(φ)|; φ = 0 gives ρ_IS.
inline DensityMatrix modulated_state(const ChiDecomposition& d, double phi) {
    auto blocks = detail::empty_blocks(d);
    detail::accumulate_modulated(d, phi, 1.0, blocks);
    detail::symmetrize(blocks);
    return DensityMatrix(d.basis, std::move(blocks));
}

/// ρ̄ = ∫ P(φ) ρ_φ dφ via the prior's Fourier coefficients: entry (i, j) of ρ_IS
/// is multiplied by ∫ P(φ) e^{i(g_i − g_j)φ} dφ, g the phase generator.
inline DensityMatrix average_state(const ChiDecomposition& d, const PhasePrior& prior) {
    const auto N = static_cast<int>(d.basis.cutoff());
    std::vector<cplx> coeff(static_cast<std::size_t>(2 * N + 1));
    for (int k = 0; k <= N; ++k) {
        coeff[static_cast<std::size_t>(N + k)] = prior.fourier_coefficient(k);
        coeff[static_cast<std::size_t>(N - k)] = std::conj(coeff[static_cast<std::size_t>(N + k)]);
    }
    const DensityMatrix rho = modulated_state(d, 0.0);
    std::vector<DensityMatrix::Block> blocks(rho.blocks().begin(), rho.blocks().end());
    for (auto& b : blocks)
        for (std::size_t r = 0; r < b.indices.size(); ++r)
            for (std::size_t c = 0; c < b.indices.size(); ++c) {
                const int diff = static_cast<int>(d.basis.generator(b.indices[r])) - static_cast<int>(d.basis.generator(b.indices[c]));
                b.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *= coeff[static_cast<std::size_t>(N + diff)];
            }
    detail::symmetrize(blocks);
    return DensityMatrix(d.basis, std::move(blocks));
}

/// ρ̄ by direct quadrature over the prior (cross-check of average_state).
inline DensityMatrix average_state_quadrature(const ChiDecomposition& d, const PhasePrior& prior, std::size_t nodes) {
    if (nodes < 64) throw InvalidInput("average_state_quadrature: need at least 64 nodes");
    const QuadratureRule rule = prior.quadrature(nodes);
    auto blocks = detail::empty_blocks(d);
    double total = 0.0;
    for (std::size_t g = 0; g < rule.size(); ++g) {
        detail::accumulate_modulated(d, rule.nodes[g], rule.weights[g], blocks);
        total += rule.weights[g];
    }
    for (auto& b : blocks) b.matrix /= total;
    detail::symmetrize(blocks);
    return DensityMatrix(d.basis, std::move(blocks));
}

/// Uniform phase randomization: removes coherences between different
/// phase-generator eigenvalues.
inline DensityMatrix phase_randomize(const DensityMatrix& rho) {
    const FockBasis& basis = rho.basis();
    std::vector<DensityMatrix::Block> out;
    for (const auto& b : rho.blocks()) {
        auto groups = DensityMatrix::connected_components(b.indices.size(), [&](std::size_t r, std::size_t c) {
            return basis.generator(b.indices[r]) == basis.generator(b.indices[c]) &&
                   b.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) != cplx{};
        });
        for (const auto& g : groups) {
            DensityMatrix::Block nb;
            for (std::size_t r : g) nb.indices.push_back(b.indices[r]);
            const auto k = static_cast<Eigen::Index>(g.size());
            nb.matrix = Eigen::MatrixXcd::Zero(k, k);
            for (Eigen::Index r = 0; r < k; ++r)
                for (Eigen::Index c = 0; c < k; ++c)
                    if (basis.generator(nb.indices[static_cast<std::size_t>(r)]) == basis.generator(nb.indices[static_cast<std::size_t>(c)]))
                        nb.matrix(r, c) = b.matrix(static_cast<Eigen::Index>(g[static_cast<std::size_t>(r)]),
                                                   static_cast<Eigen::Index>(g[static_cast<std::size_t>(c)]));
            out.push_back(std::move(nb));
        }
    }
    return DensityMatrix(basis, std::move(out));
}

/// −Σ λ ln λ over eigenvalues above 1e-14 of a Hermitian matrix.
inline double von_neumann_entropy(const Eigen::MatrixXcd& hermitian) {
    if (hermitian.rows() == 0) return 0.0;
    Eigen::VectorXd lambda;
    if (hermitian.rows() == 1) {
        lambda = Eigen::VectorXd::Constant(1, hermitian(0, 0).real());
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw NumericalFailure("von_neumann_entropy: eigendecomposition failed");
        lambda = solver.eigenvalues();
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < -1e-8) throw NumericalFailure("von_neumann_entropy: state has a negative eigenvalue");
        if (lambda(i) > 1e-14) s -= lambda(i) * std::log(lambda(i));
    }
    return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (const auto& b : rho.blocks()) s += von_neumann_entropy(b.matrix);
    return s;
}

/// χ = S(ρ̄) − S(ρ_IS); every ρ_φ is unitarily equivalent to ρ_IS.
inline double holevo_quantity(const ChiDecomposition& d, const PhasePrior& prior) {
    return von_neumann_entropy(average_state(d, prior)) - von_neumann_entropy(modulated_state(d, 0.0));
}

}  // namespace phasebound
