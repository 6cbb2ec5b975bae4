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

#include "phasebound/fock.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "phasebound/capacity.hpp"
#include "test_support.hpp"

using namespace phasebound;

namespace {

constexpr double pi = std::numbers::pi;

// Beam-splitter oracle. Within the n-photon subspace of signal⊗environment,
// exponentiates θ(a†b − ab†) with cos²θ = η and returns ⟨n−l, l|U|n, 0⟩.
std::vector<double> beam_splitter_column(std::size_t n, double eta) {
    const auto dim = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);  // H = i(a†b − ab†); index = photons in b
    for (std::size_t j = 0; j < n; ++j) {
        // a†b |n−j−1, j+1⟩ = amp |n−j, j⟩
        const double amp = std::sqrt(static_cast<double>(n - j)) * std::sqrt(static_cast<double>(j + 1));
        H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j + 1)) = cplx(0.0, amp);
        H(static_cast<Eigen::Index>(j + 1), static_cast<Eigen::Index>(j)) = cplx(0.0, -amp);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const double theta = std::acos(std::sqrt(eta));
    Eigen::VectorXcd phase(dim);
    for (Eigen::Index k = 0; k < dim; ++k) phase(k) = std::polar(1.0, -theta * es.eigenvalues()(k));
    const Eigen::MatrixXcd U = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    std::vector<double> col(n + 1);
    for (std::size_t l = 0; l <= n; ++l) {
        const cplx v = U(static_cast<Eigen::Index>(l), 0);
        EXPECT_LT(std::abs(v.imag()), 1e-12);
        col[l] = v.real();
    }
    return col;
}

// ρ_IS assembled from the beam-splitter oracle, environment traced out.
Eigen::MatrixXcd oracle_rho(const ProbeSpec& probe, double eta) {
    const FockBasis basis = FockBasis::for_probe(probe);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    const std::size_t N = probe.cutoff();
    std::vector<std::vector<double>> cols;
    for (std::size_t n = 0; n <= N; ++n) cols.push_back(beam_splitter_column(n, eta));
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t l = 0; l <= N; ++l) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
        for (std::size_t n = l; n <= N; ++n)
            v(static_cast<Eigen::Index>(basis.index(n, n - l))) += probe.amplitudes()[n] * cols[n][l];
        rho += v * v.adjoint();
    }
    return rho;
}

double joint_entropy_sent_kept(const ProbeSpec& probe, LossChannel ch) {
    const auto p = probe.photon_distribution();
    double h = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n)
        for (std::size_t l = 0; l <= n; ++l) h -= xlogx(p[n] * binomial_loss_kernel(n, l, ch));
    return h;
}

ProbeSpec plus_state() { return ProbeSpec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}); }

}  // namespace

TEST(probe_spec, validation) {
    EXPECT_THROW(ProbeSpec({1.0, 1.0}), InvalidInput);
    EXPECT_THROW(ProbeSpec(std::vector<cplx>{}), InvalidInput);
    EXPECT_THROW(ProbeSpec(std::vector<cplx>(130, 1 / std::sqrt(130.0))), InvalidInput);
    EXPECT_THROW(ProbeSpec::number(129), DomainError);
    EXPECT_THROW(ProbeSpec::coherent(12.0), DomainError);
    EXPECT_THROW(ProbeSpec::coherent(std::sqrt(1000.0)), DomainError);
    EXPECT_THROW(ProbeSpec::coherent(40.0), DomainError);
    EXPECT_EQ(ProbeSpec({0.0, 1.0, 0.0, 0.0}).cutoff(), 1u);
}

TEST(probe_spec, coherent_tail_and_moments) {
    for (double a : {0.0, 0.5, 1.0, 3.0, 8.0}) {
        const auto p = ProbeSpec::coherent(a);
        double tail = 0.0;
        const double m = a * a;
        for (std::size_t n = p.cutoff() + 1; n < 600; ++n)
            tail += std::exp(-m + static_cast<double>(n) * std::log(std::max(m, 1e-300)) - std::lgamma(n + 1.0));
        EXPECT_LT(tail, 1e-12) << a;
        EXPECT_NEAR(p.mean_photon_number(), m, 1e-9 * (1 + m)) << a;
        EXPECT_NEAR(p.photon_number_variance(), m, 1e-8 * (1 + m)) << a;
    }
}

TEST(probe_spec, family_moments) {
    EXPECT_NEAR(ProbeSpec::flat_superposition(4).mean_photon_number(), 1.5, 1e-14);
    EXPECT_NEAR(ProbeSpec::flat_superposition(4).photon_number_variance(), 1.25, 1e-14);
    EXPECT_NEAR(ProbeSpec::binomial(11).mean_photon_number(), 5.0, 1e-12);
    EXPECT_NEAR(ProbeSpec::binomial(11).photon_number_variance(), 2.5, 1e-12);
    EXPECT_EQ(ProbeSpec::number(3).photon_number_variance(), 0.0);
}

TEST(fock_basis, nds_indexing) {
    const auto b = FockBasis::nds(3);
    EXPECT_EQ(b.size(), 10u);
    for (std::size_t i = 0; i < b.size(); ++i) {
        EXPECT_EQ(b.index(b.label(i).sent, b.label(i).signal), i);
        EXPECT_EQ(b.generator(i), b.label(i).sent);
    }
    EXPECT_EQ(b.index(2, 1), 4u);
    EXPECT_EQ(FockBasis::signal_only(3).size(), 4u);
}

TEST(chi_decompose, single_photon) {
    const auto d = chi_decompose(ProbeSpec::number(1, Idler::nds), LossChannel(0.7));
    const auto q = d.loss_probabilities();
    EXPECT_NEAR(q[0], 0.7, 1e-15);
    EXPECT_NEAR(q[1], 0.3, 1e-15);
    ASSERT_EQ(d.terms.size(), 2u);
    EXPECT_EQ(std::abs(d.terms[0].amplitudes[1]), 1.0);  // n = 1 kept: |1⟩|1⟩
    EXPECT_EQ(std::abs(d.terms[1].amplitudes[0]), 1.0);  // n = 1 lost: |1⟩|0⟩
}

TEST(chi_decompose, vacuum) {
    const auto d = chi_decompose(ProbeSpec::number(0), LossChannel(0.3));
    ASSERT_EQ(d.terms.size(), 1u);
    EXPECT_EQ(d.terms[0].probability, 1.0);
}

TEST(chi_decompose, zero_two_superposition) {
    const auto probe = ProbeSpec({1 / std::sqrt(2.0), 0.0, 1 / std::sqrt(2.0)}, Idler::nds);
    const auto q = chi_decompose(probe, LossChannel(0.5)).loss_probabilities();
    EXPECT_NEAR(q[0], 0.625, 1e-15);
    EXPECT_NEAR(q[1], 0.25, 1e-15);
    EXPECT_NEAR(q[2], 0.125, 1e-15);
}

TEST(chi_decompose, matches_beam_splitter_oracle) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Idler idler = trial % 2 ? Idler::nds : Idler::none;
        const auto probe = testsupport::random_probe(rng, 1 + trial % 9, idler);
        for (double eta : {0.0, 0.3, 0.5, 0.85, 1.0}) {
            const auto d = chi_decompose(probe, LossChannel(eta));
            const Eigen::MatrixXcd rho = modulated_state(d, 0.0).to_dense();
            EXPECT_LT((rho - oracle_rho(probe, eta)).norm(), 1e-12) << trial << " " << eta;
        }
    }
}

TEST(chi_decompose, branches_orthonormal_with_idler) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const auto probe = testsupport::random_probe(rng, 1 + trial % 12, Idler::nds);
        for (double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const auto d = chi_decompose(probe, LossChannel(eta));
            double total = 0.0;
            for (std::size_t a = 0; a < d.terms.size(); ++a) {
                total += d.terms[a].probability;
                for (std::size_t b = 0; b < d.terms.size(); ++b)
                    EXPECT_NEAR(std::abs(d.overlap(a, b) - cplx(a == b ? 1.0 : 0.0)), 0.0, 1e-12);
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(modulated_state, phase_behaviour) {
    const auto d = chi_decompose(plus_state(), LossChannel(1.0));
    const auto rho = modulated_state(d, pi).reduced_signal();
    EXPECT_NEAR(rho(0, 1).real(), -0.5, 1e-15);
    const auto num = chi_decompose(ProbeSpec::number(3), LossChannel(0.6));
    EXPECT_LT((modulated_state(num, 1.234).to_dense() - modulated_state(num, 0.0).to_dense()).norm(), 1e-15);
}

TEST(average_state, uniform_full_circle_kills_coherence) {
    const auto d = chi_decompose(ProbeSpec::flat_superposition(5), LossChannel(1.0));
    const Eigen::MatrixXcd rho = average_state(d, PhasePrior::uniform(2 * pi)).to_dense();
    const Eigen::MatrixXcd off = rho - Eigen::MatrixXcd(rho.diagonal().asDiagonal());
    EXPECT_LT(off.norm(), 1e-15);
}

TEST(average_state, width_pi_window) {
    const auto d = chi_decompose(plus_state(), LossChannel(1.0));
    const auto prior = PhasePrior::uniform(pi, 0.0);
    const auto fourier = average_state(d, prior).to_dense();
    EXPECT_NEAR(std::abs(fourier(0, 1)), 1 / pi, 1e-9);
    const auto quad = average_state_quadrature(d, prior, 1 << 16).to_dense();
    EXPECT_NEAR(std::abs(quad(0, 1)), 0.3183098861837907, 1e-9);
}

TEST(average_state, narrow_bin_matches_point) {
    constexpr std::size_t K = 4096;
    std::vector<double> spike(K, 0.0);
    spike[700] = K / (2 * pi);
    const double phi0 = (700 + 0.5) * 2 * pi / K;
    const auto d = chi_decompose(ProbeSpec::flat_superposition(6, Idler::nds), LossChannel(0.8));
    const auto avg = average_state(d, PhasePrior::tabulated(spike)).to_dense();
    EXPECT_LT((avg - modulated_state(d, phi0).to_dense()).norm(), 1e-4);
}

TEST(average_state, fourier_and_quadrature_paths_agree) {
    std::mt19937_64 rng(31);
    std::vector<double> hist(32);
    double total = 0.0;
    for (auto& v : hist) total += (v = std::uniform_real_distribution<double>(0, 1)(rng));
    for (auto& v : hist) v *= 32 / (2 * pi * total);
    const std::vector<PhasePrior> priors = {PhasePrior::wrapped_gaussian(1.0, 0.4), PhasePrior::uniform(2.0, 6.0),
                                            PhasePrior::tabulated(hist)};
    for (const auto& prior : priors) {
        for (Idler idler : {Idler::none, Idler::nds}) {
            const auto d = chi_decompose(testsupport::random_probe(rng, 7, idler), LossChannel(0.6));
            const auto a = average_state(d, prior).to_dense();
            const auto b = average_state_quadrature(d, prior, 4096).to_dense();
            EXPECT_LT((a - b).norm(), 1e-10) << prior.describe();
        }
    }
}

TEST(phase_randomize, examples) {
    const auto d = chi_decompose(plus_state(), LossChannel(1.0));
    const auto r = phase_randomize(modulated_state(d, 0.0)).to_dense();
    EXPECT_NEAR(r(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(r(1, 1).real(), 0.5, 1e-15);
    EXPECT_EQ(r(0, 1), cplx{});
}

TEST(phase_randomize, keeps_diagonal_and_raises_entropy) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const auto basis = trial % 2 ? FockBasis::nds(3) : FockBasis::signal_only(6);
        const auto rho = DensityMatrix::from_dense(basis, testsupport::random_density(rng, static_cast<Eigen::Index>(basis.size())));
        const auto pr = phase_randomize(rho);
        EXPECT_LT((pr.to_dense().diagonal() - rho.to_dense().diagonal()).norm(), 1e-15);
        EXPECT_GE(von_neumann_entropy(pr), von_neumann_entropy(rho) - 1e-12);
    }
}

TEST(von_neumann_entropy, examples) {
    const auto pure = chi_decompose(ProbeSpec::flat_superposition(5), LossChannel(1.0));
    EXPECT_NEAR(von_neumann_entropy(modulated_state(pure, 0.3)), 0.0, 1e-12);
    EXPECT_NEAR(von_neumann_entropy(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(8, 8) / 8.0)), std::log(8.0), 1e-14);
    Eigen::MatrixXcd bad(2, 2);
    bad << 1.5, 0.0, 0.0, -0.5;
    EXPECT_THROW(von_neumann_entropy(bad), NumericalFailure);
}

TEST(von_neumann_entropy, branch_mixture_with_idler) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = chi_decompose(testsupport::random_probe(rng, 1 + trial % 10, Idler::nds), LossChannel(0.45));
        EXPECT_NEAR(von_neumann_entropy(modulated_state(d, 0.0)), shannon_entropy(d.loss_probabilities()), 1e-10);
    }
}

TEST(density_matrix, validation) {
    const auto basis = FockBasis::signal_only(1);
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(DensityMatrix::from_dense(basis, m), InvalidInput);
    m << 0.6, 0.0, 0.0, 0.6;
    EXPECT_THROW(DensityMatrix::from_dense(basis, m), InvalidInput);
}

TEST(holevo_quantity, examples) {
    const auto d = chi_decompose(ProbeSpec::coherent(1.0), LossChannel(0.5));
    EXPECT_NEAR(holevo_quantity(d, PhasePrior::point_mass(1.0)), 0.0, 1e-9);
    for (std::size_t dim : {2u, 4u, 9u}) {
        const auto flat = chi_decompose(ProbeSpec::flat_superposition(dim), LossChannel(1.0));
        EXPECT_NEAR(holevo_quantity(flat, PhasePrior::uniform(2 * pi)), std::log(static_cast<double>(dim)), 1e-12);
    }
}

TEST(holevo_quantity, invariants_on_random_probes) {
    std::mt19937_64 rng(43);
    const std::vector<PhasePrior> priors = {PhasePrior::uniform(2 * pi), PhasePrior::uniform(1.0),
                                            PhasePrior::wrapped_gaussian(2.0, 0.5)};
    for (int trial = 0; trial < 100; ++trial) {
        const Idler idler = trial % 2 ? Idler::nds : Idler::none;
        const auto probe = testsupport::random_probe(rng, 1 + trial % 10, idler);
        const double N = probe.mean_photon_number();
        for (double eta : {0.25, 0.5, 0.75, 1.0}) {
            const LossChannel ch(eta);
            const auto d = chi_decompose(probe, ch);
            const double s_is = von_neumann_entropy(modulated_state(d, 0.0));
            for (const auto& prior : priors) {
                const auto avg = average_state(d, prior);
                const double chi = von_neumann_entropy(avg) - s_is;
                EXPECT_GE(chi, -1e-9);
                if (idler == Idler::nds) {
                    const double s_rand = von_neumann_entropy(phase_randomize(avg));
                    const double gap = joint_entropy_sent_kept(probe, ch) - shannon_entropy(d.loss_probabilities());
                    EXPECT_NEAR(s_rand - s_is, gap, 1e-9) << trial << " " << eta;
                    EXPECT_LE(chi, gap + 1e-9);
                }
                if (eta == 1.0) EXPECT_LE(chi, unrestricted_capacity(N) + 1e-9);
                else EXPECT_LE(chi, capacity_upper_bound_lossy(N, ch) + 1e-9) << trial << " " << eta;
            }
        }
    }
}
