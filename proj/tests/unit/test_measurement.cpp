// Copyright 2026 The qtomo Authors
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

#include <map>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/mic.hpp"

using namespace qtomo;
using qtomo::testing::kron_ref;
using qtomo::testing::pauli2;

namespace {

Eigen::Matrix2cd element_ref(const PovmOutcome& o) {
    return o.alpha * (pauli2('I') + o.beta.x() * pauli2('X') + o.beta.y() * pauli2('Y') + o.beta.z() * pauli2('Z'));
}

Eigen::MatrixXcd product_element_ref(const ProductPovm& m, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < m.n_qubits(); ++q) e = kron_ref(e, element_ref(m.qubit(q).outcome(idx[static_cast<std::size_t>(q)])));
    return e;
}

DensityMatrix ket0() { return pure_state(Eigen::Vector2cd(1, 0)); }

}  // namespace

TEST(SingleQubitPovm, Validation) {
    EXPECT_NO_THROW(SingleQubitPovm({{0.5, {0, 0, 1}}, {0.5, {0, 0, -1}}}));
    EXPECT_THROW(SingleQubitPovm({{0.5, {0, 0, 1.1}}, {0.5, {0, 0, -1.1}}}), ValidationError);
    EXPECT_THROW(SingleQubitPovm({{0.6, {0, 0, 1}}, {0.5, {0, 0, -1}}}), ValidationError);
    EXPECT_THROW(SingleQubitPovm({{0.5, {0, 0, 1}}, {0.5, {0, 0, 0}}}), ValidationError);
    EXPECT_THROW(SingleQubitPovm({{1.5, {0, 0, 0}}, {-0.5, {0, 0, 0}}}), ValidationError);
    EXPECT_THROW(SingleQubitPovm(std::vector<PovmOutcome>{}), ValidationError);
}

TEST(PovmElement, Examples) {
    const auto z = ProductPovm::pauli_basis(PauliString::parse("Z"));
    Eigen::Matrix2cd p0;
    p0 << 1, 0, 0, 0;
    EXPECT_LT((povm_element_matrix(z, std::vector<std::size_t>{0}) - p0).norm(), 1e-15);
    const ProductPovm trivial({SingleQubitPovm::trivial()});
    EXPECT_LT((povm_element_matrix(trivial, std::vector<std::size_t>{0}) - Eigen::Matrix2cd::Identity()).norm(), 1e-15);
    const auto zz = ProductPovm::pauli_basis(PauliString::parse("ZZ"));
    Eigen::Matrix4cd d0 = Eigen::Matrix4cd::Zero();
    d0(0, 0) = 1;
    EXPECT_LT((povm_element_matrix(zz, std::vector<std::size_t>{0, 0}) - d0).norm(), 1e-15);
    EXPECT_THROW(povm_element_matrix(zz, std::vector<std::size_t>{0, 2}), ValidationError);
}

TEST(PovmElement, CompletenessAndPsdForRandomPovms) {
    Rng rng = make_rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 4;
        const ProductPovm m = random_product_povm(n, rng);
        const Eigen::Index d = Eigen::Index{1} << n;
        Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t x = 0; x < m.outcome_count(); ++x) {
            const auto idx = m.unflatten(x);
            const Eigen::MatrixXcd e = povm_element_matrix(m, idx);
            EXPECT_LT((e - product_element_ref(m, idx)).norm(), 1e-13);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(e, Eigen::EigenvaluesOnly);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
            total += e;
        }
        EXPECT_LT((total - Eigen::MatrixXcd::Identity(d, d)).norm(), 1e-10);
    }
}

TEST(FlatIndex, RowMajorQubitZeroMostSignificant) {
    const ProductPovm m({SingleQubitPovm::pauli_basis(Pauli::Z), uniform_pauli_mixture()});
    EXPECT_EQ(m.outcome_count(), 12u);
    EXPECT_EQ(m.flatten(std::vector<std::size_t>{1, 4}), 10u);
    EXPECT_EQ(m.unflatten(10), (std::vector<std::size_t>{1, 4}));
}

TEST(OutcomeDistribution, Examples) {
    for (const auto* basis : {"X", "Y", "Z", "XY", "ZZX"}) {
        const auto p = PauliString::parse(basis);
        const auto dist = outcome_distribution(ProductPovm::pauli_basis(p), maximally_mixed(p.n_qubits()));
        for (Eigen::Index i = 0; i < dist.size(); ++i) EXPECT_NEAR(dist(i), 1.0 / static_cast<double>(dist.size()), 1e-14);
    }
    const auto z = outcome_distribution(ProductPovm::pauli_basis(PauliString::parse("Z")), ket0());
    EXPECT_NEAR(z(0), 1.0, 1e-15);
    EXPECT_NEAR(z(1), 0.0, 1e-15);
    const auto x = outcome_distribution(ProductPovm::pauli_basis(PauliString::parse("X")), ket0());
    EXPECT_NEAR(x(0), 0.5, 1e-15);
    EXPECT_NEAR(x(1), 0.5, 1e-15);
    EXPECT_THROW(outcome_distribution(ProductPovm::pauli_basis(PauliString::parse("ZZ")), ket0()), ValidationError);
}

TEST(OutcomeDistribution, RotationRouteMatchesTraces) {
    Rng rng = make_rng(4);
    for (int n = 1; n <= 3; ++n) {
        const auto rho = random_density_matrix(n, rng);
        for (const auto& b : all_pauli_bases(n)) {
            const auto m = ProductPovm::pauli_basis(b);
            const Eigen::VectorXd a = pauli_basis_distribution(b, rho.matrix());
            const Eigen::VectorXd t = distribution_by_traces(m, rho.matrix());
            EXPECT_LT((a - t).cwiseAbs().maxCoeff(), 1e-10) << b.str();
            for (std::size_t x = 0; x < m.outcome_count(); ++x) {
                const double ref = (product_element_ref(m, m.unflatten(x)) * rho.matrix()).trace().real();
                EXPECT_NEAR(a(static_cast<Eigen::Index>(x)), ref, 1e-12);
            }
        }
    }
}

TEST(OutcomeDistribution, SignProductsRecoverMatchingPaulis) {
    Rng rng = make_rng(8);
    for (int n = 1; n <= 3; ++n) {
        const auto rho = random_density_matrix(n, rng);
        for (const auto& b : all_pauli_bases(n)) {
            const Eigen::VectorXd dist = pauli_basis_distribution(b, rho.matrix());
            for (const auto& q : all_paulis(n)) {
                bool matches = true;
                for (int k = 0; k < n; ++k) matches = matches && (q.letter(k) == Pauli::I || q.letter(k) == b.letter(k));
                if (!matches) continue;
                double s = 0;
                for (Eigen::Index x = 0; x < dist.size(); ++x) {
                    const int parity = std::popcount(static_cast<std::uint64_t>(x) & q.support_mask()) & 1;
                    s += (parity ? -1.0 : 1.0) * dist(x);
                }
                const double truth = (rho.matrix() * qtomo::testing::pauli_ref(q.str())).trace().real();
                EXPECT_NEAR(s, truth, 1e-12) << b.str() << " " << q.str();
            }
        }
    }
}

TEST(SampleOutcomes, EmptyDeterministicAndConcentrated) {
    const auto z = ProductPovm::pauli_basis(PauliString::parse("Z"));
    EXPECT_TRUE(sample_outcomes(z, maximally_mixed(1), 0, 1).empty());
    const auto a = sample_outcomes(z, maximally_mixed(1), 100000, 42);
    EXPECT_EQ(a, sample_outcomes(z, maximally_mixed(1), 100000, 42));
    EXPECT_NE(a, sample_outcomes(z, maximally_mixed(1), 100000, 43));
    const double plus = static_cast<double>(std::count(a.begin(), a.end(), 0u)) / 1e5;
    EXPECT_NEAR(plus, 0.5, 0.01);
}

TEST(RunStrategy, ConstantMatchesFixedBasis) {
    const auto zx = ProductPovm::pauli_basis(PauliString::parse("ZX"));
    Rng rng = make_rng(12);
    const auto rho = random_density_matrix(2, rng);
    const auto dist = outcome_distribution(zx, rho);
    std::vector<double> freq(4, 0.0);
    for (std::uint64_t s = 0; s < 20000; ++s) ++freq[run_strategy(constant_strategy(zx), rho, 1, s)[0]];
    for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(freq[x] / 20000.0, dist(static_cast<Eigen::Index>(x)), 0.015);
    EXPECT_EQ(run_strategy(constant_strategy(zx), rho, 5, 3).size(), 5u);
    EXPECT_EQ(run_strategy(constant_strategy(zx), rho, 5, 3), run_strategy(constant_strategy(zx), rho, 5, 3));
    EXPECT_THROW(run_strategy(constant_strategy(zx), rho, 0, 3), ValidationError);
}

TEST(RunStrategy, AdaptiveFlipUsesEachBasisHalfTheTime) {
    const auto rho = maximally_mixed(1);
    const auto base = adaptive_flip_strategy();
    std::map<std::string, std::size_t> uses;
    const MeasurementStrategy counting = [&](std::size_t copy, std::span<const std::size_t> h) {
        ProductPovm m = base(copy, h);
        if (copy == 1) ++uses[m.basis()->str()];
        return m;
    };
    for (std::uint64_t s = 0; s < 10000; ++s) run_strategy(counting, rho, 2, s);
    EXPECT_NEAR(static_cast<double>(uses["X"]) / 1e4, 0.5, 0.02);
    EXPECT_NEAR(static_cast<double>(uses["Z"]) / 1e4, 0.5, 0.02);
}

TEST(RunStrategy, InvalidPovmNamesCopyIndex) {
    const MeasurementStrategy bad = [](std::size_t copy, std::span<const std::size_t>) {
        if (copy == 2) return ProductPovm({SingleQubitPovm({{0.5, {0, 0, 2}}, {0.5, {0, 0, -2}}})});
        return ProductPovm::pauli_basis(PauliString::parse("Z"));
    };
    try {
        run_strategy(bad, maximally_mixed(1), 4, 1);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("copy 2"), std::string::npos) << e.what();
    }
}

TEST(UniformPauliMixture, SixOutcomeEquivalent) {
    const auto u = uniform_pauli_mixture();
    ASSERT_EQ(u.size(), 6u);
    const auto dist = outcome_distribution(ProductPovm({u}), ket0());
    // Z outcomes carry 1/3 on +1 and 0 on -1; X and Y are split evenly.
    double total = 0;
    for (Eigen::Index i = 0; i < dist.size(); ++i) total += dist(i);
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_NEAR(dist.maxCoeff(), 1.0 / 3.0, 1e-14);
}
