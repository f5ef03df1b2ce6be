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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/tomography.hpp"

using namespace qtomo;

namespace {

double tr_with(const DensityMatrix& rho, const PauliString& q) {
    return (rho.matrix() * qtomo::testing::pauli_ref(q.str())).trace().real();
}

/// Reference estimator: loop over bases, keep those matching q, average sign products.
double estimate_ref(const PauliString& q, const std::vector<BasisSamples>& data) {
    double sum = 0;
    std::size_t count = 0;
    const int n = q.n_qubits();
    for (const auto& b : data) {
        bool match = true;
        for (int k = 0; k < n; ++k) match = match && (q.letter(k) == Pauli::I || q.letter(k) == b.basis.letter(k));
        if (!match) continue;
        for (auto x : b.outcomes) {
            int sign = 1;
            for (int k = 0; k < n; ++k) {
                if (q.letter(k) != Pauli::I && ((x >> (n - 1 - k)) & 1)) sign = -sign;
            }
            sum += sign;
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

}  // namespace

TEST(AllocateCopies, Examples) {
    auto a = allocate_copies(1, 9);
    ASSERT_EQ(a.size(), 3u);
    for (const auto& g : a) EXPECT_EQ(g.copies, 3u);
    a = allocate_copies(1, 10);
    EXPECT_EQ(a[0].basis.str(), "X");
    EXPECT_EQ(a[0].copies, 4u);
    EXPECT_EQ(a[1].copies, 3u);
    EXPECT_EQ(a[2].copies, 3u);
    a = allocate_copies(2, 90);
    ASSERT_EQ(a.size(), 9u);
    for (const auto& g : a) EXPECT_EQ(g.copies, 10u);
    EXPECT_THROW(allocate_copies(2, 8), InsufficientCopiesError);
}

TEST(EstimateObservable, Examples) {
    const DensityMatrix zero = pure_state(Eigen::Vector2cd(1, 0));
    PauliTomography t(zero);
    const auto data = t.sample(300, 5);
    const auto e = estimate_observable(PauliString::parse("Z"), data);
    EXPECT_EQ(e.e_value, 1.0);
    EXPECT_EQ(e.sample_count, 100u);

    PauliTomography t2(maximally_mixed(2));
    const auto d2 = t2.sample(900, 6);
    const auto zi = estimate_observable(PauliString::parse("ZI"), d2);
    EXPECT_EQ(zi.sample_count, 300u);  // bases ZX, ZY, ZZ
    EXPECT_LE(std::abs(zi.e_value), 4.0 / std::sqrt(300.0));
    EXPECT_THROW(estimate_observable(PauliString::parse("II"), d2), ValidationError);
    std::vector<BasisSamples> partial(d2.begin(), d2.begin() + 3);
    EXPECT_THROW(estimate_observable(PauliString::parse("ZI"), partial), ValidationError);
}

TEST(EstimateAll, WalshHadamardMatchesDirectAndReference) {
    Rng rng = make_rng(2);
    for (int n = 1; n <= 3; ++n) {
        const auto rho = random_density_matrix(n, rng);
        PauliTomography t(rho);
        const auto data = t.sample(40 * static_cast<std::size_t>(std::pow(3, n)) + 5, 77);
        const auto all = estimate_all(data);
        ASSERT_EQ(all.size(), (std::size_t{1} << (2 * n)) - 1);
        for (const auto& e : all) {
            const auto direct = estimate_observable(e.observable, data);
            EXPECT_NEAR(e.e_value, direct.e_value, 1e-12);
            EXPECT_EQ(e.sample_count, direct.sample_count);
            EXPECT_NEAR(e.e_value, estimate_ref(e.observable, data), 1e-12);
            EXPECT_LE(std::abs(e.e_value), 1.0);
        }
    }
}

TEST(Reconstruct, Examples) {
    std::vector<ObservableEstimate> zeros;
    for (const auto& p : all_paulis(2)) {
        if (!p.is_identity()) zeros.push_back({p, 0.0, 1});
    }
    EXPECT_LT((reconstruct(zeros, 2).estimate - maximally_mixed(2).matrix()).norm(), 1e-15);
    std::vector<ObservableEstimate> one{{PauliString::parse("X"), 0, 1}, {PauliString::parse("Y"), 0, 1}, {PauliString::parse("Z"), 1, 1}};
    Eigen::Matrix2cd expected;
    expected << 1, 0, 0, 0;
    EXPECT_LT((reconstruct(one, 1).estimate - expected).norm(), 1e-15);
    one.pop_back();
    EXPECT_THROW(reconstruct(one, 1), ValidationError);
}

TEST(Reconstruct, ExactValuesRoundTrip) {
    Rng rng = make_rng(13);
    for (int n = 1; n <= 3; ++n) {
        const auto rho = random_density_matrix(n, rng);
        std::vector<ObservableEstimate> exact;
        for (const auto& p : all_paulis(n)) {
            if (!p.is_identity()) exact.push_back({p, tr_with(rho, p), 1});
        }
        const auto r = reconstruct(exact, n);
        EXPECT_LT((r.estimate - rho.matrix()).norm(), 1e-10);
        EXPECT_NEAR(r.estimate.trace().real(), 1.0, 1e-12);
    }
}

TEST(RunTomography, SampleCountsFollowWeight) {
    const auto r = run_tomography(maximally_mixed(3), 27 * 20, 1);
    EXPECT_EQ(r.copies_used, 540u);
    for (const auto& e : r.per_observable) {
        EXPECT_EQ(e.sample_count, static_cast<std::size_t>(std::pow(3, 3 - e.observable.weight())) * 20u);
    }
    EXPECT_LT((r.estimate - r.estimate.adjoint()).norm(), 1e-14);
    EXPECT_NEAR(r.estimate.trace().real(), 1.0, 1e-12);
}

TEST(RunTomography, Reproducible) {
    Rng rng = make_rng(3);
    const auto rho = random_density_matrix(2, rng);
    EXPECT_EQ(run_tomography(rho, 900, 9).estimate, run_tomography(rho, 900, 9).estimate);
    EXPECT_NE(run_tomography(rho, 900, 9).estimate, run_tomography(rho, 900, 10).estimate);
}

TEST(RunTomography, MaximallyMixedMarkovSlack) {
    int within = 0;
    const int runs = 50;
    for (int s = 0; s < runs; ++s) {
        const auto r = run_tomography(maximally_mixed(1), 30000, static_cast<std::uint64_t>(s));
        within += (r.estimate - maximally_mixed(1).matrix()).squaredNorm() <= 10.0 * 10.0 / (2.0 * 30000.0);
    }
    EXPECT_GE(within, static_cast<int>(0.9 * runs));
}

TEST(RunTomography, PureStateConverges) {
    const auto r = run_tomography(pure_state(Eigen::Vector2cd(1, 0)), 300000, 4);
    for (const auto& e : r.per_observable) {
        const double expect = e.observable.str() == "Z" ? 1.0 : 0.0;
        EXPECT_NEAR(e.e_value, expect, 0.01) << e.observable.str();
    }
}

TEST(Statistics, UnbiasedAndVarianceBounded) {
    Rng rng = make_rng(31);
    const int n = 2;
    const std::size_t copies = 900;
    const int runs = 2000;
    // 75 checks at 3 standard errors each raise a false alarm with probability ~0.2 in total,
    // so up to two exceedances are allowed (chance of more ~1e-3) and none beyond 4.5.
    int beyond_three = 0;
    for (int state = 0; state < 5; ++state) {
        const auto rho = random_density_matrix(n, rng);
        PauliTomography t(rho);
        const auto paulis = all_paulis(n);
        std::vector<double> sum(paulis.size(), 0.0), sumsq(paulis.size(), 0.0);
        for (int r = 0; r < runs; ++r) {
            const auto res = t.run(copies, derive_seed(100 + state, {static_cast<std::uint64_t>(r)}));
            for (const auto& e : res.per_observable) {
                sum[e.observable.index()] += e.e_value;
                sumsq[e.observable.index()] += e.e_value * e.e_value;
            }
        }
        for (const auto& q : paulis) {
            if (q.is_identity()) continue;
            const double mean = sum[q.index()] / runs;
            const double var = sumsq[q.index()] / runs - mean * mean;
            const double bound = std::pow(3.0, q.weight()) / static_cast<double>(copies);
            const double se = std::sqrt(bound / runs);
            beyond_three += std::abs(mean - tr_with(rho, q)) > 3.0 * se;
            EXPECT_NEAR(mean, tr_with(rho, q), 4.5 * se) << q.str();
            EXPECT_LE(var, 1.2 * bound) << q.str();
        }
    }
    EXPECT_LE(beyond_three, 2);
}

TEST(Statistics, TraceDistanceWithinCauchySchwarzBound) {
    Rng rng = make_rng(41);
    for (int n = 1; n <= 3; ++n) {
        const auto rho = random_density_matrix(n, rng);
        PauliTomography t(rho);
        const std::size_t copies = 100 * static_cast<std::size_t>(std::pow(3, n));
        double ms = 0;
        const int runs = 500;
        for (int r = 0; r < runs; ++r) {
            const auto res = t.run(copies, derive_seed(7, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)}));
            const Eigen::MatrixXcd diff = res.estimate - rho.matrix();
            const double s1 = schatten_norm(diff, Schatten::One);
            ms += s1 * s1;
        }
        EXPECT_LE(std::sqrt(ms / runs), std::sqrt(std::pow(10.0, n) / static_cast<double>(copies)) * 1.05);
    }
}

TEST(Statistics, ProjectionDoesNotIncreaseErrorOnAverage) {
    Rng rng = make_rng(51);
    const auto rho = random_density_matrix(2, rng, 1);
    double raw = 0, proj = 0;
    for (int r = 0; r < 200; ++r) {
        const auto res = run_tomography(rho, 900, static_cast<std::uint64_t>(r), true);
        ASSERT_TRUE(res.projected.has_value());
        EXPECT_TRUE(res.projected->is_psd());
        raw += schatten_norm(Eigen::MatrixXcd(res.estimate - rho.matrix()), Schatten::One);
        proj += trace_distance(*res.projected, rho);
    }
    EXPECT_LE(proj, raw);
}
