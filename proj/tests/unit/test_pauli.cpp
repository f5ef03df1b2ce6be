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

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qtomo/errors.hpp"
#include "qtomo/pauli.hpp"
#include "qtomo/random.hpp"

using namespace qtomo;
using qtomo::testing::all_strings;
using qtomo::testing::pauli_ref;

TEST(PauliString, WeightExamples) {
    EXPECT_EQ(weight(PauliString::parse("XIZ")), 2);
    EXPECT_EQ(weight(PauliString::parse("II")), 0);
    EXPECT_EQ(weight(PauliString::parse("YYY")), 3);
    EXPECT_TRUE(PauliString::parse("II").is_identity());
}

TEST(PauliString, ParsePrintRoundTrip) {
    for (const auto& s : all_strings(3)) EXPECT_EQ(PauliString::parse(s).str(), s);
    EXPECT_THROW(PauliString::parse("XQ"), ValidationError);
    EXPECT_THROW(PauliString::parse(""), ValidationError);
}

TEST(PauliString, IndexRoundTripAndOrder) {
    const auto all = all_paulis(3);
    ASSERT_EQ(all.size(), 64u);
    const auto strings = all_strings(3);
    for (std::uint64_t i = 0; i < all.size(); ++i) {
        EXPECT_EQ(all[i].str(), strings[i]);
        EXPECT_EQ(all[i].index(), i);
        EXPECT_EQ(PauliString::from_index(3, i), all[i]);
    }
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}

TEST(Materialize, Examples) {
    const Eigen::MatrixXcd z = materialize(PauliString::parse("Z"));
    EXPECT_EQ(z, (Eigen::Matrix2cd() << 1, 0, 0, -1).finished());
    const Eigen::MatrixXcd ii = materialize(PauliString::parse("II"), true);
    EXPECT_TRUE(ii.isApprox(Eigen::MatrixXcd::Identity(4, 4) / 2.0));
    EXPECT_EQ(materialize(PauliString::parse("XZ"))(0, 2), std::complex<double>(1, 0));
}

TEST(Materialize, MatchesKroneckerOracle) {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& s : all_strings(n)) {
            const Eigen::MatrixXcd p = materialize(PauliString::parse(s));
            EXPECT_EQ((p - pauli_ref(s)).norm(), 0.0) << s;
            EXPECT_LT((p * p - Eigen::MatrixXcd::Identity(p.rows(), p.cols())).norm(), 1e-15);
            EXPECT_LT((p - p.adjoint()).norm(), 1e-15);
            const Eigen::MatrixXcd v = materialize(PauliString::parse(s), true);
            EXPECT_NEAR((v * v).trace().real(), 1.0, 1e-14);
            EXPECT_NEAR(v.norm(), 1.0, 1e-14);
        }
    }
}

TEST(Materialize, CapEnforced) {
    EXPECT_THROW(materialize(PauliString(13)), SizeError);
    EXPECT_THROW(materialize(PauliString(3), false, 2), SizeError);
}

TEST(Materialize, AccumulateAndTraceWith) {
    Rng rng = make_rng(7);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(8, 8);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
    for (const auto& s : all_strings(3)) {
        const auto p = PauliString::parse(s);
        EXPECT_NEAR(std::abs(trace_with(p, a) - (a * pauli_ref(s)).trace()), 0.0, 1e-12) << s;
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(8, 8);
        accumulate(p, {0.5, -1.5}, t);
        EXPECT_LT((t - std::complex<double>(0.5, -1.5) * pauli_ref(s)).norm(), 1e-14);
    }
}

TEST(HsInner, Examples) {
    EXPECT_EQ(hs_inner(PauliString::parse("X"), PauliString::parse("X")), 2.0);
    EXPECT_EQ(hs_inner(PauliString::parse("X"), PauliString::parse("Y")), 0.0);
    EXPECT_EQ(hs_inner(PauliString::parse("XZ"), PauliString::parse("XZ")), 4.0);
    EXPECT_THROW(hs_inner(PauliString::parse("X"), PauliString::parse("XX")), ValidationError);
}

TEST(HsInner, OrthogonalityAgreesWithMaterializedTrace) {
    for (int n = 1; n <= 4; ++n) {
        const auto strings = all_strings(n);
        std::vector<Eigen::MatrixXcd> mats;
        for (const auto& s : strings) mats.push_back(pauli_ref(s));
        for (std::size_t i = 0; i < strings.size(); ++i) {
            for (std::size_t j = 0; j < strings.size(); ++j) {
                const double sym = hs_inner(PauliString::parse(strings[i]), PauliString::parse(strings[j]));
                const auto dense = (mats[i].adjoint() * mats[j]).trace();
                ASSERT_EQ(sym, dense.real()) << strings[i] << " " << strings[j];
                ASSERT_EQ(dense.imag(), 0.0);
            }
        }
    }
}

TEST(Completeness, RandomHermitianReconstructs) {
    Rng rng = make_rng(11);
    std::normal_distribution<double> g;
    for (int n = 1; n <= 4; ++n) {
        const Eigen::Index d = Eigen::Index{1} << n;
        Eigen::MatrixXcd a(d, d);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
        a = (a + a.adjoint()).eval();
        Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(d, d);
        for (const auto& p : all_paulis(n)) {
            const Eigen::MatrixXcd v = materialize(p, true);
            rebuilt += (a * v).trace() * v;
        }
        EXPECT_LT((rebuilt - a).norm(), 1e-10);
    }
}

TEST(EnumerateByMinWeight, Examples) {
    const auto one = enumerate_by_min_weight(1, 1);
    ASSERT_EQ(one.size(), 3u);
    EXPECT_EQ(one[0].str(), "X");
    EXPECT_EQ(one[1].str(), "Y");
    EXPECT_EQ(one[2].str(), "Z");
    EXPECT_EQ(enumerate_by_min_weight(2, 2).size(), 9u);
    EXPECT_EQ(enumerate_by_min_weight(3, 2).size(), 54u);
    EXPECT_THROW(enumerate_by_min_weight(2, 3), ValidationError);
    EXPECT_THROW(enumerate_by_min_weight(2, -1), ValidationError);
}

TEST(EnumerateByMinWeight, MatchesFilteredBruteForce) {
    for (int n = 1; n <= 5; ++n) {
        for (int w = 0; w <= n; ++w) {
            std::vector<std::string> expected;
            for (const auto& s : all_strings(n)) {
                if (qtomo::testing::weight_ref(s) >= w) expected.push_back(s);
            }
            std::stable_sort(expected.begin(), expected.end(), [](const std::string& a, const std::string& b) {
                return qtomo::testing::weight_ref(a) > qtomo::testing::weight_ref(b);
            });
            const auto got = enumerate_by_min_weight(n, w);
            ASSERT_EQ(got.size(), expected.size()) << n << " " << w;
            for (std::size_t i = 0; i < got.size(); ++i) ASSERT_EQ(got[i].str(), expected[i]);
            double count = 0;
            for (int m = w; m <= n; ++m) count += qtomo::testing::binom_ref(n, m) * std::pow(3.0, m);
            EXPECT_EQ(static_cast<double>(got.size()), count);
        }
    }
}

TEST(PauliBases, AllWeightN) {
    const auto b = all_pauli_bases(2);
    ASSERT_EQ(b.size(), 9u);
    EXPECT_EQ(b.front().str(), "XX");
    EXPECT_EQ(b.back().str(), "ZZ");
    for (const auto& p : b) EXPECT_EQ(p.weight(), 2);
}
