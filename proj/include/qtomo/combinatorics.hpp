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

#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qtomo/report.hpp"

namespace qtomo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(int n, int k);

/// 10^N == sum_m C(N, m) 9^m, checked in exact arithmetic.
BoundReport binom_identity(int n);

/// Pr[Bin(n, p) >= k] as an exact rational.
Rational tail_prob(int n, const Rational& p, int k);

/// sum_{m = w}^{N} C(N, m) 3^m: the number of Pauli strings of weight >= w.
BigInt degrees_of_freedom(int n, int w);

/// sum_{m <= floor(frac N)} C(N, m) against 2^{N h(frac)} / sqrt(N) and 2^{N h(frac)}.
struct StirlingBracket {
    int n = 0;
    double frac = 0.0;
    int m_max = 0;
    double lower = 0.0;
    double upper = 0.0;
    BigInt exact_sum;
    bool holds = false;
};

StirlingBracket stirling_bounds(int n, double frac);
/// Same bracket with frac replaced by floor(frac N) / N.
StirlingBracket stirling_bounds_effective(int n, double frac);

/// The chain 1/100 <= 8 n c^2 eps^2 (B / ell^2 + 2 P) <= ... <= 16 n c^2 eps^2 (sqrt(N) / 10^N + P)
/// with B = sum_{m <= floor(N/10)} C(N, m), w = ceil(9N/10) and P = min(1, d exp(-ell^{1/4})).
struct LowerBoundChain {
    double n_lower = 0.0;        ///< 1 / (1600 c^2 eps^2 (sqrt(N) / 10^N + P))
    double n_lower_exact = 0.0;  ///< 1 / (800 c^2 eps^2 (B / ell^2 + 2 P))
    /// Base-10 logarithms from log-space arithmetic; the plain values overflow past N ~ 270.
    double log10_n_lower = 0.0;
    double log10_n_lower_exact = 0.0;
    bool steps_hold = false;
    bool exact_identity_checked = false;  ///< 9^{0.9N} 10^{0.1N} (10/9)^{0.9N} = 10^N in rationals (N % 10 == 0)
    BoundReport report;
};

LowerBoundChain lower_bound_copies(int n, double eps, double c = 1.0 / 200.0);

}  // namespace qtomo
