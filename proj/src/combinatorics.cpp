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

#include "qtomo/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/information.hpp"

namespace qtomo {

namespace {

BigInt big_pow(int base, int exp) { return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exp)); }

// log10 of a positive integer too large for a double.
double log10_big(const BigInt& x) {
    const unsigned bits = boost::multiprecision::msb(x);
    const unsigned shift = bits > 960 ? bits - 960 : 0;
    return std::log10(static_cast<double>(BigInt(x >> shift))) + shift * std::log10(2.0);
}

Rational rational_pow(const Rational& base, int exp) {
    Rational r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

void require_n(int n, int max, const char* who) {
    if (n < 0 || n > max) throw ValidationError(std::string(who) + ": N out of range");
}

}  // namespace

BigInt binomial(int n, int k) {
    if (n < 0) throw ValidationError("binomial: negative n");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BoundReport binom_identity(int n) {
    require_n(n, 4096, "binom_identity");
    const BigInt lhs = big_pow(10, n);
    BigInt rhs = 0;
    for (int m = 0; m <= n; ++m) rhs += binomial(n, m) * big_pow(9, m);
    BoundReport r;
    r.name = "binom_identity";
    r.term("n", n);
    r.note("ten_pow_n", lhs.str());
    r.note("sum_binom_nine_pow", rhs.str());
    r.lhs = static_cast<double>(lhs);
    r.rhs = static_cast<double>(rhs);
    r.tol = 0.0;
    r.verdict = lhs == rhs;
    return r;
}

Rational tail_prob(int n, const Rational& p, int k) {
    require_n(n, 4096, "tail_prob");
    if (p < 0 || p > 1) throw ValidationError("tail_prob: p outside [0, 1]");
    Rational total = 0;
    const Rational q = 1 - p;
    for (int j = std::max(k, 0); j <= n; ++j) total += Rational(binomial(n, j)) * rational_pow(p, j) * rational_pow(q, n - j);
    return total;
}

BigInt degrees_of_freedom(int n, int w) {
    require_n(n, 4096, "degrees_of_freedom");
    BigInt total = 0;
    for (int m = std::max(w, 0); m <= n; ++m) total += binomial(n, m) * big_pow(3, m);
    return total;
}

namespace {

StirlingBracket bracket(int n, double frac, double h_arg) {
    if (n < 1) throw ValidationError("stirling_bounds: N must be >= 1");
    if (frac < 0.0 || frac > 0.5) throw ValidationError("stirling_bounds: frac must lie in [0, 1/2]");
    StirlingBracket b;
    b.n = n;
    b.frac = frac;
    b.m_max = static_cast<int>(std::floor(frac * n + 1e-12));
    for (int m = 0; m <= b.m_max; ++m) b.exact_sum += binomial(n, m);
    b.upper = std::exp2(n * binary_entropy(h_arg));
    b.lower = b.upper / std::sqrt(static_cast<double>(n));
    const double s = static_cast<double>(b.exact_sum);
    b.holds = b.lower <= s && s <= b.upper;
    return b;
}

}  // namespace

StirlingBracket stirling_bounds(int n, double frac) { return bracket(n, frac, frac); }

StirlingBracket stirling_bounds_effective(int n, double frac) {
    if (n < 1) throw ValidationError("stirling_bounds: N must be >= 1");
    const double f = std::floor(frac * n + 1e-12) / n;
    StirlingBracket b = bracket(n, frac, f);
    return b;
}

LowerBoundChain lower_bound_copies(int n, double eps, double c) {
    if (n < 1 || n > 300) throw ValidationError("lower_bound_copies: N must lie in [1, 300]");
    if (!(eps > 0.0) || eps > 1.0) throw ValidationError("lower_bound_copies: eps must lie in (0, 1]");
    if (!(c > 0.0)) throw ValidationError("lower_bound_copies: c must be positive");
    LowerBoundChain out;
    BoundReport& r = out.report;
    r.name = "lower_bound_copies";

    const int w = (9 * n + 9) / 10;
    const int low = n / 10;
    const double nd = static_cast<double>(n);
    const double d = std::exp2(nd);
    BigInt b_exact = 0;
    for (int m = 0; m <= low; ++m) b_exact += binomial(n, m);
    const BigInt ell_exact = degrees_of_freedom(n, w);
    const double b = static_cast<double>(b_exact);
    const double ell = static_cast<double>(ell_exact);
    const double h = binary_entropy(0.1);

    const double spectral = b / (ell * ell);
    const double step_nine = 2.0 / (std::pow(9.0, w) * b);
    const double step_stirling = std::sqrt(nd) / (std::pow(9.0, 0.9 * nd) * std::exp2(nd * h));
    const double step_ten = std::sqrt(nd) / std::pow(10.0, nd);
    const double conc_raw = d * std::exp(-std::pow(ell, 0.25));
    const double conc = std::min(1.0, conc_raw);
    const double c2e2 = c * c * eps * eps;

    const bool ell_vs_b = ell_exact >= big_pow(3, w) * b_exact;
    const bool s1 = spectral <= 0.5 * step_nine * (1.0 + 1e-12);
    const bool s2 = 0.5 * step_nine <= step_stirling * (1.0 + 1e-12);
    const bool s3 = std::abs(step_stirling - step_ten) <= 1e-9 * step_ten;

    // 9^{0.9N} 10^{0.1N} (10/9)^{0.9N} = 10^N: exact in rationals when N is a multiple of 10.
    bool identity = false;
    if (n % 10 == 0) {
        const Rational block = Rational(big_pow(9, 9)) * 10 * Rational(big_pow(10, 9), big_pow(9, 9));
        identity = rational_pow(block, n / 10) == Rational(big_pow(10, n));
        out.exact_identity_checked = true;
        r.note("identity_exact", identity ? "9^{0.9N} 10^{0.1N} (10/9)^{0.9N} == 10^N" : "mismatch");
    } else {
        const double lhs = 0.9 * nd * std::log(9.0) + 0.1 * nd * std::log(10.0) + 0.9 * nd * std::log(10.0 / 9.0);
        identity = std::abs(lhs - nd * std::log(10.0)) <= 1e-12 * nd * std::log(10.0);
        r.note("identity_exact", "N not a multiple of 10; checked in log space");
    }
    const double h_split = 0.1 * std::log2(10.0) + 0.9 * std::log2(10.0 / 9.0);
    const bool entropy_split = std::abs(h_split - h) <= 1e-15;

    // log10(x + y) from log10 x and a plain y that may underflow to zero.
    const auto log10_sum = [](double lx, double y) {
        if (y <= 0.0) return lx;
        const double ly = std::log10(y);
        const double hi = std::max(lx, ly);
        return hi + std::log10(std::pow(10.0, lx - hi) + std::pow(10.0, ly - hi));
    };
    const double log10_ten = 0.5 * std::log10(nd) - nd;
    const double log10_spectral =
        log10_big(b_exact) - 2.0 * log10_big(ell_exact);
    out.log10_n_lower = -std::log10(1600.0 * c2e2) - log10_sum(log10_ten, conc);
    out.log10_n_lower_exact = -std::log10(800.0 * c2e2) - log10_sum(log10_spectral, 2.0 * conc);
    out.n_lower = 1.0 / (1600.0 * c2e2 * (step_ten + conc));
    out.n_lower_exact = 1.0 / (800.0 * c2e2 * (spectral + 2.0 * conc));
    out.steps_hold = ell_vs_b && s1 && s2 && s3 && identity && entropy_split;

    r.term("n_qubits", nd).term("eps", eps).term("c", c).term("min_weight", w).term("d", d);
    r.term("ell", ell).term("binom_sum_low", b).term("h_tenth", h).term("h_tenth_split", h_split);
    r.term("spectral_over_ell_sq", spectral);
    r.term("two_over_nine_pow_w_B", step_nine);
    r.term("stirling_step", step_stirling);
    r.term("sqrt_n_over_ten_pow_n", step_ten);
    r.term("concentration_term_raw", conc_raw).term("concentration_term", conc);
    r.term("concentration_below_first_term", conc_raw < step_ten ? 1.0 : 0.0);
    r.term("step_ell_ge_3w_B", ell_vs_b).term("step_spectral", s1).term("step_stirling_ok", s2);
    r.term("step_simplify", s3).term("step_identity", identity).term("step_entropy_split", entropy_split);
    r.term("n_lower", out.n_lower).term("n_lower_exact_chain", out.n_lower_exact);
    r.term("log10_n_lower", out.log10_n_lower).term("log10_n_lower_exact_chain", out.log10_n_lower_exact);
    r.note("ell_exact", ell_exact.str());
    r.note("binom_sum_low_exact", b_exact.str());
    r.lhs = 0.01;
    r.rhs = 16.0 * out.n_lower * c2e2 * (step_ten + conc);
    r.tol = 1e-9;
    r.verdict = out.steps_hold;
    return out;
}

}  // namespace qtomo
