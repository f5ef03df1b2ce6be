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

// Acceptance runner: one PASS/FAIL line per criterion, sub-results indented
// below it. `acceptance 3 7` runs criteria 3 and 7; no arguments runs all.
// Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "qtomo/combinatorics.hpp"
#include "qtomo/experiment.hpp"
#include "qtomo/hard_instance.hpp"
#include "qtomo/information.hpp"
#include "qtomo/mic.hpp"
#include "qtomo/tomography.hpp"

using namespace qtomo;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void part(bool ok, std::string text) {
        pass = pass && ok;
        lines.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", std::move(text)));
    }
    void info(std::string text) { lines.push_back(fmt::format("     {}", std::move(text))); }
};

double pow3(int n) { return std::pow(3.0, n); }

// 1. Mean of d n ||rho_hat - rho_mm||_S2^2 inside [0.95, 1.0] 10^N for N = 1, 2, 3 at n = 100 3^N.
Outcome criterion1() {
    Outcome o;
    const std::map<int, std::size_t> reps{{1, 100000}, {2, 100000}, {3, 500000}};
    for (const auto& [n, r] : reps) {
        const DensityMatrix rho = maximally_mixed(n);
        const PauliTomography engine(rho);
        const auto copies = static_cast<std::size_t>(100 * pow3(n));
        const double d = std::ldexp(1.0, n);
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t k = 0; k < r; ++k) {
            const auto res = engine.run(copies, derive_seed(kSeed, {1, static_cast<std::uint64_t>(n), k}));
            const double v = d * static_cast<double>(copies) * (res.estimate - rho.matrix()).squaredNorm();
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / static_cast<double>(r);
        const double se = std::sqrt((sumsq / static_cast<double>(r) - mean * mean) / static_cast<double>(r));
        const double ratio = mean / std::pow(10.0, n);
        o.part(ratio >= 0.95 && ratio <= 1.0,
               fmt::format("N={} n={} reps={}: mean/10^N = {:.5f} (se {:.5f}); exact expectation (10^N - 1)/10^N = {:.5f}",
                           n, copies, r, ratio, se / std::pow(10.0, n), (std::pow(10.0, n) - 1) / std::pow(10.0, n)));
    }
    return o;
}

// 2. Var[E(Q)] <= 1.2 3^w(Q) / n for every Q at N = 3 over 2000 runs.
Outcome criterion2() {
    Outcome o;
    Rng rng = make_rng(kSeed, {2});
    const DensityMatrix rho = random_density_matrix(3, rng);
    const PauliTomography engine(rho);
    const std::size_t copies = 2700;
    const int runs = 2000;
    const auto paulis = all_paulis(3);
    std::vector<double> sum(paulis.size(), 0.0), sumsq(paulis.size(), 0.0);
    for (int r = 0; r < runs; ++r) {
        const auto res = engine.run(copies, derive_seed(kSeed, {2, static_cast<std::uint64_t>(r)}));
        for (const auto& e : res.per_observable) {
            sum[e.observable.index()] += e.e_value;
            sumsq[e.observable.index()] += e.e_value * e.e_value;
        }
    }
    int violations = 0;
    double worst = 0.0;
    for (const auto& q : paulis) {
        if (q.is_identity()) continue;
        const double mean = sum[q.index()] / runs;
        const double var = sumsq[q.index()] / runs - mean * mean;
        const double bound = pow3(q.weight()) / static_cast<double>(copies);
        worst = std::max(worst, var / bound);
        violations += var > 1.2 * bound;
    }
    o.part(violations == 0, fmt::format("N=3 n={} runs={}: {} of 63 observables above 1.2 bound; max Var/bound = {:.4f}",
                                        copies, runs, violations, worst));
    return o;
}

// 3. Slope of log mean HS error^2 vs log n at N = 2 is -1 +/- 0.1.
Outcome criterion3() {
    Outcome o;
    Rng rng = make_rng(kSeed, {3});
    const DensityMatrix rho = random_density_matrix(2, rng);
    const PauliTomography engine(rho);
    const std::vector<std::size_t> ns{900, 9000, 90000};
    const std::size_t reps = 300;
    std::vector<double> lx, ly;
    for (auto n : ns) {
        double s = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            s += (engine.run(n, derive_seed(kSeed, {3, n, r})).estimate - rho.matrix()).squaredNorm();
        }
        lx.push_back(std::log(static_cast<double>(n)));
        ly.push_back(std::log(s / static_cast<double>(reps)));
        o.info(fmt::format("n={}: mean HS^2 = {:.6e}", n, s / static_cast<double>(reps)));
    }
    const double slope = fit_slope(lx, ly);
    o.part(std::abs(slope + 1.0) <= 0.1, fmt::format("slope = {:.4f} (target -1 +/- 0.1)", slope));
    return o;
}

// 4. MIC toy identity for 50 random bases at alpha = 0.05, absolute error 1e-10.
Outcome criterion4() {
    Outcome o;
    Rng rng = make_rng(kSeed, {4});
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto r = mic_toy_identity(SingleQubitPovm::projective(random_unit_vector(rng)), 0.05);
        worst = std::max(worst, std::abs(r.lhs - 2 * 0.05 * 0.05));
    }
    o.part(worst <= 1e-10, fmt::format("50 bases: max |lhs - 2 alpha^2| = {:.3e}", worst));
    return o;
}

// 5. Spectral bound over 10^4 random product POVMs per (N, w); Pauli basis attains it at N = 1.
Outcome criterion5() {
    Outcome o;
    for (int n = 1; n <= 4; ++n) {
        for (int w = (n + 1) / 2; w <= n; ++w) {
            const auto r = certify_spectral_bound(10000, n, w, derive_seed(kSeed, {5, static_cast<std::uint64_t>(n),
                                                                                   static_cast<std::uint64_t>(w)}));
            o.part(r.verdict, fmt::format("N={} w={}: max = {:.12f}, bound = {}", n, w, r.lhs, r.rhs));
        }
    }
    const auto obs = enumerate_by_min_weight(1, 1);
    for (const char* b : {"X", "Y", "Z"}) {
        const double v = spectral_quantity(ProductPovm::pauli_basis(PauliString::parse(b)), obs);
        o.part(std::abs(v - 1.0) <= 1e-12, fmt::format("N=1 w=1 {} basis: value = {:.15f}, bound = 1", b, v));
    }
    return o;
}

// 6. 10^5 instances over N = 2..8 are PSD with unit trace; good-set frequency >= 99% at N >= 6.
Outcome criterion6() {
    Outcome o;
    const std::map<int, std::size_t> counts{{2, 25000}, {3, 25000}, {4, 20000}, {5, 15000},
                                            {6, 8000},  {7, 5000},  {8, 2000}};
    std::size_t total = 0, bad = 0;
    for (const auto& [n, count] : counts) {
        const auto p = HardInstanceParams::defaults(n, 0.1);
        std::size_t invalid = 0, good = 0;
        for (std::size_t t = 0; t < count; ++t) {
            const HardInstance h = build_instance(p, derive_seed(kSeed, {6, static_cast<std::uint64_t>(n), t}));
            const bool unit = std::abs(h.state.matrix().trace() - std::complex<double>(1.0, 0.0)) <= 1e-12;
            invalid += !(h.state.is_psd() && unit);
            good += is_good(h);
        }
        total += count;
        bad += invalid;
        const double freq = static_cast<double>(good) / static_cast<double>(count);
        o.info(fmt::format("N={} instances={}: invalid={}, good-set frequency={:.4f}", n, count, invalid, freq));
        if (n >= 6) {
            o.part(freq >= 0.99, fmt::format("N={}: good-set frequency {:.4f} >= 0.99 (trace distance is at most c eps = {} < eps)",
                                             n, freq, p.c * p.eps));
        }
    }
    o.part(bad == 0 && total == 100000, fmt::format("{} instances, {} not PSD or not unit trace", total, bad));
    return o;
}

// 7. Slope of log median ||W||_op against log sqrt(ell / d) over N = 3..8 is 1 +/- 0.15.
Outcome criterion7() {
    Outcome o;
    std::vector<double> lx, ly;
    for (int n = 3; n <= 8; ++n) {
        const auto p = HardInstanceParams::defaults(n, 0.1);
        const auto s = opnorm_concentration_sweep(p, 200, derive_seed(kSeed, {7, static_cast<std::uint64_t>(n)}));
        lx.push_back(std::log(s.sigma));
        ly.push_back(std::log(s.median_opnorm));
        o.info(fmt::format("N={} ell={}: median ||W|| = {:.5f}, sqrt(ell/d) = {:.5f}, median C = {:.4f}", n, s.ell,
                           s.median_opnorm, s.sigma, s.median_C));
    }
    const double slope = fit_slope(lx, ly);
    o.part(std::abs(slope - 1.0) <= 0.15, fmt::format("slope = {:.4f} (target 1 +/- 0.15)", slope));
    return o;
}

// 8. Hamming separation on 10^3 pairs per N = 2, 3, 4 with an empirically calibrated C.
Outcome criterion8() {
    Outcome o;
    for (int n = 2; n <= 4; ++n) {
        const auto p = HardInstanceParams::defaults(n, 0.1);
        const auto cal = opnorm_concentration_sweep(p, 2000, derive_seed(kSeed, {8, static_cast<std::uint64_t>(n), 0}));
        const double C = cal.q999_C;
        std::size_t checked = 0, violations = 0, skipped = 0;
        for (std::uint64_t t = 0; checked < 1000; ++t) {
            const auto h = build_instance(p, derive_seed(kSeed, {8, static_cast<std::uint64_t>(n), 1, t}));
            if (!within_concentration(h, C)) {
                ++skipped;
                continue;
            }
            const auto zhat = random_signs(p.ell(), derive_seed(kSeed, {8, static_cast<std::uint64_t>(n), 2, t}));
            violations += !hamming_separation_check(h, zhat, C).holds;
            ++checked;
        }
        o.part(violations == 0, fmt::format("N={} C(99.9%)={:.4f}: {} pairs, {} violations ({} draws outside the concentration event)",
                                            n, C, checked, violations, skipped));
    }
    return o;
}

// 9. Exact identity for N <= 64; Stirling bracket for N in 10..60; degrees of freedom O(d^1.9) for N <= 40.
Outcome criterion9() {
    Outcome o;
    int identity_fail = 0;
    for (int n = 1; n <= 64; ++n) identity_fail += !binom_identity(n).verdict;
    o.part(identity_fail == 0, fmt::format("10^N = sum C(N,m) 9^m exact for N = 1..64 ({} failures)", identity_fail));
    std::string literal_fail, effective_fail;
    for (int n = 10; n <= 60; ++n) {
        if (!stirling_bounds(n, 0.1).holds) literal_fail += fmt::format(" {}", n);
        if (!stirling_bounds_effective(n, 0.1).holds) effective_fail += fmt::format(" {}", n);
    }
    o.part(literal_fail.empty(), fmt::format("Stirling bracket 2^(N h(1/10))/sqrt(N) <= sum <= 2^(N h(1/10)); fails at N ={}",
                                             literal_fail.empty() ? " none" : literal_fail));
    o.info(fmt::format("with h(floor(N/10)/N) in place of h(1/10) the bracket fails at N ={}",
                       effective_fail.empty() ? " none" : effective_fail));
    double max_ratio = 0.0, last = 0.0;
    for (int n = 1; n <= 40; ++n) {
        last = static_cast<double>(degrees_of_freedom(n, (9 * n + 9) / 10)) / std::pow(2.0, 1.9 * n);
        max_ratio = std::max(max_ratio, last);
    }
    o.part(max_ratio <= 1.0, fmt::format("dof(N, ceil(9N/10)) / d^1.9: max over N <= 40 = {:.4f}, at N = 40 = {:.3e}",
                                         max_ratio, last));
    return o;
}

// 10. Exact MI at N = 1 for n <= 6 below the upper bound for three strategies; 1 - h(0.41) >= 1/100.
Outcome criterion10() {
    Outcome o;
    const auto p = HardInstanceParams::defaults(1, 0.1);
    const std::vector<std::pair<std::string, MeasurementStrategy>> strategies{
        {"z", constant_strategy(ProductPovm::pauli_basis(PauliString::parse("Z")))},
        {"uniform", uniform_random_pauli_strategy(1)},
        {"adaptive", adaptive_flip_strategy()}};
    for (const auto& [name, s] : strategies) {
        bool all = true;
        double worst = 0.0;
        for (std::size_t n = 1; n <= 6; ++n) {
            const auto r = mi_experiment(p, s, n);
            all = all && r.report.verdict;
            worst = std::max(worst, r.average_mi / r.report.rhs);
        }
        o.part(all, fmt::format("strategy {}: average MI <= bound for n = 1..6, max ratio {:.4f}", name, worst));
    }
    const double v = 1.0 - binary_entropy(0.41);
    o.part(v >= 0.01, fmt::format("1 - h(0.41) = {:.6f} >= 0.01", v));
    return o;
}

// 11. 2 TV^2 <= KL <= chi^2 on 10^4 random pairs.
Outcome criterion11() {
    Outcome o;
    Rng rng = make_rng(kSeed, {11});
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t k = 2 + static_cast<std::size_t>(rng() % 19);
        const auto d = divergences(DiscreteDistribution::random(k, rng), DiscreteDistribution::random(k, rng));
        violations += !(2 * d.tv * d.tv <= d.kl + 1e-12 && d.kl <= d.chi2 + 1e-12);
    }
    o.part(violations == 0, fmt::format("10000 pairs: {} violations", violations));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4,
                                                    criterion5, criterion6, criterion7, criterion8,
                                                    criterion9, criterion10, criterion11};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(all.size())) {
            fmt::print(stderr, "unknown criterion '{}'\n", argv[i]);
            return 2;
        }
        selected.push_back(k);
    }
    if (selected.empty()) {
        for (int k = 1; k <= static_cast<int>(all.size()); ++k) selected.push_back(k);
    }
    bool ok = true;
    for (int k : selected) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome out = all[static_cast<std::size_t>(k - 1)]();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        fmt::print("criterion {}: {} ({:.1f} s)\n", k, out.pass ? "PASS" : "FAIL", secs);
        for (const auto& line : out.lines) fmt::print("  {}\n", line);
        std::fflush(stdout);
        ok = ok && out.pass;
    }
    return ok ? 0 : 1;
}
