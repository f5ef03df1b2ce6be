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

#include "qtomo/hard_instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/random.hpp"

namespace qtomo {

namespace {

std::uint64_t binom_u64(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

struct Spectrum {
    double opnorm;
    double trace_norm;
};

Spectrum spectrum_of(const Eigen::MatrixXcd& w) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues().cwiseAbs();
    return {ev.maxCoeff(), ev.sum()};
}

double clip_factor(double delta_opnorm, double d) {
    if (delta_opnorm == 0.0) return 1.0;
    return std::min(1.0, 1.0 / (2.0 * d * delta_opnorm));
}

}  // namespace

HardInstanceParams HardInstanceParams::defaults(int n_qubits, double eps) {
    HardInstanceParams p;
    p.n_qubits = n_qubits;
    p.min_weight = (9 * n_qubits + 9) / 10;
    p.eps = eps;
    return p;
}

std::size_t HardInstanceParams::ell() const {
    std::uint64_t total = 0;
    std::uint64_t pow3 = 1;
    for (int m = 0; m <= n_qubits; ++m) {
        if (m >= min_weight) total += binom_u64(n_qubits, m) * pow3;
        pow3 *= 3;
    }
    return static_cast<std::size_t>(total);
}

bool HardInstanceParams::meets_ell_condition() const {
    return static_cast<double>(ell()) >= std::pow(2.0, 1.5 * n_qubits);
}

bool HardInstanceParams::in_bernstein_regime() const {
    return eps <= 1.0 / std::log(std::ldexp(1.0, n_qubits));
}

void HardInstanceParams::validate() const {
    if (n_qubits < 1 || n_qubits > kDefaultMaterializeCap) {
        throw SizeError("hard instance: N = " + std::to_string(n_qubits) + " outside [1, " +
                        std::to_string(kDefaultMaterializeCap) + "]");
    }
    if (min_weight < 1 || min_weight > n_qubits) {
        throw ValidationError("hard instance: min_weight must be in [1, N]");
    }
    if (!(c > 0.0)) throw ValidationError("hard instance: c must be positive");
    if (!(eps >= 0.0 && eps <= 1.0)) throw ValidationError("hard instance: eps must be in [0, 1]");
    const double d = std::ldexp(1.0, n_qubits);
    if (static_cast<double>(ell()) > d * d - 1.0) throw ValidationError("hard instance: ell > d^2 - 1");
}

std::vector<PauliString> perturbation_directions(const HardInstanceParams& p) {
    p.validate();
    return enumerate_by_min_weight(p.n_qubits, p.min_weight);
}

Eigen::MatrixXcd signed_pauli_sum(std::span<const PauliString> directions, std::span<const std::int8_t> z) {
    if (directions.size() != z.size()) throw ValidationError("signed_pauli_sum: sign vector length mismatch");
    if (directions.empty()) throw ValidationError("signed_pauli_sum: no directions");
    const int n = directions.front().n_qubits();
    if (n > kDefaultMaterializeCap) throw SizeError("signed_pauli_sum: N exceeds materialization cap");
    const Eigen::Index d = Eigen::Index{1} << n;
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < directions.size(); ++i) accumulate(directions[i], norm * z[i], w);
    return w;
}

SignVector random_signs(std::size_t ell, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    SignVector z(ell);
    for (auto& s : z) s = static_cast<std::int8_t>(random_sign(rng));
    return z;
}

double HardInstance::scale() const {
    const double d = std::ldexp(1.0, params.n_qubits);
    return params.c * params.eps / std::sqrt(d * static_cast<double>(z.size()));
}

double HardInstance::delta_opnorm() const { return scale() * w_opnorm; }

double HardInstance::normalized_constant() const {
    const double d = std::ldexp(1.0, params.n_qubits);
    return w_opnorm / std::sqrt(static_cast<double>(z.size()) / d);
}

double HardInstance::trace_distance_to_mixed() const { return clip * scale() * w_trace_norm; }

HardInstance build_instance(const HardInstanceParams& p, std::span<const PauliString> directions, SignVector z) {
    p.validate();
    if (directions.size() != p.ell()) throw ValidationError("build_instance: direction list does not match ell");
    if (z.size() != directions.size()) {
        throw ValidationError("build_instance: sign vector has length " + std::to_string(z.size()) + ", expected " +
                              std::to_string(directions.size()));
    }
    for (auto s : z) {
        if (s != 1 && s != -1) throw ValidationError("build_instance: signs must be +-1");
    }
    Eigen::MatrixXcd w = signed_pauli_sum(directions, z);
    const Spectrum sp = spectrum_of(w);
    const double d = static_cast<double>(w.rows());
    const double scale = p.c * p.eps / std::sqrt(d * static_cast<double>(z.size()));
    const double clip = clip_factor(scale * sp.opnorm, d);
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Identity(w.rows(), w.cols()) / d + (clip * scale) * w;
    return HardInstance{p, std::move(z), clip, sp.opnorm, sp.trace_norm, DensityMatrix::from_matrix(std::move(sigma))};
}

HardInstance build_instance(const HardInstanceParams& p, SignVector z) {
    const auto dirs = perturbation_directions(p);
    return build_instance(p, dirs, std::move(z));
}

HardInstance build_instance(const HardInstanceParams& p, std::uint64_t seed) {
    return build_instance(p, random_signs(p.ell(), seed));
}

bool is_good(const HardInstance& h) { return h.trace_distance_to_mixed() >= h.params.eps; }

bool within_concentration(const HardInstance& h, double C) { return h.normalized_constant() <= C; }

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return NAN;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

ConcentrationStats opnorm_concentration_sweep(const HardInstanceParams& p, std::size_t trials, std::uint64_t seed,
                                              std::vector<double> candidate_C) {
    if (trials < 1) throw ValidationError("opnorm_concentration_sweep: trials must be >= 1");
    const auto dirs = perturbation_directions(p);
    const double d = std::ldexp(1.0, p.n_qubits);
    const double ell = static_cast<double>(dirs.size());
    const double sqrt_ratio = std::sqrt(ell / d);
    const double scale = p.c * p.eps / std::sqrt(d * ell);

    ConcentrationStats st;
    st.params = p;
    st.ell = dirs.size();
    st.rows.reserve(trials);
    std::vector<double> cs;
    std::vector<double> opnorms;
    cs.reserve(trials);
    std::size_t good = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t s = derive_seed(seed, {t});
        const auto z = random_signs(dirs.size(), s);
        const Spectrum sp = spectrum_of(signed_pauli_sum(dirs, z));
        SweepRow row;
        row.trial = t;
        row.seed = s;
        row.opnorm = sp.opnorm;
        row.normalized_C = sp.opnorm / sqrt_ratio;
        row.clip = clip_factor(scale * sp.opnorm, d);
        row.trace_dist = row.clip * scale * sp.trace_norm;
        row.is_good = row.trace_dist >= p.eps;
        good += row.is_good ? 1 : 0;
        st.min_clip = std::min(st.min_clip, row.clip);
        cs.push_back(row.normalized_C);
        opnorms.push_back(row.opnorm);
        st.rows.push_back(row);
    }
    double sum = 0.0;
    for (double c : cs) sum += c;
    st.mean_C = sum / static_cast<double>(trials);
    st.median_C = quantile(cs, 0.5);
    st.q90_C = quantile(cs, 0.9);
    st.q99_C = quantile(cs, 0.99);
    st.q999_C = quantile(cs, 0.999);
    st.max_C = *std::max_element(cs.begin(), cs.end());
    st.median_opnorm = quantile(opnorms, 0.5);
    for (double cand : candidate_C) {
        const auto above = std::count_if(cs.begin(), cs.end(), [cand](double c) { return c > cand; });
        st.exceed_fraction.emplace_back(cand, static_cast<double>(above) / static_cast<double>(trials));
    }
    st.good_fraction = static_cast<double>(good) / static_cast<double>(trials);
    st.bernstein_scale = sqrt_ratio * std::log(d);
    st.sigma = sqrt_ratio;
    st.v = 1.0;
    st.R = 1.0 / std::sqrt(d);
    st.free_bound = 2.0 * sqrt_ratio;
    return st;
}

HammingReport hamming_separation_check(const HardInstance& h, std::span<const std::int8_t> zhat, double C_est) {
    if (zhat.size() != h.z.size()) {
        throw ValidationError("hamming_separation_check: zhat has length " + std::to_string(zhat.size()) +
                              ", expected " + std::to_string(h.z.size()));
    }
    if (!within_concentration(h, C_est)) {
        throw ValidationError("hamming_separation_check: z is outside the concentration event for C = " +
                              std::to_string(C_est));
    }
    const HardInstance other = build_instance(h.params, SignVector(zhat.begin(), zhat.end()));
    HammingReport r;
    for (std::size_t i = 0; i < zhat.size(); ++i) r.hamming += (zhat[i] != h.z[i]) ? 1 : 0;
    r.lhs = schatten_norm(h.state.matrix() - other.state.matrix(), Schatten::One);
    r.rhs = h.params.c * h.params.eps * static_cast<double>(r.hamming) / (2.0 * C_est * static_cast<double>(zhat.size()));
    r.holds = r.lhs >= r.rhs;
    return r;
}

}  // namespace qtomo
