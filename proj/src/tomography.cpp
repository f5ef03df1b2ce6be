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

#include "qtomo/tomography.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/random.hpp"

namespace qtomo {

std::vector<BasisGroup> allocate_copies(int n_qubits, std::size_t n) {
    if (n_qubits < 1 || n_qubits > 15) throw SizeError("allocate_copies: N out of range");
    auto bases = all_pauli_bases(n_qubits);
    const std::size_t groups = bases.size();
    if (n < groups) {
        throw InsufficientCopiesError("need at least 3^N = " + std::to_string(groups) + " copies, got " +
                                      std::to_string(n));
    }
    std::vector<BasisGroup> out;
    out.reserve(groups);
    const std::size_t base = n / groups;
    const std::size_t extra = n % groups;
    for (std::size_t b = 0; b < groups; ++b) out.push_back({bases[b], base + (b < extra ? 1 : 0)});
    return out;
}

ObservableEstimate estimate_observable(const PauliString& q, std::span<const BasisSamples> data) {
    if (q.is_identity()) throw ValidationError("estimate_observable: identity has no estimate");
    const std::uint64_t support = q.support_mask();
    long long sign_sum = 0;
    std::size_t count = 0;
    std::size_t matching = 0;
    for (const auto& s : data) {
        if (s.basis.n_qubits() != q.n_qubits()) throw ValidationError("estimate_observable: qubit count mismatch");
        if (s.basis.restricted(support) != q) continue;
        ++matching;
        for (auto x : s.outcomes) sign_sum += (std::popcount(x & support) & 1) ? -1 : 1;
        count += s.outcomes.size();
    }
    const std::size_t expected = static_cast<std::size_t>(std::pow(3, q.n_qubits() - q.weight()));
    if (matching < expected || count == 0) {
        throw ValidationError("estimate_observable: missing basis data for " + q.str() + " (" +
                              std::to_string(matching) + " of " + std::to_string(expected) + " bases)");
    }
    return {q, static_cast<double>(sign_sum) / static_cast<double>(count), count};
}

namespace {

// In-place Walsh-Hadamard: h[S] = sum_x h_in[x] (-1)^{|x & S|}.
void walsh_hadamard(std::vector<long long>& h) {
    for (std::size_t len = 1; len < h.size(); len <<= 1) {
        for (std::size_t i = 0; i < h.size(); i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const long long a = h[j];
                const long long b = h[j + len];
                h[j] = a + b;
                h[j + len] = a - b;
            }
        }
    }
}

}  // namespace

std::vector<ObservableEstimate> estimate_all(std::span<const BasisSamples> data) {
    if (data.empty()) throw ValidationError("estimate_all: no data");
    const int n = data.front().basis.n_qubits();
    if (n > 12) throw SizeError("estimate_all: N too large");
    const std::size_t d = std::size_t{1} << n;
    const std::size_t n_obs = std::size_t{1} << (2 * n);
    std::vector<long long> sums(n_obs, 0);
    std::vector<std::size_t> counts(n_obs, 0);
    std::vector<long long> hist(d);
    for (const auto& s : data) {
        if (s.basis.n_qubits() != n || s.basis.weight() != n) throw ValidationError("estimate_all: invalid basis");
        std::fill(hist.begin(), hist.end(), 0);
        for (auto x : s.outcomes) {
            if (x >= d) throw ValidationError("estimate_all: outcome index out of range");
            ++hist[x];
        }
        walsh_hadamard(hist);
        for (std::size_t mask = 1; mask < d; ++mask) {
            const auto idx = s.basis.restricted(mask).index();
            sums[idx] += hist[mask];
            counts[idx] += s.outcomes.size();
        }
    }
    std::vector<ObservableEstimate> out;
    out.reserve(n_obs - 1);
    for (std::size_t idx = 1; idx < n_obs; ++idx) {
        auto q = PauliString::from_index(n, idx);
        if (counts[idx] == 0) throw ValidationError("estimate_all: missing basis data for " + q.str());
        out.push_back({q, static_cast<double>(sums[idx]) / static_cast<double>(counts[idx]), counts[idx]});
    }
    return out;
}

TomographyResult reconstruct(std::span<const ObservableEstimate> estimates, int n_qubits) {
    if (n_qubits < 1 || n_qubits > kDefaultMaterializeCap) throw SizeError("reconstruct: N out of range");
    const std::size_t n_obs = std::size_t{1} << (2 * n_qubits);
    std::vector<bool> seen(n_obs, false);
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
    for (const auto& e : estimates) {
        if (e.observable.n_qubits() != n_qubits) throw ValidationError("reconstruct: qubit count mismatch");
        if (e.observable.is_identity()) throw ValidationError("reconstruct: identity must not be estimated");
        const auto idx = e.observable.index();
        if (seen[idx]) throw ValidationError("reconstruct: duplicate estimate for " + e.observable.str());
        seen[idx] = true;
        accumulate(e.observable, e.e_value / static_cast<double>(d), rho);
    }
    for (std::size_t idx = 1; idx < n_obs; ++idx) {
        if (!seen[idx]) {
            throw ValidationError("reconstruct: missing estimate for " + PauliString::from_index(n_qubits, idx).str());
        }
    }
    TomographyResult r;
    r.estimate = std::move(rho);
    r.per_observable.assign(estimates.begin(), estimates.end());
    return r;
}

PauliTomography::PauliTomography(const DensityMatrix& rho)
    : n_qubits_(rho.n_qubits()), bases_(all_pauli_bases(rho.n_qubits())) {
    cdfs_.reserve(bases_.size());
    for (const auto& b : bases_) cdfs_.push_back(cumulative(outcome_distribution(ProductPovm::pauli_basis(b), rho)));
}

std::vector<BasisSamples> PauliTomography::sample(std::size_t n, std::uint64_t seed) const {
    auto groups = allocate_copies(n_qubits_, n);
    std::vector<BasisSamples> data;
    data.reserve(groups.size());
    for (std::size_t b = 0; b < groups.size(); ++b) {
        Rng rng = make_rng(seed, {b});
        BasisSamples s{groups[b].basis, {}};
        s.outcomes.reserve(groups[b].copies);
        for (std::size_t k = 0; k < groups[b].copies; ++k) s.outcomes.push_back(sample_from_cdf(cdfs_[b], rng));
        data.push_back(std::move(s));
    }
    return data;
}

TomographyResult PauliTomography::run(std::size_t n, std::uint64_t seed, bool project) const {
    auto data = sample(n, seed);
    auto estimates = estimate_all(data);
    TomographyResult r = reconstruct(estimates, n_qubits_);
    r.copies_used = n;
    if (project) r.projected = project_to_density(r.estimate);
    return r;
}

TomographyResult run_tomography(const DensityMatrix& rho, std::size_t n, std::uint64_t seed, bool project) {
    return PauliTomography(rho).run(n, seed, project);
}

}  // namespace qtomo
