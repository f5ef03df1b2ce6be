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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/pauli.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

struct BasisGroup {
    PauliString basis;
    std::size_t copies = 0;
};

/// Even split of n copies over the 3^N Pauli bases (lexicographic order);
/// the n mod 3^N remainder goes one each to the first bases.
std::vector<BasisGroup> allocate_copies(int n_qubits, std::size_t n);

/// Outcomes from one Pauli basis. Each entry is a computational-basis style
/// index: bit (N - 1 - q) set means qubit q gave -1.
struct BasisSamples {
    PauliString basis;
    std::vector<std::size_t> outcomes;
};

struct ObservableEstimate {
    PauliString observable;
    double e_value = 0.0;
    std::size_t sample_count = 0;
};

/// Mean of prod_{i in supp Q} x_i over every sample of every basis that agrees with Q on its support.
ObservableEstimate estimate_observable(const PauliString& q, std::span<const BasisSamples> data);

/// Estimates for all 4^N - 1 non-identity observables at once (Walsh-Hadamard
/// transform of each basis histogram). Same values as estimate_observable.
std::vector<ObservableEstimate> estimate_all(std::span<const BasisSamples> data);

struct TomographyResult {
    Eigen::MatrixXcd estimate;
    std::vector<ObservableEstimate> per_observable;
    std::size_t copies_used = 0;
    std::optional<DensityMatrix> projected;
};

/// rho_hat = I / d + sum_Q E(Q) Q / d. Needs exactly one estimate per non-identity Q; PSD is not enforced.
TomographyResult reconstruct(std::span<const ObservableEstimate> estimates, int n_qubits);

/// Full Pauli-measurement pipeline for a fixed state. Per-basis outcome
/// distributions are computed once; every run draws basis b from the
/// substream (seed, b), so results do not depend on evaluation order.
class PauliTomography {
   public:
    explicit PauliTomography(const DensityMatrix& rho);

    int n_qubits() const { return n_qubits_; }
    const std::vector<PauliString>& bases() const { return bases_; }

    std::vector<BasisSamples> sample(std::size_t n, std::uint64_t seed) const;
    TomographyResult run(std::size_t n, std::uint64_t seed, bool project = false) const;

   private:
    int n_qubits_;
    std::vector<PauliString> bases_;
    std::vector<std::vector<double>> cdfs_;
};

TomographyResult run_tomography(const DensityMatrix& rho, std::size_t n, std::uint64_t seed, bool project = false);

}  // namespace qtomo
