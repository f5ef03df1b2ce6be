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
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/pauli.hpp"
#include "qtomo/random.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

inline constexpr double kPovmTol = 1e-12;

/// One outcome of a single-qubit POVM, M_o = alpha (I + beta . (X, Y, Z)).
struct PovmOutcome {
    double alpha = 0.0;
    Eigen::Vector3d beta = Eigen::Vector3d::Zero();
};

/// Finite-outcome single-qubit POVM in the (alpha, beta) parameterization.
///
/// Invariants checked at construction: sum alpha = 1, sum alpha beta = 0,
/// |beta| <= 1 for each outcome, alpha in [0, 1]. Together these give
/// PSD elements summing to I_2.
class SingleQubitPovm {
   public:
    explicit SingleQubitPovm(std::vector<PovmOutcome> outcomes);

    /// Two-outcome eigenbasis measurement of X, Y or Z; outcome 0 is the +1 eigenvalue.
    static SingleQubitPovm pauli_basis(Pauli letter);
    /// Two-outcome projective measurement along the unit Bloch vector `axis`.
    static SingleQubitPovm projective(const Eigen::Vector3d& axis);
    /// Single-outcome POVM {I}.
    static SingleQubitPovm trivial();

    std::size_t size() const { return outcomes_.size(); }
    const std::vector<PovmOutcome>& outcomes() const { return outcomes_; }
    const PovmOutcome& outcome(std::size_t o) const { return outcomes_.at(o); }

    Eigen::Matrix2cd element(std::size_t o) const;
    /// Two rank-1 projectors (the shape the MIC toy identity needs).
    bool is_rank_one_basis(double tol = 1e-10) const;

   private:
    std::vector<PovmOutcome> outcomes_;
};

/// Tensor product of per-qubit POVMs. Outcomes are flat row-major indices
/// over the per-qubit alphabets, qubit 0 most significant.
class ProductPovm {
   public:
    explicit ProductPovm(std::vector<SingleQubitPovm> per_qubit);

    /// The Pauli basis measurement for a weight-N string; outcome bit set means -1.
    static ProductPovm pauli_basis(const PauliString& basis);

    int n_qubits() const { return static_cast<int>(per_qubit_.size()); }
    const SingleQubitPovm& qubit(int q) const { return per_qubit_.at(static_cast<std::size_t>(q)); }
    const std::vector<SingleQubitPovm>& factors() const { return per_qubit_; }
    std::size_t outcome_count() const { return outcome_count_; }

    std::vector<std::size_t> unflatten(std::size_t flat) const;
    std::size_t flatten(std::span<const std::size_t> multi) const;

    /// Set when this POVM is exactly a Pauli basis measurement.
    const std::optional<PauliString>& basis() const { return basis_; }

   private:
    std::vector<SingleQubitPovm> per_qubit_;
    std::size_t outcome_count_ = 1;
    std::optional<PauliString> basis_;
};

/// Tensor product of the per-qubit elements for a multi-index outcome.
Eigen::MatrixXcd povm_element_matrix(const ProductPovm& m, std::span<const std::size_t> outcome);

/// Born-rule outcome probabilities. Basis measurements use the rotation route,
/// general POVMs explicit element traces.
Eigen::VectorXd outcome_distribution(const ProductPovm& m, const DensityMatrix& rho);

/// Basis-rotation route: diagonal of U rho U^dagger, O(N d^2).
Eigen::VectorXd pauli_basis_distribution(const PauliString& basis, const Eigen::MatrixXcd& rho);

/// Explicit route: Tr[M_x rho] for every outcome.
Eigen::VectorXd distribution_by_traces(const ProductPovm& m, const Eigen::MatrixXcd& rho);

/// Index drawn from `cdf` (inclusive cumulative probabilities).
std::size_t sample_from_cdf(std::span<const double> cdf, Rng& rng);
std::vector<double> cumulative(const Eigen::VectorXd& probabilities);

/// `count` i.i.d. flat outcome indices; deterministic given the seed.
std::vector<std::size_t> sample_outcomes(const ProductPovm& m, const DensityMatrix& rho, std::size_t count,
                                         std::uint64_t seed);

/// Adaptive scheme: (copy index, outcomes so far) -> POVM for this copy.
/// Randomized strategies carry their own seed.
using MeasurementStrategy = std::function<ProductPovm(std::size_t copy, std::span<const std::size_t> history)>;

/// Measures n copies one at a time, each with the POVM the strategy returns for the history so far.
std::vector<std::size_t> run_strategy(const MeasurementStrategy& strategy, const DensityMatrix& rho, std::size_t n,
                                      std::uint64_t seed);

MeasurementStrategy constant_strategy(ProductPovm povm);

/// Single-qubit adaptive strategy: Z on the first copy, then X after a +1
/// outcome and Z after -1.
MeasurementStrategy adaptive_flip_strategy();

/// Per qubit, the six-outcome POVM {(I +- sigma) / 6 : sigma in X, Y, Z}; equal to
/// choosing a Pauli basis uniformly at random and revealing the choice.
SingleQubitPovm uniform_pauli_mixture();
MeasurementStrategy uniform_random_pauli_strategy(int n_qubits);

/// Each copy measured in an independently, pseudo-randomly chosen Pauli basis
/// (a deterministic function of seed and copy index).
MeasurementStrategy seeded_random_basis_strategy(int n_qubits, std::uint64_t seed);

}  // namespace qtomo
