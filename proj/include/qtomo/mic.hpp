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

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/measurement.hpp"
#include "qtomo/pauli.hpp"
#include "qtomo/random.hpp"
#include "qtomo/report.hpp"

namespace qtomo {

/// Largest N for which the dense d^2 x d^2 channel matrix is formed.
inline constexpr int kMaxDenseMicQubits = 5;

/// Measurement information channel C_M = sum_x vec(M_x) vec(M_x)^dagger / Tr[M_x]
/// in the column-stacking convention vec(|i><j|) = |j> (x) |i>.
class MicMatrix {
   public:
    MicMatrix(int n_qubits, Eigen::MatrixXcd data);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return data_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return data_; }

    /// H_M(A) = unvec(C_M vec(A)) = sum_x M_x Tr[M_x A] / Tr[M_x].
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& a) const;
    /// <vec(A)| C_M |vec(A)>.
    double quadratic_form(const Eigen::MatrixXcd& a) const;

   private:
    int n_qubits_;
    Eigen::MatrixXcd data_;
};

/// Dense C_M from the materialized elements; zero-trace elements are skipped.
MicMatrix mic_matrix(const ProductPovm& m);

/// 4 x 4 channel matrix of one qubit's POVM.
Eigen::Matrix4cd single_qubit_mic(const SingleQubitPovm& m);

/// C_M from the per-qubit channels: Kronecker product reindexed from the
/// per-qubit vec ordering to the global one.
MicMatrix mic_matrix_factorized(const ProductPovm& m);

/// Permutation taking a global vec index to the per-qubit (interleaved) index.
std::vector<Eigen::Index> qubitwise_vec_permutation(int n_qubits);

/// E_z ||H_M(rho_mm - phi_z)||_S2^2 over the 8 sign vectors, phi_z = I/2 + alpha (z . sigma),
/// against 2 alpha^2. Requires a rank-1 two-outcome basis measurement.
BoundReport mic_toy_identity(const SingleQubitPovm& m, double alpha);

/// sum_i <vec(V_i)| C_M |vec(V_i)> for V_i = P_i / sqrt(d), from the per-qubit
/// factors: each term is prod_q s_q(letter), s_q(I) = 1, s_q(sigma) = sum_o alpha_o beta_{o,sigma}^2.
double spectral_quantity(const ProductPovm& m, std::span<const PauliString> observables);

/// Same quantity through the dense channel matrix (N <= kMaxDenseMicQubits).
double spectral_quantity_dense(const ProductPovm& m, std::span<const PauliString> observables);

/// sum_{m = w}^{N} C(N, m).
double spectral_envelope(int n_qubits, int min_weight);

/// Random valid single-qubit POVM: 2-4 outcomes, Dirichlet(1) weights, Bloch
/// vectors drawn in the ball, centred so sum alpha beta = 0 and rescaled so
/// the longest has unit length. With probability 1/4 a random rank-1 basis instead.
SingleQubitPovm random_single_qubit_povm(Rng& rng);
ProductPovm random_product_povm(int n_qubits, Rng& rng);

/// Uniformly random unit Bloch vector.
Eigen::Vector3d random_unit_vector(Rng& rng);

/// Max of spectral_quantity over `trials` random product POVMs on the weight >= w
/// observables, against sum_{m >= w} C(N, m). Verdict: never exceeded beyond 1e-9.
BoundReport certify_spectral_bound(std::size_t trials, int n_qubits, int min_weight, std::uint64_t seed);

}  // namespace qtomo
