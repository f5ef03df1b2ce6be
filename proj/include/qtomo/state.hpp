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

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "qtomo/errors.hpp"
#include "qtomo/pauli.hpp"
#include "qtomo/random.hpp"

namespace qtomo {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

enum class Schatten { One, Two, Inf };

/// Largest entrywise |A - A^dagger|.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) return INFINITY;
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// Schatten p-norm of a Hermitian matrix for p in {1, 2, inf}.
///
/// p = 1 and p = inf come from the Hermitian eigenvalues; p = 2 is the
/// entrywise Frobenius sum.
template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& a, Schatten p, double tol = 1e-10) {
    if (a.rows() == 0) return 0.0;
    if (hermiticity_defect(a) > tol) throw ValidationError("schatten_norm: input is not Hermitian");
    if (p == Schatten::Two) return a.norm();
    using Plain = typename Derived::PlainObject;
    Eigen::SelfAdjointEigenSolver<Plain> es(a.derived(), Eigen::EigenvaluesOnly);
    auto ev = es.eigenvalues().cwiseAbs();
    return p == Schatten::One ? ev.sum() : ev.maxCoeff();
}

/// Dense d x d Hermitian PSD unit-trace operator, d = 2^N.
class DensityMatrix {
   public:
    /// Validates Hermiticity and unit trace always; PSD only when `require_psd`.
    /// The PSD verdict is recorded either way and exposed by is_psd().
    static DensityMatrix from_matrix(Eigen::MatrixXcd m, bool require_psd = true);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return data_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return data_; }

    bool is_psd() const { return min_eigenvalue_ >= -kPsdTol; }
    double min_eigenvalue() const { return min_eigenvalue_; }

   private:
    DensityMatrix(int n, Eigen::MatrixXcd m, double min_eig) : n_qubits_(n), data_(std::move(m)), min_eigenvalue_(min_eig) {}

    int n_qubits_ = 0;
    Eigen::MatrixXcd data_;
    double min_eigenvalue_ = 0.0;
};

DensityMatrix maximally_mixed(int n_qubits);

/// Pure state |psi><psi| (psi is normalized here).
DensityMatrix pure_state(const Eigen::VectorXcd& psi);

/// rho = sum_P alpha_P P. Non-PSD results are flagged through is_psd(), not rejected.
DensityMatrix from_pauli_coeffs(const PauliCoeffVector& v);

/// alpha_P = Tr[rho P] / d for all 4^N strings, dropping |alpha_P| < 1e-14.
PauliCoeffVector to_pauli_coeffs(const DensityMatrix& rho);

/// ||rho - sigma||_S1 (no factor 1/2).
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Nearest density matrix in Hilbert-Schmidt norm: eigenvalues projected onto the simplex.
DensityMatrix project_to_density(const Eigen::MatrixXcd& hermitian);

/// Random state rho = G G^dagger / Tr with G a d x rank complex Ginibre matrix.
DensityMatrix random_density_matrix(int n_qubits, Rng& rng, int rank = 0);

}  // namespace qtomo
