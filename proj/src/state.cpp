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

#include "qtomo/state.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace qtomo {

namespace {

int qubits_for_dim(Eigen::Index d) {
    if (d < 2 || (d & (d - 1)) != 0) {
        throw ValidationError("density matrix dimension " + std::to_string(d) + " is not 2^N with N >= 1");
    }
    return std::countr_zero(static_cast<std::uint64_t>(d));
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(Eigen::MatrixXcd m, bool require_psd) {
    if (m.rows() != m.cols()) throw ValidationError("density matrix must be square");
    const int n = qubits_for_dim(m.rows());
    if (hermiticity_defect(m) > kHermitianTol) throw ValidationError("density matrix is not Hermitian");
    const std::complex<double> tr = m.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw ValidationError("density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    // Symmetrize away sub-tolerance noise before the eigensolver sees it.
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (require_psd && min_eig < -kPsdTol) {
        throw ValidationError("density matrix is not PSD (min eigenvalue " + std::to_string(min_eig) + ")");
    }
    return DensityMatrix(n, std::move(h), min_eig);
}

DensityMatrix maximally_mixed(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kDefaultMaterializeCap) throw SizeError("maximally_mixed: N out of range");
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    return DensityMatrix::from_matrix(Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix pure_state(const Eigen::VectorXcd& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw ValidationError("pure_state: zero vector");
    Eigen::VectorXcd u = psi / norm;
    return DensityMatrix::from_matrix(u * u.adjoint());
}

DensityMatrix from_pauli_coeffs(const PauliCoeffVector& v) {
    const int n = v.n_qubits;
    if (n < 1 || n > kDefaultMaterializeCap) throw SizeError("from_pauli_coeffs: N out of range");
    const double d = std::ldexp(1.0, n);
    const double id = v.coefficient(PauliString(n));
    if (std::abs(id - 1.0 / d) > 1e-12) {
        throw ValidationError("identity coefficient " + std::to_string(id) + " != 1/d");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& [p, a] : v.coeffs) {
        if (p.n_qubits() != n) throw ValidationError("from_pauli_coeffs: mixed qubit counts");
        accumulate(p, a, m);
    }
    return DensityMatrix::from_matrix(std::move(m), /*require_psd=*/false);
}

PauliCoeffVector to_pauli_coeffs(const DensityMatrix& rho) {
    PauliCoeffVector v{rho.n_qubits(), {}};
    const double d = static_cast<double>(rho.dim());
    for (const auto& p : all_paulis(rho.n_qubits())) {
        const double a = trace_with(p, rho.matrix()).real() / d;
        if (std::abs(a) >= 1e-14) v.coeffs.emplace(p, a);
    }
    return v;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("trace_distance: dimension mismatch " + std::to_string(rho.dim()) + " vs " +
                              std::to_string(sigma.dim()));
    }
    return schatten_norm(rho.matrix() - sigma.matrix(), Schatten::One);
}

DensityMatrix project_to_density(const Eigen::MatrixXcd& hermitian) {
    Eigen::MatrixXcd h = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    // Euclidean projection onto {x >= 0, sum x = 1} (sort-and-threshold).
    std::vector<double> sorted(lam.data(), lam.data() + lam.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - t > 0) theta = t;
    }
    Eigen::VectorXd projected = (lam.array() - theta).cwiseMax(0.0);
    projected /= projected.sum();
    Eigen::MatrixXcd out = es.eigenvectors() * projected.cast<std::complex<double>>().asDiagonal() *
                           es.eigenvectors().adjoint();
    out = 0.5 * (out + out.adjoint());
    out /= out.trace().real();
    return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix random_density_matrix(int n_qubits, Rng& rng, int rank) {
    if (n_qubits < 1 || n_qubits > kDefaultMaterializeCap) throw SizeError("random_density_matrix: N out of range");
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    const Eigen::Index r = rank <= 0 ? d : std::min<Eigen::Index>(rank, d);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd g(d, r);
    for (Eigen::Index j = 0; j < r; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = {gauss(rng), gauss(rng)};
    }
    Eigen::MatrixXcd m = g * g.adjoint();
    m /= m.trace().real();
    return DensityMatrix::from_matrix(0.5 * (m + m.adjoint()));
}

}  // namespace qtomo
