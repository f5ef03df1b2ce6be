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

#include "qtomo/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/linalg.hpp"

namespace qtomo {

namespace {

const Eigen::Matrix2cd& pauli2(int k) {
    static const Eigen::Matrix2cd kMats[3] = {
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0).finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    return kMats[k];
}

Eigen::Vector3d axis_of(Pauli letter) {
    switch (letter) {
        case Pauli::X:
            return Eigen::Vector3d::UnitX();
        case Pauli::Y:
            return Eigen::Vector3d::UnitY();
        case Pauli::Z:
            return Eigen::Vector3d::UnitZ();
        default:
            throw ValidationError("Pauli basis letter must be X, Y or Z");
    }
}

}  // namespace

SingleQubitPovm::SingleQubitPovm(std::vector<PovmOutcome> outcomes) : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw ValidationError("POVM needs at least one outcome");
    double alpha_sum = 0.0;
    Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
    for (std::size_t o = 0; o < outcomes_.size(); ++o) {
        const auto& out = outcomes_[o];
        if (!(out.alpha >= -kPovmTol && out.alpha <= 1.0 + kPovmTol)) {
            throw ValidationError("POVM outcome " + std::to_string(o) + ": alpha outside [0, 1]");
        }
        if (!(out.beta.norm() <= 1.0 + kPovmTol)) {
            throw ValidationError("POVM outcome " + std::to_string(o) + ": |beta| > 1 (element not PSD)");
        }
        alpha_sum += out.alpha;
        weighted += out.alpha * out.beta;
    }
    if (std::abs(alpha_sum - 1.0) > kPovmTol) {
        throw ValidationError("POVM alphas sum to " + std::to_string(alpha_sum) + ", not 1");
    }
    if (weighted.norm() > kPovmTol) throw ValidationError("POVM elements do not sum to identity (sum alpha beta != 0)");
}

SingleQubitPovm SingleQubitPovm::pauli_basis(Pauli letter) { return projective(axis_of(letter)); }

SingleQubitPovm SingleQubitPovm::projective(const Eigen::Vector3d& axis) {
    const double n = axis.norm();
    if (n == 0.0) throw ValidationError("projective POVM axis must be nonzero");
    Eigen::Vector3d u = axis / n;
    return SingleQubitPovm({{0.5, u}, {0.5, -u}});
}

SingleQubitPovm SingleQubitPovm::trivial() { return SingleQubitPovm({{1.0, Eigen::Vector3d::Zero()}}); }

Eigen::Matrix2cd SingleQubitPovm::element(std::size_t o) const {
    const auto& out = outcomes_.at(o);
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (int k = 0; k < 3; ++k) m += out.beta[k] * pauli2(k);
    return out.alpha * m;
}

bool SingleQubitPovm::is_rank_one_basis(double tol) const {
    if (outcomes_.size() != 2) return false;
    const auto& a = outcomes_[0];
    const auto& b = outcomes_[1];
    return std::abs(a.alpha - 0.5) <= tol && std::abs(b.alpha - 0.5) <= tol && std::abs(a.beta.norm() - 1.0) <= tol &&
           (a.beta + b.beta).norm() <= tol;
}

ProductPovm::ProductPovm(std::vector<SingleQubitPovm> per_qubit) : per_qubit_(std::move(per_qubit)) {
    if (per_qubit_.empty()) throw ValidationError("product POVM needs at least one qubit");
    if (per_qubit_.size() > 62) throw SizeError("product POVM limited to 62 qubits");
    for (const auto& f : per_qubit_) {
        if (outcome_count_ > (std::size_t{1} << 62) / f.size()) throw SizeError("product POVM outcome space too large");
        outcome_count_ *= f.size();
    }
}

ProductPovm ProductPovm::pauli_basis(const PauliString& basis) {
    if (basis.weight() != basis.n_qubits() || basis.n_qubits() == 0) {
        throw ValidationError("Pauli basis measurement needs one of X, Y, Z on every qubit: " + basis.str());
    }
    std::vector<SingleQubitPovm> f;
    f.reserve(static_cast<std::size_t>(basis.n_qubits()));
    for (int q = 0; q < basis.n_qubits(); ++q) f.push_back(SingleQubitPovm::pauli_basis(basis.letter(q)));
    ProductPovm m(std::move(f));
    m.basis_ = basis;
    return m;
}

std::vector<std::size_t> ProductPovm::unflatten(std::size_t flat) const {
    if (flat >= outcome_count_) throw ValidationError("outcome index " + std::to_string(flat) + " out of range");
    std::vector<std::size_t> multi(per_qubit_.size());
    for (std::size_t q = per_qubit_.size(); q-- > 0;) {
        multi[q] = flat % per_qubit_[q].size();
        flat /= per_qubit_[q].size();
    }
    return multi;
}

std::size_t ProductPovm::flatten(std::span<const std::size_t> multi) const {
    if (multi.size() != per_qubit_.size()) throw ValidationError("multi-index length does not match qubit count");
    std::size_t flat = 0;
    for (std::size_t q = 0; q < multi.size(); ++q) {
        if (multi[q] >= per_qubit_[q].size()) {
            throw ValidationError("outcome " + std::to_string(multi[q]) + " invalid for qubit " + std::to_string(q));
        }
        flat = flat * per_qubit_[q].size() + multi[q];
    }
    return flat;
}

Eigen::MatrixXcd povm_element_matrix(const ProductPovm& m, std::span<const std::size_t> outcome) {
    if (m.n_qubits() > kDefaultMaterializeCap) throw SizeError("povm_element_matrix: N exceeds materialization cap");
    m.flatten(outcome);  // validates
    Eigen::MatrixXcd acc = m.qubit(0).element(outcome[0]);
    for (int q = 1; q < m.n_qubits(); ++q) acc = kron(acc, m.qubit(q).element(outcome[static_cast<std::size_t>(q)]));
    return acc;
}

namespace {

void check_dims(const ProductPovm& m, const Eigen::MatrixXcd& rho) {
    const Eigen::Index d = Eigen::Index{1} << m.n_qubits();
    if (rho.rows() != d || rho.cols() != d) {
        throw ValidationError("POVM on " + std::to_string(m.n_qubits()) + " qubits applied to a " +
                              std::to_string(rho.rows()) + "-dimensional state");
    }
}

Eigen::VectorXd clamp_probabilities(Eigen::VectorXd p) {
    constexpr double kNegTol = 1e-10;
    if (p.minCoeff() < -kNegTol) {
        throw ValidationError("negative outcome probability " + std::to_string(p.minCoeff()) + " (invalid state?)");
    }
    p = p.cwiseMax(0.0);
    const double s = p.sum();
    if (std::abs(s - 1.0) > 1e-8) throw ValidationError("outcome probabilities sum to " + std::to_string(s));
    return p / s;
}

// Tr_0[(m (x) I) A] for the most significant qubit of A.
Eigen::MatrixXcd contract_leading(const Eigen::Matrix2cd& m, const Eigen::MatrixXcd& a) {
    const Eigen::Index h = a.rows() / 2;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(h, h);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            // (m (x) I)_{(r,i),(c,j)} A_{(c,j),(r,i')} summed over r, c.
            if (m(r, c) != 0.0) out.noalias() += m(r, c) * a.block(c * h, r * h, h, h);
        }
    }
    return out;
}

void traces_recursive(const ProductPovm& m, int qubit, const Eigen::MatrixXcd& reduced, std::size_t prefix,
                      Eigen::VectorXd& out) {
    const auto& f = m.qubit(qubit);
    for (std::size_t o = 0; o < f.size(); ++o) {
        Eigen::MatrixXcd next = contract_leading(f.element(o), reduced);
        const std::size_t flat = prefix * f.size() + o;
        if (qubit + 1 == m.n_qubits()) {
            out[static_cast<Eigen::Index>(flat)] = next(0, 0).real();
        } else {
            traces_recursive(m, qubit + 1, next, flat, out);
        }
    }
}

}  // namespace

Eigen::VectorXd distribution_by_traces(const ProductPovm& m, const Eigen::MatrixXcd& rho) {
    check_dims(m, rho);
    Eigen::VectorXd out(static_cast<Eigen::Index>(m.outcome_count()));
    traces_recursive(m, 0, rho, 0, out);
    return out;
}

Eigen::VectorXd pauli_basis_distribution(const PauliString& basis, const Eigen::MatrixXcd& rho) {
    const int n = basis.n_qubits();
    const Eigen::Index d = Eigen::Index{1} << n;
    if (basis.weight() != n) throw ValidationError("pauli_basis_distribution: basis must have full weight");
    if (rho.rows() != d || rho.cols() != d) throw ValidationError("pauli_basis_distribution: dimension mismatch");
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> i(0, 1);
    Eigen::MatrixXcd a = rho;
    for (int q = 0; q < n; ++q) {
        Eigen::Matrix2cd u;
        switch (basis.letter(q)) {
            case Pauli::X:
                u << s, s, s, -s;
                break;
            case Pauli::Y:
                u << s, -i * s, s, i * s;
                break;
            default:
                continue;
        }
        const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
        for (Eigen::Index r0 = 0; r0 < d; ++r0) {
            if (r0 & bit) continue;
            const Eigen::Index r1 = r0 | bit;
            Eigen::RowVectorXcd top = a.row(r0);
            Eigen::RowVectorXcd bottom = a.row(r1);
            a.row(r0) = u(0, 0) * top + u(0, 1) * bottom;
            a.row(r1) = u(1, 0) * top + u(1, 1) * bottom;
        }
        for (Eigen::Index c0 = 0; c0 < d; ++c0) {
            if (c0 & bit) continue;
            const Eigen::Index c1 = c0 | bit;
            Eigen::VectorXcd left = a.col(c0);
            Eigen::VectorXcd right = a.col(c1);
            a.col(c0) = std::conj(u(0, 0)) * left + std::conj(u(0, 1)) * right;
            a.col(c1) = std::conj(u(1, 0)) * left + std::conj(u(1, 1)) * right;
        }
    }
    return a.diagonal().real();
}

Eigen::VectorXd outcome_distribution(const ProductPovm& m, const DensityMatrix& rho) {
    check_dims(m, rho.matrix());
    if (m.basis()) return clamp_probabilities(pauli_basis_distribution(*m.basis(), rho.matrix()));
    return clamp_probabilities(distribution_by_traces(m, rho.matrix()));
}

std::vector<double> cumulative(const Eigen::VectorXd& probabilities) {
    std::vector<double> cdf(static_cast<std::size_t>(probabilities.size()));
    double acc = 0.0;
    for (Eigen::Index k = 0; k < probabilities.size(); ++k) {
        acc += probabilities[k];
        cdf[static_cast<std::size_t>(k)] = acc;
    }
    if (!cdf.empty()) cdf.back() = 1.0;
    return cdf;
}

std::size_t sample_from_cdf(std::span<const double> cdf, Rng& rng) {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<std::size_t>(it - cdf.begin());
}

std::vector<std::size_t> sample_outcomes(const ProductPovm& m, const DensityMatrix& rho, std::size_t count,
                                         std::uint64_t seed) {
    std::vector<std::size_t> out;
    if (count == 0) return out;
    const auto cdf = cumulative(outcome_distribution(m, rho));
    Rng rng = make_rng(seed);
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(sample_from_cdf(cdf, rng));
    return out;
}

std::vector<std::size_t> run_strategy(const MeasurementStrategy& strategy, const DensityMatrix& rho, std::size_t n,
                                      std::uint64_t seed) {
    if (n < 1) throw ValidationError("run_strategy: need at least one copy");
    Rng rng = make_rng(seed);
    std::vector<std::size_t> history;
    history.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::optional<ProductPovm> povm;
        try {
            povm.emplace(strategy(i, history));
        } catch (const ValidationError& e) {
            throw ValidationError("strategy returned an invalid POVM at copy " + std::to_string(i) + ": " + e.what());
        }
        if (povm->n_qubits() != rho.n_qubits()) {
            throw ValidationError("strategy returned a " + std::to_string(povm->n_qubits()) + "-qubit POVM at copy " +
                                  std::to_string(i));
        }
        const auto cdf = cumulative(outcome_distribution(*povm, rho));
        history.push_back(sample_from_cdf(cdf, rng));
    }
    return history;
}

MeasurementStrategy constant_strategy(ProductPovm povm) {
    return [povm = std::move(povm)](std::size_t, std::span<const std::size_t>) { return povm; };
}

MeasurementStrategy adaptive_flip_strategy() {
    return [](std::size_t copy, std::span<const std::size_t> history) {
        if (copy == 0 || history.empty()) return ProductPovm::pauli_basis(PauliString::parse("Z"));
        return ProductPovm::pauli_basis(PauliString::parse(history.back() == 0 ? "X" : "Z"));
    };
}

SingleQubitPovm uniform_pauli_mixture() {
    std::vector<PovmOutcome> outs;
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const Eigen::Vector3d a = axis_of(p);
        outs.push_back({1.0 / 6.0, a});
        outs.push_back({1.0 / 6.0, -a});
    }
    return SingleQubitPovm(std::move(outs));
}

MeasurementStrategy uniform_random_pauli_strategy(int n_qubits) {
    ProductPovm m(std::vector<SingleQubitPovm>(static_cast<std::size_t>(n_qubits), uniform_pauli_mixture()));
    return constant_strategy(std::move(m));
}

MeasurementStrategy seeded_random_basis_strategy(int n_qubits, std::uint64_t seed) {
    return [n_qubits, seed](std::size_t copy, std::span<const std::size_t>) {
        Rng rng = make_rng(seed, {copy});
        std::vector<Pauli> letters(static_cast<std::size_t>(n_qubits));
        for (auto& l : letters) l = static_cast<Pauli>(1 + rng() % 3);
        return ProductPovm::pauli_basis(PauliString(letters));
    };
}

}  // namespace qtomo
