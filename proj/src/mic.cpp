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

#include "qtomo/mic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/linalg.hpp"

namespace qtomo {

MicMatrix::MicMatrix(int n_qubits, Eigen::MatrixXcd data) : n_qubits_(n_qubits), data_(std::move(data)) {
    const Eigen::Index d2 = Eigen::Index{1} << (2 * n_qubits);
    if (data_.rows() != d2 || data_.cols() != d2) throw ValidationError("MIC matrix must be d^2 x d^2");
}

Eigen::MatrixXcd MicMatrix::apply(const Eigen::MatrixXcd& a) const {
    const Eigen::Index d = Eigen::Index{1} << n_qubits_;
    if (a.rows() != d || a.cols() != d) throw ValidationError("MIC apply: operator dimension mismatch");
    return unvec(data_ * vec(a), d);
}

double MicMatrix::quadratic_form(const Eigen::MatrixXcd& a) const {
    const Eigen::VectorXcd v = vec(a);
    return v.dot(data_ * v).real();
}

MicMatrix mic_matrix(const ProductPovm& m) {
    if (m.n_qubits() > kMaxDenseMicQubits) {
        throw SizeError("dense MIC limited to " + std::to_string(kMaxDenseMicQubits) + " qubits");
    }
    const Eigen::Index d2 = Eigen::Index{1} << (2 * m.n_qubits());
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d2, d2);
    for (std::size_t x = 0; x < m.outcome_count(); ++x) {
        const auto multi = m.unflatten(x);
        const Eigen::MatrixXcd mx = povm_element_matrix(m, multi);
        const double tr = mx.trace().real();
        if (tr <= 1e-14) continue;  // probability-zero outcome
        const Eigen::VectorXcd v = vec(mx);
        c.noalias() += (v * v.adjoint()) / tr;
    }
    return MicMatrix(m.n_qubits(), std::move(c));
}

Eigen::Matrix4cd single_qubit_mic(const SingleQubitPovm& m) {
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Zero();
    for (std::size_t o = 0; o < m.size(); ++o) {
        const Eigen::Matrix2cd e = m.element(o);
        const double tr = e.trace().real();
        if (tr <= 1e-14) continue;
        const Eigen::Vector4cd v = vec(e);
        c += (v * v.adjoint()) / tr;
    }
    return c;
}

std::vector<Eigen::Index> qubitwise_vec_permutation(int n_qubits) {
    const Eigen::Index d = Eigen::Index{1} << n_qubits;
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(d * d));
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            Eigen::Index p = 0;
            for (int q = 0; q < n_qubits; ++q) {
                const int shift = n_qubits - 1 - q;
                const Eigen::Index iq = (i >> shift) & 1;
                const Eigen::Index jq = (j >> shift) & 1;
                p = p * 4 + 2 * jq + iq;
            }
            perm[static_cast<std::size_t>(j * d + i)] = p;
        }
    }
    return perm;
}

MicMatrix mic_matrix_factorized(const ProductPovm& m) {
    if (m.n_qubits() > kMaxDenseMicQubits) {
        throw SizeError("dense MIC limited to " + std::to_string(kMaxDenseMicQubits) + " qubits");
    }
    Eigen::MatrixXcd k = single_qubit_mic(m.qubit(0));
    for (int q = 1; q < m.n_qubits(); ++q) k = kron(k, single_qubit_mic(m.qubit(q)));
    const auto perm = qubitwise_vec_permutation(m.n_qubits());
    const Eigen::Index n = k.rows();
    Eigen::MatrixXcd c(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) c(a, b) = k(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
    }
    return MicMatrix(m.n_qubits(), std::move(c));
}

BoundReport mic_toy_identity(const SingleQubitPovm& m, double alpha) {
    if (!m.is_rank_one_basis()) throw ValidationError("mic_toy_identity: needs a rank-1 two-outcome basis measurement");
    const ProductPovm pm({m});
    const MicMatrix c = mic_matrix(pm);
    const Eigen::MatrixXcd x = materialize(PauliString::parse("X"));
    const Eigen::MatrixXcd y = materialize(PauliString::parse("Y"));
    const Eigen::MatrixXcd z = materialize(PauliString::parse("Z"));
    double total = 0.0;
    for (int bits = 0; bits < 8; ++bits) {
        const double zx = (bits & 4) ? -1.0 : 1.0;
        const double zy = (bits & 2) ? -1.0 : 1.0;
        const double zz = (bits & 1) ? -1.0 : 1.0;
        // rho_mm - phi_z = -alpha (z . sigma)
        const Eigen::MatrixXcd diff = -alpha * (zx * x + zy * y + zz * z);
        total += c.apply(diff).squaredNorm();
    }
    BoundReport r;
    r.name = "mic_toy_identity";
    const double lhs = total / 8.0;
    const double rhs = 2.0 * alpha * alpha;
    r.term("alpha", alpha).term("average_hs_distance_sq", lhs).term("two_alpha_sq", rhs);
    r.term("abs_error", std::abs(lhs - rhs));
    r.lhs = lhs;
    r.rhs = rhs;
    r.tol = 1e-12;
    r.verdict = std::abs(lhs - rhs) <= r.tol;
    return r;
}

namespace {

std::array<double, 4> letter_weights(const SingleQubitPovm& f) {
    std::array<double, 4> s{0.0, 0.0, 0.0, 0.0};
    for (const auto& o : f.outcomes()) {
        s[0] += o.alpha;
        for (int k = 0; k < 3; ++k) s[static_cast<std::size_t>(k + 1)] += o.alpha * o.beta[k] * o.beta[k];
    }
    return s;
}

}  // namespace

double spectral_quantity(const ProductPovm& m, std::span<const PauliString> observables) {
    std::vector<std::array<double, 4>> s;
    s.reserve(static_cast<std::size_t>(m.n_qubits()));
    for (const auto& f : m.factors()) s.push_back(letter_weights(f));
    double total = 0.0;
    for (const auto& p : observables) {
        if (p.n_qubits() != m.n_qubits()) throw ValidationError("spectral_quantity: observable qubit count mismatch");
        double term = 1.0;
        for (int q = 0; q < p.n_qubits(); ++q) term *= s[static_cast<std::size_t>(q)][static_cast<std::size_t>(p.letter(q))];
        total += term;
    }
    return total;
}

double spectral_quantity_dense(const ProductPovm& m, std::span<const PauliString> observables) {
    const MicMatrix c = mic_matrix(m);
    double total = 0.0;
    for (const auto& p : observables) {
        if (p.n_qubits() != m.n_qubits()) throw ValidationError("spectral_quantity: observable qubit count mismatch");
        total += c.quadratic_form(materialize(p, /*normalized=*/true));
    }
    return total;
}

double spectral_envelope(int n_qubits, int min_weight) {
    double total = 0.0;
    for (int m = std::max(min_weight, 0); m <= n_qubits; ++m) {
        double b = 1.0;
        for (int i = 1; i <= m; ++i) b = b * (n_qubits - m + i) / i;
        total += b;
    }
    return total;
}

Eigen::Vector3d random_unit_vector(Rng& rng) {
    std::normal_distribution<double> g;
    Eigen::Vector3d v;
    do {
        v = {g(rng), g(rng), g(rng)};
    } while (v.norm() < 1e-12);
    return v.normalized();
}

SingleQubitPovm random_single_qubit_povm(Rng& rng) {
    if (rng() % 4 == 0) return SingleQubitPovm::projective(random_unit_vector(rng));
    const std::size_t k = 2 + rng() % 3;
    std::vector<PovmOutcome> outs(k);
    double total = 0.0;
    for (auto& o : outs) {
        o.alpha = -std::log1p(-uniform01(rng)) + 1e-12;
        total += o.alpha;
        o.beta = random_unit_vector(rng) * std::cbrt(uniform01(rng));
    }
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (auto& o : outs) {
        o.alpha /= total;
        mean += o.alpha * o.beta;
    }
    double longest = 0.0;
    for (auto& o : outs) {
        o.beta -= mean;
        longest = std::max(longest, o.beta.norm());
    }
    if (longest > 0.0) {
        for (auto& o : outs) o.beta /= longest;
    }
    // Re-centre against rounding so the identity constraint holds to ~1e-16.
    mean.setZero();
    for (const auto& o : outs) mean += o.alpha * o.beta;
    for (auto& o : outs) o.beta -= mean;
    for (auto& o : outs) {
        if (o.beta.norm() > 1.0) o.beta.normalize();
    }
    return SingleQubitPovm(std::move(outs));
}

ProductPovm random_product_povm(int n_qubits, Rng& rng) {
    std::vector<SingleQubitPovm> f;
    f.reserve(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) f.push_back(random_single_qubit_povm(rng));
    return ProductPovm(std::move(f));
}

BoundReport certify_spectral_bound(std::size_t trials, int n_qubits, int min_weight, std::uint64_t seed) {
    if (trials < 1) throw ValidationError("certify_spectral_bound: trials must be >= 1");
    const auto observables = enumerate_by_min_weight(n_qubits, min_weight);
    const double bound = spectral_envelope(n_qubits, min_weight);
    double worst = 0.0;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = make_rng(seed, {t});
        const double v = spectral_quantity(random_product_povm(n_qubits, rng), observables);
        worst = std::max(worst, v);
        sum += v;
    }
    std::vector<Pauli> z(static_cast<std::size_t>(n_qubits), Pauli::Z);
    const double pauli_value = spectral_quantity(ProductPovm::pauli_basis(PauliString(z)), observables);
    BoundReport r;
    r.name = "certify_spectral_bound";
    r.term("n_qubits", n_qubits).term("min_weight", min_weight).term("trials", static_cast<double>(trials));
    r.term("observables", static_cast<double>(observables.size()));
    r.term("max_spectral_quantity", worst).term("mean_spectral_quantity", sum / static_cast<double>(trials));
    r.term("pauli_basis_spectral_quantity", pauli_value).term("bound", bound);
    r.note("seed", std::to_string(seed));
    r.decide_absolute(worst, bound, 1e-9);
    return r;
}

}  // namespace qtomo
