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

#include "qtomo/pauli.hpp"

#include <cmath>

#include "qtomo/errors.hpp"

namespace qtomo {

char to_char(Pauli p) {
    static constexpr char kChars[4] = {'I', 'X', 'Y', 'Z'};
    return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
        default:
            throw ValidationError(std::string("not a Pauli letter: '") + c + "'");
    }
}

namespace {

void check_n(int n_qubits) {
    if (n_qubits < 0 || n_qubits > kMaxPauliQubits) {
        throw SizeError("Pauli string length " + std::to_string(n_qubits) + " outside [0, 64]");
    }
}

std::uint64_t qubit_bit(int n_qubits, int qubit) { return std::uint64_t{1} << (n_qubits - 1 - qubit); }

std::uint64_t low_mask(int n_qubits) {
    return n_qubits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_qubits) - 1;
}

}  // namespace

PauliString::PauliString(int n_qubits) : n_qubits_(n_qubits) { check_n(n_qubits); }

PauliString::PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
    check_n(n_qubits);
    if (((x_mask | z_mask) & ~low_mask(n_qubits)) != 0) {
        throw ValidationError("Pauli masks have bits beyond qubit count");
    }
}

PauliString::PauliString(std::span<const Pauli> letters) : n_qubits_(static_cast<int>(letters.size())) {
    check_n(n_qubits_);
    for (int q = 0; q < n_qubits_; ++q) {
        auto bit = qubit_bit(n_qubits_, q);
        switch (letters[q]) {
            case Pauli::I:
                break;
            case Pauli::X:
                x_ |= bit;
                break;
            case Pauli::Y:
                x_ |= bit;
                z_ |= bit;
                break;
            case Pauli::Z:
                z_ |= bit;
                break;
        }
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<Pauli> letters;
    letters.reserve(text.size());
    for (char c : text) letters.push_back(pauli_from_char(c));
    if (letters.empty()) throw ValidationError("empty Pauli string");
    return PauliString(letters);
}

PauliString PauliString::from_index(int n_qubits, std::uint64_t index) {
    if (n_qubits > 31) throw SizeError("Pauli index only defined for N <= 31");
    std::vector<Pauli> letters(n_qubits);
    for (int q = n_qubits - 1; q >= 0; --q) {
        letters[q] = static_cast<Pauli>(index & 3);
        index >>= 2;
    }
    if (index != 0) throw ValidationError("Pauli index out of range");
    return PauliString(letters);
}

Pauli PauliString::letter(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) throw std::out_of_range("qubit index out of range");
    auto bit = qubit_bit(n_qubits_, qubit);
    bool x = x_ & bit;
    bool z = z_ & bit;
    if (x) return z ? Pauli::Y : Pauli::X;
    return z ? Pauli::Z : Pauli::I;
}

std::uint64_t PauliString::index() const {
    if (n_qubits_ > 31) throw SizeError("Pauli index only defined for N <= 31");
    std::uint64_t idx = 0;
    for (int q = 0; q < n_qubits_; ++q) idx = (idx << 2) | static_cast<std::uint64_t>(letter(q));
    return idx;
}

std::string PauliString::str() const {
    std::string s;
    s.reserve(n_qubits_);
    for (int q = 0; q < n_qubits_; ++q) s.push_back(to_char(letter(q)));
    return s;
}

std::strong_ordering PauliString::operator<=>(const PauliString& other) const {
    if (auto c = n_qubits_ <=> other.n_qubits_; c != 0) return c;
    for (int q = 0; q < n_qubits_; ++q) {
        if (auto c = letter(q) <=> other.letter(q); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

Eigen::MatrixXcd materialize(const PauliString& p, bool normalized, int cap) {
    if (p.n_qubits() > cap) {
        throw SizeError("materializing " + std::to_string(p.n_qubits()) + " qubits exceeds cap " +
                        std::to_string(cap));
    }
    const Eigen::Index d = Eigen::Index{1} << p.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    accumulate(p, normalized ? 1.0 / std::sqrt(static_cast<double>(d)) : 1.0, m);
    return m;
}

void accumulate(const PauliString& p, std::complex<double> coeff, Eigen::MatrixXcd& target) {
    const std::uint64_t d = std::uint64_t{1} << p.n_qubits();
    if (static_cast<std::uint64_t>(target.rows()) != d || static_cast<std::uint64_t>(target.cols()) != d) {
        throw ValidationError("accumulate: target dimension does not match Pauli string");
    }
    const std::uint64_t x = p.x_mask();
    for (std::uint64_t col = 0; col < d; ++col) {
        target(static_cast<Eigen::Index>(col ^ x), static_cast<Eigen::Index>(col)) += coeff * column_entry(p, col);
    }
}

std::complex<double> trace_with(const PauliString& p, const Eigen::MatrixXcd& a) {
    const std::uint64_t d = std::uint64_t{1} << p.n_qubits();
    if (static_cast<std::uint64_t>(a.rows()) != d || static_cast<std::uint64_t>(a.cols()) != d) {
        throw ValidationError("trace_with: matrix dimension does not match Pauli string");
    }
    const std::uint64_t x = p.x_mask();
    std::complex<double> tr = 0;
    // Tr[A P] = sum_col A(col, row) P(row, col), row = col ^ x.
    for (std::uint64_t col = 0; col < d; ++col) {
        tr += a(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col ^ x)) * column_entry(p, col);
    }
    return tr;
}

double hs_inner(const PauliString& p, const PauliString& q) {
    if (p.n_qubits() != q.n_qubits()) {
        throw ValidationError("hs_inner: mismatched qubit counts " + std::to_string(p.n_qubits()) + " vs " +
                              std::to_string(q.n_qubits()));
    }
    return p == q ? std::ldexp(1.0, p.n_qubits()) : 0.0;
}

namespace {

// Emits weight-exactly-`remaining` completions of `prefix` in lexicographic order.
void emit_weight(int n_qubits, int qubit, int remaining, std::vector<Pauli>& prefix, std::vector<PauliString>& out) {
    if (qubit == n_qubits) {
        out.emplace_back(prefix);
        return;
    }
    const int slots = n_qubits - qubit;
    for (int l = 0; l < 4; ++l) {
        const bool non_identity = l != 0;
        const int left = remaining - (non_identity ? 1 : 0);
        if (left < 0 || left > slots - 1) continue;
        prefix[qubit] = static_cast<Pauli>(l);
        emit_weight(n_qubits, qubit + 1, left, prefix, out);
    }
}

}  // namespace

std::vector<PauliString> enumerate_by_min_weight(int n_qubits, int min_weight) {
    if (n_qubits < 1 || n_qubits > 31) throw SizeError("enumerate_by_min_weight: N must be in [1, 31]");
    if (min_weight < 0 || min_weight > n_qubits) {
        throw ValidationError("enumerate_by_min_weight: weight " + std::to_string(min_weight) + " outside [0, " +
                              std::to_string(n_qubits) + "]");
    }
    std::vector<PauliString> out;
    std::vector<Pauli> prefix(n_qubits, Pauli::I);
    for (int m = n_qubits; m >= min_weight; --m) emit_weight(n_qubits, 0, m, prefix, out);
    return out;
}

std::vector<PauliString> all_paulis(int n_qubits) {
    if (n_qubits < 0 || n_qubits > 15) throw SizeError("all_paulis: N must be in [0, 15]");
    const std::uint64_t count = std::uint64_t{1} << (2 * n_qubits);
    std::vector<PauliString> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(PauliString::from_index(n_qubits, i));
    return out;
}

std::vector<PauliString> all_pauli_bases(int n_qubits) {
    std::vector<PauliString> out;
    std::vector<Pauli> prefix(n_qubits, Pauli::I);
    emit_weight(n_qubits, 0, n_qubits, prefix, out);
    return out;
}

double PauliCoeffVector::coefficient(const PauliString& p) const {
    auto it = coeffs.find(p);
    return it == coeffs.end() ? 0.0 : it->second;
}

}  // namespace qtomo
