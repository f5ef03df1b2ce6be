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

#include <bit>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qtomo {

/// Single-qubit Pauli letter. The numeric order I < X < Y < Z is the
/// lexicographic order used by every enumeration.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

inline constexpr int kMaxPauliQubits = 64;

/// Default cap on N for dense d x d materialization (d^2 = 16M entries at 12).
inline constexpr int kDefaultMaterializeCap = 12;

/// N-qubit tensor product of {I, X, Y, Z}, two bits per qubit.
///
/// Qubit q (0 = leftmost letter) maps to bit (N - 1 - q) of both masks, which
/// is also its bit in a computational-basis index, so qubit 0 is the most
/// significant tensor factor. X sets the x bit, Z the z bit, Y both.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(int n_qubits);
    PauliString(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);
    explicit PauliString(std::span<const Pauli> letters);

    static PauliString parse(std::string_view text);
    /// Inverse of index(): base-4 digits with qubit 0 most significant.
    static PauliString from_index(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }
    std::uint64_t support_mask() const { return x_ | z_; }

    Pauli letter(int qubit) const;
    int weight() const { return std::popcount(x_ | z_); }
    bool is_identity() const { return (x_ | z_) == 0; }
    int y_count() const { return std::popcount(x_ & z_); }

    /// Same letters on `mask` bits, identity elsewhere.
    PauliString restricted(std::uint64_t mask) const { return PauliString(n_qubits_, x_ & mask, z_ & mask); }

    std::uint64_t index() const;
    std::string str() const;

    bool operator==(const PauliString& other) const = default;
    std::strong_ordering operator<=>(const PauliString& other) const;

   private:
    int n_qubits_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

inline int weight(const PauliString& p) { return p.weight(); }

/// Value of the single nonzero entry in column `col`; the row is col ^ x_mask.
inline std::complex<double> column_entry(const PauliString& p, std::uint64_t col) {
    static constexpr std::complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    std::complex<double> v = kIPow[p.y_count() & 3];
    return (std::popcount(col & p.z_mask()) & 1) ? -v : v;
}

/// Dense d x d matrix of P (or P / sqrt(d) when normalized).
Eigen::MatrixXcd materialize(const PauliString& p, bool normalized = false,
                             int cap = kDefaultMaterializeCap);

/// target += coeff * P without forming P.
void accumulate(const PauliString& p, std::complex<double> coeff, Eigen::MatrixXcd& target);

/// Tr[A P] in O(d).
std::complex<double> trace_with(const PauliString& p, const Eigen::MatrixXcd& a);

/// Hilbert-Schmidt inner product Tr[P^dagger Q] of unnormalized strings.
double hs_inner(const PauliString& p, const PauliString& q);

/// All strings of weight >= w, by decreasing weight then lexicographic order.
std::vector<PauliString> enumerate_by_min_weight(int n_qubits, int min_weight);

/// All 4^N strings in index (lexicographic) order.
std::vector<PauliString> all_paulis(int n_qubits);

/// The 3^N weight-N strings in lexicographic order.
std::vector<PauliString> all_pauli_bases(int n_qubits);

/// Sparse Pauli expansion rho = sum_P alpha_P P with alpha_P = Tr[rho P] / d.
struct PauliCoeffVector {
    int n_qubits = 0;
    std::map<PauliString, double> coeffs;

    double coefficient(const PauliString& p) const;
};

}  // namespace qtomo
