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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qtomo/pauli.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

using SignVector = std::vector<std::int8_t>;

/// Parameters of the random-sign high-weight Pauli perturbation ensemble.
struct HardInstanceParams {
    int n_qubits = 1;
    int min_weight = 1;
    double c = 1.0 / 200.0;
    double eps = 0.1;

    /// min_weight = ceil(9N / 10), c = 1/200.
    static HardInstanceParams defaults(int n_qubits, double eps);

    /// Number of directions: sum_{m >= w} C(N, m) 3^m.
    std::size_t ell() const;
    /// ell >= d^{3/2}, the regime where the operator-norm concentration bound applies.
    bool meets_ell_condition() const;
    /// True when eps <= 1 / log(d), the regime of the matrix-Bernstein argument.
    bool in_bernstein_regime() const;
    void validate() const;
};

/// Perturbation directions V_1..V_ell: all strings of weight >= w in decreasing-weight order.
std::vector<PauliString> perturbation_directions(const HardInstanceParams& p);

/// W = sum_i z_i P_i / sqrt(d).
Eigen::MatrixXcd signed_pauli_sum(std::span<const PauliString> directions, std::span<const std::int8_t> z);

SignVector random_signs(std::size_t ell, std::uint64_t seed);

/// sigma_z = rho_mm + clip * Delta_z, Delta_z = (c eps / sqrt(d ell)) W,
/// clip = min{1, 1 / (2 d ||Delta_z||_op)}.
struct HardInstance {
    HardInstanceParams params;
    SignVector z;
    double clip = 1.0;
    double w_opnorm = 0.0;        ///< ||W||_op
    double w_trace_norm = 0.0;    ///< ||W||_S1
    DensityMatrix state;

    double delta_opnorm() const;   ///< ||Delta_z||_op before clipping
    double scale() const;          ///< c eps / sqrt(d ell)
    double normalized_constant() const;  ///< ||W||_op / sqrt(ell / d)
    /// ||sigma_z - rho_mm||_S1 = clip * scale * ||W||_S1.
    double trace_distance_to_mixed() const;
};

HardInstance build_instance(const HardInstanceParams& p, std::uint64_t seed);
HardInstance build_instance(const HardInstanceParams& p, SignVector z);
/// Variant reusing a precomputed direction list.
HardInstance build_instance(const HardInstanceParams& p, std::span<const PauliString> directions, SignVector z);

/// ||sigma_z - rho_mm||_S1 >= eps.
bool is_good(const HardInstance& h);

/// ||W_z||_op <= C sqrt(ell / d): the concentration event the separation argument relies on.
bool within_concentration(const HardInstance& h, double C);

struct SweepRow {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double opnorm = 0.0;  ///< ||W||_op
    double normalized_C = 0.0;
    double clip = 1.0;
    double trace_dist = 0.0;
    bool is_good = false;
};

struct ConcentrationStats {
    HardInstanceParams params;
    std::size_t ell = 0;
    std::vector<SweepRow> rows;
    double mean_C = 0.0;
    double median_C = 0.0;
    double q90_C = 0.0;
    double q99_C = 0.0;
    double q999_C = 0.0;
    double max_C = 0.0;
    double median_opnorm = 0.0;
    std::vector<std::pair<double, double>> exceed_fraction;  ///< (candidate C, fraction of trials above it)
    double good_fraction = 0.0;
    double min_clip = 1.0;
    double bernstein_scale = 0.0;  ///< sqrt(ell / d) log d
    // Diagnostics of the free-probability bound, evaluated from their closed forms.
    double sigma = 0.0;     ///< ||E X^2||^{1/2} = sqrt(ell / d)
    double v = 1.0;         ///< ||Cov X||^{1/2}
    double R = 0.0;         ///< max ||Z_i|| = 1 / sqrt(d)
    double free_bound = 0.0;  ///< 2 sigma
};

/// Empirical distribution of ||W||_op sqrt(d / ell) over `trials` sign draws.
/// Trial t uses signs from derive_seed(seed, {t}).
ConcentrationStats opnorm_concentration_sweep(const HardInstanceParams& p, std::size_t trials, std::uint64_t seed,
                                              std::vector<double> candidate_C = {1.5, 2.0, 2.5, 3.0});

/// Empirical q-quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double q);

struct HammingReport {
    double lhs = 0.0;  ///< ||sigma_z - sigma_zhat||_S1
    double rhs = 0.0;  ///< c eps ham(z, zhat) / (2 C ell)
    std::size_t hamming = 0;
    bool holds = false;
};

/// Trace-distance Hamming separation between h and the instance built from zhat.
/// Requires h to lie in the concentration event for C_est.
HammingReport hamming_separation_check(const HardInstance& h, std::span<const std::int8_t> zhat, double C_est);

}  // namespace qtomo
