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

#include "qtomo/hard_instance.hpp"
#include "qtomo/measurement.hpp"
#include "qtomo/report.hpp"

namespace qtomo {

/// Probability vector; entries non-negative and summing to 1 within 1e-12.
class DiscreteDistribution {
   public:
    explicit DiscreteDistribution(std::vector<double> p);
    static DiscreteDistribution uniform(std::size_t k);
    /// Dirichlet(1, ..., 1) draw.
    static DiscreteDistribution random(std::size_t k, Rng& rng);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probabilities() const { return p_; }

   private:
    std::vector<double> p_;
};

/// Divergences in nats. kl and chi2 are +inf when q(x) = 0 < p(x).
struct Divergences {
    double tv = 0.0;
    double kl = 0.0;
    double kl_sym = 0.0;
    double chi2 = 0.0;
    double l2 = 0.0;

    /// 2 tv^2 <= kl <= chi2 up to tol.
    bool chain_holds(double tol = 1e-12) const;
};

/// Throws std::logic_error if the Pinsker chain fails (it cannot for valid inputs).
Divergences divergences(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// h(t) in bits; h(0) = h(1) = 0.
double binary_entropy(double t);

/// I(X;Y) in bits for a joint probability table (rows X, columns Y).
double exact_mutual_info(const Eigen::MatrixXd& joint);

/// Per coordinate I_i >= 1 - h(p_i), and the averaged form
/// mean(I) >= 1 - mean(h(p)) >= 1 - h(mean(p)).
BoundReport fano_bound_check(std::span<const double> error_probs, std::span<const double> mi);

enum class MiMode { Exact, MonteCarlo };

struct MiOptions {
    MiMode mode = MiMode::Exact;
    /// Hard cap on 2^ell * (number of outcome histories) in exact mode.
    std::uint64_t budget_cells = std::uint64_t{1} << 28;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 0;
    bool miller_madow = false;
    /// Constant of the concentration event ||W_z||_op <= C sqrt(ell / d).
    double concentration_C = 2.0;
};

struct MiResult {
    std::vector<double> mi;           ///< I(z_i; x^n) in bits
    std::vector<double> error_probs;  ///< Pr[z_i != zhat_i] for the MAP estimator
    double average_mi = 0.0;
    double spectral_sup = 0.0;        ///< max spectral quantity over the POVMs the strategy used
    double prob_not_good_literal = 0.0;        ///< Pr[||sigma_z - rho_mm||_S1 < eps]
    double prob_not_good_concentration = 0.0;  ///< Pr[||W_z||_op > C sqrt(ell / d)]
    std::size_t histories = 0;        ///< leaves (exact) or samples (Monte Carlo)
    BoundReport report;               ///< average MI vs the upper bound
    BoundReport fano;
};

/// Information about the sign vector z carried by n outcomes of `strategy` applied to sigma_z^{(x) n}.
/// The upper bound is 8 n c^2 eps^2 / ell^2 * sup_M sum_i <V_i|C_M|V_i> + 16 n c^2 eps^2 Pr[z not in G].
MiResult mi_experiment(const HardInstanceParams& p, const MeasurementStrategy& strategy, std::size_t n,
                       const MiOptions& options = {});

}  // namespace qtomo
