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

#include "qtomo/information.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qtomo/errors.hpp"
#include "qtomo/mic.hpp"

namespace qtomo {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("distribution must have non-empty support");
    double total = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0)) throw ValidationError("distribution entries must be non-negative");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("distribution must sum to 1");
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t k) {
    return DiscreteDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

DiscreteDistribution DiscreteDistribution::random(std::size_t k, Rng& rng) {
    std::vector<double> p(k);
    for (auto& v : p) v = -std::log1p(-uniform01(rng));
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& v : p) v /= total;
    return DiscreteDistribution(std::move(p));
}

bool Divergences::chain_holds(double tol) const { return 2.0 * tv * tv <= kl + tol && kl <= chi2 + tol; }

namespace {

double kl_nats(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return kInf;
        s += p[i] * std::log(p[i] / q[i]);
    }
    return std::max(s, 0.0);
}

}  // namespace

Divergences divergences(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.size() != q.size()) throw ValidationError("divergences: support sizes differ");
    const auto& a = p.probabilities();
    const auto& b = q.probabilities();
    Divergences r;
    double l1 = 0.0;
    double l2sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        l1 += std::abs(diff);
        l2sq += diff * diff;
        if (b[i] == 0.0) {
            if (a[i] > 0.0) r.chi2 = kInf;
        } else if (r.chi2 != kInf) {
            r.chi2 += diff * diff / b[i];
        }
    }
    r.tv = 0.5 * l1;
    r.l2 = std::sqrt(l2sq);
    r.kl = kl_nats(a, b);
    r.kl_sym = r.kl + kl_nats(b, a);
    if (!r.chain_holds()) {
        throw std::logic_error("divergences: 2 tv^2 <= kl <= chi2 violated (tv=" + std::to_string(r.tv) +
                               ", kl=" + std::to_string(r.kl) + ", chi2=" + std::to_string(r.chi2) + ")");
    }
    return r;
}

double binary_entropy(double t) {
    if (t < 0.0 || t > 1.0) throw ValidationError("binary_entropy: argument outside [0, 1]");
    if (t == 0.0 || t == 1.0) return 0.0;
    return -(t * std::log2(t) + (1.0 - t) * std::log2(1.0 - t));
}

double exact_mutual_info(const Eigen::MatrixXd& joint) {
    if (joint.size() == 0) throw ValidationError("exact_mutual_info: empty joint table");
    if (joint.minCoeff() < 0.0) throw ValidationError("exact_mutual_info: negative joint probability");
    if (std::abs(joint.sum() - 1.0) > 1e-9) throw ValidationError("exact_mutual_info: joint does not sum to 1");
    const Eigen::VectorXd px = joint.rowwise().sum();
    const Eigen::RowVectorXd py = joint.colwise().sum();
    double s = 0.0;
    for (Eigen::Index j = 0; j < joint.cols(); ++j) {
        for (Eigen::Index i = 0; i < joint.rows(); ++i) {
            const double pij = joint(i, j);
            if (pij <= 0.0) continue;
            const double prod = px(i) * py(j);
            // log1p keeps precision when the joint is close to the product.
            s += pij * std::log1p((pij - prod) / prod);
        }
    }
    return std::max(s / kLn2, 0.0);
}

BoundReport fano_bound_check(std::span<const double> error_probs, std::span<const double> mi) {
    if (error_probs.size() != mi.size()) throw ValidationError("fano_bound_check: length mismatch");
    if (error_probs.empty()) throw ValidationError("fano_bound_check: empty input");
    constexpr double tol = 1e-12;
    BoundReport r;
    r.name = "fano_bound";
    double mean_p = 0.0;
    double mean_h = 0.0;
    double mean_mi = 0.0;
    std::size_t violations = 0;
    for (std::size_t i = 0; i < mi.size(); ++i) {
        const double p = error_probs[i];
        if (!(p >= 0.0) || p > 0.5 + tol) {
            throw ValidationError("fano_bound_check: error probability " + std::to_string(p) + " outside [0, 1/2]");
        }
        const double h = binary_entropy(std::min(p, 0.5));
        if (mi[i] < 1.0 - h - tol) ++violations;
        mean_p += p;
        mean_h += h;
        mean_mi += mi[i];
    }
    const double k = static_cast<double>(mi.size());
    mean_p /= k;
    mean_h /= k;
    mean_mi /= k;
    const double averaged = 1.0 - mean_h;
    const double concave = 1.0 - binary_entropy(std::min(mean_p, 0.5));
    r.term("coordinates", k).term("mean_error_prob", mean_p).term("mean_mi", mean_mi);
    r.term("one_minus_mean_h", averaged).term("one_minus_h_of_mean", concave);
    r.term("coordinate_violations", static_cast<double>(violations));
    r.decide_absolute(concave, mean_mi, tol);
    r.verdict = r.verdict && violations == 0 && concave <= averaged + tol && averaged <= mean_mi + tol;
    return r;
}

namespace {

struct MiAccumulator {
    std::size_t ell = 0;
    // table[i] has two rows (z_i = +1, z_i = -1) and one column per history.
    std::vector<Eigen::MatrixXd> table;
};

std::size_t count_histories(const MeasurementStrategy& strategy, std::size_t n, std::vector<std::size_t>& history,
                            std::uint64_t limit, std::span<const PauliString> dirs, int n_qubits, double& sup) {
    if (history.size() == n) return 1;
    const ProductPovm m = strategy(history.size(), history);
    if (m.n_qubits() != n_qubits) throw ValidationError("mi_experiment: strategy returned a POVM of the wrong size");
    sup = std::max(sup, spectral_quantity(m, dirs));
    std::size_t total = 0;
    for (std::size_t x = 0; x < m.outcome_count(); ++x) {
        history.push_back(x);
        total += count_histories(strategy, n, history, limit, dirs, n_qubits, sup);
        history.pop_back();
        if (total > limit) return total;
    }
    return total;
}

void accumulate_histories(const MeasurementStrategy& strategy, std::size_t n, const DensityMatrix& state,
                          std::vector<std::size_t>& history, double prob, std::size_t& leaf,
                          std::vector<double>& leaf_probs) {
    if (history.size() == n) {
        leaf_probs[leaf++] = prob;
        return;
    }
    const ProductPovm m = strategy(history.size(), history);
    const Eigen::VectorXd dist = outcome_distribution(m, state);
    for (std::size_t x = 0; x < m.outcome_count(); ++x) {
        history.push_back(x);
        accumulate_histories(strategy, n, state, history, prob * dist(static_cast<Eigen::Index>(x)), leaf,
                             leaf_probs);
        history.pop_back();
    }
}

void finish_report(const HardInstanceParams& p, std::size_t n, MiResult& r) {
    const double ell = static_cast<double>(r.mi.size());
    const double n_d = static_cast<double>(n);
    const double c2e2 = p.c * p.c * p.eps * p.eps;
    r.average_mi = ell > 0 ? std::accumulate(r.mi.begin(), r.mi.end(), 0.0) / ell : 0.0;
    const double spectral_term = 8.0 * n_d * c2e2 / (ell * ell) * r.spectral_sup;
    const double tail_with_n = 16.0 * n_d * c2e2 * r.prob_not_good_concentration;
    const double tail_without_n = 16.0 * c2e2 * r.prob_not_good_concentration;
    const double envelope =
        8.0 * n_d * c2e2 / (ell * ell) * spectral_envelope(p.n_qubits, p.min_weight) + tail_with_n;
    BoundReport& b = r.report;
    b.name = "average_mi_upper";
    b.term("n", n_d).term("ell", ell).term("c", p.c).term("eps", p.eps);
    b.term("average_mi_bits", r.average_mi).term("average_mi_nats", r.average_mi * kLn2);
    b.term("spectral_sup", r.spectral_sup).term("spectral_term", spectral_term);
    b.term("prob_not_good_literal", r.prob_not_good_literal);
    b.term("prob_not_good_concentration", r.prob_not_good_concentration);
    b.term("tail_term_16nc2eps2", tail_with_n).term("tail_term_16c2eps2", tail_without_n);
    b.term("rhs_16c2eps2_normalization", spectral_term + tail_without_n);
    b.term("rhs_with_literal_G", spectral_term + 16.0 * n_d * c2e2 * r.prob_not_good_literal);
    b.term("rhs_envelope", envelope);
    b.term("histories", static_cast<double>(r.histories));
    b.note("mi_units", "bits");
    b.note("good_set", "concentration event ||W_z||_op <= C sqrt(ell/d)");
    b.decide(r.average_mi, spectral_term + tail_with_n, 1e-9);
    r.fano = fano_bound_check(r.error_probs, r.mi);
}

MiResult mi_exact(const HardInstanceParams& p, const MeasurementStrategy& strategy, std::size_t n,
                  const MiOptions& o, std::span<const PauliString> dirs) {
    const std::size_t ell = dirs.size();
    if (ell >= 28) throw BudgetExceededError("mi_experiment: 2^ell sign vectors exceed the exact budget");
    const std::uint64_t signs = std::uint64_t{1} << ell;
    const std::uint64_t limit = o.budget_cells / signs;
    MiResult r;
    std::vector<std::size_t> history;
    const std::size_t leaves = count_histories(strategy, n, history, limit, dirs, p.n_qubits, r.spectral_sup);
    if (leaves > limit) {
        throw BudgetExceededError("mi_experiment: 2^" + std::to_string(ell) + " x " + std::to_string(leaves) +
                                  "+ histories exceed the budget of " + std::to_string(o.budget_cells) + " cells");
    }
    r.histories = leaves;
    std::vector<Eigen::MatrixXd> table(ell, Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(leaves)));
    std::vector<double> leaf_probs(leaves);
    const double weight = 1.0 / static_cast<double>(signs);
    std::size_t not_good = 0;
    std::size_t not_concentrated = 0;
    for (std::uint64_t bits = 0; bits < signs; ++bits) {
        SignVector z(ell);
        for (std::size_t i = 0; i < ell; ++i) z[i] = ((bits >> (ell - 1 - i)) & 1) ? -1 : 1;
        const HardInstance h = build_instance(p, dirs, z);
        if (!is_good(h)) ++not_good;
        if (!within_concentration(h, o.concentration_C)) ++not_concentrated;
        std::size_t leaf = 0;
        accumulate_histories(strategy, n, h.state, history, 1.0, leaf, leaf_probs);
        const Eigen::Map<const Eigen::RowVectorXd> row(leaf_probs.data(), static_cast<Eigen::Index>(leaves));
        for (std::size_t i = 0; i < ell; ++i) table[i].row(z[i] > 0 ? 0 : 1) += weight * row;
    }
    r.prob_not_good_literal = static_cast<double>(not_good) * weight;
    r.prob_not_good_concentration = static_cast<double>(not_concentrated) * weight;
    for (const auto& t : table) {
        r.mi.push_back(exact_mutual_info(t));
        r.error_probs.push_back(t.colwise().minCoeff().sum());
    }
    return r;
}

MiResult mi_monte_carlo(const HardInstanceParams& p, const MeasurementStrategy& strategy, std::size_t n,
                        const MiOptions& o, std::span<const PauliString> dirs) {
    if (o.mc_samples < 1) throw ValidationError("mi_experiment: mc_samples must be >= 1");
    const std::size_t ell = dirs.size();
    MiResult r;
    double sup = 0.0;
    const MeasurementStrategy recording = [&](std::size_t copy, std::span<const std::size_t> history) {
        ProductPovm m = strategy(copy, history);
        if (m.n_qubits() == p.n_qubits) sup = std::max(sup, spectral_quantity(m, dirs));
        return m;
    };
    std::map<std::vector<std::size_t>, std::size_t> index;
    std::vector<std::vector<std::array<std::size_t, 2>>> counts(ell);
    std::size_t not_good = 0;
    std::size_t not_concentrated = 0;
    // Sign vectors repeat when ell is small; building an instance costs an eigendecomposition.
    struct Cached {
        HardInstance h;
        bool good;
        bool concentrated;
    };
    std::map<SignVector, Cached> instances;
    for (std::size_t s = 0; s < o.mc_samples; ++s) {
        SignVector z = random_signs(ell, derive_seed(o.seed, {s, 0}));
        auto found = instances.find(z);
        if (found == instances.end()) {
            HardInstance h = build_instance(p, dirs, z);
            const bool good = is_good(h);
            const bool conc = within_concentration(h, o.concentration_C);
            found = instances.emplace(std::move(z), Cached{std::move(h), good, conc}).first;
        }
        const Cached& c = found->second;
        if (!c.good) ++not_good;
        if (!c.concentrated) ++not_concentrated;
        std::vector<std::size_t> history;
        if (n > 0) history = run_strategy(recording, c.h.state, n, derive_seed(o.seed, {s, 1}));
        const auto [it, inserted] = index.try_emplace(std::move(history), index.size());
        if (inserted) {
            for (auto& col : counts) col.push_back({0, 0});
        }
        for (std::size_t i = 0; i < ell; ++i) ++counts[i][it->second][c.h.z[i] > 0 ? 0 : 1];
    }
    const double total = static_cast<double>(o.mc_samples);
    r.spectral_sup = sup;
    r.histories = o.mc_samples;
    r.prob_not_good_literal = static_cast<double>(not_good) / total;
    r.prob_not_good_concentration = static_cast<double>(not_concentrated) / total;
    const auto cols = static_cast<Eigen::Index>(index.size());
    for (std::size_t i = 0; i < ell; ++i) {
        Eigen::MatrixXd t(2, cols);
        for (Eigen::Index x = 0; x < cols; ++x) {
            t(0, x) = static_cast<double>(counts[i][static_cast<std::size_t>(x)][0]) / total;
            t(1, x) = static_cast<double>(counts[i][static_cast<std::size_t>(x)][1]) / total;
        }
        double mi = exact_mutual_info(t);
        if (o.miller_madow) {
            const auto nonzero = [](auto&& v) { return static_cast<double>((v.array() > 0.0).count()); };
            const double kxy = nonzero(t.reshaped());
            const double kx = nonzero(t.rowwise().sum());
            const double ky = nonzero(t.colwise().sum().transpose());
            mi = std::max(0.0, mi - (kxy - kx - ky + 1.0) / (2.0 * total * kLn2));
        }
        r.mi.push_back(mi);
        r.error_probs.push_back(std::min(t.colwise().minCoeff().sum(), 0.5));
    }
    r.report.note("estimator", o.miller_madow ? "plug-in with Miller-Madow correction" : "plug-in");
    r.report.note("bias", "plug-in mutual information is biased upward by roughly (histories - 1) / (2 samples ln 2)");
    return r;
}

}  // namespace

MiResult mi_experiment(const HardInstanceParams& p, const MeasurementStrategy& strategy, std::size_t n,
                       const MiOptions& options) {
    p.validate();
    const auto dirs = perturbation_directions(p);
    MiResult r = options.mode == MiMode::Exact ? mi_exact(p, strategy, n, options, dirs)
                                               : mi_monte_carlo(p, strategy, n, options, dirs);
    r.report.note("mode", options.mode == MiMode::Exact ? "exact" : "monte_carlo");
    finish_report(p, n, r);
    return r;
}

}  // namespace qtomo
