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

#include "qtomo/json_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "qtomo/errors.hpp"

namespace qtomo {

namespace {

Json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

Eigen::MatrixXd real_matrix(const Json& rows, const char* what) {
    if (!rows.is_array() || rows.empty()) throw ValidationError(std::string("state JSON: '") + what + "' must be a non-empty array");
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
            throw ValidationError(std::string("state JSON: ragged '") + what + "' matrix");
        }
        for (Eigen::Index k = 0; k < c; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

}  // namespace

Json state_to_json(const DensityMatrix& rho) {
    Json re = Json::array();
    Json im = Json::array();
    const auto& m = rho.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        Json c = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            r.push_back(m(i, k).real());
            c.push_back(m(i, k).imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(c));
    }
    return Json{{"n_qubits", rho.n_qubits()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

DensityMatrix state_from_json(const Json& j) {
    try {
        if (j.contains("maximally_mixed")) return maximally_mixed(j.at("maximally_mixed").get<int>());
        if (j.contains("pure")) {
            const auto re = j.at("pure").at("re").get<std::vector<double>>();
            const auto im = j.at("pure").value("im", std::vector<double>(re.size(), 0.0));
            if (re.size() != im.size()) throw ValidationError("state JSON: pure re/im length mismatch");
            Eigen::VectorXcd psi(static_cast<Eigen::Index>(re.size()));
            for (std::size_t i = 0; i < re.size(); ++i) psi(static_cast<Eigen::Index>(i)) = {re[i], im[i]};
            return pure_state(psi);
        }
        const Eigen::MatrixXd re = real_matrix(j.at("re"), "re");
        const Eigen::MatrixXd im = j.contains("im") ? real_matrix(j.at("im"), "im") : Eigen::MatrixXd::Zero(re.rows(), re.cols());
        if (re.rows() != im.rows() || re.cols() != im.cols()) throw ValidationError("state JSON: re/im shape mismatch");
        Eigen::MatrixXcd m(re.rows(), re.cols());
        m.real() = re;
        m.imag() = im;
        DensityMatrix rho = DensityMatrix::from_matrix(std::move(m));
        if (j.contains("n_qubits") && j.at("n_qubits").get<int>() != rho.n_qubits()) {
            throw ValidationError("state JSON: n_qubits does not match the matrix size");
        }
        return rho;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("state JSON: ") + e.what());
    }
}

ProductPovm povm_from_json(const Json& j) {
    try {
        if (j.contains("basis")) return ProductPovm::pauli_basis(PauliString::parse(j.at("basis").get<std::string>()));
        std::vector<SingleQubitPovm> factors;
        for (const auto& q : j.at("qubits")) {
            std::vector<PovmOutcome> outs;
            for (const auto& o : q.at("outcomes")) {
                const auto b = o.at("beta").get<std::vector<double>>();
                if (b.size() != 3) throw ValidationError("POVM JSON: beta must have three components");
                outs.push_back(PovmOutcome{o.at("alpha").get<double>(), Eigen::Vector3d(b[0], b[1], b[2])});
            }
            factors.emplace_back(std::move(outs));
        }
        if (factors.empty()) throw ValidationError("POVM JSON: no qubits");
        return ProductPovm(std::move(factors));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("POVM JSON: ") + e.what());
    }
}

Json povm_to_json(const ProductPovm& m) {
    if (m.basis()) return Json{{"basis", m.basis()->str()}};
    Json qubits = Json::array();
    for (const auto& f : m.factors()) {
        Json outs = Json::array();
        for (const auto& o : f.outcomes()) outs.push_back({{"alpha", o.alpha}, {"beta", {o.beta.x(), o.beta.y(), o.beta.z()}}});
        qubits.push_back({{"outcomes", std::move(outs)}});
    }
    return Json{{"qubits", std::move(qubits)}};
}

Json report_to_json(const BoundReport& r) {
    Json terms = Json::object();
    for (const auto& [k, v] : r.terms) terms[k] = number(v);
    Json notes = Json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    return Json{{"name", r.name}, {"lhs", number(r.lhs)},   {"rhs", number(r.rhs)}, {"tol", r.tol},
                {"verdict", r.verdict}, {"terms", std::move(terms)}, {"notes", std::move(notes)}};
}

Json instance_to_json(const HardInstance& h) {
    Json z = Json::array();
    for (auto s : h.z) z.push_back(static_cast<int>(s));
    return Json{{"n_qubits", h.params.n_qubits},
                {"min_weight", h.params.min_weight},
                {"c", h.params.c},
                {"eps", h.params.eps},
                {"ell", h.z.size()},
                {"meets_ell_condition", h.params.meets_ell_condition()},
                {"z", std::move(z)},
                {"clip", h.clip},
                {"w_opnorm", h.w_opnorm},
                {"normalized_C", h.normalized_constant()},
                {"trace_distance_to_mixed", h.trace_distance_to_mixed()},
                {"is_good", is_good(h)},
                {"min_eigenvalue", h.state.min_eigenvalue()},
                {"state", state_to_json(h.state)}};
}

Json tomography_to_json(const TomographyResult& r, const DensityMatrix* truth) {
    Json table = Json::array();
    for (const auto& e : r.per_observable) {
        table.push_back({{"observable", e.observable.str()}, {"e_value", e.e_value}, {"sample_count", e.sample_count}});
    }
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(r.estimate.rows()))));
    Json estimate = state_to_json(DensityMatrix::from_matrix(r.estimate, /*require_psd=*/false));
    Json j{{"n_qubits", n}, {"copies_used", r.copies_used}, {"estimate", std::move(estimate)}, {"per_observable", std::move(table)}};
    if (r.projected) j["projected"] = state_to_json(*r.projected);
    if (truth != nullptr) {
        const Eigen::MatrixXcd diff = r.estimate - truth->matrix();
        const double hs = diff.norm();
        const double d = static_cast<double>(diff.rows());
        j["error"] = {{"hs", hs},
                      {"hs_squared", hs * hs},
                      {"d_n_hs_squared", d * static_cast<double>(r.copies_used) * hs * hs},
                      {"trace_norm", schatten_norm(diff, Schatten::One)},
                      {"operator_norm", schatten_norm(diff, Schatten::Inf)}};
    }
    return j;
}

Json mi_result_to_json(const MiResult& r) {
    return Json{{"mi_bits", r.mi},
                {"error_probs", r.error_probs},
                {"average_mi", r.average_mi},
                {"spectral_sup", r.spectral_sup},
                {"prob_not_good_literal", r.prob_not_good_literal},
                {"prob_not_good_concentration", r.prob_not_good_concentration},
                {"histories", r.histories},
                {"report", report_to_json(r.report)},
                {"fano", report_to_json(r.fano)}};
}

Json chain_to_json(const LowerBoundChain& c) {
    return Json{{"n_lower", c.n_lower},
                {"n_lower_exact_chain", c.n_lower_exact},
                {"steps_hold", c.steps_hold},
                {"exact_identity_checked", c.exact_identity_checked},
                {"chain", report_to_json(c.report)}};
}

Json stats_to_json(const ConcentrationStats& s) {
    Json exceed = Json::array();
    for (const auto& [c, f] : s.exceed_fraction) exceed.push_back({{"C", c}, {"fraction_above", f}});
    return Json{{"n_qubits", s.params.n_qubits}, {"min_weight", s.params.min_weight}, {"eps", s.params.eps},
                {"c", s.params.c},              {"ell", s.ell},                      {"trials", s.rows.size()},
                {"mean_C", s.mean_C},           {"median_C", s.median_C},            {"q90_C", s.q90_C},
                {"q99_C", s.q99_C},             {"q999_C", s.q999_C},                {"max_C", s.max_C},
                {"median_opnorm", s.median_opnorm}, {"exceed", std::move(exceed)},   {"good_fraction", s.good_fraction},
                {"min_clip", s.min_clip},       {"bernstein_scale", s.bernstein_scale}, {"sigma", s.sigma},
                {"v", s.v},                     {"R", s.R},                          {"free_bound", s.free_bound}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace qtomo
