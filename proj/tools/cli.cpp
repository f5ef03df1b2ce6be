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

#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtomo/combinatorics.hpp"
#include "qtomo/experiment.hpp"
#include "qtomo/hard_instance.hpp"
#include "qtomo/json_io.hpp"
#include "qtomo/mic.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo::cli {

namespace {

namespace fs = std::filesystem;

void emit(const Json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
    } else {
        write_json_file(out, j);
    }
}

/// Parses argv and runs the selected action, mapping failures to exit codes.
int guarded(CLI::App& app, int argc, char** argv, const std::function<int()>& action) {
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }
    try {
        return action();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

struct ConfigArgs {
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
    bool plot = false;
    bool no_plot = false;
};

void add_config_args(CLI::App* cmd, ConfigArgs& a, bool required = true) {
    auto* opt = cmd->add_option("--config", a.config, "Experiment config file (JSON)")->check(CLI::ExistingFile);
    if (required) opt->required();
    cmd->add_option("--set", a.sets, "Override a config key, e.g. --set grid.trials=500");
    cmd->add_option("--seed", a.seed, "Master seed");
    cmd->add_option("--out", a.out, "Output directory");
    cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
    cmd->add_flag("--plot", a.plot, "Write SVG plots");
    cmd->add_flag("--no-plot", a.no_plot, "Do not write SVG plots");
}

ExperimentConfig load_config(const ConfigArgs& a, std::optional<ExperimentKind> force_kind) {
    Json j = read_json_file(a.config);
    if (!j.is_object()) throw ConfigError(a.config + ": top level must be an object");
    for (const auto& s : a.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_override(j, s.substr(0, eq), s.substr(eq + 1));
    }
    if (a.seed) j["seed"] = *a.seed;
    if (a.out) j["output_dir"] = *a.out;
    if (a.threads) j["threads"] = *a.threads;
    if (a.plot) j["plot"] = true;
    if (a.no_plot) j["plot"] = false;
    if (force_kind) {
        if (j.contains("kind") && j["kind"].is_string() && j["kind"] != to_string(*force_kind)) {
            throw ConfigError("config kind '" + j["kind"].get<std::string>() + "' does not match subcommand '" +
                              to_string(*force_kind) + "'");
        }
        j["kind"] = to_string(*force_kind);
    }
    return ExperimentConfig::from_json(j);
}

int run_config(const ConfigArgs& a, std::optional<ExperimentKind> kind) {
    const ExperimentConfig cfg = load_config(a, kind);
    const ExperimentOutcome out = run_with_manifest(cfg);
    Json files = Json::array();
    for (const auto& f : out.files) files.push_back(f.string());
    std::cout << Json{{"kind", to_string(cfg.kind)}, {"all_pass", out.all_pass}, {"files", files}}.dump(2) << '\n';
    return out.all_pass ? kExitPass : kExitVerdict;
}

}  // namespace

int qtomo_main(int argc, char** argv) {
    CLI::App app{"qtomo: Pauli tomography and copy-complexity experiment harness"};
    app.require_subcommand(1);
    ConfigArgs run_args, hc_args, cert_args, mi_args, bound_args;
    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    add_config_args(run, run_args);
    auto* hc = app.add_subcommand("hardcase", "Hard-instance concentration sweep");
    add_config_args(hc, hc_args);
    auto* cert = app.add_subcommand("certify", "Spectral-bound certification over random product POVMs");
    add_config_args(cert, cert_args);
    auto* mi = app.add_subcommand("mi", "Mutual-information experiment");
    add_config_args(mi, mi_args);
    auto* bound = app.add_subcommand("bound", "Copy-complexity lower-bound arithmetic");
    add_config_args(bound, bound_args);
    auto* version = app.add_subcommand("version", "Print the toolkit version");
    return guarded(app, argc, argv, [&]() -> int {
        if (*version) {
            std::cout << "qtomo " << QTOMO_VERSION << '\n';
            return kExitPass;
        }
        if (*run) return run_config(run_args, std::nullopt);
        if (*hc) return run_config(hc_args, ExperimentKind::Hardcase);
        if (*cert) return run_config(cert_args, ExperimentKind::Certify);
        if (*mi) return run_config(mi_args, ExperimentKind::Mi);
        return run_config(bound_args, ExperimentKind::Bound);
    });
}

int tomo_main(int argc, char** argv) {
    CLI::App app{"tomo: Pauli-measurement tomography of a state"};
    app.require_subcommand(1);
    std::string state_path, out;
    std::size_t copies = 0;
    std::uint64_t seed = 0;
    bool project = false;
    auto* run = app.add_subcommand("run", "Simulate measurements and reconstruct");
    run->add_option("--state", state_path, "State JSON")->required()->check(CLI::ExistingFile);
    run->add_option("--copies", copies, "Number of copies n (>= 3^N)")->required();
    run->add_option("--seed", seed, "Seed")->required();
    run->add_flag("--project", project, "Also report the projection onto density matrices");
    run->add_option("--out", out, "Result JSON (default stdout)");
    return guarded(app, argc, argv, [&] {
        const DensityMatrix rho = state_from_json(read_json_file(state_path));
        const TomographyResult r = run_tomography(rho, copies, seed, project);
        Json j = tomography_to_json(r, &rho);
        j["seed"] = seed;
        emit(j, out);
        return kExitPass;
    });
}

int hardcase_main(int argc, char** argv) {
    CLI::App app{"hardcase: random-sign high-weight Pauli perturbations of the maximally mixed state"};
    app.require_subcommand(1);
    int n = 0;
    std::optional<int> w;
    double eps = 0.1, c = 1.0 / 200.0;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    std::string out, stats_out;
    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--n-qubits", n, "Number of qubits N")->required();
        cmd->add_option("--min-weight", w, "Minimum Pauli weight (default ceil(9N/10))");
        cmd->add_option("--eps", eps, "Accuracy parameter");
        cmd->add_option("--c", c, "Perturbation constant");
        cmd->add_option("--seed", seed, "Seed")->required();
    };
    auto* gen = app.add_subcommand("gen", "Build one instance");
    common(gen);
    gen->add_option("--out", out, "Instance JSON (default stdout)");
    auto* sweep = app.add_subcommand("sweep", "Operator-norm concentration sweep");
    common(sweep);
    sweep->add_option("--trials", trials, "Number of sign draws");
    sweep->add_option("--out", out, "Per-trial CSV (default stdout)");
    sweep->add_option("--stats", stats_out, "Summary statistics JSON");
    return guarded(app, argc, argv, [&] {
        HardInstanceParams p = HardInstanceParams::defaults(n, eps);
        p.c = c;
        if (w) p.min_weight = *w;
        p.validate();
        if (!p.meets_ell_condition()) std::cerr << "warning: ell < d^{3/2}; concentration regime not reached\n";
        if (*gen) {
            emit(instance_to_json(build_instance(p, seed)), out);
            return kExitPass;
        }
        const ConcentrationStats s = opnorm_concentration_sweep(p, trials, seed);
        CsvWriter csv({"trial", "opnorm", "normalized_C", "clip", "trace_dist", "is_good", "seed"});
        for (const auto& r : s.rows) {
            csv.add(static_cast<std::uint64_t>(r.trial)).add(r.opnorm).add(r.normalized_C).add(r.clip);
            csv.add(r.trace_dist).add(r.is_good).add(r.seed);
            csv.end_row();
        }
        if (out.empty() || out == "-") {
            std::cout << csv.str();
        } else {
            csv.write(out);
        }
        if (!stats_out.empty()) {
            Json j = stats_to_json(s);
            j["seed"] = seed;
            write_json_file(stats_out, j);
        }
        return kExitPass;
    });
}

int mic_main(int argc, char** argv) {
    CLI::App app{"mic: measurement information channel spectral quantities"};
    app.require_subcommand(1);
    std::string povm_path, out;
    int w = 1, n = 1;
    std::optional<int> cert_w;
    std::size_t trials = 1000;
    std::uint64_t seed = 0;
    bool dense = false;
    auto* eval = app.add_subcommand("eval", "Spectral quantity of a POVM on weight->=w Paulis");
    eval->add_option("--povm", povm_path, "POVM JSON")->required()->check(CLI::ExistingFile);
    eval->add_option("--min-weight", w, "Minimum Pauli weight")->required();
    eval->add_flag("--dense", dense, "Also evaluate with the dense MIC matrix (N <= 5)");
    eval->add_option("--out", out, "Report JSON (default stdout)");
    auto* cert = app.add_subcommand("certify", "Randomized certification of the spectral bound");
    cert->add_option("--trials", trials, "Random POVMs per weight")->required();
    cert->add_option("--n-qubits", n, "Number of qubits")->required();
    cert->add_option("--min-weight", cert_w, "Minimum weight (default: every w in ceil(N/2)..N)");
    cert->add_option("--seed", seed, "Seed");
    cert->add_option("--out", out, "Report JSON (default stdout)");
    return guarded(app, argc, argv, [&] {
        if (*eval) {
            const ProductPovm m = povm_from_json(read_json_file(povm_path));
            const auto obs = enumerate_by_min_weight(m.n_qubits(), w);
            BoundReport r;
            r.name = "spectral_quantity";
            const double v = spectral_quantity(m, obs);
            r.term("n_qubits", m.n_qubits()).term("min_weight", w).term("observables", static_cast<double>(obs.size()));
            r.term("spectral_quantity", v);
            if (dense) r.term("spectral_quantity_dense", spectral_quantity_dense(m, obs));
            r.term("bound", spectral_envelope(m.n_qubits(), w));
            r.decide_absolute(v, spectral_envelope(m.n_qubits(), w), 1e-9);
            emit(report_to_json(r), out);
            return r.verdict ? kExitPass : kExitVerdict;
        }
        std::vector<int> ws;
        if (cert_w) {
            ws.push_back(*cert_w);
        } else {
            for (int k = (n + 1) / 2; k <= n; ++k) ws.push_back(k);
        }
        Json arr = Json::array();
        bool pass = true;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            const auto r = certify_spectral_bound(trials, n, ws[i], derive_seed(seed, {i}));
            pass = pass && r.verdict;
            arr.push_back(report_to_json(r));
        }
        emit(Json{{"all_pass", pass}, {"seed", seed}, {"reports", std::move(arr)}}, out);
        return pass ? kExitPass : kExitVerdict;
    });
}

int bound_main(int argc, char** argv) {
    CLI::App app{"bound: copy-complexity lower-bound arithmetic"};
    app.require_subcommand(1);
    int n = 1;
    double eps = 0.1, c = 1.0 / 200.0;
    std::string out;
    auto* calc = app.add_subcommand("calc", "Evaluate the inequality chain term by term");
    calc->add_option("--n-qubits", n, "Number of qubits N")->required();
    calc->add_option("--eps", eps, "Accuracy parameter")->required();
    calc->add_option("--c", c, "Perturbation constant");
    calc->add_option("--out", out, "Report JSON (default stdout)");
    return guarded(app, argc, argv, [&] {
        const LowerBoundChain chain = lower_bound_copies(n, eps, c);
        emit(chain_to_json(chain), out);
        return chain.steps_hold ? kExitPass : kExitVerdict;
    });
}

int mi_main(int argc, char** argv) {
    CLI::App app{"mi: exact mutual information between the hidden signs and measurement outcomes"};
    app.require_subcommand(1);
    ConfigArgs args;
    auto* exact = app.add_subcommand("exact", "Exact enumeration over signs and outcome histories");
    add_config_args(exact, args);
    return guarded(app, argc, argv, [&] {
        ConfigArgs a = args;
        a.sets.push_back("mi.mode=\"exact\"");
        return run_config(a, ExperimentKind::Mi);
    });
}

}  // namespace qtomo::cli
