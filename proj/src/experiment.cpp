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

#include "qtomo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "qtomo/combinatorics.hpp"
#include "qtomo/hard_instance.hpp"
#include "qtomo/mic.hpp"
#include "qtomo/tomography.hpp"

namespace qtomo {

namespace fs = std::filesystem;

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Scaling: return "scaling";
        case ExperimentKind::Hardcase: return "hardcase";
        case ExperimentKind::Certify: return "certify";
        case ExperimentKind::Mi: return "mi";
        case ExperimentKind::Bound: return "bound";
    }
    return "unknown";
}

ExperimentKind parse_kind(std::string_view s) {
    if (s == "scaling") return ExperimentKind::Scaling;
    if (s == "hardcase") return ExperimentKind::Hardcase;
    if (s == "certify") return ExperimentKind::Certify;
    if (s == "mi") return ExperimentKind::Mi;
    if (s == "bound") return ExperimentKind::Bound;
    throw ConfigError("unknown experiment kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Config

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!allowed.contains(k)) throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::uint64_t pow3(int n) {
    std::uint64_t r = 1;
    for (int i = 0; i < n; ++i) r *= 3;
    return r;
}

void validate(const ExperimentConfig& c) {
    if (c.n_qubits.empty()) throw ConfigError("grid.n_qubits must be non-empty");
    if (c.eps.empty()) throw ConfigError("grid.eps must be non-empty");
    for (double e : c.eps) {
        if (!(e > 0.0) || e > 1.0) throw ConfigError("grid.eps values must lie in (0, 1]");
    }
    if (!(c.c > 0.0)) throw ConfigError("grid.c must be positive");
    if (c.trials < 1) throw ConfigError("grid.trials must be >= 1");
    if (c.repetitions < 1) throw ConfigError("grid.repetitions must be >= 1");
    int max_n = 0;
    switch (c.kind) {
        case ExperimentKind::Scaling: max_n = 6; break;
        case ExperimentKind::Hardcase: max_n = 8; break;
        case ExperimentKind::Certify: max_n = 10; break;
        case ExperimentKind::Mi: max_n = 2; break;
        case ExperimentKind::Bound: max_n = 300; break;
    }
    for (int n : c.n_qubits) {
        if (n < 1 || n > max_n) {
            throw ConfigError(fmt::format("grid.n_qubits: {} outside [1, {}] for kind {}", n, max_n, to_string(c.kind)));
        }
        for (int w : c.min_weight) {
            if (w < 0 || w > n) throw ConfigError(fmt::format("grid.min_weight {} invalid for N = {}", w, n));
        }
    }
    if (c.kind == ExperimentKind::Scaling || c.kind == ExperimentKind::Mi) {
        if (c.copies.empty()) throw ConfigError("grid.copies must be non-empty");
    }
    if (c.kind == ExperimentKind::Scaling) {
        for (int n : c.n_qubits) {
            for (auto k : c.copies) {
                if (k < pow3(n)) throw ConfigError(fmt::format("grid.copies: {} < 3^{} for N = {}", k, n, n));
            }
        }
        if (c.state != "maximally_mixed" && c.state != "random") {
            throw ConfigError("state must be 'maximally_mixed' or 'random'");
        }
    }
    if (c.kind == ExperimentKind::Mi) {
        if (c.strategies.empty()) throw ConfigError("mi.strategies must be non-empty");
        for (const auto& s : c.strategies) {
            if (s != "z" && s != "uniform" && s != "adaptive" && s != "random_basis") {
                throw ConfigError("unknown strategy '" + s + "'");
            }
            if (s == "adaptive" && std::any_of(c.n_qubits.begin(), c.n_qubits.end(), [](int n) { return n != 1; })) {
                throw ConfigError("strategy 'adaptive' is single-qubit only");
            }
        }
        if (c.mc_samples < 1) throw ConfigError("mi.mc_samples must be >= 1");
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    check_keys(j, {"kind", "seed", "output_dir", "plot", "threads", "grid", "state", "mi"}, "config");
    ExperimentConfig c;
    if (!j.contains("kind")) throw ConfigError("config: 'kind' is required");
    if (!j.contains("seed")) throw ConfigError("config: 'seed' is required");
    if (!j.at("kind").is_string()) throw ConfigError("config: 'kind' must be a string");
    c.kind = parse_kind(j.at("kind").get<std::string>());
    if (!j.at("seed").is_number_integer()) throw ConfigError("config: 'seed' must be an integer");
    read(j, "seed", c.seed);
    std::string out = c.output_dir.string();
    read(j, "output_dir", out);
    c.output_dir = out;
    read(j, "plot", c.plot);
    read(j, "threads", c.threads);
    read(j, "state", c.state);
    if (!j.contains("grid")) throw ConfigError("config: 'grid' section is required");
    const Json& g = j.at("grid");
    check_keys(g, {"n_qubits", "copies", "eps", "min_weight", "trials", "repetitions", "c"}, "grid");
    read(g, "n_qubits", c.n_qubits);
    read(g, "copies", c.copies);
    read(g, "eps", c.eps);
    read(g, "min_weight", c.min_weight);
    read(g, "trials", c.trials);
    read(g, "repetitions", c.repetitions);
    read(g, "c", c.c);
    if (j.contains("mi")) {
        const Json& m = j.at("mi");
        check_keys(m, {"strategies", "mode", "mc_samples", "miller_madow", "concentration_C"}, "mi");
        read(m, "strategies", c.strategies);
        std::string mode = "exact";
        read(m, "mode", mode);
        if (mode == "exact") {
            c.mi_mode = MiMode::Exact;
        } else if (mode == "monte_carlo") {
            c.mi_mode = MiMode::MonteCarlo;
        } else {
            throw ConfigError("mi.mode must be 'exact' or 'monte_carlo'");
        }
        read(m, "mc_samples", c.mc_samples);
        read(m, "miller_madow", c.miller_madow);
        read(m, "concentration_C", c.concentration_C);
    }
    validate(c);
    return c;
}

Json ExperimentConfig::to_json() const {
    return Json{{"kind", to_string(kind)},
                {"seed", seed},
                {"output_dir", output_dir.string()},
                {"plot", plot},
                {"threads", threads},
                {"state", state},
                {"grid",
                 {{"n_qubits", n_qubits},
                  {"copies", copies},
                  {"eps", eps},
                  {"min_weight", min_weight},
                  {"trials", trials},
                  {"repetitions", repetitions},
                  {"c", c}}},
                {"mi",
                 {{"strategies", strategies},
                  {"mode", mi_mode == MiMode::Exact ? "exact" : "monte_carlo"},
                  {"mc_samples", mc_samples},
                  {"miller_madow", miller_madow},
                  {"concentration_C", concentration_C}}}};
}

void apply_override(Json& config, std::string_view dotted_key, std::string_view value) {
    Json* node = &config;
    std::string_view rest = dotted_key;
    while (true) {
        const auto dot = rest.find('.');
        const std::string key(rest.substr(0, dot));
        if (key.empty()) throw ConfigError("empty key in override '" + std::string(dotted_key) + "'");
        if (dot == std::string_view::npos) {
            Json parsed = Json::parse(value, nullptr, /*allow_exceptions=*/false);
            (*node)[key] = parsed.is_discarded() ? Json(std::string(value)) : parsed;
            return;
        }
        if (!node->contains(key)) (*node)[key] = Json::object();
        node = &(*node)[key];
        rest = rest.substr(dot + 1);
    }
}

// ---------------------------------------------------------------------------
// Utilities

unsigned resolve_threads(unsigned configured) {
    if (const char* env = std::getenv("QTOMO_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    if (configured > 0) return configured;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                        next.store(count);
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_slope: need two or more paired points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw ValidationError("fit_slope: x values are all equal");
    return sxy / sxx;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

CsvWriter& CsvWriter::add(double v) {
    current_.push_back(format_double(v));
    return *this;
}
CsvWriter& CsvWriter::add(std::uint64_t v) {
    current_.push_back(std::to_string(v));
    return *this;
}
CsvWriter& CsvWriter::add(std::int64_t v) {
    current_.push_back(std::to_string(v));
    return *this;
}
CsvWriter& CsvWriter::add(bool v) {
    current_.emplace_back(v ? "true" : "false");
    return *this;
}
CsvWriter& CsvWriter::add(std::string_view v) {
    if (v.find_first_of(",\"\r\n") == std::string_view::npos) {
        current_.emplace_back(v);
    } else {
        std::string quoted = "\"";
        for (char ch : v) {
            if (ch == '"') quoted += '"';
            quoted += ch;
        }
        current_.push_back(quoted + '"');
    }
    return *this;
}

void CsvWriter::end_row() {
    if (current_.size() != header_.size()) {
        throw std::logic_error(fmt::format("CSV row has {} fields, header has {}", current_.size(), header_.size()));
    }
    rows_.push_back(std::move(current_));
    current_.clear();
}

std::string CsvWriter::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& f) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i > 0) out += ',';
            out += f[i];
        }
        out += "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

void CsvWriter::write(const fs::path& path) const {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << str();
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kW = 640.0;
constexpr double kH = 420.0;
constexpr double kL = 70.0;
constexpr double kR = 20.0;
constexpr double kT = 40.0;
constexpr double kB = 50.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string svg_open(const std::string& title) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
        kW, kH, kW / 2, title);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

void write_loglog_svg(const fs::path& path, const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<PlotSeries>& series) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] <= 0 || s.y[i] <= 0) continue;
            x0 = std::min(x0, std::log10(s.x[i]));
            x1 = std::max(x1, std::log10(s.x[i]));
            y0 = std::min(y0, std::log10(s.y[i]));
            y1 = std::max(y1, std::log10(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    x0 = std::floor(x0), x1 = std::max(std::ceil(x1), x0 + 1);
    y0 = std::floor(y0), y1 = std::max(std::ceil(y1), y0 + 1);
    const auto px = [&](double v) { return kL + (std::log10(v) - x0) / (x1 - x0) * (kW - kL - kR); };
    const auto py = [&](double v) { return kH - kB - (std::log10(v) - y0) / (y1 - y0) * (kH - kT - kB); };
    std::string svg = svg_open(title);
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kL, kT,
                       kW - kL - kR, kH - kT - kB);
    for (double e = x0; e <= x1; e += 1) {
        const double x = px(std::pow(10.0, e));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">1e{}</text>\n", x, kH - kB + 16, e);
    }
    for (double e = y0; e <= y1; e += 1) {
        const double y = py(std::pow(10.0, e));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">1e{}</text>\n", kL - 6, y + 4, e);
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", (kL + kW - kR) / 2, kH - 12, xlabel);
    svg += fmt::format("<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
                       (kT + kH - kB) / 2, (kT + kH - kB) / 2, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % std::size(kColors)];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.x[i] <= 0 || s.y[i] <= 0) continue;
            pts += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
            svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(s.x[i]), py(s.y[i]), color);
        }
        svg += fmt::format("<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"/>\n", pts, color);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", kW - kR - 120, kT + 16 + 16 * k, color, s.label);
    }
    svg += "</svg>\n";
    write_text(path, svg);
}

void write_histogram_svg(const fs::path& path, const std::string& title, std::span<const double> values,
                         std::size_t bins) {
    bins = std::max<std::size_t>(bins, 1);
    double lo = INFINITY, hi = -INFINITY;
    for (double v : values) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi <= lo) hi = lo + 1;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        ++counts[std::min(b, bins - 1)];
    }
    const double top = static_cast<double>(std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end())));
    const double bw = (kW - kL - kR) / static_cast<double>(bins);
    std::string svg = svg_open(title);
    for (std::size_t b = 0; b < bins; ++b) {
        const double h = static_cast<double>(counts[b]) / top * (kH - kT - kB);
        svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#1f77b4\"/>\n",
                           kL + bw * static_cast<double>(b), kH - kB - h, bw * 0.95, h);
    }
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n", kL, kH - kB, kW - kR, kH - kB);
    svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kL, kH - kB + 16, format_double(lo).substr(0, 6));
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kW - kR, kH - kB + 16,
                       format_double(hi).substr(0, 6));
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kL - 6, kT + 4, static_cast<std::size_t>(top));
    svg += "</svg>\n";
    write_text(path, svg);
}

// ---------------------------------------------------------------------------
// Runners

MeasurementStrategy strategy_by_name(const std::string& name, int n_qubits, std::uint64_t seed) {
    if (name == "z") {
        return constant_strategy(ProductPovm::pauli_basis(PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_qubits), Pauli::Z))));
    }
    if (name == "uniform") return uniform_random_pauli_strategy(n_qubits);
    if (name == "adaptive") {
        if (n_qubits != 1) throw ConfigError("strategy 'adaptive' is single-qubit only");
        return adaptive_flip_strategy();
    }
    if (name == "random_basis") return seeded_random_basis_strategy(n_qubits, seed);
    throw ConfigError("unknown strategy '" + name + "'");
}

namespace {

int default_weight(int n) { return (9 * n + 9) / 10; }

std::vector<int> weights_for(const ExperimentConfig& c, int n, bool half_to_full) {
    if (!c.min_weight.empty()) return c.min_weight;
    if (!half_to_full) return {default_weight(n)};
    std::vector<int> ws;
    for (int w = (n + 1) / 2; w <= n; ++w) ws.push_back(w);
    return ws;
}

std::string seed_label(const std::string& what, std::size_t g) { return fmt::format("{}[{}]", what, g); }

}  // namespace

ExperimentOutcome run_scaling(const ExperimentConfig& cfg) {
    struct Point {
        int n_qubits;
        std::size_t copies;
        std::uint64_t seed;
    };
    std::vector<Point> grid;
    for (int n : cfg.n_qubits) {
        for (auto k : cfg.copies) grid.push_back({n, k, 0});
    }
    for (std::size_t g = 0; g < grid.size(); ++g) grid[g].seed = derive_seed(cfg.seed, {g});

    // One tomography engine per N, shared read-only across tasks.
    std::map<int, DensityMatrix> states;
    std::map<int, std::unique_ptr<PauliTomography>> engines;
    for (int n : cfg.n_qubits) {
        if (states.contains(n)) continue;
        if (cfg.state == "random") {
            Rng rng = make_rng(cfg.seed, {0x5747e, static_cast<std::uint64_t>(n)});
            states.emplace(n, random_density_matrix(n, rng));
        } else {
            states.emplace(n, maximally_mixed(n));
        }
        engines.emplace(n, std::make_unique<PauliTomography>(states.at(n)));
    }

    const std::size_t reps = cfg.repetitions;
    std::vector<double> hs2(grid.size() * reps);
    std::vector<double> tn(grid.size() * reps);
    parallel_for(grid.size() * reps, resolve_threads(cfg.threads), [&](std::size_t task) {
        const std::size_t g = task / reps;
        const std::size_t r = task % reps;
        const Point& pt = grid[g];
        const TomographyResult res = engines.at(pt.n_qubits)->run(pt.copies, derive_seed(pt.seed, {r}));
        const Eigen::MatrixXcd diff = res.estimate - states.at(pt.n_qubits).matrix();
        hs2[task] = diff.squaredNorm();
        tn[task] = schatten_norm(diff, Schatten::One);
    });

    ExperimentOutcome out;
    CsvWriter csv({"n_qubits", "copies", "repetitions", "mean_hs_sq", "mean_d_n_hs_sq", "ci95_d_n_hs_sq",
                   "ratio_to_ten_pow_n", "mean_trace_err", "ci95_trace_err", "seed"});
    std::map<int, PlotSeries> plot;
    Json points = Json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const Point& pt = grid[g];
        const double d = std::ldexp(1.0, pt.n_qubits);
        const double scale = d * static_cast<double>(pt.copies);
        double s = 0, ss = 0, t = 0, tt = 0;
        for (std::size_t r = 0; r < reps; ++r) {
            const double v = scale * hs2[g * reps + r];
            const double w = tn[g * reps + r];
            s += v, ss += v * v, t += w, tt += w * w;
        }
        const double R = static_cast<double>(reps);
        const double mean = s / R;
        const double mean_t = t / R;
        const double sd = reps > 1 ? std::sqrt(std::max(0.0, (ss - R * mean * mean) / (R - 1))) : 0.0;
        const double sd_t = reps > 1 ? std::sqrt(std::max(0.0, (tt - R * mean_t * mean_t) / (R - 1))) : 0.0;
        const double ten = std::pow(10.0, pt.n_qubits);
        csv.add(pt.n_qubits).add(static_cast<std::uint64_t>(pt.copies)).add(static_cast<std::uint64_t>(reps));
        csv.add(mean / scale).add(mean).add(1.96 * sd / std::sqrt(R)).add(mean / ten);
        csv.add(mean_t).add(1.96 * sd_t / std::sqrt(R)).add(pt.seed);
        csv.end_row();
        auto& series = plot[pt.n_qubits];
        series.label = fmt::format("N = {}", pt.n_qubits);
        series.x.push_back(static_cast<double>(pt.copies));
        series.y.push_back(mean / scale);
        points.push_back({{"n_qubits", pt.n_qubits}, {"copies", pt.copies}, {"mean_d_n_hs_sq", mean}, {"ratio_to_ten_pow_n", mean / ten}, {"seed", pt.seed}});
        out.seeds.emplace_back(seed_label("scaling", g), pt.seed);
    }
    Json slopes = Json::object();
    for (const auto& [n, series] : plot) {
        if (series.x.size() < 2) continue;
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < series.x.size(); ++i) {
            lx.push_back(std::log(series.x[i]));
            ly.push_back(std::log(series.y[i]));
        }
        slopes[std::to_string(n)] = fit_slope(lx, ly);
    }
    const fs::path csv_path = cfg.output_dir / "scaling.csv";
    csv.write(csv_path);
    out.files.push_back(csv_path);
    out.summary = Json{{"kind", "scaling"}, {"state", cfg.state}, {"points", std::move(points)}, {"loglog_slope_hs_sq", slopes}};
    if (cfg.plot) {
        std::vector<PlotSeries> series;
        for (auto& [n, s] : plot) series.push_back(s);
        const fs::path svg = cfg.output_dir / "scaling.svg";
        write_loglog_svg(svg, "Mean squared HS error", "copies n", "E ||rho_hat - rho||_2^2", series);
        out.files.push_back(svg);
    }
    return out;
}

ExperimentOutcome run_hardcase(const ExperimentConfig& cfg) {
    std::vector<HardInstanceParams> grid;
    for (int n : cfg.n_qubits) {
        for (int w : weights_for(cfg, n, false)) {
            for (double e : cfg.eps) grid.push_back(HardInstanceParams{n, w, cfg.c, e});
        }
    }
    for (const auto& p : grid) {
        try {
            p.validate();
        } catch (const ValidationError& e) {
            throw ConfigError(e.what());
        }
    }
    std::vector<ConcentrationStats> stats(grid.size());
    std::vector<std::uint64_t> seeds(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) seeds[g] = derive_seed(cfg.seed, {g});
    parallel_for(grid.size(), resolve_threads(cfg.threads), [&](std::size_t g) {
        stats[g] = opnorm_concentration_sweep(grid[g], cfg.trials, seeds[g]);
    });

    ExperimentOutcome out;
    CsvWriter summary({"n_qubits", "min_weight", "eps", "c", "ell", "meets_ell_condition", "trials", "good_fraction",
                       "concentration_fraction_C2", "min_clip", "mean_C", "median_C", "q90_C", "q99_C", "q999_C",
                       "max_C", "median_opnorm", "seed"});
    CsvWriter trials({"grid", "n_qubits", "min_weight", "eps", "trial", "seed", "opnorm", "normalized_C", "clip",
                      "trace_dist", "is_good"});
    Json points = Json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& p = grid[g];
        const auto& s = stats[g];
        double within2 = 0.0;
        for (const auto& row : s.rows) within2 += row.normalized_C <= 2.0 ? 1.0 : 0.0;
        within2 /= static_cast<double>(s.rows.size());
        summary.add(p.n_qubits).add(p.min_weight).add(p.eps).add(p.c).add(static_cast<std::uint64_t>(s.ell));
        summary.add(p.meets_ell_condition()).add(static_cast<std::uint64_t>(s.rows.size())).add(s.good_fraction);
        summary.add(within2).add(s.min_clip).add(s.mean_C).add(s.median_C).add(s.q90_C).add(s.q99_C);
        summary.add(s.q999_C).add(s.max_C).add(s.median_opnorm).add(seeds[g]);
        summary.end_row();
        for (const auto& row : s.rows) {
            trials.add(static_cast<std::uint64_t>(g)).add(p.n_qubits).add(p.min_weight).add(p.eps);
            trials.add(static_cast<std::uint64_t>(row.trial)).add(row.seed).add(row.opnorm).add(row.normalized_C);
            trials.add(row.clip).add(row.trace_dist).add(row.is_good);
            trials.end_row();
        }
        Json j = stats_to_json(s);
        j["seed"] = seeds[g];
        if (!p.meets_ell_condition()) j["warning"] = "ell < d^{3/2}: concentration regime not reached";
        points.push_back(std::move(j));
        out.seeds.emplace_back(seed_label("hardcase", g), seeds[g]);
        if (cfg.plot) {
            std::vector<double> cs;
            for (const auto& row : s.rows) cs.push_back(row.normalized_C);
            const fs::path svg = cfg.output_dir / fmt::format("normalized_C_N{}_w{}_{}.svg", p.n_qubits, p.min_weight, g);
            write_histogram_svg(svg, fmt::format("||W||_op sqrt(d/ell), N = {}, w = {}", p.n_qubits, p.min_weight), cs, 40);
            out.files.push_back(svg);
        }
    }
    const fs::path sp = cfg.output_dir / "hardcase.csv";
    const fs::path tp = cfg.output_dir / "hardcase_trials.csv";
    summary.write(sp);
    trials.write(tp);
    out.files.insert(out.files.begin(), {sp, tp});
    out.summary = Json{{"kind", "hardcase"}, {"points", std::move(points)}};
    return out;
}

ExperimentOutcome run_certify(const ExperimentConfig& cfg) {
    std::vector<std::pair<int, int>> grid;
    for (int n : cfg.n_qubits) {
        for (int w : weights_for(cfg, n, true)) grid.emplace_back(n, w);
    }
    std::vector<BoundReport> reports(grid.size());
    std::vector<std::uint64_t> seeds(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) seeds[g] = derive_seed(cfg.seed, {g});
    parallel_for(grid.size(), resolve_threads(cfg.threads), [&](std::size_t g) {
        reports[g] = certify_spectral_bound(cfg.trials, grid[g].first, grid[g].second, seeds[g]);
    });
    ExperimentOutcome out;
    CsvWriter csv({"n_qubits", "min_weight", "trials", "max_spectral_quantity", "bound", "verdict", "seed"});
    Json arr = Json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& r = reports[g];
        csv.add(grid[g].first).add(grid[g].second).add(static_cast<std::uint64_t>(cfg.trials)).add(r.lhs).add(r.rhs);
        csv.add(r.verdict).add(seeds[g]);
        csv.end_row();
        Json j = report_to_json(r);
        j["seed"] = seeds[g];
        arr.push_back(std::move(j));
        out.all_pass = out.all_pass && r.verdict;
        out.seeds.emplace_back(seed_label("certify", g), seeds[g]);
    }
    const fs::path cp = cfg.output_dir / "certify.csv";
    const fs::path jp = cfg.output_dir / "certify.json";
    csv.write(cp);
    out.summary = Json{{"kind", "certify"}, {"all_pass", out.all_pass}, {"reports", std::move(arr)}};
    write_json_file(jp, out.summary);
    out.files = {cp, jp};
    return out;
}

ExperimentOutcome run_mi(const ExperimentConfig& cfg) {
    struct Point {
        int n_qubits;
        double eps;
        std::string strategy;
        std::size_t copies;
    };
    std::vector<Point> grid;
    for (int n : cfg.n_qubits) {
        for (double e : cfg.eps) {
            for (const auto& s : cfg.strategies) {
                for (auto k : cfg.copies) grid.push_back({n, e, s, k});
            }
        }
    }
    std::vector<MiResult> results(grid.size());
    std::vector<std::uint64_t> seeds(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) seeds[g] = derive_seed(cfg.seed, {g});
    parallel_for(grid.size(), resolve_threads(cfg.threads), [&](std::size_t g) {
        const Point& pt = grid[g];
        HardInstanceParams p = HardInstanceParams::defaults(pt.n_qubits, pt.eps);
        p.c = cfg.c;
        if (!cfg.min_weight.empty()) p.min_weight = cfg.min_weight.front();
        MiOptions o;
        o.mode = cfg.mi_mode;
        o.mc_samples = cfg.mc_samples;
        o.seed = seeds[g];
        o.miller_madow = cfg.miller_madow;
        o.concentration_C = cfg.concentration_C;
        results[g] = mi_experiment(p, strategy_by_name(pt.strategy, pt.n_qubits, seeds[g]), pt.copies, o);
    });
    ExperimentOutcome out;
    CsvWriter csv({"n_qubits", "eps", "strategy", "copies", "average_mi_bits", "rhs", "verdict", "fano_verdict",
                   "spectral_sup", "prob_not_good_concentration", "seed"});
    Json arr = Json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& pt = grid[g];
        const auto& r = results[g];
        csv.add(pt.n_qubits).add(pt.eps).add(pt.strategy).add(static_cast<std::uint64_t>(pt.copies));
        csv.add(r.average_mi).add(r.report.rhs).add(r.report.verdict).add(r.fano.verdict).add(r.spectral_sup);
        csv.add(r.prob_not_good_concentration).add(seeds[g]);
        csv.end_row();
        Json j = mi_result_to_json(r);
        j["n_qubits"] = pt.n_qubits;
        j["strategy"] = pt.strategy;
        j["copies"] = pt.copies;
        j["seed"] = seeds[g];
        arr.push_back(std::move(j));
        out.all_pass = out.all_pass && r.report.verdict && r.fano.verdict;
        out.seeds.emplace_back(seed_label("mi", g), seeds[g]);
    }
    const fs::path cp = cfg.output_dir / "mi.csv";
    const fs::path jp = cfg.output_dir / "mi.json";
    csv.write(cp);
    out.summary = Json{{"kind", "mi"}, {"all_pass", out.all_pass}, {"results", std::move(arr)}};
    write_json_file(jp, out.summary);
    out.files = {cp, jp};
    return out;
}

ExperimentOutcome run_bound(const ExperimentConfig& cfg) {
    ExperimentOutcome out;
    // The chain is deterministic; the seed column records the config seed for uniformity.
    CsvWriter csv({"n_qubits", "eps", "c", "n_lower", "n_lower_exact_chain", "log10_n_lower", "log10_n_lower_exact_chain",
                   "concentration_term", "steps_hold", "seed"});
    Json arr = Json::array();
    for (int n : cfg.n_qubits) {
        for (double e : cfg.eps) {
            const LowerBoundChain chain = lower_bound_copies(n, e, cfg.c);
            csv.add(n).add(e).add(cfg.c).add(chain.n_lower).add(chain.n_lower_exact);
            csv.add(chain.log10_n_lower).add(chain.log10_n_lower_exact);
            csv.add(*chain.report.find("concentration_term_raw")).add(chain.steps_hold).add(cfg.seed);
            csv.end_row();
            arr.push_back(chain_to_json(chain));
            out.all_pass = out.all_pass && chain.steps_hold;
        }
    }
    const fs::path cp = cfg.output_dir / "bound.csv";
    const fs::path jp = cfg.output_dir / "bound.json";
    csv.write(cp);
    out.summary = Json{{"kind", "bound"}, {"all_pass", out.all_pass}, {"chains", std::move(arr)}};
    write_json_file(jp, out.summary);
    out.files = {cp, jp};
    return out;
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.kind) {
        case ExperimentKind::Scaling: return run_scaling(cfg);
        case ExperimentKind::Hardcase: return run_hardcase(cfg);
        case ExperimentKind::Certify: return run_certify(cfg);
        case ExperimentKind::Mi: return run_mi(cfg);
        case ExperimentKind::Bound: return run_bound(cfg);
    }
    throw ConfigError("unknown experiment kind");
}

namespace {

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

}  // namespace

ExperimentOutcome run_with_manifest(const ExperimentConfig& cfg) {
    const std::string started = utc_now();
    ExperimentOutcome out = run_experiment(cfg);
    const Json canonical = cfg.to_json();
    Json seeds = Json::object();
    seeds["master"] = cfg.seed;
    for (const auto& [k, v] : out.seeds) seeds[k] = v;
    Json files = Json::array();
    for (const auto& f : out.files) files.push_back(f.filename().string());
    const Json manifest{{"config_hash", sha256_hex(canonical.dump())},
                        {"toolkit_version", QTOMO_VERSION},
                        {"kind", to_string(cfg.kind)},
                        {"started_utc", started},
                        {"finished_utc", utc_now()},
                        {"threads", resolve_threads(cfg.threads)},
                        {"all_pass", out.all_pass},
                        {"seeds", std::move(seeds)},
                        {"files", std::move(files)},
                        {"config", canonical}};
    const fs::path mp = cfg.output_dir / "manifest.json";
    write_json_file(mp, manifest);
    out.files.push_back(mp);
    return out;
}

}  // namespace qtomo
