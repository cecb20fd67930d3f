// Copyright 2026 The CliNR Authors
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clinr/analytics.hpp"
#include "clinr/circuit.hpp"
#include "clinr/clifford_random.hpp"
#include "clinr/clinr.hpp"
#include "clinr/cznr.hpp"
#include "clinr/frame_sim.hpp"
#include "clinr/noise.hpp"
#include "json.hpp"

namespace clinr {

/// Invalid experiment configuration; the message names the offending field.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Mode : uint8_t { Direct, Clinr, Cznr, Bounds };
enum class CircuitKind : uint8_t { File, RandomClifford, RandomSequence, DenseCz };

inline std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::Direct:
            return "direct";
        case Mode::Clinr:
            return "clinr";
        case Mode::Cznr:
            return "cznr";
        case Mode::Bounds:
            return "bounds";
    }
    return "direct";
}

inline Mode parse_mode(std::string_view name) {
    for (Mode m : {Mode::Direct, Mode::Clinr, Mode::Cznr, Mode::Bounds}) {
        if (mode_name(m) == name) {
            return m;
        }
    }
    throw ConfigError("mode: unknown value '" + std::string(name) + "'");
}

inline std::string_view circuit_kind_name(CircuitKind k) {
    switch (k) {
        case CircuitKind::File:
            return "file";
        case CircuitKind::RandomClifford:
            return "random-clifford";
        case CircuitKind::RandomSequence:
            return "random-sequence";
        case CircuitKind::DenseCz:
            return "dense-cz";
    }
    return "file";
}

inline CircuitKind parse_circuit_kind(std::string_view name) {
    for (CircuitKind k :
         {CircuitKind::File, CircuitKind::RandomClifford, CircuitKind::RandomSequence, CircuitKind::DenseCz}) {
        if (circuit_kind_name(k) == name) {
            return k;
        }
    }
    throw ConfigError("circuit.source: unknown value '" + std::string(name) + "'");
}

/// Noise section of a config. `rate` is p in uniform mode and p2 in
/// realistic mode; explicit per-class keys override the mode defaults.
struct NoiseSpec {
    NoiseMode mode = NoiseMode::Realistic;
    double rate = 1e-3;
    std::optional<double> p1;
    std::optional<double> p2;
    std::optional<double> p_meas;
    std::optional<double> p_idle;

    /// The model with the base rate replaced by `base` (sweep axes).
    NoiseModel resolve_at(double base) const {
        NoiseModel m;
        switch (mode) {
            case NoiseMode::Uniform:
                m = NoiseModel::uniform(base);
                break;
            case NoiseMode::Realistic:
                m = NoiseModel::realistic(base);
                break;
            case NoiseMode::Custom:
                m = NoiseModel{};
                m.mode = NoiseMode::Custom;
                m.p2 = base;
                break;
        }
        if (p1) {
            m.p1 = *p1;
        }
        if (p_meas) {
            m.p_meas = *p_meas;
        }
        if (p_idle) {
            m.p_idle = *p_idle;
        }
        return m;
    }

    NoiseModel resolve() const {
        NoiseModel m = resolve_at(mode == NoiseMode::Custom ? p2.value_or(0) : rate);
        if (p2 && mode != NoiseMode::Realistic) {
            m.p2 = *p2;
        }
        return m;
    }
};

struct CircuitSpec {
    CircuitKind kind = CircuitKind::RandomClifford;
    std::string path;
    size_t n = 0;
    std::optional<double> alpha;
    std::optional<size_t> s;
};

struct ProtocolSpec {
    std::optional<size_t> t;
    std::optional<size_t> r;
    CheckStrategy strategy = CheckStrategy::Bell;
    uint64_t batch_size = 1000;
    uint64_t max_restarts = 10000;
    std::optional<double> budget;
    LogBase log_base = LogBase::Two;
    ResourceLayout layout = ResourceLayout::Split;
    IdleScope idle_scope = IdleScope::Segment;
};

struct SweepSpec {
    std::vector<size_t> n;
    std::vector<double> p2;
    std::vector<double> alpha;
    size_t circuits_per_point = 10;
};

struct ExperimentConfig {
    Mode mode = Mode::Clinr;
    NoiseSpec noise;
    CircuitSpec circuit;
    uint64_t shots = 100000;
    uint64_t seed = 1;
    ProtocolSpec protocol;
    SweepSpec sweep;
    std::string output;
    size_t threads = 0;

    void validate() const {
        if (shots < 1) {
            throw ConfigError("shots: must be at least 1");
        }
        if (protocol.batch_size < 1) {
            throw ConfigError("protocol.batch_size: must be at least 1");
        }
        if (protocol.max_restarts < 1) {
            throw ConfigError("protocol.max_restarts: must be at least 1");
        }
        if (protocol.t && *protocol.t < 1) {
            throw ConfigError("protocol.t: must be at least 1");
        }
        if (protocol.budget && !(*protocol.budget > 1)) {
            throw ConfigError("protocol.budget: must exceed 1");
        }
        if (!(noise.rate >= 0 && noise.rate <= 1)) {
            throw ConfigError("noise.p: must lie in [0, 1]");
        }
        for (const auto &[value, name] : {std::pair{noise.p1, "noise.p1"}, std::pair{noise.p2, "noise.p2"},
                                          std::pair{noise.p_meas, "noise.p_meas"},
                                          std::pair{noise.p_idle, "noise.p_idle"}}) {
            if (value && !(*value >= 0 && *value <= 1)) {
                throw ConfigError(std::string(name) + ": must lie in [0, 1]");
            }
        }
        for (double a : sweep.alpha) {
            if (!(a > 0 && a <= 2)) {
                throw ConfigError("sweep.alpha: values must lie in (0, 2]");
            }
        }
        for (double p : sweep.p2) {
            if (!(p >= 0 && p <= 1)) {
                throw ConfigError("sweep.p2: values must lie in [0, 1]");
            }
        }
        for (size_t n : sweep.n) {
            if (n < 1) {
                throw ConfigError("sweep.n: values must be at least 1");
            }
        }
        if (sweep.circuits_per_point < 1) {
            throw ConfigError("sweep.circuits_per_point: must be at least 1");
        }
        if (circuit.alpha && !(*circuit.alpha > 0 && *circuit.alpha <= 2)) {
            throw ConfigError("circuit.alpha: must lie in (0, 2]");
        }
    }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json &j, std::initializer_list<std::string_view> allowed,
                                const std::string &where) {
    if (!j.is_object()) {
        throw ConfigError((where.empty() ? std::string("config") : where) + ": expected an object");
    }
    for (const auto &item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + (where.empty() ? item.key() : where + "." + item.key()) + "'");
        }
    }
}

template <typename T>
T get_field(const nlohmann::json &j, const std::string &name) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError(name + ": wrong type");
    }
}

inline double get_probability(const nlohmann::json &j, const std::string &name) {
    if (!j.is_number()) {
        throw ConfigError(name + ": expected a number");
    }
    return j.get<double>();
}

inline uint64_t get_count(const nlohmann::json &j, const std::string &name) {
    if (!j.is_number_integer() || j.get<int64_t>() < 0) {
        throw ConfigError(name + ": expected a nonnegative integer");
    }
    return j.get<uint64_t>();
}

template <typename T, typename Get>
std::vector<T> get_list(const nlohmann::json &j, const std::string &name, Get get) {
    std::vector<T> out;
    if (!j.is_array()) {
        out.push_back(get(j, name));
        return out;
    }
    for (const auto &v : j) {
        out.push_back(get(v, name));
    }
    return out;
}

}  // namespace detail

inline NoiseMode parse_noise_mode(std::string_view name) {
    for (NoiseMode m : {NoiseMode::Uniform, NoiseMode::Realistic, NoiseMode::Custom}) {
        if (noise_mode_name(m) == name) {
            return m;
        }
    }
    throw ConfigError("noise.mode: unknown value '" + std::string(name) + "'");
}

/// Parses a config document; every unknown key is an error.
inline ExperimentConfig config_from_json(const nlohmann::json &j) {
    using namespace detail;
    ExperimentConfig cfg;
    reject_unknown_keys(j, {"mode", "noise", "circuit", "shots", "seed", "protocol", "sweep", "output", "threads"},
                        "");
    if (j.contains("mode")) {
        cfg.mode = parse_mode(get_field<std::string>(j["mode"], "mode"));
    }
    if (j.contains("noise")) {
        const auto &nj = j["noise"];
        reject_unknown_keys(nj, {"mode", "p", "p2", "p1", "p_meas", "p_idle"}, "noise");
        if (nj.contains("mode")) {
            cfg.noise.mode = parse_noise_mode(get_field<std::string>(nj["mode"], "noise.mode"));
        }
        if (nj.contains("p")) {
            cfg.noise.rate = get_probability(nj["p"], "noise.p");
        }
        if (nj.contains("p2")) {
            double p2 = get_probability(nj["p2"], "noise.p2");
            cfg.noise.p2 = p2;
            if (cfg.noise.mode == NoiseMode::Realistic) {
                cfg.noise.rate = p2;
            }
        }
        if (nj.contains("p1")) {
            cfg.noise.p1 = get_probability(nj["p1"], "noise.p1");
        }
        if (nj.contains("p_meas")) {
            cfg.noise.p_meas = get_probability(nj["p_meas"], "noise.p_meas");
        }
        if (nj.contains("p_idle")) {
            cfg.noise.p_idle = get_probability(nj["p_idle"], "noise.p_idle");
        }
    }
    if (j.contains("circuit")) {
        const auto &cj = j["circuit"];
        reject_unknown_keys(cj, {"source", "path", "n", "alpha", "s"}, "circuit");
        if (cj.contains("source")) {
            cfg.circuit.kind = parse_circuit_kind(get_field<std::string>(cj["source"], "circuit.source"));
        }
        if (cj.contains("path")) {
            cfg.circuit.path = get_field<std::string>(cj["path"], "circuit.path");
        }
        if (cj.contains("n")) {
            cfg.circuit.n = get_count(cj["n"], "circuit.n");
        }
        if (cj.contains("alpha")) {
            cfg.circuit.alpha = get_probability(cj["alpha"], "circuit.alpha");
        }
        if (cj.contains("s")) {
            cfg.circuit.s = get_count(cj["s"], "circuit.s");
        }
    }
    if (j.contains("shots")) {
        cfg.shots = get_count(j["shots"], "shots");
    }
    if (j.contains("seed")) {
        cfg.seed = get_count(j["seed"], "seed");
    }
    if (j.contains("protocol")) {
        const auto &pj = j["protocol"];
        reject_unknown_keys(pj,
                            {"t", "r", "strategy", "batch_size", "max_restarts", "budget", "log_base", "layout",
                             "idle_scope"},
                            "protocol");
        if (pj.contains("t")) {
            cfg.protocol.t = get_count(pj["t"], "protocol.t");
        }
        if (pj.contains("r")) {
            cfg.protocol.r = get_count(pj["r"], "protocol.r");
        }
        if (pj.contains("strategy")) {
            try {
                cfg.protocol.strategy = parse_strategy(get_field<std::string>(pj["strategy"], "protocol.strategy"));
            } catch (const ConfigError &) {
                throw;
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("protocol.strategy: ") + e.what());
            }
        }
        if (pj.contains("batch_size")) {
            cfg.protocol.batch_size = get_count(pj["batch_size"], "protocol.batch_size");
        }
        if (pj.contains("max_restarts")) {
            cfg.protocol.max_restarts = get_count(pj["max_restarts"], "protocol.max_restarts");
        }
        if (pj.contains("budget")) {
            if (!pj["budget"].is_number()) {
                throw ConfigError("protocol.budget: expected a number");
            }
            cfg.protocol.budget = pj["budget"].get<double>();
        }
        if (pj.contains("log_base")) {
            auto base = get_field<std::string>(pj["log_base"], "protocol.log_base");
            if (base == "2") {
                cfg.protocol.log_base = LogBase::Two;
            } else if (base == "e") {
                cfg.protocol.log_base = LogBase::E;
            } else {
                throw ConfigError("protocol.log_base: expected \"2\" or \"e\"");
            }
        }
        if (pj.contains("layout")) {
            try {
                cfg.protocol.layout = parse_layout(get_field<std::string>(pj["layout"], "protocol.layout"));
            } catch (const ConfigError &) {
                throw;
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("protocol.layout: ") + e.what());
            }
        }
        if (pj.contains("idle_scope")) {
            try {
                cfg.protocol.idle_scope =
                    parse_idle_scope(get_field<std::string>(pj["idle_scope"], "protocol.idle_scope"));
            } catch (const ConfigError &) {
                throw;
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("protocol.idle_scope: ") + e.what());
            }
        }
    }
    if (j.contains("sweep")) {
        const auto &sj = j["sweep"];
        reject_unknown_keys(sj, {"n", "p2", "alpha", "circuits_per_point"}, "sweep");
        if (sj.contains("n")) {
            cfg.sweep.n = get_list<size_t>(sj["n"], "sweep.n", get_count);
        }
        if (sj.contains("p2")) {
            cfg.sweep.p2 = get_list<double>(sj["p2"], "sweep.p2", get_probability);
        }
        if (sj.contains("alpha")) {
            cfg.sweep.alpha = get_list<double>(sj["alpha"], "sweep.alpha", get_probability);
        }
        if (sj.contains("circuits_per_point")) {
            cfg.sweep.circuits_per_point = get_count(sj["circuits_per_point"], "sweep.circuits_per_point");
        }
    }
    if (j.contains("output")) {
        cfg.output = get_field<std::string>(j["output"], "output");
    }
    if (j.contains("threads")) {
        cfg.threads = get_count(j["threads"], "threads");
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig config_from_string(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_string(buf.str());
}

inline nlohmann::json config_to_json(const ExperimentConfig &cfg) {
    nlohmann::json j;
    j["mode"] = std::string(mode_name(cfg.mode));
    nlohmann::json nj;
    nj["mode"] = std::string(noise_mode_name(cfg.noise.mode));
    if (cfg.noise.mode == NoiseMode::Realistic) {
        nj["p2"] = cfg.noise.rate;
    } else {
        nj["p"] = cfg.noise.rate;
        if (cfg.noise.p2) {
            nj["p2"] = *cfg.noise.p2;
        }
    }
    if (cfg.noise.p1) {
        nj["p1"] = *cfg.noise.p1;
    }
    if (cfg.noise.p_meas) {
        nj["p_meas"] = *cfg.noise.p_meas;
    }
    if (cfg.noise.p_idle) {
        nj["p_idle"] = *cfg.noise.p_idle;
    }
    j["noise"] = nj;
    nlohmann::json cj;
    cj["source"] = std::string(circuit_kind_name(cfg.circuit.kind));
    if (!cfg.circuit.path.empty()) {
        cj["path"] = cfg.circuit.path;
    }
    cj["n"] = cfg.circuit.n;
    if (cfg.circuit.alpha) {
        cj["alpha"] = *cfg.circuit.alpha;
    }
    if (cfg.circuit.s) {
        cj["s"] = *cfg.circuit.s;
    }
    j["circuit"] = cj;
    j["shots"] = cfg.shots;
    j["seed"] = cfg.seed;
    nlohmann::json pj;
    if (cfg.protocol.t) {
        pj["t"] = *cfg.protocol.t;
    }
    if (cfg.protocol.r) {
        pj["r"] = *cfg.protocol.r;
    }
    pj["strategy"] = std::string(strategy_name(cfg.protocol.strategy));
    pj["batch_size"] = cfg.protocol.batch_size;
    pj["max_restarts"] = cfg.protocol.max_restarts;
    if (cfg.protocol.budget) {
        pj["budget"] = *cfg.protocol.budget;
    }
    pj["log_base"] = cfg.protocol.log_base == LogBase::E ? "e" : "2";
    pj["layout"] = std::string(layout_name(cfg.protocol.layout));
    pj["idle_scope"] = std::string(idle_scope_name(cfg.protocol.idle_scope));
    j["protocol"] = pj;
    nlohmann::json sj;
    sj["n"] = cfg.sweep.n;
    sj["p2"] = cfg.sweep.p2;
    sj["alpha"] = cfg.sweep.alpha;
    sj["circuits_per_point"] = cfg.sweep.circuits_per_point;
    j["sweep"] = sj;
    if (!cfg.output.empty()) {
        j["output"] = cfg.output;
    }
    j["threads"] = cfg.threads;
    return j;
}

/// Desk profile: 10^4 shots and sweep widths capped at 15.
inline void apply_desk_profile(ExperimentConfig &cfg) {
    cfg.shots = 10000;
    std::erase_if(cfg.sweep.n, [](size_t n) { return n > 15; });
    if (cfg.sweep.n.empty()) {
        cfg.sweep.n = {15};
    }
}

/// Random-sequence size for shape parameter alpha: round(n^alpha), at least 1.
inline size_t shape_size(size_t n, double alpha) {
    return std::max<size_t>(1, static_cast<size_t>(std::llround(std::pow(static_cast<double>(n), alpha))));
}

/// Circuit text, or a graph edge list (first item `graph <n>`) read as its CZ circuit.
inline Circuit parse_circuit_or_graph(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(line.substr(0, line.find('#')));
        std::string first;
        if (words >> first) {
            if (first == "graph") {
                return graph_to_circuit(parse_graph(text));
            }
            break;
        }
    }
    return parse_circuit(text);
}

inline Circuit load_circuit_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open circuit file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_circuit_or_graph(buf.str());
}

/// Builds a circuit of the given kind with an rng seeded by `seed`.
inline Circuit make_circuit(CircuitKind kind, size_t n, std::optional<double> alpha, std::optional<size_t> s,
                            uint64_t seed, const std::string &path = {}) {
    if (kind == CircuitKind::File) {
        if (path.empty()) {
            throw ConfigError("circuit.path: required for source 'file'");
        }
        return load_circuit_file(path);
    }
    if (n < 1) {
        throw ConfigError("circuit.n: must be at least 1");
    }
    std::mt19937_64 rng(seed);
    switch (kind) {
        case CircuitKind::RandomClifford:
            return synthesize(sample_clifford(n, rng));
        case CircuitKind::RandomSequence: {
            if (n < 2) {
                throw ConfigError("circuit.n: random-sequence needs n >= 2");
            }
            if (!s && !alpha) {
                throw ConfigError("circuit: random-sequence needs 'alpha' or 's'");
            }
            return sample_gate_sequence(n, s ? *s : shape_size(n, *alpha), rng);
        }
        case CircuitKind::DenseCz: {
            if (n < 2) {
                throw ConfigError("circuit.n: dense-cz needs n >= 2");
            }
            size_t size = s ? *s : (alpha ? shape_size(n, *alpha) : n * (n - 1) / 2);
            return sample_cz_sequence(n, size, rng);
        }
        case CircuitKind::File:
            break;
    }
    throw ConfigError("circuit.source: unsupported");
}

inline Circuit make_circuit(const ExperimentConfig &cfg) {
    return make_circuit(cfg.circuit.kind, cfg.circuit.n, cfg.circuit.alpha, cfg.circuit.s,
                        derive_seed(cfg.seed, {0xC1C0ULL}), cfg.circuit.path);
}

/// Largest fault rate of a model; the analytic bounds take a single p.
inline double bound_rate(const NoiseModel &m) {
    return std::max({m.p1, m.p2, m.p_meas});
}

struct ProtocolChoice {
    size_t t = 1;
    size_t r = 0;
    bool budget_met = true;  // false when the budget fallback was used
};

/// t and r for a protocol run on an (n, s) circuit. Explicit values win; r
/// otherwise follows default_params. With a budget, t is the smallest value
/// whose analytic omega_G bound meets it, or the bound's minimizer when none
/// does. Without either, t follows default_params.
inline ProtocolChoice choose_protocol(const ProtocolSpec &spec, size_t n, size_t s, double p, BoundKind kind) {
    ProtocolChoice c;
    auto [t_default, r_default] = default_params(n, s, spec.log_base);
    c.r = spec.r.value_or(r_default);
    size_t r_max = kind == BoundKind::Cznr ? n : 2 * n;
    c.r = std::min(c.r, r_max);
    if (spec.t) {
        c.t = *spec.t;
    } else if (spec.budget) {
        auto t = choose_t_for_budget(n, s, c.r, p, *spec.budget, kind);
        c.budget_met = t.has_value();
        c.t = t ? *t : argmin_t_gate_bound(n, s, c.r, p, kind);
    } else {
        c.t = t_default;
    }
    c.t = std::clamp<size_t>(c.t, 1, std::max<size_t>(1, s));
    return c;
}

/// One CSV row of run / sweep output.
struct ResultRow {
    std::string mode;
    size_t n = 0;
    std::optional<double> alpha;
    size_t s = 0;
    size_t t = 0;
    size_t r = 0;
    double p2 = 0;
    double p1 = 0;
    uint64_t shots = 0;
    uint64_t seed = 0;
    int64_t circuit_idx = 0;  // -1 for aggregates
    double plog = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    double mean_ops = 0;
    double omega_g = 0;
    double restart_rate = 0;
    uint64_t aborts = 0;
};

inline constexpr std::string_view kSweepHeader =
    "mode,n,alpha,s,t,r,p2,p1,shots,seed,circuit_idx,plog,ci_lo,ci_hi,mean_ops,omega_g,restart_rate,aborts";
inline constexpr std::string_view kGridHeader =
    "n,alpha,s,t,r,p2,p1,shots,seed,plog_direct,ci_lo_direct,ci_hi_direct,plog_clinr,ci_lo_clinr,ci_hi_clinr,"
    "delta_plog,delta_ci_lo,delta_ci_hi";

/// Shortest round-trippable decimal form; fixed for every platform.
inline std::string format_double(double v) {
    char buf[64];
    for (int precision = 6; precision <= 17; precision++) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

inline std::string to_csv(const ResultRow &row) {
    std::ostringstream out;
    out << row.mode << ',' << row.n << ',' << (row.alpha ? format_double(*row.alpha) : std::string()) << ','
        << row.s << ',' << row.t << ',' << row.r << ',' << format_double(row.p2) << ',' << format_double(row.p1)
        << ',' << row.shots << ',' << row.seed << ',' << row.circuit_idx << ',' << format_double(row.plog) << ','
        << format_double(row.ci_lo) << ',' << format_double(row.ci_hi) << ',' << format_double(row.mean_ops) << ','
        << format_double(row.omega_g) << ',' << format_double(row.restart_rate) << ',' << row.aborts;
    return out.str();
}

inline ResultRow make_row(std::string_view mode, const RunStats &stats, const NoiseModel &model, uint64_t seed,
                          int64_t circuit_idx) {
    ResultRow row;
    row.mode = std::string(mode);
    row.n = stats.logical_qubits;
    row.s = stats.logical_size;
    row.p2 = model.p2;
    row.p1 = model.p1;
    row.shots = stats.shots;
    row.seed = seed;
    row.circuit_idx = circuit_idx;
    row.plog = stats.p_log();
    if (stats.shots > 0) {
        auto [lo, hi] = stats.interval();
        row.ci_lo = lo;
        row.ci_hi = hi;
    }
    row.mean_ops = stats.mean_ops();
    row.omega_g = stats.omega_g();
    row.restart_rate = stats.restart_rate();
    row.aborts = stats.aborts;
    return row;
}

inline ClinrParams to_params(const ProtocolSpec &spec, const ProtocolChoice &choice) {
    ClinrParams p;
    p.t = choice.t;
    p.r = choice.r;
    p.strategy = spec.strategy;
    p.batch_size = spec.batch_size;
    p.max_restarts = spec.max_restarts;
    p.layout = spec.layout;
    p.idle_scope = spec.idle_scope;
    return p;
}

/// Runs one mode on one circuit and returns its row (t, r filled in).
inline ResultRow run_mode(Mode mode, const Circuit &c, const ProtocolSpec &spec, const NoiseModel &model,
                          uint64_t shots, uint64_t seed, size_t threads, int64_t circuit_idx) {
    RunStats stats;
    ProtocolChoice choice{0, 0, true};
    const size_t n = c.num_qubits();
    switch (mode) {
        case Mode::Direct:
            stats = run_direct(c, model, shots, seed, threads, spec.idle_scope);
            break;
        case Mode::Clinr:
            choice = choose_protocol(spec, n, std::max<size_t>(1, c.size()), bound_rate(model), BoundKind::Clinr);
            stats = run_clinr(c, to_params(spec, choice), model, shots, seed, threads);
            break;
        case Mode::Cznr:
            choice = choose_protocol(spec, n, std::max<size_t>(1, c.size()), bound_rate(model), BoundKind::Cznr);
            stats = run_cznr(c, to_params(spec, choice), model, shots, seed, threads);
            break;
        case Mode::Bounds:
            throw ConfigError("mode: 'bounds' does not simulate");
    }
    ResultRow row = make_row(mode_name(mode), stats, model, seed, circuit_idx);
    row.t = choice.t;
    row.r = choice.r;
    return row;
}

/// Row of pooled statistics over several circuits of one sweep point.
inline ResultRow aggregate_rows(const std::vector<ResultRow> &rows, uint64_t seed) {
    if (rows.empty()) {
        throw std::invalid_argument("aggregate_rows: no rows.");
    }
    ResultRow out = rows.front();
    out.circuit_idx = -1;
    out.seed = seed;
    uint64_t failures = 0;
    uint64_t shots = 0;
    double ops = 0;
    double s_sum = 0;
    double restarts = 0;
    uint64_t aborts = 0;
    for (const auto &row : rows) {
        auto f = static_cast<uint64_t>(std::llround(row.plog * static_cast<double>(row.shots)));
        failures += f;
        shots += row.shots;
        ops += row.mean_ops * static_cast<double>(row.shots);
        restarts += row.restart_rate * static_cast<double>(row.shots);
        s_sum += static_cast<double>(row.s);
        aborts += row.aborts;
        if (row.t != out.t) {
            out.t = 0;
        }
        if (row.r != out.r) {
            out.r = 0;
        }
    }
    double mean_s = s_sum / static_cast<double>(rows.size());
    out.s = static_cast<size_t>(std::llround(mean_s));
    out.shots = shots;
    out.aborts = aborts;
    out.plog = shots == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(shots);
    if (shots > 0) {
        auto [lo, hi] = wilson_interval(failures, shots);
        out.ci_lo = lo;
        out.ci_hi = hi;
        out.mean_ops = ops / static_cast<double>(shots);
        out.restart_rate = restarts / static_cast<double>(shots);
    }
    out.omega_g = mean_s > 0 ? out.mean_ops / mean_s : 0.0;
    return out;
}

/// Single run of the configured mode on the configured circuit.
inline ResultRow cmd_run(const ExperimentConfig &cfg) {
    cfg.validate();
    Circuit c = make_circuit(cfg);
    NoiseModel model = cfg.noise.resolve();
    ResultRow row = run_mode(cfg.mode, c, cfg.protocol, model, cfg.shots, cfg.seed, cfg.threads, 0);
    if (cfg.circuit.kind == CircuitKind::RandomSequence && cfg.circuit.alpha) {
        row.alpha = cfg.circuit.alpha;
    }
    return row;
}

/// Analytic bound report of the configured protocol on the configured circuit.
inline BoundReport cmd_bounds(const ExperimentConfig &cfg, Mode protocol = Mode::Clinr) {
    Circuit c = make_circuit(cfg);
    NoiseModel model = cfg.noise.resolve();
    BoundKind kind = protocol == Mode::Cznr ? BoundKind::Cznr : BoundKind::Clinr;
    size_t s = std::max<size_t>(1, c.size());
    double p = bound_rate(model);
    ProtocolChoice choice = choose_protocol(cfg.protocol, c.num_qubits(), s, p, kind);
    return protocol_bound(kind, c.num_qubits(), s, choice.t, choice.r, p);
}

inline nlohmann::json bound_to_json(const BoundReport &b) {
    return nlohmann::json{{"n", b.n},
                          {"s", b.s},
                          {"t", b.t},
                          {"r", b.r},
                          {"p", b.p},
                          {"s0", b.s0},
                          {"m0", b.m0},
                          {"detect_term", b.detect_term},
                          {"residual_term", b.residual_term},
                          {"denominator", b.denominator},
                          {"p_log_bound", b.p_log_bound},
                          {"p_log_clamped", b.p_log_clamped},
                          {"omega_q", b.omega_q},
                          {"omega_g_bound", b.omega_g_bound}};
}

namespace detail {

inline uint64_t double_bits(double v) {
    uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(bits));
    return bits;
}

inline Mode protocol_mode(const ExperimentConfig &cfg) {
    if (cfg.mode == Mode::Bounds) {
        throw ConfigError("mode: 'bounds' cannot be swept");
    }
    return cfg.mode;
}

}  // namespace detail

/// Sweep over (p2, n[, alpha]): for every point, `circuits_per_point`
/// circuits run directly and (unless mode is direct) with the protocol;
/// per-circuit rows are followed by one aggregate row per mode. Circuits
/// depend on (seed, n, alpha, index) only, so every p2 sees the same ones.
/// `emit` receives rows in a fixed order.
inline void cmd_sweep(const ExperimentConfig &cfg, const std::function<void(const ResultRow &)> &emit) {
    cfg.validate();
    const Mode protocol = detail::protocol_mode(cfg);
    if (cfg.sweep.n.empty()) {
        throw ConfigError("sweep.n: axis must be non-empty");
    }
    std::vector<double> p2_axis = cfg.sweep.p2.empty() ? std::vector<double>{cfg.noise.rate} : cfg.sweep.p2;
    CircuitKind kind = cfg.circuit.kind;
    if (kind == CircuitKind::File) {
        throw ConfigError("circuit.source: sweeps need a random circuit source");
    }
    if (protocol == Mode::Cznr && kind != CircuitKind::DenseCz) {
        throw ConfigError("circuit.source: cznr sweeps need 'dense-cz'");
    }
    std::vector<std::optional<double>> alpha_axis;
    if (kind == CircuitKind::RandomClifford || cfg.sweep.alpha.empty()) {
        alpha_axis.push_back(cfg.circuit.alpha);
    } else {
        for (double a : cfg.sweep.alpha) {
            alpha_axis.emplace_back(a);
        }
    }
    for (size_t pi = 0; pi < p2_axis.size(); pi++) {
        NoiseModel model = cfg.noise.resolve_at(p2_axis[pi]);
        for (size_t n : cfg.sweep.n) {
            for (size_t ai = 0; ai < alpha_axis.size(); ai++) {
                const auto &alpha = alpha_axis[ai];
                std::vector<ResultRow> direct_rows, protocol_rows;
                for (size_t idx = 0; idx < cfg.sweep.circuits_per_point; idx++) {
                    uint64_t alpha_key = alpha ? detail::double_bits(*alpha) : 0;
                    uint64_t circuit_seed = derive_seed(cfg.seed, {0xC1C0ULL, n, alpha_key, idx});
                    Circuit c = make_circuit(kind, n, alpha, cfg.circuit.s, circuit_seed);
                    uint64_t direct_seed = derive_seed(cfg.seed, {0x5EEDULL, pi, n, ai, idx, 0});
                    ResultRow d = run_mode(Mode::Direct, c, cfg.protocol, model, cfg.shots, direct_seed, cfg.threads,
                                           static_cast<int64_t>(idx));
                    d.alpha = alpha;
                    emit(d);
                    direct_rows.push_back(d);
                    if (protocol != Mode::Direct) {
                        uint64_t run_seed = derive_seed(cfg.seed, {0x5EEDULL, pi, n, ai, idx, 1});
                        ResultRow row = run_mode(protocol, c, cfg.protocol, model, cfg.shots, run_seed, cfg.threads,
                                                 static_cast<int64_t>(idx));
                        row.alpha = alpha;
                        emit(row);
                        protocol_rows.push_back(row);
                    }
                }
                emit(aggregate_rows(direct_rows, cfg.seed));
                if (!protocol_rows.empty()) {
                    emit(aggregate_rows(protocol_rows, cfg.seed));
                }
            }
        }
    }
}

/// One cell of the (n, alpha) grid.
struct GridRow {
    size_t n = 0;
    double alpha = 0;
    size_t s = 0;
    size_t t = 0;
    size_t r = 0;
    double p2 = 0;
    double p1 = 0;
    uint64_t shots = 0;
    uint64_t seed = 0;
    double plog_direct = 0, ci_lo_direct = 0, ci_hi_direct = 0;
    double plog_clinr = 0, ci_lo_clinr = 0, ci_hi_clinr = 0;
    double delta_plog = 0, delta_ci_lo = 0, delta_ci_hi = 0;
};

inline std::string to_csv(const GridRow &row) {
    std::ostringstream out;
    out << row.n << ',' << format_double(row.alpha) << ',' << row.s << ',' << row.t << ',' << row.r << ','
        << format_double(row.p2) << ',' << format_double(row.p1) << ',' << row.shots << ',' << row.seed << ','
        << format_double(row.plog_direct) << ',' << format_double(row.ci_lo_direct) << ','
        << format_double(row.ci_hi_direct) << ',' << format_double(row.plog_clinr) << ','
        << format_double(row.ci_lo_clinr) << ',' << format_double(row.ci_hi_clinr) << ','
        << format_double(row.delta_plog) << ',' << format_double(row.delta_ci_lo) << ','
        << format_double(row.delta_ci_hi);
    return out.str();
}

/// Grid of Delta p_log = p_log_direct - p_log_clinr over n x alpha, with
/// random {H, S, CX} sequences of size round(n^alpha). Each cell pools
/// `circuits_per_point` circuits. The Delta interval combines the two
/// Wilson intervals conservatively: [lo_d - hi_c, hi_d - lo_c].
inline void cmd_grid(const ExperimentConfig &cfg, const std::function<void(const GridRow &)> &emit) {
    cfg.validate();
    if (cfg.sweep.n.empty() || cfg.sweep.alpha.empty()) {
        throw ConfigError("sweep: grid needs non-empty 'n' and 'alpha' axes");
    }
    std::vector<double> p2_axis = cfg.sweep.p2.empty() ? std::vector<double>{cfg.noise.rate} : cfg.sweep.p2;
    for (size_t pi = 0; pi < p2_axis.size(); pi++) {
        NoiseModel model = cfg.noise.resolve_at(p2_axis[pi]);
        for (size_t n : cfg.sweep.n) {
            for (size_t ai = 0; ai < cfg.sweep.alpha.size(); ai++) {
                double alpha = cfg.sweep.alpha[ai];
                std::vector<ResultRow> direct_rows, clinr_rows;
                for (size_t idx = 0; idx < cfg.sweep.circuits_per_point; idx++) {
                    uint64_t circuit_seed =
                        derive_seed(cfg.seed, {0x6E1DULL, n, detail::double_bits(alpha), idx});
                    Circuit c = make_circuit(CircuitKind::RandomSequence, n, alpha, std::nullopt, circuit_seed);
                    uint64_t base = derive_seed(cfg.seed, {0x6E1DULL, pi, n, ai, idx});
                    direct_rows.push_back(run_mode(Mode::Direct, c, cfg.protocol, model, cfg.shots,
                                                   derive_seed(base, {0}), cfg.threads, static_cast<int64_t>(idx)));
                    clinr_rows.push_back(run_mode(Mode::Clinr, c, cfg.protocol, model, cfg.shots,
                                                  derive_seed(base, {1}), cfg.threads, static_cast<int64_t>(idx)));
                }
                ResultRow d = aggregate_rows(direct_rows, cfg.seed);
                ResultRow q = aggregate_rows(clinr_rows, cfg.seed);
                GridRow row;
                row.n = n;
                row.alpha = alpha;
                row.s = shape_size(n, alpha);
                row.t = q.t;
                row.r = q.r;
                row.p2 = model.p2;
                row.p1 = model.p1;
                row.shots = d.shots;
                row.seed = cfg.seed;
                row.plog_direct = d.plog;
                row.ci_lo_direct = d.ci_lo;
                row.ci_hi_direct = d.ci_hi;
                row.plog_clinr = q.plog;
                row.ci_lo_clinr = q.ci_lo;
                row.ci_hi_clinr = q.ci_hi;
                row.delta_plog = d.plog - q.plog;
                row.delta_ci_lo = d.ci_lo - q.ci_hi;
                row.delta_ci_hi = d.ci_hi - q.ci_lo;
                emit(row);
            }
        }
    }
}

}  // namespace clinr
