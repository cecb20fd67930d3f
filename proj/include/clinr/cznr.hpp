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

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/clinr.hpp"
#include "clinr/frame_sim.hpp"
#include "clinr/pauli.hpp"
#include "clinr/protocol.hpp"
#include "clinr/schedule.hpp"
#include "clinr/segment.hpp"

namespace clinr {

/// Simple undirected graph on n vertices (no loops, no multi-edges).
class Graph {
   public:
    Graph() = default;
    explicit Graph(size_t n) : n_(n), adj_(n * n, 0) {
    }

    size_t num_vertices() const {
        return n_;
    }
    bool has_edge(size_t u, size_t v) const {
        return adj_[u * n_ + v] != 0;
    }
    /// Adds the edge if absent, removes it if present.
    void toggle_edge(size_t u, size_t v) {
        if (u >= n_ || v >= n_) {
            throw std::invalid_argument("Graph: vertex out of range.");
        }
        if (u == v) {
            throw std::invalid_argument("Graph: self-loops are not allowed.");
        }
        adj_[u * n_ + v] ^= 1;
        adj_[v * n_ + u] ^= 1;
    }
    void add_edge(size_t u, size_t v) {
        if (!has_edge(u, v)) {
            toggle_edge(u, v);
        }
    }
    /// Edges (u, v) with u < v in lexicographic order.
    std::vector<std::pair<uint32_t, uint32_t>> edges() const {
        std::vector<std::pair<uint32_t, uint32_t>> out;
        for (uint32_t u = 0; u < n_; u++) {
            for (uint32_t v = u + 1; v < n_; v++) {
                if (has_edge(u, v)) {
                    out.emplace_back(u, v);
                }
            }
        }
        return out;
    }
    std::vector<uint32_t> neighbors(size_t v) const {
        std::vector<uint32_t> out;
        for (uint32_t u = 0; u < n_; u++) {
            if (has_edge(v, u)) {
                out.push_back(u);
            }
        }
        return out;
    }
    size_t num_edges() const {
        return edges().size();
    }
    static Graph complete(size_t n) {
        Graph g(n);
        for (size_t u = 0; u < n; u++) {
            for (size_t v = u + 1; v < n; v++) {
                g.toggle_edge(u, v);
            }
        }
        return g;
    }

    bool operator==(const Graph &) const = default;

   private:
    size_t n_ = 0;
    std::vector<uint8_t> adj_;
};

/// The graph of a CZ-only circuit; repeated CZs on a pair cancel.
inline Graph circuit_to_graph(const Circuit &c) {
    Graph g(c.num_qubits());
    for (const auto &op : c.ops()) {
        if (op.kind != OpKind::CZ) {
            throw std::invalid_argument("circuit_to_graph: circuit contains a non-CZ operation.");
        }
        g.toggle_edge(op.q[0], op.q[1]);
    }
    return g;
}

/// One CZ per edge, in lexicographic edge order.
inline Circuit graph_to_circuit(const Graph &g) {
    Circuit c(g.num_vertices());
    for (auto [u, v] : g.edges()) {
        c.append(OpKind::CZ, u, v);
    }
    return c;
}

/// Generators X_v prod_{u in N(v)} Z_u of the graph state.
inline std::vector<PauliString> graph_state_stabilizers(const Graph &g) {
    const size_t n = g.num_vertices();
    std::vector<PauliString> gens;
    for (size_t v = 0; v < n; v++) {
        PauliString p = PauliString::single(n, v, Pauli::X);
        for (uint32_t u : g.neighbors(v)) {
            p.set(u, Pauli::Z);
        }
        gens.push_back(std::move(p));
    }
    return gens;
}

/// prod over i with o_i = 1 of X_i prod_{j in N(i)} Z_j, on the n graph qubits.
inline PauliString injection_correction(const Graph &g, std::span<const uint8_t> outcomes) {
    const size_t n = g.num_vertices();
    if (outcomes.size() != n) {
        throw std::invalid_argument("injection_correction: expected n outcome bits.");
    }
    auto gens = graph_state_stabilizers(g);
    PauliString out(n);
    for (size_t i = 0; i < n; i++) {
        if (outcomes[i]) {
            out.xor_letters(gens[i]);
        }
    }
    return out;
}

/// Parses `graph <n>` followed by `edge u v` lines ('#' comments allowed).
inline Graph parse_graph(std::string_view text) {
    std::optional<Graph> g;
    detail::for_each_content_line(text, [&](size_t line, const std::vector<std::string_view> &words) {
        if (!g.has_value()) {
            if (words[0] != "graph" || words.size() != 2) {
                throw ParseError(line, "expected header 'graph <n>'");
            }
            auto n = detail::parse_uint(words[1]);
            if (!n.has_value()) {
                throw ParseError(line, "bad vertex count '" + std::string(words[1]) + "'");
            }
            g.emplace(*n);
            return;
        }
        if (words[0] != "edge" || words.size() != 3) {
            throw ParseError(line, "expected 'edge <u> <v>'");
        }
        auto u = detail::parse_uint(words[1]);
        auto v = detail::parse_uint(words[2]);
        if (!u.has_value() || !v.has_value() || *u >= g->num_vertices() || *v >= g->num_vertices()) {
            throw ParseError(line, "bad vertex index");
        }
        if (*u == *v) {
            throw ParseError(line, "self-loop");
        }
        g->toggle_edge(*u, *v);
    });
    if (!g.has_value()) {
        throw ParseError(0, "missing 'graph <n>' header");
    }
    return std::move(*g);
}

inline std::string serialize_graph(const Graph &g) {
    std::ostringstream out;
    out << "graph " << g.num_vertices() << '\n';
    for (auto [u, v] : g.edges()) {
        out << "edge " << u << ' ' << v << '\n';
    }
    return out.str();
}

/// Register layout for CZNR: two blocks of n qubits and one ancilla (2n).
/// Each stage prepares the graph state of its CZ sub-sequence on the second
/// block, verifies it with r checks and consumes it by one-bit teleportation.
class CznrPlanner {
   public:
    CznrPlanner(const Circuit &c, const ClinrParams &params) : circuit_(c), params_(params) {
        params_.validate();
        if (c.num_qubits() < 1) {
            throw std::invalid_argument("CZNR: circuit must act on at least one qubit.");
        }
        if (params_.r > c.num_qubits()) {
            throw std::invalid_argument("CZNR: r exceeds n.");
        }
        for (const auto &part : split_circuit(c, params_.t)) {
            graphs_.push_back(circuit_to_graph(part));
            pools_.push_back(graph_state_stabilizers(graphs_.back()));
        }
    }

    size_t n() const {
        return circuit_.num_qubits();
    }
    size_t num_qubits() const {
        return 2 * n() + 1;
    }
    const std::vector<Graph> &graphs() const {
        return graphs_;
    }

    std::array<std::vector<uint32_t>, 2> roles(size_t stage) const {
        std::array<std::vector<uint32_t>, 2> blocks;
        for (size_t b = 0; b < 2; b++) {
            for (size_t i = 0; i < n(); i++) {
                blocks[b].push_back(static_cast<uint32_t>(b * n() + i));
            }
        }
        if (stage % 2 == 1) {
            std::swap(blocks[0], blocks[1]);
        }
        return blocks;
    }

    template <typename Rng>
    std::vector<PauliString> sample_checks(size_t stage, Rng &rng) const {
        return sample_uniform_checks(std::span<const PauliString>(pools_[stage]), params_.r, rng);
    }

    TeleportPlan plan(uint64_t seed, uint64_t batch) const {
        std::vector<std::vector<PauliString>> checks;
        for (size_t st = 0; st < graphs_.size(); st++) {
            std::mt19937_64 rng(derive_seed(seed, {0xC2A7ULL, batch, st}));
            checks.push_back(sample_checks(st, rng));
        }
        return plan_with_checks(checks);
    }

    TeleportPlan plan_with_checks(const std::vector<std::vector<PauliString>> &checks) const {
        if (checks.size() != graphs_.size()) {
            throw std::invalid_argument("CznrPlanner: one check list per stage required.");
        }
        const size_t nn = n();
        const size_t reg = num_qubits();
        const auto ancilla = static_cast<uint32_t>(2 * nn);
        TeleportPlan plan;
        plan.num_qubits = reg;
        plan.logical_qubits = nn;
        plan.logical_size = circuit_.size();
        for (size_t st = 0; st < graphs_.size(); st++) {
            const Graph &g = graphs_[st];
            auto [in, b2] = roles(st);
            std::vector<uint32_t> live(in);
            live.insert(live.end(), b2.begin(), b2.end());

            StagePlan stage;
            stage.input_block = in;
            stage.output_block = b2;

            std::vector<Operation> ops;
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::PrepX, b2[i]));
            }
            for (auto [u, v] : g.edges()) {
                ops.push_back(Operation::two(OpKind::CZ, b2[u], b2[v]));
            }
            stage.resource = compile_segment(ops, reg, params_.idle_scope, live);

            std::vector<uint32_t> live_check(live);
            live_check.push_back(ancilla);
            for (const auto &check : checks[st]) {
                if (check.num_qubits() != nn) {
                    throw std::invalid_argument("CznrPlanner: checks must act on n qubits.");
                }
                PauliString full = embed(check, b2, reg);
                auto check_ops = check_subcircuit(full, ancilla);
                stage.checks.push_back(compile_segment(check_ops, reg, params_.idle_scope, live_check));
                stage.check_signs.push_back(check.negative());
            }

            ops.clear();
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::two(OpKind::CX, b2[i], in[i]));
            }
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::Measure, in[i]));
            }
            stage.finish = compile_segment(ops, reg, params_.idle_scope, live);
            for (const auto &op : stage.finish.ops) {
                if (op.kind != OpKind::Measure) {
                    continue;
                }
                std::vector<uint8_t> bits(nn, 0);
                for (size_t i = 0; i < nn; i++) {
                    bits[i] = op.q[0] == in[i];
                }
                stage.corrections.push_back(embed(injection_correction(g, bits), b2, reg));
            }

            ops.clear();
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::I, b2[i]));
            }
            stage.q_slots = compile_segment(ops, reg, b2);
            plan.stages.push_back(std::move(stage));
        }
        return plan;
    }

   private:
    Circuit circuit_;
    ClinrParams params_;
    std::vector<Graph> graphs_;
    std::vector<std::vector<PauliString>> pools_;
};

/// Frame-simulated CZNR implementation of a CZ-only circuit (strategy ignored).
inline RunStats run_cznr(const Circuit &c, const ClinrParams &params, const NoiseModel &model, uint64_t shots,
                         uint64_t seed, size_t threads = 0) {
    CznrPlanner planner(c, params);
    RunStats stats = run_teleport(planner.graphs().size(), model, shots, seed, params.batch_size,
                                  params.max_restarts, threads, [&](uint64_t batch) { return planner.plan(seed, batch); });
    stats.logical_size = c.size();
    stats.logical_qubits = c.num_qubits();
    return stats;
}

}  // namespace clinr
