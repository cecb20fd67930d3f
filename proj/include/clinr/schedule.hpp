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
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "clinr/circuit.hpp"

namespace clinr {

/// Greedy as-soon-as-possible layering. Each op lands one layer after the
/// latest layer used by any of its qubits, so ops within a layer have disjoint
/// support and every qubit's worldline keeps its order.
inline std::vector<size_t> asap_layer_indices(std::span<const Operation> ops, size_t num_qubits) {
    std::vector<size_t> next_free(num_qubits, 0);
    std::vector<size_t> layer_of(ops.size());
    for (size_t k = 0; k < ops.size(); k++) {
        const Operation &op = ops[k];
        size_t layer = next_free[op.q[0]];
        if (op.arity() == 2) {
            layer = std::max(layer, next_free[op.q[1]]);
        }
        layer_of[k] = layer;
        next_free[op.q[0]] = layer + 1;
        if (op.arity() == 2) {
            next_free[op.q[1]] = layer + 1;
        }
    }
    return layer_of;
}

/// Layers as lists of operations (in original relative order within a layer).
inline std::vector<std::vector<Operation>> schedule_layers(const Circuit &circuit) {
    auto layer_of = asap_layer_indices(circuit.ops(), circuit.num_qubits());
    size_t depth = 0;
    for (size_t layer : layer_of) {
        depth = std::max(depth, layer + 1);
    }
    std::vector<std::vector<Operation>> layers(depth);
    for (size_t k = 0; k < circuit.size(); k++) {
        layers[layer_of[k]].push_back(circuit[k]);
    }
    return layers;
}

/// Qubits of the register not acted on by a layer.
inline std::vector<uint32_t> idle_qubits(std::span<const Operation> layer, size_t num_qubits) {
    std::vector<bool> busy(num_qubits, false);
    for (const auto &op : layer) {
        for (size_t k = 0; k < op.arity(); k++) {
            busy[op.q[k]] = true;
        }
    }
    std::vector<uint32_t> idle;
    for (uint32_t q = 0; q < num_qubits; q++) {
        if (!busy[q]) {
            idle.push_back(q);
        }
    }
    return idle;
}

/// Sizes of the t consecutive parts: with s0 = ceil(s/t), the first (s mod t)
/// parts get s0 ops and the rest s0 - 1 (all s0 when t divides s).
inline std::vector<size_t> split_sizes(size_t s, size_t t) {
    if (t < 1) {
        throw std::invalid_argument("split_circuit: t must be at least 1.");
    }
    size_t s0 = (s + t - 1) / t;
    size_t rem = s % t;
    std::vector<size_t> sizes(t, s0);
    if (rem != 0) {
        for (size_t k = rem; k < t; k++) {
            sizes[k] = s0 - 1;
        }
    }
    return sizes;
}

inline std::vector<Circuit> split_circuit(const Circuit &circuit, size_t t) {
    auto sizes = split_sizes(circuit.size(), t);
    std::vector<Circuit> parts;
    parts.reserve(t);
    size_t offset = 0;
    for (size_t size : sizes) {
        Circuit part(circuit.num_qubits());
        for (size_t k = 0; k < size; k++) {
            part.push_back(circuit[offset + k]);
        }
        offset += size;
        parts.push_back(std::move(part));
    }
    return parts;
}

}  // namespace clinr
