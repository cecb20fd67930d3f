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
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/noise.hpp"
#include "clinr/schedule.hpp"

namespace clinr {

/// Which qubits pick up idle noise while a segment runs. Segment: only the
/// qubits the segment acts on. Register: every live qubit of the register,
/// including blocks that merely wait.
enum class IdleScope : uint8_t { Segment, Register };

inline std::string_view idle_scope_name(IdleScope s) {
    return s == IdleScope::Register ? "register" : "segment";
}
inline IdleScope parse_idle_scope(std::string_view name) {
    if (name == "segment") {
        return IdleScope::Segment;
    }
    if (name == "register") {
        return IdleScope::Register;
    }
    throw std::invalid_argument("unknown idle scope '" + std::string(name) + "'");
}

/// Sorted qubits acted on by `ops`.
inline std::vector<uint32_t> op_support(std::span<const Operation> ops, size_t num_qubits) {
    std::vector<uint8_t> hit(num_qubits, 0);
    for (const auto &op : ops) {
        for (size_t k = 0; k < op.arity(); k++) {
            if (op.q[k] >= num_qubits) {
                throw std::invalid_argument("op_support: qubit index out of range.");
            }
            hit[op.q[k]] = 1;
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < num_qubits; q++) {
        if (hit[q]) {
            out.push_back(q);
        }
    }
    return out;
}

/// A straight-line piece of a protocol, compiled for fast noisy execution:
/// ops in ASAP layer order plus the fault-location tables of each noise class.
struct Segment {
    static constexpr uint32_t kNoMeasurement = std::numeric_limits<uint32_t>::max();

    size_t num_qubits = 0;
    std::vector<Operation> ops;
    std::vector<uint32_t> measurement_index;  // per op; kNoMeasurement for non-measurements
    size_t num_measurements = 0;

    std::vector<uint32_t> loc_1q;    // op positions of preps and single-qubit gates
    std::vector<uint32_t> loc_2q;    // op positions of controlled-Paulis
    std::vector<uint32_t> loc_meas;  // op positions of measurements
    struct IdleLocation {
        uint32_t pos;  // fault lands after this op (the last op of its layer)
        uint32_t qubit;
    };
    std::vector<IdleLocation> loc_idle;

    std::vector<uint32_t> touched;  // sorted qubits acted on by some op

    size_t size() const {
        return ops.size();
    }
};

/// Compiles a segment over a register of `num_qubits`. Qubits in `live` are
/// subject to idle noise in layers where they hold state: after their first
/// operation unless that is a preparation (before it they hold nothing the
/// protocol cares about) and before their last operation when that is a
/// measurement.
inline Segment compile_segment(std::span<const Operation> ops, size_t num_qubits, std::span<const uint32_t> live) {
    Segment seg;
    seg.num_qubits = num_qubits;
    for (const auto &op : ops) {
        for (size_t k = 0; k < op.arity(); k++) {
            if (op.q[k] >= num_qubits) {
                throw std::invalid_argument("compile_segment: qubit index out of range.");
            }
        }
    }
    auto layer_of = asap_layer_indices(ops, num_qubits);
    std::vector<size_t> order(ops.size());
    for (size_t k = 0; k < order.size(); k++) {
        order[k] = k;
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return layer_of[a] < layer_of[b]; });

    size_t depth = 0;
    for (size_t layer : layer_of) {
        depth = std::max(depth, layer + 1);
    }
    std::vector<uint32_t> layer_end(depth, 0);
    constexpr size_t kUnset = std::numeric_limits<size_t>::max();
    std::vector<size_t> first_layer(num_qubits, kUnset), last_layer(num_qubits, kUnset);
    std::vector<bool> starts_with_prep(num_qubits, false), ends_with_measure(num_qubits, false);
    std::vector<std::vector<bool>> busy(depth, std::vector<bool>(num_qubits, false));

    for (size_t idx = 0; idx < order.size(); idx++) {
        const Operation &op = ops[order[idx]];
        size_t layer = layer_of[order[idx]];
        auto pos = static_cast<uint32_t>(seg.ops.size());
        seg.ops.push_back(op);
        layer_end[layer] = pos;
        if (op.kind == OpKind::Measure) {
            seg.measurement_index.push_back(static_cast<uint32_t>(seg.num_measurements++));
            seg.loc_meas.push_back(pos);
        } else {
            seg.measurement_index.push_back(Segment::kNoMeasurement);
            (op.arity() == 2 ? seg.loc_2q : seg.loc_1q).push_back(pos);
        }
        for (size_t k = 0; k < op.arity(); k++) {
            uint32_t q = op.q[k];
            busy[layer][q] = true;
            if (first_layer[q] == kUnset) {
                first_layer[q] = layer;
                starts_with_prep[q] = is_prep(op.kind);
            }
            last_layer[q] = layer;
            ends_with_measure[q] = op.kind == OpKind::Measure;
        }
    }

    for (size_t layer = 0; layer < depth; layer++) {
        for (uint32_t q : live) {
            if (q >= num_qubits) {
                throw std::invalid_argument("compile_segment: live qubit out of range.");
            }
            if (busy[layer][q]) {
                continue;
            }
            if (first_layer[q] != kUnset) {
                if (starts_with_prep[q] && layer < first_layer[q]) {
                    continue;
                }
                if (ends_with_measure[q] && layer > last_layer[q]) {
                    continue;
                }
            }
            seg.loc_idle.push_back({layer_end[layer], q});
        }
    }
    std::sort(seg.loc_idle.begin(), seg.loc_idle.end(), [](const auto &a, const auto &b) {
        return a.pos != b.pos ? a.pos < b.pos : a.qubit < b.qubit;
    });

    for (uint32_t q = 0; q < num_qubits; q++) {
        if (first_layer[q] != kUnset) {
            seg.touched.push_back(q);
        }
    }
    return seg;
}

inline Segment compile_segment(const Circuit &circuit, std::span<const uint32_t> live) {
    return compile_segment(circuit.ops(), circuit.num_qubits(), live);
}

/// Live set chosen by `scope`: the ops' own support, or `register_live`.
inline Segment compile_segment(std::span<const Operation> ops, size_t num_qubits, IdleScope scope,
                               std::span<const uint32_t> register_live) {
    if (scope == IdleScope::Segment) {
        auto support = op_support(ops, num_qubits);
        return compile_segment(ops, num_qubits, std::span<const uint32_t>(support));
    }
    return compile_segment(ops, num_qubits, register_live);
}

/// A sampled fault: a Pauli on one or two qubits after op `pos`, or a flip of
/// the measurement at `pos`.
struct FaultEvent {
    uint32_t pos;
    uint32_t q0;
    uint32_t q1;
    Pauli p0;
    Pauli p1;
    bool flip;
};

namespace detail {

/// Calls body(index) for each location in [0, count) that fails with rate p,
/// skipping geometrically between failures.
template <typename Rng, typename Body>
void for_each_failure(size_t count, double p, Rng &rng, Body body) {
    if (p <= 0 || count == 0) {
        return;
    }
    if (p >= 1) {
        for (size_t k = 0; k < count; k++) {
            body(k);
        }
        return;
    }
    std::geometric_distribution<size_t> skip(p);
    for (size_t k = skip(rng); k < count; k += 1 + skip(rng)) {
        body(k);
    }
}

}  // namespace detail

/// Samples every fault of one execution of `seg`, sorted by position.
template <typename Rng>
void sample_segment_faults(const Segment &seg, const NoiseModel &model, Rng &rng, std::vector<FaultEvent> &events) {
    events.clear();
    detail::for_each_failure(seg.loc_1q.size(), model.p1, rng, [&](size_t k) {
        uint32_t pos = seg.loc_1q[k];
        uint32_t q = seg.ops[pos].q[0];
        events.push_back({pos, q, q, random_pauli_1q(rng), Pauli::I, false});
    });
    detail::for_each_failure(seg.loc_2q.size(), model.p2, rng, [&](size_t k) {
        uint32_t pos = seg.loc_2q[k];
        const Operation &op = seg.ops[pos];
        auto [a, b] = random_pauli_2q(rng);
        events.push_back({pos, op.q[0], op.q[1], a, b, false});
    });
    detail::for_each_failure(seg.loc_meas.size(), model.p_meas, rng, [&](size_t k) {
        uint32_t pos = seg.loc_meas[k];
        uint32_t q = seg.ops[pos].q[0];
        events.push_back({pos, q, q, Pauli::I, Pauli::I, true});
    });
    detail::for_each_failure(seg.loc_idle.size(), model.p_idle, rng, [&](size_t k) {
        const auto &loc = seg.loc_idle[k];
        events.push_back({loc.pos, loc.qubit, loc.qubit, random_pauli_1q(rng), Pauli::I, false});
    });
    std::sort(events.begin(), events.end(), [](const FaultEvent &a, const FaultEvent &b) { return a.pos < b.pos; });
}

}  // namespace clinr
