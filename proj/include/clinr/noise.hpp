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

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/pauli.hpp"

namespace clinr {

enum class NoiseMode : uint8_t { Uniform, Realistic, Custom };

/// Circuit-level stochastic Pauli noise. Faults follow the faulty operation.
struct NoiseModel {
    NoiseMode mode = NoiseMode::Custom;
    double p1 = 0;      // preparations and single-qubit gates
    double p2 = 0;      // controlled-Paulis
    double p_meas = 0;  // measurement outcome flips
    double p_idle = 0;  // per idle qubit per layer

    static NoiseModel noiseless() {
        return NoiseModel{};
    }
    /// Every operation fails with rate p; idle qubits are noiseless.
    static NoiseModel uniform(double p) {
        NoiseModel m{NoiseMode::Uniform, p, p, p, 0};
        m.validate();
        return m;
    }
    /// p1 = p_meas = p_idle = p2 / 10.
    static NoiseModel realistic(double p2) {
        NoiseModel m{NoiseMode::Realistic, p2 / 10, p2, p2 / 10, p2 / 10};
        m.validate();
        return m;
    }

    void validate() const {
        auto check = [](double v, const char *name) {
            if (!(v >= 0 && v <= 1)) {
                throw std::invalid_argument(std::string("NoiseModel: ") + name + " must lie in [0, 1].");
            }
        };
        check(p1, "p1");
        check(p2, "p2");
        check(p_meas, "p_meas");
        check(p_idle, "p_idle");
    }

    /// Fault rate of the location attached to an operation.
    double rate_for(OpKind kind) const {
        if (kind == OpKind::Measure) {
            return p_meas;
        }
        return is_two_qubit(kind) ? p2 : p1;
    }

    bool is_noiseless() const {
        return p1 == 0 && p2 == 0 && p_meas == 0 && p_idle == 0;
    }
};

inline std::string_view noise_mode_name(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::Uniform:
            return "uniform";
        case NoiseMode::Realistic:
            return "realistic";
        case NoiseMode::Custom:
            return "custom";
    }
    return "custom";
}

/// Uniform non-identity single-qubit Pauli.
template <typename Rng>
Pauli random_pauli_1q(Rng &rng) {
    std::uniform_int_distribution<int> d(1, 3);
    return static_cast<Pauli>(d(rng));
}

/// Uniform non-identity two-qubit Pauli (one of 15).
template <typename Rng>
std::pair<Pauli, Pauli> random_pauli_2q(Rng &rng) {
    std::uniform_int_distribution<int> d(1, 15);
    int k = d(rng);
    return {static_cast<Pauli>(k & 3), static_cast<Pauli>(k >> 2)};
}

/// Outcome of one fault draw for an operation.
struct FaultDraw {
    bool occurred = false;
    Pauli first = Pauli::I;   // on op.q[0]
    Pauli second = Pauli::I;  // on op.q[1] for two-qubit ops
    bool flip = false;        // measurement outcome flip

    /// The fault as a Pauli string on an n-qubit register (identity for flips).
    PauliString on_register(const Operation &op, size_t n) const {
        PauliString p(n);
        if (!occurred || op.kind == OpKind::Measure) {
            return p;
        }
        p.set(op.q[0], first);
        if (op.arity() == 2) {
            p.set(op.q[1], second);
        }
        return p;
    }
};

template <typename Rng>
FaultDraw sample_fault(const Operation &op, const NoiseModel &model, Rng &rng) {
    FaultDraw f;
    double p = model.rate_for(op.kind);
    if (p <= 0) {
        return f;
    }
    std::bernoulli_distribution hit(p);
    if (!hit(rng)) {
        return f;
    }
    f.occurred = true;
    if (op.kind == OpKind::Measure) {
        f.flip = true;
    } else if (op.arity() == 2) {
        std::tie(f.first, f.second) = random_pauli_2q(rng);
    } else {
        f.first = random_pauli_1q(rng);
    }
    return f;
}

/// Independent X/Y/Z faults (p_idle / 3 each) on every qubit not acted on by `layer`.
template <typename Rng>
std::vector<std::pair<uint32_t, Pauli>> sample_idle_faults(
    std::span<const Operation> layer, size_t num_qubits, const NoiseModel &model, Rng &rng) {
    std::vector<std::pair<uint32_t, Pauli>> faults;
    if (model.p_idle <= 0) {
        return faults;
    }
    std::vector<bool> busy(num_qubits, false);
    for (const auto &op : layer) {
        for (size_t k = 0; k < op.arity(); k++) {
            busy[op.q[k]] = true;
        }
    }
    std::bernoulli_distribution hit(model.p_idle);
    for (uint32_t q = 0; q < num_qubits; q++) {
        if (!busy[q] && hit(rng)) {
            faults.emplace_back(q, random_pauli_1q(rng));
        }
    }
    return faults;
}

}  // namespace clinr
