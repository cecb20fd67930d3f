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

#include <stdexcept>

#include "clinr/circuit.hpp"
#include "clinr/pauli.hpp"

namespace clinr {

namespace detail {

// Signed Heisenberg update rules P -> U P U^dagger. With kTrackSign=false only
// the letters are updated, which is all a Pauli frame needs.
template <bool kTrackSign>
inline void conjugate_unitary(OpKind kind, uint32_t a, uint32_t b, PauliString &p) {
    bool neg = p.negative();
    switch (kind) {
        case OpKind::I:
            return;
        case OpKind::X:
            if constexpr (kTrackSign) {
                neg ^= p.z(a);
            }
            break;
        case OpKind::Z:
            if constexpr (kTrackSign) {
                neg ^= p.x(a);
            }
            break;
        case OpKind::Y:
            if constexpr (kTrackSign) {
                neg ^= p.x(a) ^ p.z(a);
            }
            break;
        case OpKind::H: {
            bool x = p.x(a);
            bool z = p.z(a);
            if constexpr (kTrackSign) {
                neg ^= x && z;
            }
            p.set_x(a, z);
            p.set_z(a, x);
            break;
        }
        case OpKind::S: {
            bool x = p.x(a);
            bool z = p.z(a);
            if constexpr (kTrackSign) {
                neg ^= x && z;
            }
            p.set_z(a, z ^ x);
            break;
        }
        case OpKind::Sdg: {
            bool x = p.x(a);
            bool z = p.z(a);
            if constexpr (kTrackSign) {
                neg ^= x && !z;
            }
            p.set_z(a, z ^ x);
            break;
        }
        case OpKind::CX: {
            bool xc = p.x(a), zc = p.z(a), xt = p.x(b), zt = p.z(b);
            if constexpr (kTrackSign) {
                neg ^= xc && zt && !(xt ^ zc);
            }
            p.set_x(b, xt ^ xc);
            p.set_z(a, zc ^ zt);
            break;
        }
        case OpKind::CZ: {
            bool xa = p.x(a), za = p.z(a), xb = p.x(b), zb = p.z(b);
            if constexpr (kTrackSign) {
                neg ^= xa && xb && (za ^ zb);
            }
            p.set_z(a, za ^ xb);
            p.set_z(b, zb ^ xa);
            break;
        }
        case OpKind::CY:
            // CY = S_t CX S_t^dagger.
            p.set_negative(neg);
            conjugate_unitary<kTrackSign>(OpKind::Sdg, b, b, p);
            conjugate_unitary<kTrackSign>(OpKind::CX, a, b, p);
            conjugate_unitary<kTrackSign>(OpKind::S, b, b, p);
            return;
        case OpKind::PrepZ:
        case OpKind::PrepX:
        case OpKind::Measure:
            throw std::invalid_argument("Cannot conjugate a Pauli through a non-unitary operation.");
    }
    if constexpr (kTrackSign) {
        p.set_negative(neg);
    }
}

}  // namespace detail

/// In-place U P U^dagger for a unitary operation (sign tracked).
inline void conjugate_inplace(const Operation &op, PauliString &p) {
    detail::conjugate_unitary<true>(op.kind, op.q[0], op.q[1], p);
}

/// Returns U P U^dagger for a unitary operation.
inline PauliString conjugate_through(const Operation &op, const PauliString &p) {
    if (!is_unitary(op.kind)) {
        throw std::invalid_argument("conjugate_through: operation must be unitary.");
    }
    for (size_t k = 0; k < op.arity(); k++) {
        if (op.q[k] >= p.num_qubits()) {
            throw std::invalid_argument("conjugate_through: qubit out of range for the Pauli string.");
        }
    }
    PauliString out = p;
    conjugate_inplace(op, out);
    return out;
}

/// Conjugates `p` through operations [from_index, size) of a Clifford circuit,
/// i.e. pushes a fault located just before operation `from_index` to the output.
inline PauliString propagate(const Circuit &circuit, const PauliString &p, size_t from_index = 0) {
    if (from_index > circuit.size()) {
        throw std::out_of_range("propagate: from_index beyond the end of the circuit.");
    }
    if (p.num_qubits() != circuit.num_qubits()) {
        throw std::invalid_argument("propagate: Pauli string size differs from the circuit register.");
    }
    PauliString out = p;
    for (size_t k = from_index; k < circuit.size(); k++) {
        const Operation &op = circuit[k];
        if (!is_unitary(op.kind)) {
            throw std::invalid_argument("propagate: circuit is not a Clifford circuit.");
        }
        conjugate_inplace(op, out);
    }
    return out;
}

}  // namespace clinr
