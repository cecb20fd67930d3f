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
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/noise.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"
#include "clinr/protocol.hpp"
#include "clinr/segment.hpp"
#include "clinr/tableau.hpp"

namespace clinr {

/// Full-state executor: the same segments run on a stabilizer tableau with
/// every sampled fault inserted as an explicit Pauli gate and every
/// measurement outcome (and therefore every correction) taken literally.
/// The tableau may carry extra qubits beyond the protocol register, e.g. a
/// reference system entangled with the input block.
class TableauBackend {
   public:
    TableauBackend(size_t register_qubits, size_t extra_qubits)
        : register_qubits_(register_qubits), tableau_(register_qubits + extra_qubits) {
    }

    StabilizerTableau &tableau() {
        return tableau_;
    }
    const StabilizerTableau &tableau() const {
        return tableau_;
    }
    const std::vector<uint8_t> &outcomes() const {
        return outcomes_;
    }

    template <typename Rng>
    void run(const Segment &seg, const NoiseModel &model, Rng &rng) {
        sample_segment_faults(seg, model, rng, events_);
        outcomes_.assign(seg.num_measurements, 0);
        size_t e = 0;
        for (size_t k = 0; k < seg.ops.size(); k++) {
            const Operation &op = seg.ops[k];
            switch (op.kind) {
                case OpKind::PrepZ:
                    tableau_.reset(op.q[0], rng);
                    break;
                case OpKind::PrepX:
                    tableau_.reset(op.q[0], rng);
                    tableau_.apply(Operation::one(OpKind::H, op.q[0]));
                    break;
                case OpKind::Measure:
                    outcomes_[seg.measurement_index[k]] = tableau_.measure(op.q[0], rng);
                    break;
                default:
                    tableau_.apply(op);
            }
            for (; e < events_.size() && events_[e].pos == k; e++) {
                const FaultEvent &ev = events_[e];
                if (ev.flip) {
                    outcomes_[seg.measurement_index[k]] ^= 1;
                    continue;
                }
                apply_letter(ev.q0, ev.p0);
                if (ev.q1 != ev.q0) {
                    apply_letter(ev.q1, ev.p1);
                }
            }
        }
    }

    template <typename Rng>
    bool run_check(const Segment &seg, bool expected, const NoiseModel &model, Rng &rng) {
        run(seg, model, rng);
        return (outcomes_[0] != 0) != expected;
    }

    template <typename Rng>
    const std::vector<uint8_t> &run_finish(const Segment &seg, const NoiseModel &model, Rng &rng) {
        run(seg, model, rng);
        return outcomes_;
    }

    void apply_correction(const PauliString &p) {
        if (p.num_qubits() != register_qubits_) {
            throw std::invalid_argument("TableauBackend::apply_correction: size mismatch.");
        }
        PauliString full(tableau_.num_qubits());
        for (size_t q = 0; q < register_qubits_; q++) {
            full.set(q, p.get(q));
        }
        tableau_.apply_pauli(full);
    }

   private:
    void apply_letter(uint32_t q, Pauli p) {
        if (p == Pauli::I) {
            return;
        }
        tableau_.apply_pauli(PauliString::single(tableau_.num_qubits(), q, p));
    }

    size_t register_qubits_;
    StabilizerTableau tableau_;
    std::vector<FaultEvent> events_;
    std::vector<uint8_t> outcomes_;
};

/// Bell pairs (ref[i], block[i]) on a tableau starting from |0...0>.
inline void prepare_bell_pairs(StabilizerTableau &t, std::span<const uint32_t> ref, std::span<const uint32_t> block) {
    if (ref.size() != block.size()) {
        throw std::invalid_argument("prepare_bell_pairs: size mismatch.");
    }
    for (size_t i = 0; i < ref.size(); i++) {
        t.apply(Operation::one(OpKind::H, ref[i]));
        t.apply(Operation::two(OpKind::CX, ref[i], block[i]));
    }
}

/// Generators of (I_ref (x) C)|Phi>^n, where block holds C's qubits:
/// X_ref(i) (C X_i C^dag) and Z_ref(i) (C Z_i C^dag), with signs.
inline std::vector<PauliString> choi_stabilizers(const Circuit &logical, std::span<const uint32_t> block,
                                                 std::span<const uint32_t> ref, size_t total_qubits) {
    const size_t n = logical.num_qubits();
    if (block.size() != n || ref.size() != n) {
        throw std::invalid_argument("choi_stabilizers: block sizes differ from the circuit width.");
    }
    std::vector<PauliString> out;
    for (Pauli letter : {Pauli::X, Pauli::Z}) {
        for (size_t i = 0; i < n; i++) {
            PauliString image = propagate(logical, PauliString::single(n, i, letter));
            PauliString g = embed(image, block, total_qubits);
            g.set(ref[i], letter);
            out.push_back(std::move(g));
        }
    }
    return out;
}

/// Every generator has expectation +1.
inline bool stabilizes_all(const StabilizerTableau &t, std::span<const PauliString> generators) {
    for (const auto &g : generators) {
        if (t.expectation(g) != +1) {
            return false;
        }
    }
    return true;
}

/// Tableau-oracle counterpart of run_teleport: the input block starts
/// maximally entangled with n reference qubits and a shot fails unless the
/// final state is exactly (I (x) C)|Phi>^n on (reference, output block).
template <typename MakePlan>
RunStats run_tableau_oracle(const Circuit &logical, const NoiseModel &model, uint64_t shots, uint64_t seed,
                            uint64_t batch_size, uint64_t max_restarts, MakePlan make_plan) {
    model.validate();
    const size_t n = logical.num_qubits();
    return run_batched(shots, batch_size, seed, 1, [&](uint64_t batch) {
        auto plan = std::make_shared<TeleportPlan>(make_plan(batch));
        std::vector<uint32_t> ref(n);
        for (size_t i = 0; i < n; i++) {
            ref[i] = static_cast<uint32_t>(plan->num_qubits + i);
        }
        auto expected = choi_stabilizers(logical, plan->output_block(), ref, plan->num_qubits + n);
        return [plan, ref, expected, &model, max_restarts](uint64_t, std::mt19937_64 &rng, RunStats &) {
            TableauBackend backend(plan->num_qubits, ref.size());
            prepare_bell_pairs(backend.tableau(), ref, plan->input_block());
            ShotRecord rec = run_plan_shot(*plan, model, max_restarts, backend, rng);
            if (!rec.aborted) {
                rec.failed = !stabilizes_all(backend.tableau(), expected);
            }
            return rec;
        };
    });
}

}  // namespace clinr
