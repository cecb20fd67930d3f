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
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/frame_sim.hpp"
#include "clinr/gf2.hpp"
#include "clinr/noise.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"
#include "clinr/protocol.hpp"
#include "clinr/schedule.hpp"
#include "clinr/segment.hpp"

namespace clinr {

enum class CheckStrategy : uint8_t { Uniform, Bell };

inline std::string_view strategy_name(CheckStrategy s) {
    return s == CheckStrategy::Bell ? "bell" : "uniform";
}
inline CheckStrategy parse_strategy(std::string_view name) {
    if (name == "uniform") {
        return CheckStrategy::Uniform;
    }
    if (name == "bell") {
        return CheckStrategy::Bell;
    }
    throw std::invalid_argument("unknown check strategy '" + std::string(name) + "'");
}

/// How C_i is laid out when preparing (I (x) C_i)|Bell>^n. Sequential runs
/// all of C_i on block three. Split runs a prefix A of C_i reversed on block
/// two and the rest B on block three, using (A^T (x) B)|Bell> = (I (x) B A)|Bell>
/// for gates whose matrices are symmetric; the resource state, op count and
/// checks are unchanged, the depth roughly halves.
enum class ResourceLayout : uint8_t { Sequential, Split };

inline std::string_view layout_name(ResourceLayout l) {
    return l == ResourceLayout::Split ? "split" : "sequential";
}
inline ResourceLayout parse_layout(std::string_view name) {
    if (name == "sequential") {
        return ResourceLayout::Sequential;
    }
    if (name == "split") {
        return ResourceLayout::Split;
    }
    throw std::invalid_argument("unknown resource layout '" + std::string(name) + "'");
}

struct ClinrParams {
    size_t t = 1;
    size_t r = 1;
    CheckStrategy strategy = CheckStrategy::Uniform;
    uint64_t batch_size = 1000;
    uint64_t max_restarts = 10000;
    ResourceLayout layout = ResourceLayout::Split;
    IdleScope idle_scope = IdleScope::Segment;

    void validate() const {
        if (t < 1) {
            throw std::invalid_argument("ClinrParams: t must be at least 1.");
        }
        if (batch_size < 1) {
            throw std::invalid_argument("ClinrParams: batch_size must be at least 1.");
        }
        if (max_restarts < 1) {
            throw std::invalid_argument("ClinrParams: max_restarts must be at least 1.");
        }
    }
};

/// Stabilizer generators of (I (x) C)|Bell>^n on a 2n-qubit register whose
/// qubits 0..n-1 hold the first halves and n..2n-1 the halves C acts on.
/// Returned as X_i (C X_i C^dag) for all i, then Z_i (C Z_i C^dag).
inline std::vector<PauliString> resource_generators(const Circuit &c) {
    const size_t n = c.num_qubits();
    std::vector<uint32_t> second(n);
    for (size_t i = 0; i < n; i++) {
        second[i] = static_cast<uint32_t>(n + i);
    }
    std::vector<PauliString> gens;
    gens.reserve(2 * n);
    for (Pauli letter : {Pauli::X, Pauli::Z}) {
        for (size_t i = 0; i < n; i++) {
            PauliString g = embed(propagate(c, PauliString::single(n, i, letter)), second, 2 * n);
            g.set(i, letter);
            gens.push_back(std::move(g));
        }
    }
    return gens;
}

/// r independent elements of the group generated by `gens`, from a uniformly
/// random rank-r coefficient matrix (rejection sampling on rank).
template <typename Rng>
std::vector<PauliString> sample_uniform_checks(std::span<const PauliString> gens, size_t r, Rng &rng) {
    const size_t m = gens.size();
    if (r > m) {
        throw std::invalid_argument("sample_uniform_checks: r exceeds the number of generators.");
    }
    if (r == 0) {
        return {};
    }
    std::bernoulli_distribution coin(0.5);
    std::vector<gf2::BitRow> rows;
    while (true) {
        rows.assign(r, gf2::BitRow(words_for_bits(m), 0));
        gf2::Basis basis;
        for (auto &row : rows) {
            for (size_t k = 0; k < m; k++) {
                if (coin(rng)) {
                    gf2::flip_bit(row, k);
                }
            }
            basis.insert(row);
        }
        if (basis.rank() == r) {
            break;
        }
    }
    std::vector<PauliString> checks;
    for (const auto &row : rows) {
        PauliString p(gens[0].num_qubits());
        for (size_t k = 0; k < m; k++) {
            if (gf2::get_bit(row, k)) {
                p *= gens[k];
            }
        }
        checks.push_back(std::move(p));
    }
    return checks;
}

/// The 3n images of the weight-two Bell stabilizers XX, ZZ and their product
/// on each pair (pair i contributes entries 3i, 3i+1, 3i+2).
inline std::vector<PauliString> bell_check_pool(const Circuit &c) {
    const size_t n = c.num_qubits();
    auto gens = resource_generators(c);
    std::vector<PauliString> pool;
    for (size_t i = 0; i < n; i++) {
        pool.push_back(gens[i]);
        pool.push_back(gens[n + i]);
        pool.push_back(pauli_mul(gens[i], gens[n + i]));
    }
    return pool;
}

/// r distinct, independent elements drawn uniformly from bell_check_pool(c);
/// a draw dependent on the ones already chosen is discarded.
template <typename Rng>
std::vector<PauliString> sample_bell_checks(const Circuit &c, size_t r, Rng &rng) {
    const size_t n = c.num_qubits();
    if (r > 2 * n) {
        throw std::invalid_argument("sample_bell_checks: r exceeds 2n.");
    }
    auto pool = bell_check_pool(c);
    std::vector<size_t> remaining(pool.size());
    for (size_t k = 0; k < remaining.size(); k++) {
        remaining[k] = k;
    }
    gf2::Basis basis;
    std::vector<PauliString> checks;
    while (checks.size() < r) {
        std::uniform_int_distribution<size_t> pick(0, remaining.size() - 1);
        size_t j = pick(rng);
        size_t idx = remaining[j];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(j));
        if (basis.insert(gf2::symplectic_bits(pool[idx]))) {
            checks.push_back(pool[idx]);
        }
    }
    return checks;
}

/// Measures P with an ancilla: prepare |+>, apply controlled-sigma for each
/// letter of P, rotate back and measure. Outcome 1 means the -1 eigenspace of
/// the letters of P (the sign of P is not part of the circuit).
inline std::vector<Operation> check_subcircuit(const PauliString &p, uint32_t ancilla) {
    if (p.letters_identity()) {
        throw std::invalid_argument("check_subcircuit: cannot measure the identity.");
    }
    if (ancilla < p.num_qubits() && p.get(ancilla) != Pauli::I) {
        throw std::invalid_argument("check_subcircuit: ancilla overlaps the support.");
    }
    std::vector<Operation> ops;
    ops.push_back(Operation::one(OpKind::PrepX, ancilla));
    for (uint32_t q = 0; q < p.num_qubits(); q++) {
        switch (p.get(q)) {
            case Pauli::X:
                ops.push_back(Operation::two(OpKind::CX, ancilla, q));
                break;
            case Pauli::Y:
                ops.push_back(Operation::two(OpKind::CY, ancilla, q));
                break;
            case Pauli::Z:
                ops.push_back(Operation::two(OpKind::CZ, ancilla, q));
                break;
            case Pauli::I:
                break;
        }
    }
    ops.push_back(Operation::one(OpKind::H, ancilla));
    ops.push_back(Operation::one(OpKind::Measure, ancilla));
    return ops;
}

/// Teleportation correction on the output block for Bell-measurement
/// outcomes o[0..n) (input block, selecting C Z_i C^dag) and o[n..2n)
/// (second block, selecting C X_i C^dag).
inline PauliString q_correction(const Circuit &c, std::span<const uint8_t> outcomes) {
    const size_t n = c.num_qubits();
    if (outcomes.size() != 2 * n) {
        throw std::invalid_argument("q_correction: expected 2n outcome bits.");
    }
    PauliString q(n);
    for (size_t i = 0; i < n; i++) {
        if (outcomes[n + i]) {
            q *= propagate(c, PauliString::single(n, i, Pauli::X));
        }
        if (outcomes[i]) {
            q *= propagate(c, PauliString::single(n, i, Pauli::Z));
        }
    }
    return q;
}

/// Builds the CliNR register layout and plans. Register: three blocks of n
/// qubits and one ancilla (index 3n). Stage k uses block roles rotated so the
/// output block of one stage is the input block of the next.
class ClinrPlanner {
   public:
    ClinrPlanner(const Circuit &c, const ClinrParams &params) : circuit_(c), params_(params) {
        params_.validate();
        if (!c.is_clifford()) {
            throw std::invalid_argument("CliNR: circuit must be a Clifford circuit.");
        }
        if (c.num_qubits() < 1) {
            throw std::invalid_argument("CliNR: circuit must act on at least one qubit.");
        }
        if (params_.r > 2 * c.num_qubits()) {
            throw std::invalid_argument("CliNR: r exceeds 2n.");
        }
        parts_ = split_circuit(c, params_.t);
        for (const auto &part : parts_) {
            pools_.push_back(resource_generators(part));
        }
    }

    size_t n() const {
        return circuit_.num_qubits();
    }
    size_t num_qubits() const {
        return 3 * n() + 1;
    }
    const std::vector<Circuit> &parts() const {
        return parts_;
    }
    const ClinrParams &params() const {
        return params_;
    }

    /// Block roles (input, second, third) of stage k.
    std::array<std::vector<uint32_t>, 3> roles(size_t stage) const {
        std::array<std::vector<uint32_t>, 3> blocks;
        for (size_t b = 0; b < 3; b++) {
            for (size_t i = 0; i < n(); i++) {
                blocks[b].push_back(static_cast<uint32_t>(b * n() + i));
            }
        }
        // (in, b2, b3) -> (b3, in, b2) after every stage.
        size_t shift = (3 - stage % 3) % 3;
        return {blocks[(0 + shift) % 3], blocks[(1 + shift) % 3], blocks[(2 + shift) % 3]};
    }

    /// Length of the prefix of `part` placed on block two by the split layout:
    /// about half the ops, cut before the first gate whose transpose differs
    /// from itself up to phase (CY).
    static size_t transposable_prefix(const Circuit &part) {
        const auto &ops = part.ops();
        size_t limit = ops.size() / 2;
        for (size_t k = 0; k < limit; k++) {
            if (ops[k].kind == OpKind::CY) {
                return k;
            }
        }
        return limit;
    }

    /// Checks for stage k as Pauli strings on the local [second | third] register.
    template <typename Rng>
    std::vector<PauliString> sample_checks(size_t stage, Rng &rng) const {
        if (params_.strategy == CheckStrategy::Bell) {
            return sample_bell_checks(parts_[stage], params_.r, rng);
        }
        return sample_uniform_checks(std::span<const PauliString>(pools_[stage]), params_.r, rng);
    }

    /// Plan with checks re-selected for batch `batch` of a run seeded with `seed`.
    TeleportPlan plan(uint64_t seed, uint64_t batch) const {
        std::vector<std::vector<PauliString>> checks;
        for (size_t st = 0; st < parts_.size(); st++) {
            std::mt19937_64 rng(derive_seed(seed, {0xC4EC5ULL, batch, st}));
            checks.push_back(sample_checks(st, rng));
        }
        return plan_with_checks(checks);
    }

    TeleportPlan plan_with_checks(const std::vector<std::vector<PauliString>> &checks) const {
        if (checks.size() != parts_.size()) {
            throw std::invalid_argument("ClinrPlanner: one check list per stage required.");
        }
        const size_t nn = n();
        const size_t reg = num_qubits();
        const auto ancilla = static_cast<uint32_t>(3 * nn);
        TeleportPlan plan;
        plan.num_qubits = reg;
        plan.logical_qubits = nn;
        plan.logical_size = circuit_.size();
        for (size_t st = 0; st < parts_.size(); st++) {
            const Circuit &part = parts_[st];
            auto [in, b2, b3] = roles(st);
            std::vector<uint32_t> live;
            live.insert(live.end(), in.begin(), in.end());
            live.insert(live.end(), b2.begin(), b2.end());
            live.insert(live.end(), b3.begin(), b3.end());
            std::vector<uint32_t> local(b2);
            local.insert(local.end(), b3.begin(), b3.end());

            StagePlan stage;
            stage.input_block = in;
            stage.output_block = b3;

            std::vector<Operation> ops;
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::PrepX, b2[i]));
            }
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::PrepZ, b3[i]));
            }
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::two(OpKind::CX, b2[i], b3[i]));
            }
            const auto &part_ops = part.ops();
            size_t prefix = params_.layout == ResourceLayout::Split ? transposable_prefix(part) : 0;
            auto place = [&](const Operation &op, const std::vector<uint32_t> &block) {
                Operation mapped = op;
                for (size_t k = 0; k < op.arity(); k++) {
                    mapped.q[k] = block[op.q[k]];
                }
                ops.push_back(mapped);
            };
            for (size_t k = prefix; k-- > 0;) {
                place(part_ops[k], b2);
            }
            for (size_t k = prefix; k < part_ops.size(); k++) {
                place(part_ops[k], b3);
            }
            stage.resource = compile_segment(ops, reg, params_.idle_scope, live);

            std::vector<uint32_t> live_check(live);
            live_check.push_back(ancilla);
            for (const auto &check : checks[st]) {
                if (check.num_qubits() != 2 * nn) {
                    throw std::invalid_argument("ClinrPlanner: checks must act on 2n qubits.");
                }
                PauliString full = embed(check, local, reg);
                auto check_ops = check_subcircuit(full, ancilla);
                stage.checks.push_back(compile_segment(check_ops, reg, params_.idle_scope, live_check));
                stage.check_signs.push_back(check.negative());
            }

            ops.clear();
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::two(OpKind::CX, in[i], b2[i]));
            }
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::H, in[i]));
            }
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::Measure, in[i]));
            }
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::Measure, b2[i]));
            }
            stage.finish = compile_segment(ops, reg, params_.idle_scope, live);
            for (const auto &op : stage.finish.ops) {
                if (op.kind != OpKind::Measure) {
                    continue;
                }
                std::vector<uint8_t> bits(2 * nn, 0);
                for (size_t i = 0; i < nn; i++) {
                    if (op.q[0] == in[i]) {
                        bits[i] = 1;
                    }
                    if (op.q[0] == b2[i]) {
                        bits[nn + i] = 1;
                    }
                }
                stage.corrections.push_back(embed(q_correction(part, bits), b3, reg));
            }

            ops.clear();
            for (size_t i = 0; i < nn; i++) {
                ops.push_back(Operation::one(OpKind::I, b3[i]));
            }
            stage.q_slots = compile_segment(ops, reg, b3);
            plan.stages.push_back(std::move(stage));
        }
        return plan;
    }

   private:
    Circuit circuit_;
    ClinrParams params_;
    std::vector<Circuit> parts_;
    std::vector<std::vector<PauliString>> pools_;
};

/// Frame-simulated CliNR_{t,r} implementation of C.
inline RunStats run_clinr(const Circuit &c, const ClinrParams &params, const NoiseModel &model, uint64_t shots,
                          uint64_t seed, size_t threads = 0) {
    ClinrPlanner planner(c, params);
    RunStats stats = run_teleport(planner.parts().size(), model, shots, seed, params.batch_size, params.max_restarts,
                                  threads, [&](uint64_t batch) { return planner.plan(seed, batch); });
    stats.logical_size = c.size();
    stats.logical_qubits = c.num_qubits();
    return stats;
}

}  // namespace clinr
