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
#include <memory>
#include <random>
#include <vector>

#include "clinr/frame_sim.hpp"
#include "clinr/noise.hpp"
#include "clinr/pauli.hpp"
#include "clinr/segment.hpp"

namespace clinr {

/// One teleportation stage: prepare and verify a resource, then consume it.
struct StagePlan {
    Segment resource;
    std::vector<Segment> checks;      // one measurement each
    std::vector<uint8_t> check_signs;  // noiseless outcome of each check
    Segment finish;                    // teleportation measurements
    std::vector<PauliString> corrections;  // image applied per set finish bit (full register)
    Segment q_slots;                   // one noisy single-qubit slot per output qubit
    std::vector<uint32_t> input_block;
    std::vector<uint32_t> output_block;
};

/// A chain of stages implementing an n-qubit circuit on a larger register.
struct TeleportPlan {
    size_t num_qubits = 0;      // register size
    size_t logical_qubits = 0;  // n
    size_t logical_size = 0;    // s
    std::vector<StagePlan> stages;

    const std::vector<uint32_t> &input_block() const {
        return stages.front().input_block;
    }
    const std::vector<uint32_t> &output_block() const {
        return stages.back().output_block;
    }
};

/// Executes one shot of `plan` on any backend exposing run / run_check /
/// run_finish / apply_correction. Failure is left to the caller. Restarts
/// redo the resource and its checks only; more than `max_restarts` restarts
/// in a shot abort it.
template <typename Backend, typename Rng>
ShotRecord run_plan_shot(const TeleportPlan &plan, const NoiseModel &model, uint64_t max_restarts,
                         Backend &backend, Rng &rng, std::vector<uint64_t> *stage_restarts = nullptr,
                         std::vector<uint8_t> *touched_scratch = nullptr) {
    ShotRecord rec;
    std::vector<uint8_t> local_touched;
    std::vector<uint8_t> &touched = touched_scratch != nullptr ? *touched_scratch : local_touched;
    touched.assign(plan.num_qubits, 0);
    auto mark = [&](const Segment &seg) {
        rec.ops += seg.size();
        for (uint32_t q : seg.touched) {
            rec.qubits += touched[q] == 0;
            touched[q] = 1;
        }
    };
    for (size_t st = 0; st < plan.stages.size(); st++) {
        const StagePlan &stage = plan.stages[st];
        while (true) {
            mark(stage.resource);
            backend.run(stage.resource, model, rng);
            bool detected = false;
            for (size_t j = 0; j < stage.checks.size() && !detected; j++) {
                mark(stage.checks[j]);
                detected = backend.run_check(stage.checks[j], stage.check_signs[j] != 0, model, rng);
            }
            if (!detected) {
                break;
            }
            rec.restarts++;
            if (stage_restarts != nullptr) {
                (*stage_restarts)[st]++;
            }
            if (rec.restarts > max_restarts) {
                rec.aborted = true;
                return rec;
            }
        }
        mark(stage.finish);
        const auto &bits = backend.run_finish(stage.finish, model, rng);
        for (size_t k = 0; k < bits.size(); k++) {
            if (bits[k]) {
                backend.apply_correction(stage.corrections[k]);
            }
        }
        mark(stage.q_slots);
        backend.run(stage.q_slots, model, rng);
    }
    return rec;
}

/// Frame-simulated Monte-Carlo estimate for plans rebuilt per batch.
/// make_plan(batch_index) returns the plan used for that batch's shots.
template <typename MakePlan>
RunStats run_teleport(size_t num_stages, const NoiseModel &model, uint64_t shots, uint64_t seed,
                      uint64_t batch_size, uint64_t max_restarts, size_t threads, MakePlan make_plan) {
    model.validate();
    RunStats stats = run_batched(shots, batch_size, seed, threads, [&](uint64_t batch) {
        auto plan = std::make_shared<TeleportPlan>(make_plan(batch));
        return [plan, &model, max_restarts, backend = FrameBackend(plan->num_qubits),
                touched = std::vector<uint8_t>()](uint64_t, std::mt19937_64 &rng, RunStats &acc) mutable {
            if (acc.restarts_per_stage.size() < plan->stages.size()) {
                acc.restarts_per_stage.resize(plan->stages.size(), 0);
            }
            backend.frame().clear();
            ShotRecord rec = run_plan_shot(*plan, model, max_restarts, backend, rng, &acc.restarts_per_stage,
                                           &touched);
            if (!rec.aborted) {
                rec.failed = backend.block_failed(plan->output_block());
            }
            return rec;
        };
    });
    if (stats.restarts_per_stage.size() < num_stages) {
        stats.restarts_per_stage.resize(num_stages, 0);
    }
    return stats;
}

}  // namespace clinr
