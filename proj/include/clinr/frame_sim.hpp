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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <initializer_list>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/noise.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"
#include "clinr/segment.hpp"

namespace clinr {

/// 95% Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(uint64_t failures, uint64_t shots) {
    if (shots == 0) {
        throw std::invalid_argument("wilson_interval: shots must be positive.");
    }
    if (failures > shots) {
        throw std::invalid_argument("wilson_interval: failures exceed shots.");
    }
    constexpr double z = 1.959963984540054;
    double n = static_cast<double>(shots);
    double phat = static_cast<double>(failures) / n;
    double denom = 1 + z * z / n;
    double center = (phat + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
    // The endpoints are exactly 0 and 1 at the extremes; rounding would leave ~1e-19.
    double lo = failures == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = failures == shots ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

/// Per-shot outcome, folded into RunStats.
struct ShotRecord {
    bool failed = false;
    bool aborted = false;
    uint64_t ops = 0;
    uint64_t restarts = 0;
    size_t qubits = 0;
};

struct RunStats {
    uint64_t shots = 0;  // completed shots; aborted ones are counted separately
    uint64_t failures = 0;
    uint64_t aborts = 0;
    uint64_t total_ops = 0;
    double total_ops_sq = 0;
    uint64_t restarts = 0;
    std::vector<uint64_t> restarts_per_stage;
    size_t max_qubits = 0;
    size_t logical_size = 0;   // s of the implemented circuit
    size_t logical_qubits = 0;  // n

    double p_log() const {
        return shots == 0 ? 0.0 : static_cast<double>(failures) / static_cast<double>(shots);
    }
    std::pair<double, double> interval() const {
        return wilson_interval(failures, shots);
    }
    double mean_ops() const {
        return shots == 0 ? 0.0 : static_cast<double>(total_ops) / static_cast<double>(shots);
    }
    /// Standard error of mean_ops().
    double mean_ops_stderr() const {
        if (shots < 2) {
            return 0.0;
        }
        double n = static_cast<double>(shots);
        double mean = mean_ops();
        double var = (total_ops_sq - n * mean * mean) / (n - 1);
        return std::sqrt(std::max(0.0, var) / n);
    }
    double omega_g() const {
        return logical_size == 0 ? 0.0 : mean_ops() / static_cast<double>(logical_size);
    }
    double omega_q() const {
        return logical_qubits == 0 ? 0.0 : static_cast<double>(max_qubits) / static_cast<double>(logical_qubits);
    }
    /// Restarts (aborted shots included) per completed shot.
    double restart_rate() const {
        return shots == 0 ? 0.0 : static_cast<double>(restarts) / static_cast<double>(shots);
    }

    void add(const ShotRecord &rec) {
        // Restarts of aborted shots still count, matching restarts_per_stage.
        restarts += rec.restarts;
        if (rec.aborted) {
            aborts++;
            return;
        }
        shots++;
        failures += rec.failed;
        total_ops += rec.ops;
        total_ops_sq += static_cast<double>(rec.ops) * static_cast<double>(rec.ops);
        max_qubits = std::max(max_qubits, rec.qubits);
    }

    void merge(const RunStats &other) {
        shots += other.shots;
        failures += other.failures;
        aborts += other.aborts;
        total_ops += other.total_ops;
        total_ops_sq += other.total_ops_sq;
        restarts += other.restarts;
        if (restarts_per_stage.size() < other.restarts_per_stage.size()) {
            restarts_per_stage.resize(other.restarts_per_stage.size(), 0);
        }
        for (size_t k = 0; k < other.restarts_per_stage.size(); k++) {
            restarts_per_stage[k] += other.restarts_per_stage[k];
        }
        max_qubits = std::max(max_qubits, other.max_qubits);
    }
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic sub-seed for a tuple of identifiers.
inline uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> parts) {
    uint64_t h = splitmix64(seed);
    for (uint64_t part : parts) {
        h = splitmix64(h ^ splitmix64(part + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

inline std::mt19937_64 shot_rng(uint64_t seed, uint64_t shot) {
    return std::mt19937_64(derive_seed(seed, {shot}));
}

/// Worker count: hardware concurrency, capped by CLINR_THREADS when set.
inline size_t default_thread_count() {
    size_t threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("CLINR_THREADS")) {
        char *end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) {
            threads = std::min(threads, static_cast<size_t>(cap));
        }
    }
    return threads;
}

/// Runs `shots` shots split into batches of `batch_size`. make_batch(b) is
/// called once per batch and returns a callable shot(index, rng) ->
/// ShotRecord. Per-shot rngs depend only on (seed, shot index) and the
/// reduction is a sum, so the result does not depend on `threads`.
template <typename MakeBatch>
RunStats run_batched(uint64_t shots, uint64_t batch_size, uint64_t seed, size_t threads, MakeBatch make_batch) {
    if (batch_size == 0) {
        throw std::invalid_argument("run_batched: batch_size must be positive.");
    }
    uint64_t num_batches = (shots + batch_size - 1) / batch_size;
    threads = std::max<size_t>(1, std::min<uint64_t>(threads == 0 ? default_thread_count() : threads, num_batches));
    std::vector<RunStats> partial(threads);
    std::atomic<uint64_t> next{0};
    auto worker = [&](size_t w) {
        RunStats &acc = partial[w];
        for (uint64_t b = next++; b < num_batches; b = next++) {
            auto shot = make_batch(b);
            uint64_t end = std::min(shots, (b + 1) * batch_size);
            for (uint64_t k = b * batch_size; k < end; k++) {
                auto rng = shot_rng(seed, k);
                acc.add(shot(k, rng, acc));
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (size_t w = 0; w < threads; w++) {
            pool.emplace_back([&, w]() {
                try {
                    worker(w);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    error = std::current_exception();
                    next = num_batches;
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
        if (error) {
            std::rethrow_exception(error);
        }
    }
    RunStats total;
    for (const auto &p : partial) {
        total.merge(p);
    }
    return total;
}

/// Pauli frame over the full register: the net Pauli by which the noisy
/// execution differs from the noiseless reference.
class FrameBackend {
   public:
    explicit FrameBackend(size_t num_qubits) : frame_(num_qubits) {
    }

    const PauliString &frame() const {
        return frame_;
    }
    PauliString &frame() {
        return frame_;
    }
    /// Measurement flips (relative to the reference) of the last segment.
    const std::vector<uint8_t> &flips() const {
        return flips_;
    }

    template <typename Rng>
    void run(const Segment &seg, const NoiseModel &model, Rng &rng) {
        sample_segment_faults(seg, model, rng, events_);
        run_with_faults(seg, events_);
    }

    /// Executes `seg` with an explicit, position-sorted fault list.
    void run_with_faults(const Segment &seg, const std::vector<FaultEvent> &events) {
        flips_.assign(seg.num_measurements, 0);
        bool dirty = !frame_.letters_identity();
        size_t e = 0;
        for (size_t k = 0; k < seg.ops.size(); k++) {
            if (!dirty) {
                if (e == events.size()) {
                    break;
                }
                k = events[e].pos;
            } else {
                apply_op(seg.ops[k], seg.measurement_index[k]);
            }
            for (; e < events.size() && events[e].pos == k; e++) {
                const FaultEvent &ev = events[e];
                if (ev.flip) {
                    flips_[seg.measurement_index[k]] ^= 1;
                } else {
                    xor_letter(ev.q0, ev.p0);
                    if (ev.q1 != ev.q0) {
                        xor_letter(ev.q1, ev.p1);
                    }
                    dirty = true;
                }
            }
        }
    }

    /// Check segments hold one measurement; returns whether it deviated.
    template <typename Rng>
    bool run_check(const Segment &seg, bool /*expected*/, const NoiseModel &model, Rng &rng) {
        run(seg, model, rng);
        return flips_[0] != 0;
    }

    /// Returns the per-measurement bits that select correction images.
    template <typename Rng>
    const std::vector<uint8_t> &run_finish(const Segment &seg, const NoiseModel &model, Rng &rng) {
        run(seg, model, rng);
        return flips_;
    }

    /// Outcome-dependent corrections differ from the reference by the image
    /// of the flipped bits, which folds into the frame.
    void apply_correction(const PauliString &p) {
        frame_.xor_letters(p);
    }

    /// Non-identity frame on the given block.
    bool block_failed(std::span<const uint32_t> block) const {
        for (uint32_t q : block) {
            if (frame_.x(q) || frame_.z(q)) {
                return true;
            }
        }
        return false;
    }

   private:
    void xor_letter(uint32_t q, Pauli p) {
        if (pauli_x(p)) {
            frame_.set_x(q, !frame_.x(q));
        }
        if (pauli_z(p)) {
            frame_.set_z(q, !frame_.z(q));
        }
    }

    void apply_op(const Operation &op, uint32_t meas_index) {
        switch (op.kind) {
            case OpKind::PrepZ:
            case OpKind::PrepX:
                frame_.set(op.q[0], Pauli::I);
                return;
            case OpKind::Measure:
                flips_[meas_index] ^= frame_.x(op.q[0]);
                return;
            default:
                detail::conjugate_unitary<false>(op.kind, op.q[0], op.q[1], frame_);
        }
    }

    PauliString frame_;
    std::vector<FaultEvent> events_;
    std::vector<uint8_t> flips_;
};

/// Monte-Carlo logical error rate of the direct implementation: every op of
/// C is a fault location (plus idle noise per ASAP layer); a shot fails when
/// the frame at the end is not the identity.
inline RunStats run_direct(const Circuit &circuit, const NoiseModel &model, uint64_t shots, uint64_t seed,
                           size_t threads = 0, IdleScope scope = IdleScope::Segment) {
    if (!circuit.is_clifford()) {
        throw std::invalid_argument("run_direct: circuit must be a Clifford circuit.");
    }
    model.validate();
    const size_t n = circuit.num_qubits();
    std::vector<uint32_t> all(n);
    for (uint32_t q = 0; q < n; q++) {
        all[q] = q;
    }
    const Segment seg = compile_segment(circuit.ops(), n, scope, all);
    constexpr uint64_t kBatch = 1000;
    RunStats stats = run_batched(shots, kBatch, seed, threads, [&](uint64_t) {
        return [&, backend = FrameBackend(n)](uint64_t, std::mt19937_64 &rng, RunStats &) mutable {
            backend.frame().clear();
            backend.run(seg, model, rng);
            ShotRecord rec;
            rec.failed = !backend.frame().letters_identity();
            rec.ops = seg.size();
            rec.qubits = n;
            return rec;
        };
    });
    stats.logical_size = circuit.size();
    stats.logical_qubits = n;
    return stats;
}

}  // namespace clinr
