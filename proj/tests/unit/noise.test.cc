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

#include <array>
#include <cmath>
#include <map>
#include <random>

#include "clinr/noise.hpp"
#include "gtest/gtest.h"

using namespace clinr;

namespace {

void expect_frequency(size_t count, size_t draws, double p, const std::string &what) {
    double sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_LT(std::abs(count - draws * p), 4 * sigma) << what << ": " << count << " of " << draws;
}

}  // namespace

TEST(NoiseModel, modes) {
    auto u = NoiseModel::uniform(1e-3);
    ASSERT_EQ(u.p1, 1e-3);
    ASSERT_EQ(u.p2, 1e-3);
    ASSERT_EQ(u.p_meas, 1e-3);
    ASSERT_EQ(u.p_idle, 0);
    auto r = NoiseModel::realistic(1e-3);
    ASSERT_EQ(r.p2, 1e-3);
    ASSERT_DOUBLE_EQ(r.p1, 1e-4);
    ASSERT_DOUBLE_EQ(r.p_meas, 1e-4);
    ASSERT_DOUBLE_EQ(r.p_idle, 1e-4);
    ASSERT_TRUE(NoiseModel::noiseless().is_noiseless());
    ASSERT_TRUE(NoiseModel::uniform(0).is_noiseless());
    ASSERT_THROW(NoiseModel::uniform(1.5), std::invalid_argument);
    ASSERT_THROW(NoiseModel::realistic(-1), std::invalid_argument);
    NoiseModel bad;
    bad.p_idle = std::nan("");
    ASSERT_THROW(bad.validate(), std::invalid_argument);
}

TEST(NoiseModel, rate_for_each_kind) {
    NoiseModel m{NoiseMode::Custom, 0.1, 0.2, 0.3, 0.4};
    ASSERT_EQ(m.rate_for(OpKind::H), 0.1);
    ASSERT_EQ(m.rate_for(OpKind::PrepZ), 0.1);
    ASSERT_EQ(m.rate_for(OpKind::PrepX), 0.1);
    ASSERT_EQ(m.rate_for(OpKind::I), 0.1);
    ASSERT_EQ(m.rate_for(OpKind::CZ), 0.2);
    ASSERT_EQ(m.rate_for(OpKind::CY), 0.2);
    ASSERT_EQ(m.rate_for(OpKind::Measure), 0.3);
}

TEST(sample_fault, zero_rate_never_fires) {
    std::mt19937_64 rng(1);
    auto m = NoiseModel::uniform(0);
    for (int k = 0; k < 1000; k++) {
        ASSERT_FALSE(sample_fault(Operation::one(OpKind::H, 0), m, rng).occurred);
        ASSERT_FALSE(sample_fault(Operation::two(OpKind::CX, 0, 1), m, rng).occurred);
        ASSERT_FALSE(sample_fault(Operation::one(OpKind::Measure, 0), m, rng).occurred);
    }
}

TEST(sample_fault, single_qubit_letters) {
    NoiseModel m{NoiseMode::Custom, 0.3, 0, 0, 0};
    std::mt19937_64 rng(2);
    const size_t draws = 1000000;
    std::array<size_t, 4> counts{};
    auto op = Operation::one(OpKind::S, 3);
    for (size_t k = 0; k < draws; k++) {
        auto f = sample_fault(op, m, rng);
        counts[static_cast<int>(f.first)]++;
        ASSERT_EQ(f.occurred, f.first != Pauli::I);
        ASSERT_FALSE(f.flip);
    }
    expect_frequency(counts[0], draws, 0.7, "none");
    expect_frequency(counts[static_cast<int>(Pauli::X)], draws, 0.1, "X");
    expect_frequency(counts[static_cast<int>(Pauli::Y)], draws, 0.1, "Y");
    expect_frequency(counts[static_cast<int>(Pauli::Z)], draws, 0.1, "Z");
}

TEST(sample_fault, two_qubit_fifteen_paulis) {
    NoiseModel m{NoiseMode::Custom, 0, 0.15, 0, 0};
    std::mt19937_64 rng(3);
    const size_t draws = 1000000;
    std::map<std::pair<int, int>, size_t> counts;
    auto op = Operation::two(OpKind::CX, 0, 1);
    size_t none = 0;
    for (size_t k = 0; k < draws; k++) {
        auto f = sample_fault(op, m, rng);
        if (!f.occurred) {
            none++;
            continue;
        }
        ASSERT_FALSE(f.first == Pauli::I && f.second == Pauli::I);
        counts[{static_cast<int>(f.first), static_cast<int>(f.second)}]++;
    }
    ASSERT_EQ(counts.size(), 15);
    expect_frequency(none, draws, 0.85, "none");
    for (const auto &kv : counts) {
        expect_frequency(kv.second, draws, 0.01, "pair");
    }
}

TEST(sample_fault, measurement_flip) {
    NoiseModel m{NoiseMode::Custom, 0, 0, 0.2, 0};
    std::mt19937_64 rng(4);
    const size_t draws = 200000;
    size_t flips = 0;
    auto op = Operation::one(OpKind::Measure, 0);
    for (size_t k = 0; k < draws; k++) {
        auto f = sample_fault(op, m, rng);
        flips += f.flip;
        ASSERT_TRUE(f.on_register(op, 2).is_identity());
    }
    expect_frequency(flips, draws, 0.2, "flip");
}

TEST(FaultDraw, on_register_places_letters) {
    FaultDraw f{true, Pauli::X, Pauli::Z, false};
    auto p = f.on_register(Operation::two(OpKind::CZ, 3, 1), 4);
    ASSERT_EQ(p, PauliString::from_str("_Z_X"));
}

TEST(sample_idle_faults, trivial_cases) {
    std::mt19937_64 rng(5);
    NoiseModel m{NoiseMode::Custom, 0, 0, 0, 0.5};
    std::vector<Operation> layer{Operation::two(OpKind::CX, 0, 1)};
    for (int k = 0; k < 100; k++) {
        ASSERT_TRUE(sample_idle_faults(layer, 2, m, rng).empty());
    }
    m.p_idle = 0;
    ASSERT_TRUE(sample_idle_faults(layer, 5, m, rng).empty());
}

TEST(sample_idle_faults, one_idle_qubit_frequency) {
    std::mt19937_64 rng(6);
    NoiseModel m{NoiseMode::Custom, 0, 0, 0, 0.3};
    std::vector<Operation> layer{Operation::one(OpKind::H, 0)};
    const size_t layers = 1000000;
    std::array<size_t, 4> counts{};
    for (size_t k = 0; k < layers; k++) {
        auto faults = sample_idle_faults(layer, 2, m, rng);
        ASSERT_LE(faults.size(), 1);
        for (const auto &[q, letter] : faults) {
            ASSERT_EQ(q, 1);
            counts[static_cast<int>(letter)]++;
        }
    }
    size_t total = counts[1] + counts[2] + counts[3];
    expect_frequency(total, layers, 0.3, "idle");
    for (int letter = 1; letter <= 3; letter++) {
        expect_frequency(counts[letter], layers, 0.1, "letter");
    }
}

TEST(sample_idle_faults, locations_are_independent) {
    // Joint frequency on two idle qubits factorizes.
    std::mt19937_64 rng(7);
    NoiseModel m{NoiseMode::Custom, 0, 0, 0, 0.2};
    std::vector<Operation> layer;
    const size_t layers = 400000;
    size_t a = 0, b = 0, both = 0;
    for (size_t k = 0; k < layers; k++) {
        bool fa = false, fb = false;
        for (const auto &[q, letter] : sample_idle_faults(layer, 2, m, rng)) {
            (q == 0 ? fa : fb) = true;
        }
        a += fa;
        b += fb;
        both += fa && fb;
    }
    expect_frequency(a, layers, 0.2, "q0");
    expect_frequency(b, layers, 0.2, "q1");
    expect_frequency(both, layers, 0.04, "joint");
}
