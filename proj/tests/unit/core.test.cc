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

#include <cmath>
#include <random>
#include <set>

#include "clinr/circuit.hpp"
#include "clinr/gf2.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"
#include "clinr/schedule.hpp"
#include "clinr/tableau.hpp"
#include "dense_oracle.h"
#include "gtest/gtest.h"

using namespace clinr;

namespace {

PauliString P(const char *text) {
    return PauliString::from_str(text);
}

}  // namespace

TEST(PauliString, from_str_and_letters) {
    auto p = P("-XYZ_");
    ASSERT_EQ(p.num_qubits(), 4);
    ASSERT_TRUE(p.negative());
    ASSERT_EQ(p.get(0), Pauli::X);
    ASSERT_EQ(p.get(1), Pauli::Y);
    ASSERT_TRUE(p.x(1) && p.z(1));
    ASSERT_EQ(p.get(2), Pauli::Z);
    ASSERT_EQ(p.get(3), Pauli::I);
    ASSERT_EQ(p.weight(), 3);
    ASSERT_EQ(p.str(), "-XYZ_");
    ASSERT_THROW(P("XQ"), std::invalid_argument);
}

TEST(PauliString, identity_requires_positive_sign) {
    ASSERT_TRUE(P("___").is_identity());
    ASSERT_FALSE(P("-___").is_identity());
    ASSERT_TRUE(P("-___").letters_identity());
    ASSERT_FALSE(P("_X_").is_identity());
}

TEST(PauliString, weight_matches_letters_wide) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; trial++) {
        auto p = dense::random_pauli(150, rng);
        size_t w = 0;
        for (size_t q = 0; q < 150; q++) {
            w += p.get(q) != Pauli::I;
        }
        ASSERT_EQ(p.weight(), w);
    }
}

TEST(commutes, examples) {
    ASSERT_FALSE(commutes(P("X"), P("Z")));
    ASSERT_TRUE(commutes(P("XYZ"), P("___")));
    ASSERT_TRUE(commutes(P("XX"), P("ZZ")));
    ASSERT_FALSE(commutes(P("XY"), P("ZY")));
    ASSERT_THROW(commutes(P("X"), P("XX")), std::invalid_argument);
}

TEST(commutes, agrees_with_dense_commutator) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; trial++) {
        auto a = dense::random_pauli(3, rng);
        auto b = dense::random_pauli(3, rng);
        auto ab = dense::pauli_matrix(a) * dense::pauli_matrix(b);
        auto ba = dense::pauli_matrix(b) * dense::pauli_matrix(a);
        ASSERT_EQ(commutes(a, b), dense::approx_equal(ab, ba)) << a.str() << " " << b.str();
    }
}

TEST(pauli_mul, examples) {
    ASSERT_TRUE(pauli_mul(P("X"), P("X")).is_identity());
    auto xz = pauli_mul(P("X"), P("Z"));
    ASSERT_TRUE(xz.x(0) && xz.z(0));
    auto r = pauli_mul(P("XX"), P("XZ"));
    ASSERT_EQ(r.get(0), Pauli::I);
    ASSERT_EQ(r.get(1), Pauli::Y);
    ASSERT_THROW(pauli_mul(P("X"), P("XX")), std::invalid_argument);
}

TEST(pauli_mul, sign_convention_against_dense) {
    // Commuting products are exact. Anticommuting ones equal the true product
    // up to a dropped factor of +-i.
    std::mt19937_64 rng(7);
    const dense::cd i(0, 1);
    for (int trial = 0; trial < 300; trial++) {
        auto a = dense::random_pauli(3, rng);
        auto b = dense::random_pauli(3, rng);
        auto prod = dense::pauli_matrix(a) * dense::pauli_matrix(b);
        auto r = dense::pauli_matrix(pauli_mul(a, b));
        if (commutes(a, b)) {
            ASSERT_TRUE(dense::approx_equal(prod, r)) << a.str() << " * " << b.str();
        } else {
            ASSERT_TRUE(dense::approx_equal(prod, i * r) || dense::approx_equal(prod, -i * r))
                << a.str() << " * " << b.str();
        }
    }
}

TEST(embed, round_trip) {
    std::vector<uint32_t> targets{4, 1, 2};
    auto local = P("-XYZ");
    auto full = embed(local, targets, 5);
    ASSERT_EQ(full.str(), "-_YZ_X");
    ASSERT_EQ(restrict_to(full, targets), local);
    ASSERT_THROW(embed(local, std::vector<uint32_t>{0, 1}, 5), std::invalid_argument);
    ASSERT_THROW(embed(local, std::vector<uint32_t>{0, 1, 9}, 5), std::invalid_argument);
}

TEST(conjugate_through, examples) {
    ASSERT_EQ(conjugate_through(Operation::one(OpKind::H, 0), P("X")), P("Z"));
    ASSERT_EQ(conjugate_through(Operation::two(OpKind::CX, 0, 1), P("X_")), P("XX"));
    ASSERT_EQ(conjugate_through(Operation::two(OpKind::CZ, 0, 1), P("X_")), P("XZ"));
    ASSERT_EQ(conjugate_through(Operation::one(OpKind::S, 0), P("X")), P("Y"));
    ASSERT_EQ(conjugate_through(Operation::one(OpKind::S, 0), P("Y")), P("-X"));
    ASSERT_THROW(conjugate_through(Operation::one(OpKind::Measure, 0), P("X")), std::invalid_argument);
    ASSERT_THROW(conjugate_through(Operation::one(OpKind::PrepZ, 0), P("X")), std::invalid_argument);
    ASSERT_THROW(conjugate_through(Operation::one(OpKind::H, 3), P("X")), std::invalid_argument);
}

TEST(conjugate_through, every_gate_matches_dense_with_sign) {
    std::vector<Operation> gates;
    for (OpKind k : {OpKind::I, OpKind::H, OpKind::S, OpKind::Sdg, OpKind::X, OpKind::Y, OpKind::Z}) {
        gates.push_back(Operation::one(k, 0));
        gates.push_back(Operation::one(k, 1));
    }
    for (OpKind k : {OpKind::CX, OpKind::CY, OpKind::CZ}) {
        gates.push_back(Operation::two(k, 0, 1));
        gates.push_back(Operation::two(k, 1, 0));
    }
    for (const auto &op : gates) {
        auto u = dense::gate_matrix(op, 2);
        for (int code = 0; code < 32; code++) {
            PauliString p(2);
            p.set(0, static_cast<Pauli>(code & 3));
            p.set(1, static_cast<Pauli>((code >> 2) & 3));
            p.set_negative((code >> 4) & 1);
            auto expected = u * dense::pauli_matrix(p) * dense::dagger(u);
            auto got = conjugate_through(op, p);
            ASSERT_TRUE(dense::approx_equal(expected, dense::pauli_matrix(got)))
                << mnemonic(op.kind) << " " << op.q[0] << " on " << p.str() << " gave " << got.str();
        }
    }
}

TEST(propagate, examples) {
    Circuit c(2, {Operation::one(OpKind::H, 0), Operation::two(OpKind::CX, 0, 1)});
    ASSERT_TRUE(propagate(c, P("__")).is_identity());
    ASSERT_EQ(propagate(c, P("X_")), P("Z_"));
    ASSERT_EQ(propagate(c, P("Z_"), 0), P("XX"));
    ASSERT_EQ(propagate(c, P("X_"), 1), P("XX"));
    ASSERT_EQ(propagate(c, P("X_"), 2), P("X_"));
    ASSERT_THROW(propagate(c, P("X_"), 3), std::out_of_range);
    ASSERT_THROW(propagate(c, P("X")), std::invalid_argument);
}

TEST(propagate, random_circuits_match_dense_conjugation) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; trial++) {
        size_t n = 1 + trial % 4;
        auto c = dense::random_unitary_circuit(n, 25, rng);
        auto u = dense::circuit_matrix(c);
        for (int k = 0; k < 5; k++) {
            auto p = dense::random_pauli(n, rng);
            auto expected = u * dense::pauli_matrix(p) * dense::dagger(u);
            ASSERT_TRUE(dense::approx_equal(expected, dense::pauli_matrix(propagate(c, p))));
        }
    }
}

TEST(propagate, preserves_commutation_and_products) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 2 + trial % 7;
        auto c = dense::random_unitary_circuit(n, 40, rng);
        auto a = dense::random_pauli(n, rng);
        auto b = dense::random_pauli(n, rng);
        auto pa = propagate(c, a);
        auto pb = propagate(c, b);
        ASSERT_EQ(commutes(a, b), commutes(pa, pb));
        auto pab = propagate(c, pauli_mul(a, b));
        ASSERT_TRUE(pab.same_letters(pauli_mul(pa, pb)));
        if (commutes(a, b)) {
            ASSERT_EQ(pab, pauli_mul(pa, pb));
        }
    }
}

TEST(StabilizerTableau, hadamard_example) {
    StabilizerTableau t(2);
    t.apply(Operation::one(OpKind::H, 0));
    ASSERT_EQ(t.stabilizer(0), P("X_"));
    ASSERT_EQ(t.stabilizer(1), P("_Z"));
    ASSERT_TRUE(t.is_valid());
}

TEST(StabilizerTableau, deterministic_zero) {
    StabilizerTableau t(1);
    std::mt19937_64 rng(0);
    ASSERT_TRUE(t.is_deterministic(0));
    ASSERT_FALSE(t.measure(0, rng));
    ASSERT_THROW(t.measure(1, rng), std::out_of_range);
}

TEST(StabilizerTableau, plus_measured_twice) {
    int ones = 0;
    const int seeds = 20000;
    for (int seed = 0; seed < seeds; seed++) {
        std::mt19937_64 rng(seed);
        StabilizerTableau t(1);
        t.apply(Operation::one(OpKind::H, 0));
        ASSERT_FALSE(t.is_deterministic(0));
        bool first = t.measure(0, rng);
        ASSERT_TRUE(t.is_deterministic(0));
        ASSERT_EQ(t.measure(0, rng), first);
        ones += first;
    }
    double sigma = std::sqrt(seeds * 0.25);
    ASSERT_LT(std::abs(ones - seeds / 2.0), 3 * sigma);
}

TEST(StabilizerTableau, stabilizers_are_propagated_z) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; trial++) {
        size_t n = 1 + trial % 8;
        auto c = dense::random_unitary_circuit(n, 60, rng);
        StabilizerTableau t(n);
        t.apply(c);
        ASSERT_TRUE(t.is_valid());
        for (size_t i = 0; i < n; i++) {
            ASSERT_EQ(t.stabilizer(i), propagate(c, PauliString::single(n, i, Pauli::Z)));
            ASSERT_EQ(t.destabilizer(i), propagate(c, PauliString::single(n, i, Pauli::X)));
        }
    }
}

TEST(StabilizerTableau, expectation_matches_state_vector) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; trial++) {
        size_t n = 1 + trial % 4;
        auto c = dense::random_unitary_circuit(n, 30, rng);
        StabilizerTableau t(n);
        t.apply(c);
        auto psi = dense::mat_vec(dense::circuit_matrix(c), dense::zero_state(n));
        for (int k = 0; k < 20; k++) {
            auto p = dense::random_pauli(n, rng);
            double e = dense::expectation(psi, p);
            ASSERT_NEAR(e, t.expectation(p), 1e-9) << p.str();
        }
    }
}

TEST(StabilizerTableau, measurement_statistics_match_born_rule) {
    // Bell pair: outcomes on the two qubits agree and are uniform.
    int agree = 0, ones = 0;
    for (int seed = 0; seed < 4000; seed++) {
        std::mt19937_64 rng(seed);
        StabilizerTableau t(2);
        t.apply(Operation::one(OpKind::H, 0));
        t.apply(Operation::two(OpKind::CX, 0, 1));
        bool a = t.measure(0, rng);
        bool b = t.measure(1, rng);
        agree += a == b;
        ones += a;
        ASSERT_TRUE(t.is_valid());
    }
    ASSERT_EQ(agree, 4000);
    ASSERT_LT(std::abs(ones - 2000), 3 * std::sqrt(1000.0));
}

TEST(StabilizerTableau, apply_pauli_flips_signs) {
    StabilizerTableau t(2);
    t.apply_pauli(P("XZ"));
    ASSERT_EQ(t.expectation(P("Z_")), -1);
    ASSERT_EQ(t.expectation(P("_Z")), +1);
    std::mt19937_64 rng(0);
    t.reset(0, rng);
    ASSERT_EQ(t.expectation(P("Z_")), +1);
}

TEST(parse_circuit, example) {
    auto c = parse_circuit("qubits 2\nH 0\nCX 0 1");
    Circuit expected(2, {Operation::one(OpKind::H, 0), Operation::two(OpKind::CX, 0, 1)});
    ASSERT_EQ(c, expected);
    ASSERT_TRUE(c.is_clifford());
}

TEST(parse_circuit, comments_blank_lines_and_every_mnemonic) {
    auto c = parse_circuit(
        "# header comment\n"
        "qubits 3\n"
        "\n"
        "P0 0\nP+ 1\nI 2\nH 0  # trailing\nS 1\nSDG 2\nX 0\nY 1\nZ 2\n"
        "CX 0 1\nCY 1 2\nCZ 2 0\nM 1\n");
    ASSERT_EQ(c.size(), 13);
    ASSERT_FALSE(c.is_clifford());
    ASSERT_EQ(c[12].kind, OpKind::Measure);
    ASSERT_EQ(parse_circuit(serialize_circuit(c)), c);
}

TEST(parse_circuit, errors_carry_line_numbers) {
    try {
        parse_circuit("qubits 1\nCX 0 1");
        FAIL() << "expected a parse error";
    } catch (const ParseError &e) {
        ASSERT_EQ(e.line, 2);
        ASSERT_NE(std::string(e.what()).find("out of range"), std::string::npos);
    }
    try {
        parse_circuit("qubits 2\nH 0\n\nFOO 1");
        FAIL() << "expected a parse error";
    } catch (const ParseError &e) {
        ASSERT_EQ(e.line, 4);
    }
    ASSERT_THROW(parse_circuit("qubits 2\nH 0 1"), ParseError);
    ASSERT_THROW(parse_circuit("qubits 2\nCX 1 1"), ParseError);
    ASSERT_THROW(parse_circuit("H 0"), ParseError);
    ASSERT_THROW(parse_circuit(""), ParseError);
    ASSERT_THROW(parse_circuit("qubits x"), ParseError);
}

TEST(serialize_circuit, round_trip_corpus) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + trial % 9;
        auto c = dense::random_unitary_circuit(n, trial, rng);
        auto text = serialize_circuit(c);
        auto back = parse_circuit(text);
        ASSERT_EQ(back, c);
        ASSERT_EQ(serialize_circuit(back), text);
    }
}

TEST(Circuit, rejects_bad_operations) {
    Circuit c(2);
    ASSERT_THROW(c.append(OpKind::H, 2), std::invalid_argument);
    ASSERT_THROW(c.append(OpKind::CX, 0, 0), std::invalid_argument);
    ASSERT_THROW(Operation::one(OpKind::CX, 0), std::invalid_argument);
    ASSERT_THROW(Operation::two(OpKind::H, 0, 1), std::invalid_argument);
}

TEST(schedule_layers, examples) {
    Circuit c(4, {Operation::one(OpKind::H, 0), Operation::two(OpKind::CX, 1, 2)});
    auto layers = schedule_layers(c);
    ASSERT_EQ(layers.size(), 1);
    ASSERT_EQ(idle_qubits(layers[0], 4), std::vector<uint32_t>{3});

    Circuit d(1, {Operation::one(OpKind::H, 0), Operation::one(OpKind::S, 0)});
    ASSERT_EQ(schedule_layers(d).size(), 2);
    ASSERT_TRUE(schedule_layers(Circuit(3)).empty());
}

TEST(schedule_layers, properties_on_random_circuits) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; trial++) {
        size_t n = 1 + trial % 10;
        auto c = dense::random_unitary_circuit(n, 1 + trial, rng);
        auto layers = schedule_layers(c);
        std::vector<size_t> per_qubit(n, 0);
        for (const auto &op : c.ops()) {
            for (size_t k = 0; k < op.arity(); k++) {
                per_qubit[op.q[k]]++;
            }
        }
        size_t max_per_qubit = *std::max_element(per_qubit.begin(), per_qubit.end());
        ASSERT_LE(layers.size(), c.size());
        ASSERT_GE(layers.size(), max_per_qubit);

        // Disjoint supports within a layer; worldlines keep their order.
        std::vector<std::vector<Operation>> worldline(n), rebuilt(n);
        for (const auto &op : c.ops()) {
            for (size_t k = 0; k < op.arity(); k++) {
                worldline[op.q[k]].push_back(op);
            }
        }
        size_t total = 0;
        for (const auto &layer : layers) {
            std::set<uint32_t> used;
            for (const auto &op : layer) {
                for (size_t k = 0; k < op.arity(); k++) {
                    ASSERT_TRUE(used.insert(op.q[k]).second);
                    rebuilt[op.q[k]].push_back(op);
                }
            }
            total += layer.size();
            ASSERT_EQ(idle_qubits(layer, n).size(), n - used.size());
        }
        ASSERT_EQ(total, c.size());
        ASSERT_EQ(rebuilt, worldline);
    }
}

TEST(split_circuit, sizes) {
    ASSERT_EQ(split_sizes(10, 3), (std::vector<size_t>{4, 3, 3}));
    ASSERT_EQ(split_sizes(10, 1), (std::vector<size_t>{10}));
    ASSERT_EQ(split_sizes(4, 6), (std::vector<size_t>{1, 1, 1, 1, 0, 0}));
    ASSERT_EQ(split_sizes(12, 4), (std::vector<size_t>{3, 3, 3, 3}));
    ASSERT_THROW(split_sizes(4, 0), std::invalid_argument);
}

TEST(split_circuit, concatenation_is_the_circuit) {
    std::mt19937_64 rng(31);
    for (size_t t = 1; t <= 12; t++) {
        auto c = dense::random_unitary_circuit(3, 17, rng);
        auto parts = split_circuit(c, t);
        ASSERT_EQ(parts.size(), t);
        Circuit joined(3);
        size_t s0 = (c.size() + t - 1) / t;
        for (size_t k = 0; k < parts.size(); k++) {
            ASSERT_LE(parts[k].size(), s0);
            ASSERT_GE(parts[k].size() + 1, s0);
            for (const auto &op : parts[k].ops()) {
                joined.push_back(op);
            }
        }
        ASSERT_EQ(joined, c);
    }
}

TEST(gf2, symplectic_rank_of_tableau_rows) {
    StabilizerTableau t(5);
    ASSERT_EQ(gf2::symplectic_rank(t.rows()), 10);
    std::vector<PauliString> dependent{P("XX"), P("ZZ"), P("YY")};
    ASSERT_EQ(gf2::symplectic_rank(dependent), 2);
}
