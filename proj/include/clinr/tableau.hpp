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

#include <random>
#include <stdexcept>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/gf2.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"

namespace clinr {

/// Destabilizer/stabilizer representation of an n-qubit stabilizer state.
/// Row i < n is destabilizer i, row n + i is stabilizer i.
class StabilizerTableau {
   public:
    StabilizerTableau() = default;

    /// The all-zero state |0...0>.
    explicit StabilizerTableau(size_t num_qubits) : n_(num_qubits) {
        rows_.reserve(2 * n_);
        for (size_t i = 0; i < n_; i++) {
            rows_.push_back(PauliString::single(n_, i, Pauli::X));
        }
        for (size_t i = 0; i < n_; i++) {
            rows_.push_back(PauliString::single(n_, i, Pauli::Z));
        }
    }

    size_t num_qubits() const {
        return n_;
    }
    const PauliString &destabilizer(size_t i) const {
        return rows_[i];
    }
    const PauliString &stabilizer(size_t i) const {
        return rows_[n_ + i];
    }
    const std::vector<PauliString> &rows() const {
        return rows_;
    }

    void apply(const Operation &op) {
        if (is_unitary(op.kind)) {
            for (auto &row : rows_) {
                conjugate_inplace(op, row);
            }
            return;
        }
        throw std::invalid_argument("StabilizerTableau::apply: use reset/measure for non-unitary operations.");
    }

    void apply(const Circuit &circuit) {
        for (const auto &op : circuit.ops()) {
            apply(op);
        }
    }

    /// Applies a Pauli operator (as a gate) to the state.
    void apply_pauli(const PauliString &p) {
        for (auto &row : rows_) {
            if (!commutes(row, p)) {
                row.set_negative(!row.negative());
            }
        }
    }

    /// Z-basis measurement. Random outcomes are drawn from `rng`; deterministic
    /// ones are read off the stabilizer group.
    template <typename Rng>
    bool measure(size_t q, Rng &rng) {
        std::bernoulli_distribution coin(0.5);
        return measure_with(q, [&]() { return coin(rng); });
    }

    /// Measurement with an explicit source for the random outcome.
    template <typename CoinFn>
    bool measure_with(size_t q, CoinFn &&coin) {
        check_qubit(q);
        size_t pivot = 2 * n_;
        for (size_t i = n_; i < 2 * n_; i++) {
            if (rows_[i].x(q)) {
                pivot = i;
                break;
            }
        }
        if (pivot < 2 * n_) {
            for (size_t i = 0; i < 2 * n_; i++) {
                if (i != pivot && rows_[i].x(q)) {
                    rows_[i] *= rows_[pivot];
                }
            }
            bool outcome = coin();
            rows_[pivot - n_] = rows_[pivot];
            PauliString z = PauliString::single(n_, q, Pauli::Z);
            z.set_negative(outcome);
            rows_[pivot] = std::move(z);
            return outcome;
        }
        PauliString scratch(n_);
        for (size_t i = 0; i < n_; i++) {
            if (rows_[i].x(q)) {
                scratch *= rows_[n_ + i];
            }
        }
        return scratch.negative();
    }

    /// True when Z_q has a definite value.
    bool is_deterministic(size_t q) const {
        check_qubit(q);
        for (size_t i = n_; i < 2 * n_; i++) {
            if (rows_[i].x(q)) {
                return false;
            }
        }
        return true;
    }

    /// Resets qubit q to |0>.
    template <typename Rng>
    void reset(size_t q, Rng &rng) {
        if (measure(q, rng)) {
            apply(Operation::one(OpKind::X, static_cast<uint32_t>(q)));
        }
    }

    /// +1 / -1 when +-P is in the stabilizer group, 0 otherwise.
    int expectation(const PauliString &p) const {
        if (p.num_qubits() != n_) {
            throw std::invalid_argument("expectation: Pauli string size mismatch.");
        }
        for (size_t i = 0; i < n_; i++) {
            if (!commutes(rows_[n_ + i], p)) {
                return 0;
            }
        }
        PauliString product(n_);
        for (size_t i = 0; i < n_; i++) {
            if (!commutes(rows_[i], p)) {
                product *= rows_[n_ + i];
            }
        }
        if (!product.same_letters(p)) {
            return 0;
        }
        return product.negative() == p.negative() ? +1 : -1;
    }

    /// Checks the commutation structure and full rank of the rows.
    bool is_valid() const;

    bool operator==(const StabilizerTableau &other) const {
        return n_ == other.n_ && rows_ == other.rows_;
    }

   private:
    void check_qubit(size_t q) const {
        if (q >= n_) {
            throw std::out_of_range("StabilizerTableau: qubit index out of range.");
        }
    }

    size_t n_ = 0;
    std::vector<PauliString> rows_;
};

inline bool StabilizerTableau::is_valid() const {
    for (size_t i = 0; i < n_; i++) {
        for (size_t j = 0; j < n_; j++) {
            if (!commutes(rows_[n_ + i], rows_[n_ + j])) {
                return false;
            }
            bool anti = !commutes(rows_[i], rows_[n_ + j]);
            if (anti != (i == j)) {
                return false;
            }
        }
    }
    return gf2::symplectic_rank(rows_) == 2 * n_;
}

}  // namespace clinr
