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

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/gf2.hpp"
#include "clinr/pauli.hpp"
#include "clinr/propagation.hpp"

namespace clinr {

/// An n-qubit Clifford unitary modulo global phase, stored as the images of
/// the generators: row i is U X_i U^dagger and row n + i is U Z_i U^dagger.
/// The signs of the rows are the 2n phase bits.
class CliffordElement {
   public:
    CliffordElement() = default;

    static CliffordElement identity(size_t n) {
        CliffordElement e;
        e.n_ = n;
        for (size_t i = 0; i < n; i++) {
            e.rows_.push_back(PauliString::single(n, i, Pauli::X));
        }
        for (size_t i = 0; i < n; i++) {
            e.rows_.push_back(PauliString::single(n, i, Pauli::Z));
        }
        return e;
    }

    static CliffordElement from_rows(std::vector<PauliString> rows) {
        if (rows.size() % 2 != 0) {
            throw std::invalid_argument("CliffordElement needs 2n rows.");
        }
        CliffordElement e;
        e.n_ = rows.size() / 2;
        for (const auto &row : rows) {
            if (row.num_qubits() != e.n_) {
                throw std::invalid_argument("CliffordElement row has the wrong size.");
            }
        }
        e.rows_ = std::move(rows);
        return e;
    }

    /// Rows from a 2n x 2n symplectic matrix (row = [x | z]) and 2n phase bits.
    static CliffordElement from_matrix(const gf2::Matrix &m, const std::vector<uint8_t> &phases) {
        size_t n = m.rows() / 2;
        std::vector<PauliString> rows;
        for (size_t r = 0; r < 2 * n; r++) {
            PauliString p(n);
            for (size_t q = 0; q < n; q++) {
                p.set_x(q, m(r, q));
                p.set_z(q, m(r, n + q));
            }
            p.set_negative(phases.empty() ? false : phases[r] != 0);
            rows.push_back(std::move(p));
        }
        return from_rows(std::move(rows));
    }

    /// The Clifford implemented by a unitary circuit.
    static CliffordElement of_circuit(const Circuit &circuit) {
        CliffordElement e = identity(circuit.num_qubits());
        for (auto &row : e.rows_) {
            for (const auto &op : circuit.ops()) {
                if (!is_unitary(op.kind)) {
                    throw std::invalid_argument("CliffordElement::of_circuit: circuit is not unitary.");
                }
                conjugate_inplace(op, row);
            }
        }
        return e;
    }

    size_t num_qubits() const {
        return n_;
    }
    const std::vector<PauliString> &rows() const {
        return rows_;
    }
    const PauliString &x_image(size_t q) const {
        return rows_[q];
    }
    const PauliString &z_image(size_t q) const {
        return rows_[n_ + q];
    }

    gf2::Matrix matrix() const {
        gf2::Matrix m(2 * n_, 2 * n_);
        for (size_t r = 0; r < 2 * n_; r++) {
            for (size_t q = 0; q < n_; q++) {
                m(r, q) = rows_[r].x(q);
                m(r, n_ + q) = rows_[r].z(q);
            }
        }
        return m;
    }

    /// M L M^T == L over F2, with L the symplectic form.
    bool is_symplectic() const {
        gf2::Matrix m = matrix();
        gf2::Matrix lambda = gf2::symplectic_form(n_);
        return m * lambda * m.transpose() == lambda;
    }

    /// U P U^dagger, with the sign computed exactly.
    PauliString apply(const PauliString &p) const {
        if (p.num_qubits() != n_) {
            throw std::invalid_argument("CliffordElement::apply: size mismatch.");
        }
        PauliString acc(n_);
        unsigned log_i = p.negative() ? 2 : 0;
        for (size_t q = 0; q < n_; q++) {
            bool x = p.x(q);
            bool z = p.z(q);
            if (x) {
                log_i += acc.inplace_right_mul_log_i(rows_[q]);
            }
            if (z) {
                log_i += acc.inplace_right_mul_log_i(rows_[n_ + q]);
            }
            if (x && z) {
                log_i += 1;  // Y = i X Z
            }
        }
        acc.set_negative((log_i & 2) != 0);
        return acc;
    }

    /// Compact key for small n (2n*2n matrix bits followed by 2n phase bits).
    uint64_t key() const {
        if (4 * n_ * n_ + 2 * n_ > 64) {
            throw std::invalid_argument("CliffordElement::key only supports n <= 3.");
        }
        uint64_t k = 0;
        size_t bit = 0;
        for (const auto &row : rows_) {
            for (size_t q = 0; q < n_; q++) {
                k |= uint64_t{row.x(q)} << bit++;
                k |= uint64_t{row.z(q)} << bit++;
            }
        }
        for (const auto &row : rows_) {
            k |= uint64_t{row.negative()} << bit++;
        }
        return k;
    }

    bool operator==(const CliffordElement &) const = default;

   private:
    size_t n_ = 0;
    std::vector<PauliString> rows_;
};

/// |C_n / U(1)| = 2^(n^2 + 2n) prod_{j=1}^n (4^j - 1).
inline double clifford_group_order(size_t n) {
    double order = std::ldexp(1.0, static_cast<int>(n * n + 2 * n));
    for (size_t j = 1; j <= n; j++) {
        order *= std::ldexp(1.0, static_cast<int>(2 * j)) - 1;
    }
    return order;
}

namespace detail {

struct QuantumMallows {
    std::vector<uint8_t> hadamard;
    std::vector<size_t> perm;
};

template <typename Rng>
QuantumMallows sample_quantum_mallows(size_t n, Rng &rng) {
    QuantumMallows out{std::vector<uint8_t>(n, 0), std::vector<size_t>(n, 0)};
    std::vector<size_t> remaining(n);
    for (size_t k = 0; k < n; k++) {
        remaining[k] = k;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (size_t i = 0; i < n; i++) {
        size_t m = n - i;
        double eps = std::ldexp(1.0, -2 * static_cast<int>(m));
        double r = unit(rng);
        auto index = static_cast<size_t>(-std::ceil(std::log2(r + (1 - r) * eps)));
        index = std::min(index, 2 * m - 1);
        out.hadamard[i] = index < m;
        size_t k = index < m ? index : 2 * m - index - 1;
        out.perm[i] = remaining[k];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return out;
}

template <typename Rng>
void fill_strict_lower(gf2::Matrix &m, Rng &rng, bool symmetric) {
    std::bernoulli_distribution coin(0.5);
    for (size_t i = 0; i < m.rows(); i++) {
        for (size_t j = 0; j < i; j++) {
            uint8_t v = coin(rng);
            m(i, j) = v;
            if (symmetric) {
                m(j, i) = v;
            }
        }
    }
}

}  // namespace detail

/// Uniformly random n-qubit Clifford (modulo global phase), following the
/// Bruhat-decomposition sampler: F1 * (Hadamard layer, permutation) * F2 with
/// quantum-Mallows-distributed middle part and uniform Borel factors, plus a
/// uniform Pauli part.
template <typename Rng>
CliffordElement sample_clifford(size_t n, Rng &rng) {
    if (n < 1) {
        throw std::invalid_argument("sample_clifford: n must be at least 1.");
    }
    auto mallows = detail::sample_quantum_mallows(n, rng);
    std::bernoulli_distribution coin(0.5);

    gf2::Matrix gamma1(n, n), gamma2(n, n);
    for (size_t i = 0; i < n; i++) {
        gamma1(i, i) = coin(rng);
    }
    for (size_t i = 0; i < n; i++) {
        gamma2(i, i) = coin(rng);
    }
    gf2::Matrix delta1 = gf2::Matrix::identity(n);
    gf2::Matrix delta2 = gf2::Matrix::identity(n);
    detail::fill_strict_lower(gamma1, rng, true);
    detail::fill_strict_lower(gamma2, rng, true);
    detail::fill_strict_lower(delta1, rng, false);
    detail::fill_strict_lower(delta2, rng, false);

    auto borel_block = [n](const gf2::Matrix &gamma, const gf2::Matrix &delta) {
        gf2::Matrix prod = gamma * delta;
        gf2::Matrix inv_t = gf2::inverse_unit_lower(delta).transpose();
        gf2::Matrix table(2 * n, 2 * n);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                table(i, j) = delta(i, j);
                table(n + i, j) = prod(i, j);
                table(n + i, n + j) = inv_t(i, j);
            }
        }
        return table;
    };
    gf2::Matrix table1 = borel_block(gamma1, delta1);
    gf2::Matrix table2 = borel_block(gamma2, delta2);

    // Permute the qubits of the second factor, then apply the Hadamard layer
    // by exchanging the X and Z rows of the selected qubits.
    gf2::Matrix middle(2 * n, 2 * n);
    for (size_t i = 0; i < n; i++) {
        size_t src = mallows.perm[i];
        bool had = mallows.hadamard[i] != 0;
        size_t row_x = had ? n + src : src;
        size_t row_z = had ? src : n + src;
        for (size_t j = 0; j < 2 * n; j++) {
            middle(i, j) = table2(row_x, j);
            middle(n + i, j) = table2(row_z, j);
        }
    }
    gf2::Matrix symplectic = table1 * middle;

    std::vector<uint8_t> phases(2 * n);
    for (auto &ph : phases) {
        ph = coin(rng);
    }
    return CliffordElement::from_matrix(symplectic, phases);
}

/// Circuit over {H, S, CX} (preceded by a Pauli layer fixing the signs) whose
/// action equals `target`. Gaussian elimination over the inverse tableau:
/// gates are appended until the inverse is reduced to the identity, so the
/// recorded sequence itself implements the target.
inline Circuit synthesize(const CliffordElement &target) {
    const size_t n = target.num_qubits();
    gf2::Matrix m = target.matrix();
    gf2::Matrix lambda = gf2::symplectic_form(n);
    CliffordElement inverse = CliffordElement::from_matrix(lambda * m.transpose() * lambda, {});
    std::vector<PauliString> rows = inverse.rows();

    std::vector<Operation> gates;
    auto apply = [&](Operation op) {
        for (auto &row : rows) {
            detail::conjugate_unitary<false>(op.kind, op.q[0], op.q[1], row);
        }
        gates.push_back(op);
    };
    auto h = [&](size_t q) { apply(Operation::one(OpKind::H, static_cast<uint32_t>(q))); };
    auto s = [&](size_t q) { apply(Operation::one(OpKind::S, static_cast<uint32_t>(q))); };
    auto cx = [&](size_t c, size_t t) {
        apply(Operation::two(OpKind::CX, static_cast<uint32_t>(c), static_cast<uint32_t>(t)));
    };

    for (size_t i = 0; i < n; i++) {
        const PauliString &d = rows[i];
        bool has_x = false;
        for (size_t j = i; j < n && !has_x; j++) {
            has_x = d.x(j);
        }
        if (!has_x) {
            for (size_t j = i; j < n; j++) {
                if (d.z(j)) {
                    h(j);
                    break;
                }
            }
        }
        if (!d.x(i)) {
            for (size_t j = i + 1; j < n; j++) {
                if (d.x(j)) {
                    cx(j, i);
                    break;
                }
            }
        }
        for (size_t k = i + 1; k < n; k++) {
            if (d.x(k)) {
                cx(i, k);
            }
        }
        bool z_tail = false;
        for (size_t k = i + 1; k < n && !z_tail; k++) {
            z_tail = d.z(k);
        }
        if (z_tail) {
            if (!d.z(i)) {
                s(i);
            }
            for (size_t k = i + 1; k < n; k++) {
                if (d.z(k)) {
                    cx(k, i);
                }
            }
        }
        if (d.z(i)) {
            s(i);
        }

        const PauliString &st = rows[n + i];
        for (size_t k = i + 1; k < n; k++) {
            if (st.x(k)) {
                if (st.z(k)) {
                    s(k);
                }
                h(k);
            }
        }
        for (size_t k = i + 1; k < n; k++) {
            if (st.z(k)) {
                cx(k, i);
            }
        }
        if (st.x(i)) {
            h(i);
            s(i);
            h(i);
        }
    }

    // Fix signs with a Pauli layer applied first: U = V P.
    Circuit unsigned_circuit(n, gates);
    CliffordElement actual = CliffordElement::of_circuit(unsigned_circuit);
    Circuit out(n);
    for (size_t q = 0; q < n; q++) {
        bool flip_x_row = actual.x_image(q).negative() != target.x_image(q).negative();
        bool flip_z_row = actual.z_image(q).negative() != target.z_image(q).negative();
        if (flip_x_row && flip_z_row) {
            out.append(OpKind::Y, static_cast<uint32_t>(q));
        } else if (flip_x_row) {
            out.append(OpKind::Z, static_cast<uint32_t>(q));
        } else if (flip_z_row) {
            out.append(OpKind::X, static_cast<uint32_t>(q));
        }
    }
    for (const auto &g : gates) {
        out.push_back(g);
    }
    return out;
}

/// s operations, each uniformly one of {H, S, CX} on uniformly chosen
/// (distinct) qubits.
template <typename Rng>
Circuit sample_gate_sequence(size_t n, size_t s, Rng &rng) {
    if (n < 2) {
        throw std::invalid_argument("sample_gate_sequence: n must be at least 2.");
    }
    Circuit out(n);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<uint32_t> qubit(0, static_cast<uint32_t>(n - 1));
    std::uniform_int_distribution<uint32_t> other(0, static_cast<uint32_t>(n - 2));
    for (size_t k = 0; k < s; k++) {
        int which = kind(rng);
        uint32_t a = qubit(rng);
        if (which == 0) {
            out.append(OpKind::H, a);
        } else if (which == 1) {
            out.append(OpKind::S, a);
        } else {
            uint32_t b = other(rng);
            if (b >= a) {
                b++;
            }
            out.append(OpKind::CX, a, b);
        }
    }
    return out;
}

/// A random n-qubit CZ sequence of s gates on uniformly chosen distinct pairs.
template <typename Rng>
Circuit sample_cz_sequence(size_t n, size_t s, Rng &rng) {
    if (n < 2) {
        throw std::invalid_argument("sample_cz_sequence: n must be at least 2.");
    }
    Circuit out(n);
    std::uniform_int_distribution<uint32_t> qubit(0, static_cast<uint32_t>(n - 1));
    std::uniform_int_distribution<uint32_t> other(0, static_cast<uint32_t>(n - 2));
    for (size_t k = 0; k < s; k++) {
        uint32_t a = qubit(rng);
        uint32_t b = other(rng);
        if (b >= a) {
            b++;
        }
        out.append(OpKind::CZ, std::min(a, b), std::max(a, b));
    }
    return out;
}

}  // namespace clinr
