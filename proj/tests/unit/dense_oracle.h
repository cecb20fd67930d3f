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

// Dense matrix / state-vector reference used only by the tests. Qubit q is
// bit q of the basis index. Everything here is written from the textbook
// definitions and shares no code with the library's symplectic machinery.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "clinr/circuit.hpp"
#include "clinr/pauli.hpp"

namespace dense {

using cd = std::complex<double>;

/// Row-major square matrix of dimension 2^n.
struct Mat {
    size_t dim = 0;
    std::vector<cd> a;

    explicit Mat(size_t d = 0) : dim(d), a(d * d, 0.0) {
    }
    static Mat identity(size_t d) {
        Mat m(d);
        for (size_t i = 0; i < d; i++) {
            m(i, i) = 1.0;
        }
        return m;
    }
    cd &operator()(size_t r, size_t c) {
        return a[r * dim + c];
    }
    cd operator()(size_t r, size_t c) const {
        return a[r * dim + c];
    }
};

inline Mat operator*(const Mat &x, const Mat &y) {
    Mat out(x.dim);
    for (size_t i = 0; i < x.dim; i++) {
        for (size_t k = 0; k < x.dim; k++) {
            cd v = x(i, k);
            if (v == cd(0.0)) {
                continue;
            }
            for (size_t j = 0; j < x.dim; j++) {
                out(i, j) += v * y(k, j);
            }
        }
    }
    return out;
}

inline Mat operator*(cd s, const Mat &x) {
    Mat out = x;
    for (auto &v : out.a) {
        v *= s;
    }
    return out;
}

inline Mat dagger(const Mat &x) {
    Mat out(x.dim);
    for (size_t i = 0; i < x.dim; i++) {
        for (size_t j = 0; j < x.dim; j++) {
            out(i, j) = std::conj(x(j, i));
        }
    }
    return out;
}

inline bool approx_equal(const Mat &x, const Mat &y, double tol = 1e-9) {
    if (x.dim != y.dim) {
        return false;
    }
    for (size_t k = 0; k < x.a.size(); k++) {
        if (std::abs(x.a[k] - y.a[k]) > tol) {
            return false;
        }
    }
    return true;
}

/// 2x2 matrices as {m00, m01, m10, m11}.
using M2 = std::array<cd, 4>;

inline M2 letter_matrix(clinr::Pauli p) {
    const cd i(0, 1);
    switch (p) {
        case clinr::Pauli::I:
            return {1, 0, 0, 1};
        case clinr::Pauli::X:
            return {0, 1, 1, 0};
        case clinr::Pauli::Y:
            return {0, -i, i, 0};
        case clinr::Pauli::Z:
            return {1, 0, 0, -1};
    }
    return {1, 0, 0, 1};
}

/// Operator with single-qubit factor `m` on qubit q.
inline Mat embed1(const M2 &m, size_t q, size_t n) {
    size_t d = size_t{1} << n;
    Mat out(d);
    for (size_t col = 0; col < d; col++) {
        size_t b = (col >> q) & 1;
        for (size_t a = 0; a < 2; a++) {
            cd v = m[a * 2 + b];
            if (v != cd(0.0)) {
                size_t row = (col & ~(size_t{1} << q)) | (a << q);
                out(row, col) += v;
            }
        }
    }
    return out;
}

/// |0><0|_c (x) I + |1><1|_c (x) m_t.
inline Mat controlled(const M2 &m, size_t c, size_t t, size_t n) {
    size_t d = size_t{1} << n;
    Mat out(d);
    for (size_t col = 0; col < d; col++) {
        if (((col >> c) & 1) == 0) {
            out(col, col) = 1.0;
            continue;
        }
        size_t b = (col >> t) & 1;
        for (size_t a = 0; a < 2; a++) {
            cd v = m[a * 2 + b];
            if (v != cd(0.0)) {
                size_t row = (col & ~(size_t{1} << t)) | (a << t);
                out(row, col) += v;
            }
        }
    }
    return out;
}

/// Matrix of a Pauli string with Hermitian letters, times its sign.
inline Mat pauli_matrix(const clinr::PauliString &p) {
    size_t n = p.num_qubits();
    Mat out = Mat::identity(size_t{1} << n);
    for (size_t q = 0; q < n; q++) {
        if (p.get(q) != clinr::Pauli::I) {
            out = embed1(letter_matrix(p.get(q)), q, n) * out;
        }
    }
    return (p.negative() ? -1.0 : 1.0) * out;
}

inline Mat gate_matrix(const clinr::Operation &op, size_t n) {
    using clinr::OpKind;
    const cd i(0, 1);
    const double h = 1 / std::sqrt(2.0);
    switch (op.kind) {
        case OpKind::I:
            return Mat::identity(size_t{1} << n);
        case OpKind::H:
            return embed1({h, h, h, -h}, op.q[0], n);
        case OpKind::S:
            return embed1({1, 0, 0, i}, op.q[0], n);
        case OpKind::Sdg:
            return embed1({1, 0, 0, -i}, op.q[0], n);
        case OpKind::X:
            return embed1(letter_matrix(clinr::Pauli::X), op.q[0], n);
        case OpKind::Y:
            return embed1(letter_matrix(clinr::Pauli::Y), op.q[0], n);
        case OpKind::Z:
            return embed1(letter_matrix(clinr::Pauli::Z), op.q[0], n);
        case OpKind::CX:
            return controlled(letter_matrix(clinr::Pauli::X), op.q[0], op.q[1], n);
        case OpKind::CY:
            return controlled(letter_matrix(clinr::Pauli::Y), op.q[0], op.q[1], n);
        case OpKind::CZ:
            return controlled(letter_matrix(clinr::Pauli::Z), op.q[0], op.q[1], n);
        default:
            throw std::invalid_argument("gate_matrix: not a unitary operation");
    }
}

inline Mat circuit_matrix(const clinr::Circuit &c) {
    Mat u = Mat::identity(size_t{1} << c.num_qubits());
    for (const auto &op : c.ops()) {
        u = gate_matrix(op, c.num_qubits()) * u;
    }
    return u;
}

/// State vector |0...0>.
inline std::vector<cd> zero_state(size_t n) {
    std::vector<cd> v(size_t{1} << n, 0.0);
    v[0] = 1.0;
    return v;
}

inline std::vector<cd> mat_vec(const Mat &m, const std::vector<cd> &v) {
    std::vector<cd> out(v.size(), 0.0);
    for (size_t r = 0; r < m.dim; r++) {
        for (size_t c = 0; c < m.dim; c++) {
            out[r] += m(r, c) * v[c];
        }
    }
    return out;
}

/// <v| P |v> for a Pauli string (real for Hermitian P).
inline double expectation(const std::vector<cd> &v, const clinr::PauliString &p) {
    auto w = mat_vec(pauli_matrix(p), v);
    cd acc = 0;
    for (size_t k = 0; k < v.size(); k++) {
        acc += std::conj(v[k]) * w[k];
    }
    return acc.real();
}

/// Uniformly random letters and sign.
template <typename Rng>
clinr::PauliString random_pauli(size_t n, Rng &rng) {
    std::uniform_int_distribution<int> letter(0, 3);
    clinr::PauliString p(n);
    for (size_t q = 0; q < n; q++) {
        p.set(q, static_cast<clinr::Pauli>(letter(rng)));
    }
    p.set_negative(letter(rng) & 1);
    return p;
}

/// Random circuit over every unitary kind the IR supports.
template <typename Rng>
clinr::Circuit random_unitary_circuit(size_t n, size_t s, Rng &rng) {
    using clinr::OpKind;
    static constexpr std::array<OpKind, 10> kinds{OpKind::H, OpKind::S,  OpKind::Sdg, OpKind::X,  OpKind::Y,
                                                  OpKind::Z, OpKind::CX, OpKind::CY,  OpKind::CZ, OpKind::I};
    std::uniform_int_distribution<size_t> pick(0, kinds.size() - 1);
    std::uniform_int_distribution<uint32_t> qubit(0, static_cast<uint32_t>(n - 1));
    clinr::Circuit c(n);
    while (c.size() < s) {
        OpKind k = kinds[pick(rng)];
        uint32_t a = qubit(rng);
        if (clinr::is_two_qubit(k)) {
            if (n < 2) {
                continue;
            }
            uint32_t b = qubit(rng);
            if (a == b) {
                continue;
            }
            c.append(k, a, b);
        } else {
            c.append(k, a);
        }
    }
    return c;
}

}  // namespace dense
