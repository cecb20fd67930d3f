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

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "clinr/pauli.hpp"

namespace clinr::gf2 {

using BitRow = std::vector<uint64_t>;

inline bool get_bit(const BitRow &row, size_t k) {
    return (row[k >> 6] >> (k & 63)) & 1;
}
inline void flip_bit(BitRow &row, size_t k) {
    row[k >> 6] ^= uint64_t{1} << (k & 63);
}

/// The symplectic vector (x | z) of a Pauli string, as 2n bits.
inline BitRow symplectic_bits(const PauliString &p) {
    size_t n = p.num_qubits();
    BitRow row(words_for_bits(2 * n), 0);
    for (size_t q = 0; q < n; q++) {
        if (p.x(q)) {
            flip_bit(row, q);
        }
        if (p.z(q)) {
            flip_bit(row, n + q);
        }
    }
    return row;
}

/// Incrementally built echelon basis, used for independence tests.
class Basis {
   public:
    /// Adds `v` when it is independent of the current span; returns whether it was added.
    bool insert(BitRow v) {
        reduce(v);
        size_t pivot = lowest_set_bit(v);
        if (pivot == kNone) {
            return false;
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(pivot);
        return true;
    }

    bool contains(BitRow v) const {
        reduce(v);
        return lowest_set_bit(v) == kNone;
    }

    size_t rank() const {
        return rows_.size();
    }

   private:
    static constexpr size_t kNone = SIZE_MAX;

    void reduce(BitRow &v) const {
        for (size_t i = 0; i < rows_.size(); i++) {
            if (get_bit(v, pivots_[i])) {
                for (size_t k = 0; k < v.size(); k++) {
                    v[k] ^= rows_[i][k];
                }
            }
        }
    }

    static size_t lowest_set_bit(const BitRow &v) {
        for (size_t k = 0; k < v.size(); k++) {
            if (v[k]) {
                return 64 * k + static_cast<size_t>(std::countr_zero(v[k]));
            }
        }
        return kNone;
    }

    std::vector<BitRow> rows_;
    std::vector<size_t> pivots_;
};

inline size_t rank(std::span<const BitRow> rows) {
    Basis basis;
    for (const auto &row : rows) {
        basis.insert(row);
    }
    return basis.rank();
}

/// Rank of a list of Pauli strings viewed as symplectic vectors (signs ignored).
inline size_t symplectic_rank(std::span<const PauliString> paulis) {
    Basis basis;
    for (const auto &p : paulis) {
        basis.insert(symplectic_bits(p));
    }
    return basis.rank();
}

/// Dense square matrix over F2 stored as bytes; used for the small symplectic
/// matrices of Clifford sampling.
class Matrix {
   public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {
    }
    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; i++) {
            m(i, i) = 1;
        }
        return m;
    }

    size_t rows() const {
        return rows_;
    }
    size_t cols() const {
        return cols_;
    }
    uint8_t &operator()(size_t r, size_t c) {
        return data_[r * cols_ + c];
    }
    uint8_t operator()(size_t r, size_t c) const {
        return data_[r * cols_ + c];
    }

    Matrix operator*(const Matrix &rhs) const {
        Matrix out(rows_, rhs.cols_);
        for (size_t i = 0; i < rows_; i++) {
            for (size_t k = 0; k < cols_; k++) {
                if ((*this)(i, k)) {
                    for (size_t j = 0; j < rhs.cols_; j++) {
                        out(i, j) ^= rhs(k, j);
                    }
                }
            }
        }
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (size_t i = 0; i < rows_; i++) {
            for (size_t j = 0; j < cols_; j++) {
                out(j, i) = (*this)(i, j);
            }
        }
        return out;
    }

    bool operator==(const Matrix &) const = default;

   private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<uint8_t> data_;
};

/// The symplectic form [[0, I], [I, 0]] on 2n bits.
inline Matrix symplectic_form(size_t n) {
    Matrix m(2 * n, 2 * n);
    for (size_t i = 0; i < n; i++) {
        m(i, n + i) = 1;
        m(n + i, i) = 1;
    }
    return m;
}

/// Inverse of a lower unitriangular matrix by forward substitution.
inline Matrix inverse_unit_lower(const Matrix &lower) {
    size_t n = lower.rows();
    Matrix inv = Matrix::identity(n);
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < i; j++) {
            if (lower(i, j)) {
                for (size_t k = 0; k < n; k++) {
                    inv(i, k) ^= inv(j, k);
                }
            }
        }
    }
    return inv;
}

}  // namespace clinr::gf2
