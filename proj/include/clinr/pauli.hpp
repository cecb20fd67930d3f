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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clinr {

inline constexpr size_t words_for_bits(size_t n) {
    return (n + 63) / 64;
}

/// Single-qubit Pauli letter encoded as (x | z << 1).
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline constexpr bool pauli_x(Pauli p) {
    return (static_cast<uint8_t>(p) & 1) != 0;
}
inline constexpr bool pauli_z(Pauli p) {
    return (static_cast<uint8_t>(p) & 2) != 0;
}
inline constexpr Pauli pauli_from_bits(bool x, bool z) {
    return static_cast<Pauli>(static_cast<uint8_t>(x) | (static_cast<uint8_t>(z) << 1));
}
inline constexpr char pauli_char(Pauli p) {
    return "IXZY"[static_cast<uint8_t>(p)];
}

/// An n-qubit Hermitian Pauli operator in symplectic form: bit-packed x and z
/// vectors plus a sign. A qubit with x=z=1 carries the letter Y (not XZ).
///
/// Phases are tracked only up to a sign. Multiplying two anticommuting strings
/// yields +-i times a Hermitian string; the factor of i is dropped (i -> +1,
/// -i -> -1). Products of commuting strings are exact.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(size_t num_qubits)
        : n_(num_qubits), xs_(words_for_bits(num_qubits), 0), zs_(words_for_bits(num_qubits), 0) {
    }

    /// Parses strings like "+XYZ_", "-IXZ" or "XX". '_' and 'I' both denote identity.
    static PauliString from_str(std::string_view text) {
        bool neg = false;
        if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
            neg = text.front() == '-';
            text.remove_prefix(1);
        }
        PauliString result(text.size());
        for (size_t q = 0; q < text.size(); q++) {
            switch (text[q]) {
                case '_':
                case 'I':
                    break;
                case 'X':
                    result.set(q, Pauli::X);
                    break;
                case 'Y':
                    result.set(q, Pauli::Y);
                    break;
                case 'Z':
                    result.set(q, Pauli::Z);
                    break;
                default:
                    throw std::invalid_argument("Unrecognized Pauli character '" + std::string(1, text[q]) + "'.");
            }
        }
        result.neg_ = neg;
        return result;
    }

    /// Single-letter string on qubit q of an n-qubit register.
    static PauliString single(size_t num_qubits, size_t q, Pauli p) {
        PauliString result(num_qubits);
        result.set(q, p);
        return result;
    }

    size_t num_qubits() const {
        return n_;
    }
    size_t num_words() const {
        return xs_.size();
    }

    bool x(size_t q) const {
        return (xs_[q >> 6] >> (q & 63)) & 1;
    }
    bool z(size_t q) const {
        return (zs_[q >> 6] >> (q & 63)) & 1;
    }
    Pauli get(size_t q) const {
        return pauli_from_bits(x(q), z(q));
    }
    void set_x(size_t q, bool v) {
        set_bit(xs_, q, v);
    }
    void set_z(size_t q, bool v) {
        set_bit(zs_, q, v);
    }
    void set(size_t q, Pauli p) {
        set_x(q, pauli_x(p));
        set_z(q, pauli_z(p));
    }

    bool negative() const {
        return neg_;
    }
    void set_negative(bool neg) {
        neg_ = neg;
    }
    int sign() const {
        return neg_ ? -1 : +1;
    }

    std::span<uint64_t> xs() {
        return xs_;
    }
    std::span<uint64_t> zs() {
        return zs_;
    }
    std::span<const uint64_t> xs() const {
        return xs_;
    }
    std::span<const uint64_t> zs() const {
        return zs_;
    }

    size_t weight() const {
        size_t w = 0;
        for (size_t k = 0; k < xs_.size(); k++) {
            w += std::popcount(xs_[k] | zs_[k]);
        }
        return w;
    }

    /// True when every letter is I (sign ignored).
    bool letters_identity() const {
        for (size_t k = 0; k < xs_.size(); k++) {
            if (xs_[k] | zs_[k]) {
                return false;
            }
        }
        return true;
    }

    bool is_identity() const {
        return !neg_ && letters_identity();
    }

    bool same_letters(const PauliString &other) const {
        return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
    }

    /// Clears all letters and the sign.
    void clear() {
        std::fill(xs_.begin(), xs_.end(), 0);
        std::fill(zs_.begin(), zs_.end(), 0);
        neg_ = false;
    }

    /// Letter-wise XOR (the product up to phase). Sign untouched.
    void xor_letters(const PauliString &other) {
        require_same_size(other);
        for (size_t k = 0; k < xs_.size(); k++) {
            xs_[k] ^= other.xs_[k];
            zs_[k] ^= other.zs_[k];
        }
    }

    /// Sets *this to the letters of (*this) * rhs and returns the power of i
    /// contributed by the letter products and by rhs's sign. This object's own
    /// sign is left untouched and must be combined by the caller.
    uint8_t inplace_right_mul_log_i(const PauliString &rhs) {
        require_same_size(rhs);
        unsigned extra = 0;
        for (size_t k = 0; k < xs_.size(); k++) {
            uint64_t x1 = xs_[k];
            uint64_t z1 = zs_[k];
            uint64_t x2 = rhs.xs_[k];
            uint64_t z2 = rhs.zs_[k];
            uint64_t nx = x1 ^ x2;
            uint64_t nz = z1 ^ z2;
            // Anticommuting positions contribute +i, or -i where `minus` is set.
            uint64_t x1z2 = x1 & z2;
            uint64_t anti = (x2 & z1) ^ x1z2;
            uint64_t minus = (nx ^ nz ^ x1z2) & anti;
            extra += static_cast<unsigned>(std::popcount(anti) + 2 * std::popcount(minus));
            xs_[k] = nx;
            zs_[k] = nz;
        }
        extra += static_cast<unsigned>(rhs.neg_) << 1;
        return static_cast<uint8_t>(extra & 3);
    }

    /// In-place product; drops a factor of i when the operands anticommute.
    PauliString &operator*=(const PauliString &rhs) {
        uint8_t log_i = inplace_right_mul_log_i(rhs);
        neg_ ^= ((log_i >> 1) & 1) != 0;
        return *this;
    }

    bool operator==(const PauliString &other) const {
        return n_ == other.n_ && neg_ == other.neg_ && xs_ == other.xs_ && zs_ == other.zs_;
    }
    bool operator!=(const PauliString &other) const {
        return !(*this == other);
    }

    /// Dense form such as "+X_YZ".
    std::string str() const {
        std::string out;
        out.reserve(n_ + 1);
        out.push_back(neg_ ? '-' : '+');
        for (size_t q = 0; q < n_; q++) {
            Pauli p = get(q);
            out.push_back(p == Pauli::I ? '_' : pauli_char(p));
        }
        return out;
    }

    void require_same_size(const PauliString &other) const {
        if (other.n_ != n_) {
            throw std::invalid_argument(
                "Pauli string size mismatch: " + std::to_string(n_) + " vs " + std::to_string(other.n_) + ".");
        }
    }

   private:
    static void set_bit(std::vector<uint64_t> &words, size_t q, bool v) {
        uint64_t mask = uint64_t{1} << (q & 63);
        if (v) {
            words[q >> 6] |= mask;
        } else {
            words[q >> 6] &= ~mask;
        }
    }

    size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    bool neg_ = false;
};

/// Symplectic inner product test: x_P . z_Q + z_P . x_Q == 0 (mod 2).
inline bool commutes(const PauliString &a, const PauliString &b) {
    a.require_same_size(b);
    auto ax = a.xs();
    auto az = a.zs();
    auto bx = b.xs();
    auto bz = b.zs();
    uint64_t acc = 0;
    for (size_t k = 0; k < ax.size(); k++) {
        acc ^= (ax[k] & bz[k]) ^ (az[k] & bx[k]);
    }
    return (std::popcount(acc) & 1) == 0;
}

inline PauliString pauli_mul(const PauliString &a, const PauliString &b) {
    PauliString result = a;
    result *= b;
    return result;
}

/// Copies the letters of `local` (qubit k) onto qubit `targets[k]` of a fresh
/// register of size `num_qubits`. The sign is carried over.
inline PauliString embed(const PauliString &local, std::span<const uint32_t> targets, size_t num_qubits) {
    if (targets.size() != local.num_qubits()) {
        throw std::invalid_argument("embed: target count does not match the Pauli string size.");
    }
    PauliString out(num_qubits);
    for (size_t k = 0; k < targets.size(); k++) {
        if (targets[k] >= num_qubits) {
            throw std::invalid_argument("embed: target qubit out of range.");
        }
        out.set(targets[k], local.get(k));
    }
    out.set_negative(local.negative());
    return out;
}

/// Inverse of embed: reads qubit `sources[k]` into qubit k.
inline PauliString restrict_to(const PauliString &full, std::span<const uint32_t> sources) {
    PauliString out(sources.size());
    for (size_t k = 0; k < sources.size(); k++) {
        out.set(k, full.get(sources[k]));
    }
    out.set_negative(full.negative());
    return out;
}

}  // namespace clinr
