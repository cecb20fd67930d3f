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
#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clinr {

enum class OpKind : uint8_t {
    PrepZ,
    PrepX,
    I,  // identity slot; occupies a noisy single-qubit gate location
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    CX,
    CY,
    CZ,
    Measure,
};

inline constexpr bool is_two_qubit(OpKind k) {
    return k == OpKind::CX || k == OpKind::CY || k == OpKind::CZ;
}
inline constexpr bool is_prep(OpKind k) {
    return k == OpKind::PrepZ || k == OpKind::PrepX;
}
inline constexpr bool is_unitary(OpKind k) {
    return !is_prep(k) && k != OpKind::Measure;
}

/// Text mnemonic used by the circuit file format.
inline constexpr std::string_view mnemonic(OpKind k) {
    switch (k) {
        case OpKind::PrepZ:
            return "P0";
        case OpKind::PrepX:
            return "P+";
        case OpKind::I:
            return "I";
        case OpKind::H:
            return "H";
        case OpKind::S:
            return "S";
        case OpKind::Sdg:
            return "SDG";
        case OpKind::X:
            return "X";
        case OpKind::Y:
            return "Y";
        case OpKind::Z:
            return "Z";
        case OpKind::CX:
            return "CX";
        case OpKind::CY:
            return "CY";
        case OpKind::CZ:
            return "CZ";
        case OpKind::Measure:
            return "M";
    }
    return "?";
}

inline std::optional<OpKind> kind_from_mnemonic(std::string_view m) {
    static constexpr std::array kAll{
        OpKind::PrepZ, OpKind::PrepX, OpKind::I,  OpKind::H,  OpKind::S,  OpKind::Sdg,    OpKind::X,
        OpKind::Y,     OpKind::Z,     OpKind::CX, OpKind::CY, OpKind::CZ, OpKind::Measure,
    };
    for (OpKind k : kAll) {
        if (mnemonic(k) == m) {
            return k;
        }
    }
    return std::nullopt;
}

/// One circuit operation. For controlled-Paulis q[0] is the control.
struct Operation {
    OpKind kind = OpKind::I;
    std::array<uint32_t, 2> q{0, 0};

    static Operation one(OpKind kind, uint32_t a) {
        if (is_two_qubit(kind)) {
            throw std::invalid_argument("Operation::one called with a two-qubit kind.");
        }
        return Operation{kind, {a, a}};
    }
    static Operation two(OpKind kind, uint32_t control, uint32_t target) {
        if (!is_two_qubit(kind)) {
            throw std::invalid_argument("Operation::two called with a single-qubit kind.");
        }
        if (control == target) {
            throw std::invalid_argument("Two-qubit operation needs distinct qubits.");
        }
        return Operation{kind, {control, target}};
    }

    size_t arity() const {
        return is_two_qubit(kind) ? 2 : 1;
    }
    bool operator==(const Operation &) const = default;
};

class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(size_t num_qubits) : n_(num_qubits) {
    }
    Circuit(size_t num_qubits, std::vector<Operation> ops) : n_(num_qubits) {
        for (const auto &op : ops) {
            push_back(op);
        }
    }

    size_t num_qubits() const {
        return n_;
    }
    size_t size() const {
        return ops_.size();
    }
    bool empty() const {
        return ops_.empty();
    }
    const std::vector<Operation> &ops() const {
        return ops_;
    }
    const Operation &operator[](size_t k) const {
        return ops_[k];
    }

    void push_back(const Operation &op) {
        for (size_t k = 0; k < op.arity(); k++) {
            if (op.q[k] >= n_) {
                throw std::invalid_argument(
                    "Qubit index " + std::to_string(op.q[k]) + " out of range for " + std::to_string(n_) +
                    " qubits.");
            }
        }
        if (op.arity() == 2 && op.q[0] == op.q[1]) {
            throw std::invalid_argument("Two-qubit operation needs distinct qubits.");
        }
        ops_.push_back(op);
    }
    void append(OpKind kind, uint32_t a) {
        push_back(Operation::one(kind, a));
    }
    void append(OpKind kind, uint32_t a, uint32_t b) {
        push_back(Operation::two(kind, a, b));
    }

    /// True when the circuit contains only unitary operations.
    bool is_clifford() const {
        for (const auto &op : ops_) {
            if (!is_unitary(op.kind)) {
                return false;
            }
        }
        return true;
    }

    bool operator==(const Circuit &) const = default;

   private:
    size_t n_ = 0;
    std::vector<Operation> ops_;
};

struct ParseError : std::runtime_error {
    size_t line;
    ParseError(size_t line_number, const std::string &message)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + message), line(line_number) {
    }
};

namespace detail {

inline std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) {
            k++;
        }
        size_t start = k;
        while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') {
            k++;
        }
        if (k > start) {
            words.push_back(line.substr(start, k - start));
        }
    }
    return words;
}

inline std::optional<uint64_t> parse_uint(std::string_view word) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size()) {
        return std::nullopt;
    }
    return value;
}

/// Calls `body(line_number, words)` for each non-blank line with comments stripped.
template <typename Body>
void for_each_content_line(std::string_view text, Body body) {
    size_t line_number = 0;
    while (!text.empty()) {
        line_number++;
        size_t end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        auto words = split_words(line);
        if (!words.empty()) {
            body(line_number, words);
        }
    }
}

}  // namespace detail

/// Parses the line format:
///   qubits <n>
///   P0 q | P+ q | H q | S q | SDG q | X q | Y q | Z q | I q | CX c t | CY c t | CZ c t | M q
/// '#' starts a comment; blank lines are ignored.
inline Circuit parse_circuit(std::string_view text) {
    std::optional<Circuit> circuit;
    detail::for_each_content_line(text, [&](size_t line, const std::vector<std::string_view> &words) {
        if (!circuit.has_value()) {
            if (words[0] != "qubits" || words.size() != 2) {
                throw ParseError(line, "expected header 'qubits <n>'");
            }
            auto n = detail::parse_uint(words[1]);
            if (!n.has_value()) {
                throw ParseError(line, "bad qubit count '" + std::string(words[1]) + "'");
            }
            circuit.emplace(*n);
            return;
        }
        auto kind = kind_from_mnemonic(words[0]);
        if (!kind.has_value()) {
            throw ParseError(line, "unknown mnemonic '" + std::string(words[0]) + "'");
        }
        size_t arity = is_two_qubit(*kind) ? 2 : 1;
        if (words.size() != arity + 1) {
            throw ParseError(
                line, std::string(words[0]) + " expects " + std::to_string(arity) + " qubit argument(s)");
        }
        std::array<uint32_t, 2> q{0, 0};
        for (size_t k = 0; k < arity; k++) {
            auto v = detail::parse_uint(words[k + 1]);
            if (!v.has_value()) {
                throw ParseError(line, "bad qubit index '" + std::string(words[k + 1]) + "'");
            }
            if (*v >= circuit->num_qubits()) {
                throw ParseError(
                    line, "qubit index " + std::to_string(*v) + " out of range (qubits " +
                              std::to_string(circuit->num_qubits()) + ")");
            }
            q[k] = static_cast<uint32_t>(*v);
        }
        if (arity == 2 && q[0] == q[1]) {
            throw ParseError(line, "two-qubit operation needs distinct qubits");
        }
        circuit->push_back(Operation{*kind, arity == 2 ? q : std::array<uint32_t, 2>{q[0], q[0]}});
    });
    if (!circuit.has_value()) {
        throw ParseError(0, "missing 'qubits <n>' header");
    }
    return std::move(*circuit);
}

/// Canonical text form: header, then one operation per line, '\n' terminated.
inline std::string serialize_circuit(const Circuit &circuit) {
    std::ostringstream out;
    out << "qubits " << circuit.num_qubits() << '\n';
    for (const auto &op : circuit.ops()) {
        out << mnemonic(op.kind) << ' ' << op.q[0];
        if (op.arity() == 2) {
            out << ' ' << op.q[1];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace clinr
