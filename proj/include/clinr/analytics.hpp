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
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

namespace clinr {

/// g_p(x) = 1 - (1 - p)^x, evaluated without cancellation for small p.
inline double g(double p, double x) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("g: p must lie in [0, 1].");
    }
    if (x < 0) {
        throw std::invalid_argument("g: x must be nonnegative.");
    }
    if (x == 0 || p == 0) {
        return 0.0;
    }
    if (p == 1) {
        return 1.0;
    }
    return -std::expm1(x * std::log1p(-p));
}

/// (1 - p)^m.
inline double survival(double p, double m) {
    if (p == 1) {
        return m == 0 ? 1.0 : 0.0;
    }
    return std::exp(m * std::log1p(-p));
}

struct BoundReport {
    size_t n = 0;
    size_t s = 0;
    size_t t = 1;
    size_t r = 0;
    double p = 0;
    size_t s0 = 0;
    size_t m0 = 0;
    double detect_term = 0;    // g_p(prep + s0) 2^-r
    double residual_term = 0;  // faults the checks cannot see
    double denominator = 1;    // (1 - p)^m0
    double p_log_bound = 0;    // unclamped
    double p_log_clamped = 0;  // min(bound, 1)
    double omega_q = 0;
    double omega_g_bound = 0;
};

namespace detail {

inline void check_bound_inputs(size_t n, size_t s, size_t t, double p) {
    if (n < 1 || s < 1 || t < 1) {
        throw std::invalid_argument("bound: n, s and t must be at least 1.");
    }
    if (!(p >= 0 && p < 1)) {
        throw std::invalid_argument("bound: p must lie in [0, 1).");
    }
}

inline size_t ceil_div(size_t a, size_t b) {
    return (a + b - 1) / b;
}

}  // namespace detail

/// CliNR_{t,r}: p_log <= t (g(3n+s0) 2^-r + 2 g(2n+3) + g(5n)) / (1-p)^m0,
/// omega_G <= 10n/s0 + 2 m0 / (s0 (1-p)^m0), omega_Q = 3 + 1/n,
/// with s0 = ceil(s/t) and m0 = 3n + s0 + (2n+3) r.
inline BoundReport clinr_bound(size_t n, size_t s, size_t t, size_t r, double p) {
    detail::check_bound_inputs(n, s, t, p);
    BoundReport b{n, s, t, r, p};
    b.s0 = detail::ceil_div(s, t);
    b.m0 = 3 * n + b.s0 + (2 * n + 3) * r;
    b.detect_term = g(p, static_cast<double>(3 * n + b.s0)) * std::ldexp(1.0, -static_cast<int>(r));
    b.residual_term = 2 * g(p, static_cast<double>(2 * n + 3)) + g(p, static_cast<double>(5 * n));
    b.denominator = survival(p, static_cast<double>(b.m0));
    b.p_log_bound = static_cast<double>(t) * (b.detect_term + b.residual_term) / b.denominator;
    b.p_log_clamped = std::min(1.0, b.p_log_bound);
    b.omega_q = 3.0 + 1.0 / static_cast<double>(n);
    double s0 = static_cast<double>(b.s0);
    b.omega_g_bound = 10.0 * static_cast<double>(n) / s0 + 2.0 * static_cast<double>(b.m0) / (s0 * b.denominator);
    return b;
}

/// Single sub-circuit version: p_log <= (g(3n+s) 2^-r + 2 g(2n+3) + g(5n)) / (1-p)^m
/// and omega_G <= 5n/s + m / (s (1-p)^m), m = 3n + s + (2n+3) r.
inline BoundReport lemma1_bound(size_t n, size_t s, size_t r, double p) {
    BoundReport b = clinr_bound(n, s, 1, r, p);
    double sd = static_cast<double>(s);
    b.omega_g_bound = 5.0 * static_cast<double>(n) / sd + static_cast<double>(b.m0) / (sd * b.denominator);
    return b;
}

/// CZNR_{t,r}: p_log <= t (g(n+s0) 2^-r + 2 g(n+3) + g(3n)) / (1-p)^m0,
/// omega_G <= 6n/s0 + 2 m0 / (s0 (1-p)^m0), omega_Q = 2 + 1/n,
/// m0 = n + s0 + (n+3) r.
inline BoundReport cznr_bound(size_t n, size_t s, size_t t, size_t r, double p) {
    detail::check_bound_inputs(n, s, t, p);
    BoundReport b{n, s, t, r, p};
    b.s0 = detail::ceil_div(s, t);
    b.m0 = n + b.s0 + (n + 3) * r;
    b.detect_term = g(p, static_cast<double>(n + b.s0)) * std::ldexp(1.0, -static_cast<int>(r));
    b.residual_term = 2 * g(p, static_cast<double>(n + 3)) + g(p, static_cast<double>(3 * n));
    b.denominator = survival(p, static_cast<double>(b.m0));
    b.p_log_bound = static_cast<double>(t) * (b.detect_term + b.residual_term) / b.denominator;
    b.p_log_clamped = std::min(1.0, b.p_log_bound);
    b.omega_q = 2.0 + 1.0 / static_cast<double>(n);
    double s0 = static_cast<double>(b.s0);
    b.omega_g_bound = 6.0 * static_cast<double>(n) / s0 + 2.0 * static_cast<double>(b.m0) / (s0 * b.denominator);
    return b;
}

/// Constant-free form of the asymptotic estimate
/// (t s0 2^-r p + 9 t n p) / (1 - s0 p). The hidden big-O constant is not included.
inline double asymptotic_bound(size_t n, size_t s0, size_t t, size_t r, double p) {
    double s0p = static_cast<double>(s0) * p;
    if (s0p >= 1) {
        throw std::invalid_argument("asymptotic_bound: requires s0 * p < 1.");
    }
    double td = static_cast<double>(t);
    return (td * static_cast<double>(s0) * std::ldexp(1.0, -static_cast<int>(r)) * p +
            9.0 * td * static_cast<double>(n) * p) /
           (1 - s0p);
}

enum class LogBase : uint8_t { Two, E };

/// t = floor(sqrt(s/n)) and r = floor(log(s/n)), each clamped to at least 1.
inline std::pair<size_t, size_t> default_params(size_t n, size_t s, LogBase base = LogBase::Two) {
    if (n < 1 || s < 1) {
        throw std::invalid_argument("default_params: n and s must be at least 1.");
    }
    size_t t = 0;
    while ((t + 1) * (t + 1) * n <= s) {
        t++;
    }
    size_t r = 0;
    if (base == LogBase::Two) {
        while ((n << (r + 1)) <= s && r < 62) {
            r++;
        }
    } else {
        double v = std::floor(std::log(static_cast<double>(s) / static_cast<double>(n)));
        r = v > 0 ? static_cast<size_t>(v) : 0;
    }
    return {std::max<size_t>(t, 1), std::max<size_t>(r, 1)};
}

enum class BoundKind : uint8_t { Clinr, Cznr };

inline BoundReport protocol_bound(BoundKind kind, size_t n, size_t s, size_t t, size_t r, double p) {
    return kind == BoundKind::Cznr ? cznr_bound(n, s, t, r, p) : clinr_bound(n, s, t, r, p);
}

/// Smallest t in [1, s] whose analytic gate-overhead bound is within
/// `budget`; nullopt when no t qualifies.
inline std::optional<size_t> choose_t_for_budget(size_t n, size_t s, size_t r, double p, double budget,
                                                 BoundKind kind = BoundKind::Clinr) {
    if (!(budget > 1)) {
        throw std::invalid_argument("choose_t_for_budget: budget must exceed 1.");
    }
    for (size_t t = 1; t <= s; t++) {
        if (protocol_bound(kind, n, s, t, r, p).omega_g_bound <= budget) {
            return t;
        }
    }
    return std::nullopt;
}

/// The t in [1, s] minimizing the analytic gate-overhead bound (smallest on ties).
inline size_t argmin_t_gate_bound(size_t n, size_t s, size_t r, double p, BoundKind kind = BoundKind::Clinr) {
    detail::check_bound_inputs(n, s, 1, p);
    size_t best = 1;
    double best_value = protocol_bound(kind, n, s, 1, r, p).omega_g_bound;
    for (size_t t = 2; t <= s; t++) {
        double v = protocol_bound(kind, n, s, t, r, p).omega_g_bound;
        if (v < best_value) {
            best = t;
            best_value = v;
        }
    }
    return best;
}

}  // namespace clinr
