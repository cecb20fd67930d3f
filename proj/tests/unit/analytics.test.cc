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

// Reference values come from tests/oracles/bounds_oracle.py (50-digit mpmath).

#include <cmath>

#include "clinr/analytics.hpp"
#include "gtest/gtest.h"

using namespace clinr;

TEST(g, examples) {
    ASSERT_EQ(g(0.3, 0), 0.0);
    ASSERT_EQ(g(0, 100), 0.0);
    ASSERT_EQ(g(1, 1), 1.0);
    ASSERT_EQ(g(1, 7), 1.0);
    ASSERT_NEAR(g(1e-3, 1000), 0.63230457522903595537, 1e-14);
    ASSERT_THROW(g(1.5, 1), std::invalid_argument);
    ASSERT_THROW(g(0.1, -1), std::invalid_argument);
}

TEST(g, stable_for_tiny_p) {
    // 1 - (1 - p)^x ~ x p for x p << 1.
    ASSERT_NEAR(g(1e-15, 10) / 1e-14, 1.0, 1e-9);
}

TEST(clinr_bound, reference_values) {
    auto b = clinr_bound(25, 625, 5, 4, 1e-3);
    ASSERT_EQ(b.s0, 125);
    ASSERT_EQ(b.m0, 412);
    ASSERT_NEAR(b.p_log_bound, 1.7531508634516378735, 1e-12);
    ASSERT_EQ(b.p_log_clamped, 1.0);
    ASSERT_NEAR(b.omega_g_bound, 11.954880466328183513, 1e-11);
    ASSERT_NEAR(b.omega_q, 3.04, 1e-15);

    auto c = clinr_bound(25, 625, 5, 4, 1e-4);
    ASSERT_NEAR(c.p_log_bound, 0.12626124803220782433, 1e-13);
    ASSERT_EQ(c.p_log_clamped, c.p_log_bound);
    ASSERT_NEAR(c.omega_g_bound, 8.8692769465780758332, 1e-11);
}

TEST(clinr_bound, zero_noise_and_errors) {
    auto b = clinr_bound(4, 40, 2, 2, 0.0);
    ASSERT_EQ(b.p_log_bound, 0.0);
    ASSERT_DOUBLE_EQ(b.omega_g_bound, 10.0 * 4 / 20 + 2.0 * b.m0 / 20);
    ASSERT_THROW(clinr_bound(0, 4, 1, 1, 0.1), std::invalid_argument);
    ASSERT_THROW(clinr_bound(2, 4, 0, 1, 0.1), std::invalid_argument);
    ASSERT_THROW(clinr_bound(2, 4, 1, 1, 1.0), std::invalid_argument);
}

TEST(clinr_bound, terms_move_with_r) {
    // The detection term halves with every check while m0 grows by 2n + 3.
    double prev_detect = 1e9;
    double prev_den = 2;
    for (size_t r = 1; r <= 12; r++) {
        auto b = clinr_bound(8, 256, 4, r, 1e-3);
        ASSERT_LT(b.detect_term, prev_detect);
        ASSERT_LT(b.denominator, prev_den);
        ASSERT_EQ(b.m0, 3 * 8 + 64 + (2 * 8 + 3) * r);
        prev_detect = b.detect_term;
        prev_den = b.denominator;
    }
    auto big = clinr_bound(8, 256, 4, 60, 1e-3);
    double limit = 4 * big.residual_term / big.denominator;
    ASSERT_GE(big.p_log_bound, limit);
    ASSERT_NEAR(big.p_log_bound, limit, 1e-15);
}

TEST(clinr_bound, continuous_in_p) {
    double prev = clinr_bound(5, 50, 2, 2, 0.0).p_log_bound;
    for (int k = 1; k <= 1000; k++) {
        double v = clinr_bound(5, 50, 2, 2, k * 1e-5).p_log_bound;
        ASSERT_GT(v, prev);
        ASSERT_LT(v - prev, 1e-2);
        prev = v;
    }
}

TEST(lemma1_bound, reference_values) {
    auto b = lemma1_bound(2, 4, 1, 1e-3);
    ASSERT_EQ(b.m0, 17);
    ASSERT_NEAR(b.p_log_bound, 0.029386340779275084624, 1e-15);
    ASSERT_NEAR(b.omega_g_bound, 6.8229043889280514003, 1e-12);
    ASSERT_EQ(lemma1_bound(2, 4, 1, 0.0).p_log_bound, 0.0);
}

TEST(lemma1_bound, is_the_single_stage_bound) {
    for (double p : {0.0, 1e-4, 3e-3}) {
        auto a = lemma1_bound(6, 70, 3, p);
        auto b = clinr_bound(6, 70, 1, 3, p);
        ASSERT_EQ(a.p_log_bound, b.p_log_bound);
        ASSERT_EQ(a.m0, b.m0);
        double expected = 5.0 * 6 / 70 + static_cast<double>(a.m0) / (70 * a.denominator);
        ASSERT_DOUBLE_EQ(a.omega_g_bound, expected);
    }
}

TEST(asymptotic_bound, values) {
    ASSERT_EQ(asymptotic_bound(25, 125, 5, 4, 0.0), 0.0);
    ASSERT_NEAR(asymptotic_bound(25, 125, 5, 4, 1e-4), 0.11787974683544303797, 1e-15);
    double limit = 9.0 * 5 * 25 * 1e-4 / (1 - 125e-4);
    ASSERT_NEAR(asymptotic_bound(25, 125, 5, 60, 1e-4), limit, 1e-15);
    ASSERT_THROW(asymptotic_bound(25, 125, 5, 4, 0.01), std::invalid_argument);
}

TEST(cznr_bound, reference_values) {
    auto b = cznr_bound(2, 4, 1, 1, 1e-3);
    ASSERT_EQ(b.m0, 11);
    ASSERT_NEAR(b.p_log_bound, 0.019167339656344355139, 1e-15);
    ASSERT_NEAR(b.omega_g_bound, 8.5608645785220606512, 1e-12);
    ASSERT_DOUBLE_EQ(b.omega_q, 2.5);
    auto z = cznr_bound(2, 4, 1, 1, 0.0);
    ASSERT_EQ(z.p_log_bound, 0.0);
    ASSERT_DOUBLE_EQ(z.omega_g_bound, 6.0 * 2 / 4 + 2.0 * 11 / 4);
}

TEST(default_params, examples) {
    ASSERT_EQ(default_params(25, 625), (std::pair<size_t, size_t>{5, 4}));
    ASSERT_EQ(default_params(7, 7), (std::pair<size_t, size_t>{1, 1}));
    ASSERT_EQ(default_params(3, 12), (std::pair<size_t, size_t>{2, 2}));
    ASSERT_EQ(default_params(25, 625, LogBase::E), (std::pair<size_t, size_t>{5, 3}));
    ASSERT_THROW(default_params(0, 5), std::invalid_argument);
}

TEST(default_params, matches_floating_formula) {
    for (size_t n = 1; n <= 30; n++) {
        for (size_t s = n; s <= 40 * n; s += 7) {
            auto [t, r] = default_params(n, s);
            double ratio = static_cast<double>(s) / n;
            ASSERT_EQ(t, std::max<size_t>(1, static_cast<size_t>(std::floor(std::sqrt(ratio) + 1e-12))));
            ASSERT_EQ(r, std::max<size_t>(1, static_cast<size_t>(std::floor(std::log2(ratio) + 1e-12))));
        }
    }
}

TEST(choose_t_for_budget, examples_and_minimality) {
    // Small p, long circuit: the bound drops below 4 for some t.
    const size_t n = 4, s = 2000, r = 3;
    const double p = 1e-5;
    ASSERT_EQ(choose_t_for_budget(n, s, r, p, 1e6), 1);
    auto t = choose_t_for_budget(n, s, r, p, 4.0);
    ASSERT_TRUE(t.has_value());
    ASSERT_LE(clinr_bound(n, s, *t, r, p).omega_g_bound, 4.0);
    for (size_t u = 1; u < *t; u++) {
        ASSERT_GT(clinr_bound(n, s, u, r, p).omega_g_bound, 4.0);
    }
    ASSERT_FALSE(choose_t_for_budget(n, s, r, 0.3, 4.0).has_value());
    ASSERT_THROW(choose_t_for_budget(n, s, r, p, 1.0), std::invalid_argument);
}

TEST(choose_t_for_budget, cznr_kind) {
    auto t = choose_t_for_budget(8, 2000, 2, 1e-5, 4.0, BoundKind::Cznr);
    ASSERT_TRUE(t.has_value());
    ASSERT_LE(cznr_bound(8, 2000, *t, 2, 1e-5).omega_g_bound, 4.0);
}

TEST(argmin_t_gate_bound, is_the_minimum) {
    for (double p : {1e-3, 1e-4}) {
        size_t t = argmin_t_gate_bound(25, 850, 5, p);
        double best = clinr_bound(25, 850, t, 5, p).omega_g_bound;
        for (size_t u = 1; u <= 850; u++) {
            ASSERT_GE(clinr_bound(25, 850, u, 5, p).omega_g_bound, best);
        }
    }
    ASSERT_EQ(argmin_t_gate_bound(25, 850, 5, 1e-3), 2);
    ASSERT_EQ(argmin_t_gate_bound(25, 850, 5, 1e-4), 1);
}
