// Copyright 2026 The entroute Authors
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

#include "entroute/pair_algebra.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace entroute;

TEST(PairAlgebra, purified_fidelity_examples) {
    EXPECT_DOUBLE_EQ(purified_fidelity(1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(purified_fidelity(0.5, 0.5), 0.5);
    EXPECT_NEAR(purified_fidelity(0.75, 0.75), 5.125 / 6.5, 1e-12);
    EXPECT_NEAR(purified_fidelity(0.75, 0.75), 0.7884615, 1e-7);
}

TEST(PairAlgebra, purified_fidelity_is_exactly_symmetric) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.25, 1.0);
    for (int i = 0; i < 1000; i++) {
        double a = u(rng), b = u(rng);
        EXPECT_EQ(purified_fidelity(a, b), purified_fidelity(b, a));
        EXPECT_EQ(purification_success_prob(a, b), purification_success_prob(b, a));
    }
}

TEST(PairAlgebra, success_prob_examples) {
    EXPECT_NEAR(purification_success_prob(1.0, 1.0), 1.0, 1e-12);
    EXPECT_NEAR(purification_success_prob(0.75, 0.75), 0.5 - 1.0 / 3.0 + 5.0 / 9.0, 1e-12);
    EXPECT_NEAR(purification_success_prob(0.25, 0.25), 8.0 / 144.0 - 1.0 / 9.0 + 5.0 / 9.0, 1e-12);
    EXPECT_NEAR(purification_success_prob(0.25, 0.25), 0.5, 1e-12);
}

TEST(PairAlgebra, success_prob_matches_unsimplified_form) {
    // f1 f2 + (f1 + f2 - 2 f1 f2) / 3 + 5/9 (1 - f1)(1 - f2)
    for (double a = 0.25; a <= 1.0; a += 0.05) {
        for (double b = 0.25; b <= 1.0; b += 0.05) {
            double raw = a * b + (a + b - 2 * a * b) / 3.0 + 5.0 / 9.0 * (1 - a) * (1 - b);
            EXPECT_NEAR(purification_success_prob(a, b), raw, 1e-12);
            double num = a * b + (1 - a) * (1 - b) / 9.0;
            EXPECT_NEAR(purified_fidelity(a, b), num / raw, 1e-12);
        }
    }
}

TEST(PairAlgebra, domain_errors) {
    EXPECT_THROW(purified_fidelity(0.2, 0.9), std::domain_error);
    EXPECT_THROW(purified_fidelity(0.9, 1.01), std::domain_error);
    EXPECT_THROW(purification_success_prob(0.1, 0.9), std::domain_error);
    EXPECT_THROW(pseudo_fidelity(0.25), std::domain_error);
    EXPECT_THROW(pseudo_fidelity(1.5), std::domain_error);
    EXPECT_THROW(inverse_pseudo_fidelity(0.1), std::domain_error);
    EXPECT_THROW(swap_fidelity(std::vector<double>{}), std::invalid_argument);
    EXPECT_THROW(swap_fidelity(std::vector<double>{0.9, 0.1}), std::domain_error);
    EXPECT_THROW(bitflip_purified_fidelity(0.0, 0.5), std::domain_error);
}

TEST(PairAlgebra, swap_fidelity_examples) {
    EXPECT_EQ(swap_fidelity(std::vector<double>{0.9}), 0.9);
    EXPECT_DOUBLE_EQ(swap_fidelity(std::vector<double>{1.0, 1.0, 1.0}), 1.0);
    double w = (4 * 0.9 - 1) / 3;
    EXPECT_NEAR(swap_fidelity(0.9, 0.9), (1 + 3 * w * w) / 4, 1e-12);
    EXPECT_NEAR(swap_fidelity(0.9, 0.9), 0.813333, 1e-6);
}

TEST(PairAlgebra, pseudo_fidelity_examples) {
    EXPECT_EQ(pseudo_fidelity(1.0), 0.0);
    EXPECT_NEAR(pseudo_fidelity(0.85), std::log(0.8), 1e-12);
    EXPECT_NEAR(pseudo_fidelity(0.85), -0.2231436, 1e-7);
    EXPECT_NEAR(inverse_pseudo_fidelity(-0.2231436), 0.85, 1e-7);
}

TEST(PairAlgebra, fixed_points) {
    for (double f : {0.25, 0.5, 1.0}) {
        EXPECT_NEAR(purified_fidelity(f, f), f, 1e-12) << f;
    }
}

TEST(PairAlgebra, gain_region) {
    for (int i = 501; i < 1000; i++) {
        double f = i / 1000.0;
        EXPECT_GT(purified_fidelity(f, f), f) << f;
    }
    for (int i = 251; i < 500; i++) {
        double f = i / 1000.0;
        EXPECT_LT(purified_fidelity(f, f), f) << f;
    }
}

TEST(PairAlgebra, monotone_on_upper_square) {
    for (int i = 50; i <= 100; i++) {
        for (int j = 50; j <= 100; j++) {
            double a = i / 100.0, b = j / 100.0;
            if (i < 100) {
                EXPECT_LE(purified_fidelity(a, b), purified_fidelity((i + 1) / 100.0, b));
            }
            if (j < 100) {
                EXPECT_LE(purified_fidelity(a, b), purified_fidelity(a, (j + 1) / 100.0));
            }
        }
    }
}

TEST(PairAlgebra, diminishing_returns) {
    // The self-purification gain peaks near f = 0.7708 and falls from there on.
    double prev_gain = purified_fidelity(0.771, 0.771) - 0.771;
    for (int i = 772; i < 1000; i++) {
        double f = i / 1000.0;
        double gain = purified_fidelity(f, f) - f;
        EXPECT_LT(gain, prev_gain) << f;
        prev_gain = gain;
    }
}

TEST(PairAlgebra, swap_contracts) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2500001, 0.9999999);
    std::uniform_int_distribution<int> len(2, 8);
    for (int trial = 0; trial < 2000; trial++) {
        std::vector<double> links(len(rng));
        for (double &f : links) {
            f = u(rng);
        }
        EXPECT_LT(swap_fidelity(links), *std::min_element(links.begin(), links.end()));
    }
}

TEST(PairAlgebra, pseudo_fidelity_adds_along_swaps) {
    // Links above 0.5 keep the Werner product well away from the precision
    // floor of (1 + 3w) / 4 near w = 0.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    std::uniform_int_distribution<int> len(1, 8);
    for (int trial = 0; trial < 2000; trial++) {
        std::vector<double> links(len(rng));
        double sum_phi = 0;
        for (double &f : links) {
            f = u(rng);
            sum_phi += pseudo_fidelity(f);
        }
        EXPECT_LT(std::abs(pseudo_fidelity(swap_fidelity(links)) - sum_phi), 1e-10);
    }
}

TEST(PairAlgebra, pseudo_fidelity_round_trip) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.2500001, 1.0);
    for (int i = 0; i < 10000; i++) {
        double f = u(rng);
        EXPECT_LT(std::abs(inverse_pseudo_fidelity(pseudo_fidelity(f)) - f), 1e-10);
    }
}

TEST(PairAlgebra, bitflip_examples_and_associativity) {
    EXPECT_DOUBLE_EQ(bitflip_purified_fidelity(1.0, 0.9), 1.0);
    EXPECT_NEAR(bitflip_purified_fidelity(0.75, 0.75), 0.9, 1e-12);
    double a = 0.7, b = 0.8, c = 0.9;
    double left = bitflip_purified_fidelity(bitflip_purified_fidelity(a, b), c);
    double right = bitflip_purified_fidelity(a, bitflip_purified_fidelity(b, c));
    double mid = bitflip_purified_fidelity(bitflip_purified_fidelity(a, c), b);
    EXPECT_NEAR(left, right, 1e-12);
    EXPECT_NEAR(left, mid, 1e-12);
}

TEST(PairAlgebra, werner_map_is_not_associative) {
    double a = 0.7, b = 0.8, c = 0.9;
    double left = purified_fidelity(purified_fidelity(a, b), c);
    double right = purified_fidelity(a, purified_fidelity(b, c));
    EXPECT_GT(std::abs(left - right), 1e-4);
}
