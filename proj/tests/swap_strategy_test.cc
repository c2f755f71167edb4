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

#include "entroute/swap_strategy.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "entroute/pair_algebra.h"
#include "entroute/purification.h"

using namespace entroute;

namespace {

double werner_chain(std::initializer_list<double> fs) {
    double w = 1;
    for (double f : fs) {
        w *= (4 * f - 1) / 3;
    }
    return (1 + 3 * w) / 4;
}

// Every fidelity reachable by purifying all of `pairs` into one pair.
std::vector<double> all_tree_values(const std::vector<double> &pairs) {
    if (pairs.size() == 1) {
        return pairs;
    }
    std::vector<double> out;
    size_t n = pairs.size();
    for (uint32_t mask = 1; mask < (1u << n) - 1; mask++) {
        if (!(mask & 1)) {
            continue;
        }
        std::vector<double> a, b;
        for (size_t i = 0; i < n; i++) {
            ((mask >> i) & 1 ? a : b).push_back(pairs[i]);
        }
        for (double x : all_tree_values(a)) {
            for (double y : all_tree_values(b)) {
                out.push_back(purified_fidelity(x, y));
            }
        }
    }
    return out;
}

}  // namespace

TEST(PurifyPool, single_pair_passes_through) {
    std::vector<double> one = {0.83};
    auto r = purify_pool(one);
    EXPECT_EQ(r.fidelity, 0.83);
    EXPECT_EQ(r.success_prob, 1.0);
    EXPECT_EQ(r.pairs_used, 1);
}

TEST(PurifyPool, homogeneous_matches_gamma) {
    for (double f : {0.6, 0.75, 0.9}) {
        auto g = gamma_table(9, f);
        for (int n = 1; n <= 9; n++) {
            std::vector<double> pool(n, f);
            auto r = purify_pool(pool);
            EXPECT_NEAR(r.fidelity, g[n - 1], 1e-12);
            EXPECT_EQ(r.pairs_used, n);
        }
    }
}

TEST(PurifyPool, heterogeneous_matches_tree_enumeration) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.55, 1.0);
    for (int trial = 0; trial < 40; trial++) {
        int n = 2 + trial % 5;
        std::vector<double> pool(n);
        for (double &f : pool) {
            f = u(rng);
        }
        auto values = all_tree_values(pool);
        double best = *std::max_element(values.begin(), values.end());
        EXPECT_NEAR(purify_pool(pool).fidelity, best, 1e-12);
    }
}

TEST(PurifyPool, two_pairs_examples) {
    std::vector<double> pool = {0.7, 0.9};
    auto r = purify_pool(pool);
    EXPECT_EQ(r.fidelity, purified_fidelity(0.7, 0.9));
    EXPECT_EQ(r.success_prob, purification_success_prob(0.7, 0.9));
}

TEST(PurifyPool, threshold_uses_scheduler_for_equal_pairs) {
    std::vector<double> pool(6, 0.7);
    auto r = purify_pool(pool, 0.76);
    ASSERT_TRUE(r);
    auto entry = schedule({6, 0.7, 0.76, 1e-4, 1e-4});
    ASSERT_TRUE(entry);
    EXPECT_EQ(r->pairs_used, entry->leaves);
    EXPECT_NEAR(r->fidelity, entry->fidelity, 1e-12);
    EXPECT_GE(r->fidelity, 0.76 - 1e-4);

    std::vector<double> good(3, 0.9);
    EXPECT_EQ(purify_pool(good, 0.85)->pairs_used, 1);
    std::vector<double> bad(4, 0.6);
    EXPECT_FALSE(purify_pool(bad, 0.99));
}

TEST(PurifyPool, rejects_bad_input) {
    std::vector<double> empty;
    EXPECT_THROW(purify_pool(empty), std::invalid_argument);
    std::vector<double> low = {0.2, 0.9};
    EXPECT_THROW(purify_pool(low), std::domain_error);
    std::vector<double> big(kMaxHeterogeneousPool + 1);
    for (size_t i = 0; i < big.size(); i++) {
        big[i] = 0.8 + 0.001 * i;
    }
    EXPECT_THROW(purify_pool(big), std::length_error);
}

TEST(PurifyAndSwap, examples) {
    RepeaterChain single{{{0.9}}, 0.5};
    auto r = purify_and_swap(single);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->fidelity, 0.9);
    EXPECT_EQ(r->success_prob, 1.0);

    RepeaterChain two{{{0.75, 0.75}, {0.75, 0.75}}, 1.0};
    r = purify_and_swap(two);
    double f2 = 5.125 / 6.5;
    EXPECT_NEAR(r->fidelity, werner_chain({f2, f2}), 1e-12);
    EXPECT_NEAR(r->success_prob, std::pow(13.0 / 18.0, 2), 1e-12);

    RepeaterChain two_hop{{{0.8, 0.8}, {0.8, 0.8}}, 0.6};
    r = purify_and_swap(two_hop);
    double f = purified_fidelity(0.8, 0.8);
    EXPECT_NEAR(r->fidelity, werner_chain({f, f}), 1e-12);
    EXPECT_NEAR(r->success_prob, std::pow(purification_success_prob(0.8, 0.8), 2) * 0.6, 1e-12);
}

TEST(PurifyAndSwap, per_hop_threshold) {
    RepeaterChain chain{{{0.7, 0.7, 0.7, 0.7}, {0.9}}, 1.0};
    auto r = purify_and_swap(chain, 0.75);
    ASSERT_TRUE(r);
    EXPECT_FALSE(purify_and_swap(chain, 0.95));
}

TEST(SwapAndPurify, examples) {
    RepeaterChain perfect{{{1.0, 1.0}, {1.0, 1.0}}, 0.7};
    auto r = swap_and_purify(perfect);
    EXPECT_EQ(r.fidelity, 1.0);
    EXPECT_NEAR(r.success_prob, 0.49, 1e-15);

    RepeaterChain two{{{0.8, 0.9}, {0.85, 0.95}}, 0.9};
    r = swap_and_purify(two);
    double s1 = werner_chain({0.8, 0.85});
    double s2 = werner_chain({0.9, 0.95});
    EXPECT_NEAR(r.fidelity, purified_fidelity(s1, s2), 1e-12);
    EXPECT_NEAR(r.success_prob, purification_success_prob(s1, s2) * 0.81, 1e-12);

    RepeaterChain uneven{{{0.8, 0.9}, {0.85}}, 1.0};
    EXPECT_THROW(swap_and_purify(uneven), std::invalid_argument);
}

TEST(SwapAndPurify, beats_purify_and_swap_outside_region) {
    RepeaterChain chain{{{0.5, 1.0}, {0.699, 1.0}}, 1.0};
    double gain = swap_and_purify(chain).fidelity - purify_and_swap(chain)->fidelity;
    EXPECT_NEAR(gain, 4e-5, 1e-5);
    EXPECT_NEAR(gain, -lemma1_delta(0.5, 1.0, 0.699, 1.0), 1e-15);
}

TEST(SwapAndPurify, lower_success_at_point_seven) {
    RepeaterChain chain{{{0.7, 0.7}, {0.7, 0.7}}, 0.818};
    double pas = purify_and_swap(chain)->success_prob;
    double sap = swap_and_purify(chain).success_prob;
    EXPECT_LT(sap, pas);
    double margin = (pas - sap) / 0.818;
    EXPECT_NEAR(margin, 4e-4, 5e-5);
}

TEST(SwapPurifySwap, degenerates_bit_exactly) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.7, 1.0);
    for (int trial = 0; trial < 50; trial++) {
        int l = 1 + trial % 6;
        RepeaterChain chain;
        chain.swap_success = 0.5 + 0.5 * u(rng);
        for (int j = 0; j < l; j++) {
            chain.hops.push_back({u(rng), u(rng), u(rng)});
        }
        auto pas = purify_and_swap(chain);
        auto sap = swap_and_purify(chain);
        auto at_l = swap_purify_swap(chain, l);
        auto at_1 = swap_purify_swap(chain, 1);
        EXPECT_EQ(at_l.fidelity, pas->fidelity);
        EXPECT_EQ(at_l.success_prob, pas->success_prob);
        EXPECT_EQ(at_1.fidelity, sap.fidelity);
        EXPECT_EQ(at_1.success_prob, sap.success_prob);
    }
}

TEST(SwapPurifySwap, intermediate_portions_sit_between_extremes) {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> u(0.85, 0.99);
    RepeaterChain chain;
    for (int j = 0; j < 6; j++) {
        chain.hops.push_back({u(rng), u(rng)});
    }
    double pas = purify_and_swap(chain)->fidelity;
    double sap = swap_and_purify(chain).fidelity;
    double sps = swap_purify_swap(chain, 3).fidelity;
    EXPECT_GE(pas, sps);
    EXPECT_GE(sps, sap);
    EXPECT_THROW(swap_purify_swap(chain, 0), std::invalid_argument);
    EXPECT_THROW(swap_purify_swap(chain, 7), std::invalid_argument);
}

TEST(SwapPurifySwap, portion_lengths) {
    // l = 5, h = 2: portions of 3 and 2 hops.
    RepeaterChain chain{{{0.9}, {0.91}, {0.92}, {0.93}, {0.94}}, 0.5};
    auto r = swap_purify_swap(chain, 2);
    EXPECT_NEAR(r.fidelity, werner_chain({0.9, 0.91, 0.92, 0.93, 0.94}), 1e-12);
    EXPECT_NEAR(r.success_prob, std::pow(0.5, 4), 1e-15);
}

TEST(Strategies, permutation_invariance_within_hops) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.6, 1.0);
    for (int trial = 0; trial < 30; trial++) {
        RepeaterChain chain;
        chain.swap_success = 0.8;
        for (int j = 0; j < 3; j++) {
            chain.hops.push_back({u(rng), u(rng), u(rng), u(rng)});
        }
        auto pas = *purify_and_swap(chain);
        auto sap = swap_and_purify(chain);
        RepeaterChain shuffled = chain;
        for (auto &hop : shuffled.hops) {
            std::shuffle(hop.begin(), hop.end(), rng);
        }
        auto pas2 = *purify_and_swap(shuffled);
        EXPECT_EQ(pas.fidelity, pas2.fidelity);
        EXPECT_EQ(pas.success_prob, pas2.success_prob);
        // Strands are positional, so the same permutation on every hop.
        RepeaterChain strands = chain;
        std::vector<int> perm = {2, 0, 3, 1};
        for (size_t j = 0; j < chain.hops.size(); j++) {
            for (int i = 0; i < 4; i++) {
                strands.hops[j][i] = chain.hops[j][perm[i]];
            }
        }
        auto sap2 = swap_and_purify(strands);
        EXPECT_EQ(sap.fidelity, sap2.fidelity);
        EXPECT_EQ(sap.success_prob, sap2.success_prob);
    }
}

TEST(RepeaterChain, json_round_trip_and_validation) {
    RepeaterChain chain{{{0.9, 0.8}, {0.95}}, 0.7};
    auto back = RepeaterChain::from_json(chain.to_json());
    EXPECT_EQ(back.hops, chain.hops);
    EXPECT_EQ(back.swap_success, 0.7);
    EXPECT_THROW(RepeaterChain::from_json(nlohmann::json::parse(R"({"hops":[[]]})")), std::invalid_argument);
    EXPECT_THROW(RepeaterChain::from_json(nlohmann::json::parse(R"({"hops":[[0.9]],"swap_success":0})")),
                 std::domain_error);
}

TEST(Lemma1, region_scan_has_no_violations) {
    auto r = lemma1_scan(0.01, ScanRegion::lemma1);
    EXPECT_EQ(r.points, 51LL * 51 * 31 * 31);
    EXPECT_EQ(r.sap_wins, 0);
    EXPECT_GT(r.ties, 0);  // the c = d = 1 face
    EXPECT_EQ(r.prob_points, 31LL * 31 * 31 * 31);
    EXPECT_EQ(r.prob_violations, 0);
    EXPECT_NEAR(r.min_prob_margin, 0.818 * 3.936e-4, 2e-6);
}

TEST(Lemma1, low_region_purify_and_swap_always_wins) {
    auto r = lemma1_scan(0.01, ScanRegion::low);
    EXPECT_EQ(r.points, 21LL * 21 * 21 * 21);
    EXPECT_EQ(r.pas_wins, r.points);
    EXPECT_GT(r.min_delta, 0.0);
}

TEST(Lemma1, counterexample_and_visitor) {
    double d = lemma1_delta(0.5, 1.0, 0.699, 1.0);
    EXPECT_LT(d, 0.0);
    EXPECT_NEAR(-d, 4e-5, 1e-5);
    std::int64_t seen = 0;
    auto r = lemma1_scan(0.1, ScanRegion::lemma1, 0.818, [&](const ScanPoint &p) {
        seen++;
        EXPECT_EQ(p.delta, lemma1_delta(p.x[0], p.x[1], p.x[2], p.x[3]));
    });
    EXPECT_EQ(seen, r.points);
    EXPECT_EQ(r.points, 6LL * 6 * 4 * 4);
    EXPECT_THROW(lemma1_scan(0.0, ScanRegion::low), std::invalid_argument);
    EXPECT_THROW(lemma1_scan(0.2, ScanRegion::low), std::invalid_argument);
}

TEST(Lemma1, success_margin_constant) {
    double m = lemma1_success_margin(0.7, 0.7, 0.7, 0.7, 0.818) / 0.818;
    EXPECT_NEAR(m, 4e-4, 5e-5);
}

TEST(PolicySearch, small_examples) {
    EXPECT_EQ(best_policy_fidelity({{{0.9}}, 1.0}), 0.9);
    EXPECT_EQ(best_policy_fidelity({{{0.8, 0.9}}, 1.0}), purified_fidelity(0.8, 0.9));
    EXPECT_EQ(best_policy_fidelity({{{0.8}, {0.9}}, 1.0}), swap_fidelity(0.8, 0.9));
    // Outside the theorem's region the search finds the swap-first order.
    RepeaterChain chain{{{0.5, 1.0}, {0.699, 1.0}}, 1.0};
    EXPECT_NEAR(best_policy_fidelity(chain), swap_and_purify(chain).fidelity, 1e-15);
    RepeaterChain big{{{0.9, 0.9, 0.9}, {0.9, 0.9, 0.9}, {0.9, 0.9, 0.9}}, 1.0};
    EXPECT_THROW(best_policy_fidelity(big), std::length_error);
}

TEST(PolicySearch, never_beats_purify_and_swap_on_grid) {
    const double grid[] = {0.7, 0.8, 0.9, 1.0};
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int trial = 0; trial < 300; trial++) {
        RepeaterChain chain;
        chain.swap_success = 0.8;
        int l = 1 + trial % 4;
        for (int j = 0; j < l; j++) {
            std::vector<double> hop(1 + (trial / 4 + j) % 2);
            for (double &f : hop) {
                f = grid[pick(rng)];
            }
            chain.hops.push_back(hop);
        }
        double best = best_policy_fidelity(chain);
        double pas = purify_and_swap(chain)->fidelity;
        EXPECT_GE(best, pas - 1e-12);
        EXPECT_LE(best, pas + 1e-9) << chain.to_json().dump();
    }
}
