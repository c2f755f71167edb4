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

#ifndef ENTROUTE_SWAP_STRATEGY_H
#define ENTROUTE_SWAP_STRATEGY_H

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

/// Joint purification / swapping policies on a repeater chain.
namespace entroute {

/// hops[j] lists the elementary pairs available on hop j.
struct RepeaterChain {
    std::vector<std::vector<double>> hops;
    double swap_success = 1.0;

    int length() const {
        return static_cast<int>(hops.size());
    }
    void validate() const;

    static RepeaterChain from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
};

struct StrategyOutcome {
    double fidelity = 0.0;
    double success_prob = 0.0;

    nlohmann::json to_json() const;
};

/// Result of purifying a pool of pairs sharing the same two endpoints.
struct PoolOutcome {
    double fidelity = 0.0;
    /// Product of the purification success probabilities in the tree.
    double success_prob = 1.0;
    int pairs_used = 0;
};

/// Largest heterogeneous pool accepted by purify_pool (subset DP is 3^n).
inline constexpr int kMaxHeterogeneousPool = 14;

/// Purifies every pair of the pool into a single pair, choosing the tree of
/// maximal fidelity (higher success probability breaks ties).
PoolOutcome purify_pool(std::span<const double> pairs);

/// Reaches f_theta with the cheapest schedule. Homogeneous pools go through
/// the purification scheduler; mixed pools use the max-fidelity tree.
std::optional<PoolOutcome> purify_pool(std::span<const double> pairs, double f_theta);

/// Purify each hop, then swap the hop outputs together.
std::optional<StrategyOutcome> purify_and_swap(const RepeaterChain &chain,
                                               std::optional<double> f_theta = std::nullopt);
/// Swap the i-th pair of every hop into strand i, then purify the strands.
StrategyOutcome swap_and_purify(const RepeaterChain &chain);
/// Swap-and-purify within each of h portions, then swap the portions.
StrategyOutcome swap_purify_swap(const RepeaterChain &chain, int h);

/// f(F(a,b), F(c,d)) - F(f(a,c), f(b,d)): positive when purify-and-swap wins
/// on a two-hop chain with pairs (a, b) and (c, d).
double lemma1_delta(double a, double b, double c, double d);

/// P(a,b) P(c,d) p_s - P(f(a,c), f(b,d)) p_s^2.
double lemma1_success_margin(double a, double b, double c, double d, double p_s);

enum class ScanRegion { lemma1, low };

struct ScanPoint {
    std::array<double, 4> x;
    double delta;
};

struct Lemma1Report {
    std::int64_t points = 0;
    std::int64_t pas_wins = 0;
    std::int64_t sap_wins = 0;
    std::int64_t ties = 0;
    double min_delta = 0.0;
    std::array<double, 4> argmin{};
    double p_s = 0.0;
    std::int64_t prob_points = 0;
    std::int64_t prob_violations = 0;
    double min_prob_margin = 0.0;

    nlohmann::json to_json() const;
};

/// |delta| at or below this counts as a tie.
inline constexpr double kScanTieTolerance = 1e-12;

/// The success-probability margin is only claimed with every fidelity at or
/// above this floor; with a, b near 0.5 it turns negative.
inline constexpr double kSuccessScanFloor = 0.7;

/// Grid scan of lemma1_delta over the region (step in (0, 0.1]). The
/// success-probability margin is scanned at the given p_s over the points
/// whose coordinates are all >= kSuccessScanFloor.
Lemma1Report lemma1_scan(double step, ScanRegion region, double p_s = 0.818,
                         const std::function<void(const ScanPoint &)> &visit = {});

/// Largest pool handled by best_policy_fidelity.
inline constexpr int kMaxPolicyPairs = 8;

/// Best end-to-end fidelity over every sequence of purify/swap operations
/// that ends with all elementary pairs consumed into one end-to-end pair.
double best_policy_fidelity(const RepeaterChain &chain);

}  // namespace entroute

#endif
