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

#ifndef ENTROUTE_PURIFICATION_H
#define ENTROUTE_PURIFICATION_H

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace entroute {

/// A purification schedule over identical elementary pairs: leaves are raw
/// pairs, every internal node purifies the pairs produced by its children.
///
/// Trees are immutable and share structure. Children are stored in a
/// canonical order (larger subtree first) so that structurally equal
/// schedules compare and print identically.
class PurificationTree {
   public:
    PurificationTree();  // a single leaf
    static PurificationTree leaf();
    static PurificationTree merge(const PurificationTree &a, const PurificationTree &b);
    /// Parses the nested-parentheses form, e.g. "((L,L),L)".
    static PurificationTree parse(std::string_view text);
    static PurificationTree from_json(const nlohmann::json &j);

    bool is_leaf() const;
    const PurificationTree &left() const;
    const PurificationTree &right() const;
    int leaves() const;
    int depth() const;

    std::string str() const;
    nlohmann::json to_json() const;

    /// Total order on shapes: more leaves first, then lexicographic on children.
    static int compare(const PurificationTree &a, const PurificationTree &b);
    bool operator==(const PurificationTree &other) const;
    bool operator!=(const PurificationTree &other) const {
        return !(*this == other);
    }

   private:
    struct Node;
    static const std::shared_ptr<const Node> &leaf_node();
    explicit PurificationTree(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// Exact (undiscretized) evaluation of a tree whose leaves all have fidelity f_e.
struct TreeEvaluation {
    double fidelity;
    /// Yield: 1 at a leaf, P(f_l, f_r) * min(yield_l, yield_r) at a merge.
    double yield;
    /// Probability that every purification in the tree succeeds.
    double success_prob;
};
TreeEvaluation evaluate_tree(const PurificationTree &tree, double f_e);

/// Inputs of the single-hop scheduler.
struct SchedulerConfig {
    int n = 1;
    double f_e = 0.75;
    double f_theta = 0.75;
    double delta_f = 1e-4;
    double delta_xi = 1e-4;

    /// Throws std::invalid_argument / std::domain_error on a bad configuration.
    void validate() const;
};

/// One candidate of the scheduler's list: leaf count, discretized fidelity and
/// yield, the tree, plus the exact values of that tree.
struct ScheduleEntry {
    int leaves = 1;
    double f_hat = 0.0;
    double xi_hat = 1.0;
    double fidelity = 0.0;
    double yield = 1.0;
    PurificationTree tree;

    double xi_hat_per_leaf() const {
        return xi_hat / leaves;
    }
    /// (b1 <= b2, f1 >= f2, xi1 >= xi2) on the discretized coordinates.
    bool dominates(const ScheduleEntry &other) const;
};

/// Rounds x up to the next multiple of step. Values within 1e-9 relative of a
/// grid point snap to it, so exact multiples are not pushed one step up.
double ceil_to_grid(double x, double step);

/// Best fidelity reachable with exactly i pairs, i = 1..n (element i-1).
std::vector<double> gamma_table(int n, double f_e);
/// Smallest i with gamma[i-1] >= f_theta, or nullopt.
std::optional<int> min_leaves(std::span<const double> gamma, double f_theta);
std::optional<int> min_leaves(int n, double f_e, double f_theta);
/// min{n, 2(N' - 1)}, floored at 1 so a lone leaf is always admissible.
int leaf_bound(int n, int n_prime);

/// The candidate list built by repeated pairwise merging with dominance
/// pruning. Construction runs the merge loop to its fixed point for trees of
/// at most `max_leaves` leaves; `select` then answers threshold queries.
class PurificationSearch {
   public:
    PurificationSearch(int max_leaves, double f_e, double delta_f, double delta_xi, bool record_pruned = false);

    const std::vector<ScheduleEntry> &entries() const {
        return entries_;
    }
    /// Entries removed or rejected because some other entry dominated them.
    /// Empty unless record_pruned was set.
    const std::vector<ScheduleEntry> &pruned() const {
        return pruned_;
    }
    int iterations() const {
        return iterations_;
    }
    int max_leaves() const {
        return max_leaves_;
    }

    /// Entry with f_hat >= f_theta and at most `bound` leaves maximizing
    /// xi_hat / b; ties prefer fewer leaves, then higher f_hat.
    std::optional<ScheduleEntry> select(double f_theta, int bound) const;

   private:
    bool insert(ScheduleEntry candidate);

    int max_leaves_;
    double f_e_;
    double delta_f_;
    double delta_xi_;
    bool record_pruned_;
    int iterations_ = 0;
    std::vector<ScheduleEntry> entries_;
    std::vector<ScheduleEntry> pruned_;
};

/// Single-hop purification scheduling: the tree reaching f_theta with the
/// best discretized yield per consumed pair. nullopt when f_theta is out of
/// reach with cfg.n pairs.
std::optional<ScheduleEntry> schedule(const SchedulerConfig &cfg);

/// Runs the scheduler with the threshold set to the best fidelity reachable
/// from n pairs.
ScheduleEntry schedule_max_fidelity(int n, double f_e, double delta_f, double delta_xi);

/// Delta_xi = b0 * xi0 * eps, Delta_f = b0 * f0 * eps from the symmetric tree.
struct StepSizes {
    double delta_f;
    double delta_xi;
};
StepSizes bootstrap_step_sizes(int n, double f_e, double eps);

/// Exhaustive search over every tree shape with at most min{n, 2(N'-1)}
/// leaves, maximizing exact yield per leaf among trees reaching f_theta.
/// Throws std::length_error for n > kBruteForceMaxPairs.
inline constexpr int kBruteForceMaxPairs = 10;
std::optional<PurificationTree> brute_force_optimal(int n, double f_e, double f_theta);

/// Every distinct tree shape with exactly `leaves` leaves (leaves <= 12).
std::vector<PurificationTree> enumerate_shapes(int leaves);

/// Balanced tree over the largest power of two not above n.
PurificationTree symmetric_schedule(int n);
/// Left-deep chain: each step purifies the accumulated pair with a fresh one.
PurificationTree pumping_schedule(int n);

}  // namespace entroute

#endif
