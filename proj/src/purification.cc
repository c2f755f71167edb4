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

#include "entroute/purification.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>

#include "entroute/pair_algebra.h"

namespace entroute {

struct PurificationTree::Node {
    std::vector<PurificationTree> children;  // empty for a leaf, else {left, right}
    int leaves = 1;
    int depth = 0;
};

const std::shared_ptr<const PurificationTree::Node> &PurificationTree::leaf_node() {
    static const auto node = std::make_shared<const Node>();
    return node;
}

PurificationTree::PurificationTree() : node_(leaf_node()) {
}

PurificationTree::PurificationTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {
}

PurificationTree PurificationTree::leaf() {
    return PurificationTree();
}

PurificationTree PurificationTree::merge(const PurificationTree &a, const PurificationTree &b) {
    auto node = std::make_shared<Node>();
    if (compare(a, b) <= 0) {
        node->children = {a, b};
    } else {
        node->children = {b, a};
    }
    node->leaves = a.leaves() + b.leaves();
    node->depth = 1 + std::max(a.depth(), b.depth());
    return PurificationTree(std::move(node));
}

bool PurificationTree::is_leaf() const {
    return node_->children.empty();
}

const PurificationTree &PurificationTree::left() const {
    if (is_leaf()) {
        throw std::logic_error("PurificationTree::left on a leaf");
    }
    return node_->children[0];
}

const PurificationTree &PurificationTree::right() const {
    if (is_leaf()) {
        throw std::logic_error("PurificationTree::right on a leaf");
    }
    return node_->children[1];
}

int PurificationTree::leaves() const {
    return node_->leaves;
}

int PurificationTree::depth() const {
    return node_->depth;
}

int PurificationTree::compare(const PurificationTree &a, const PurificationTree &b) {
    if (a.node_ == b.node_) {
        return 0;
    }
    if (a.leaves() != b.leaves()) {
        return a.leaves() > b.leaves() ? -1 : 1;
    }
    if (a.is_leaf()) {
        return 0;  // both leaves
    }
    int c = compare(a.left(), b.left());
    if (c != 0) {
        return c;
    }
    return compare(a.right(), b.right());
}

bool PurificationTree::operator==(const PurificationTree &other) const {
    return compare(*this, other) == 0;
}

std::string PurificationTree::str() const {
    if (is_leaf()) {
        return "L";
    }
    return "(" + left().str() + "," + right().str() + ")";
}

nlohmann::json PurificationTree::to_json() const {
    if (is_leaf()) {
        return "L";
    }
    return nlohmann::json::array({left().to_json(), right().to_json()});
}

PurificationTree PurificationTree::from_json(const nlohmann::json &j) {
    if (j.is_string() && j.get<std::string>() == "L") {
        return leaf();
    }
    if (j.is_array() && j.size() == 2) {
        return merge(from_json(j[0]), from_json(j[1]));
    }
    throw std::invalid_argument("PurificationTree::from_json: expected \"L\" or a 2-element array");
}

namespace {

struct TreeParser {
    std::string_view text;
    size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
            pos++;
        }
    }
    void expect(char c) {
        skip_space();
        if (pos >= text.size() || text[pos] != c) {
            throw std::invalid_argument(
                "PurificationTree::parse: expected '" + std::string(1, c) + "' at offset " + std::to_string(pos));
        }
        pos++;
    }
    PurificationTree parse() {
        skip_space();
        if (pos < text.size() && text[pos] == 'L') {
            pos++;
            return PurificationTree::leaf();
        }
        expect('(');
        PurificationTree a = parse();
        expect(',');
        PurificationTree b = parse();
        expect(')');
        return PurificationTree::merge(a, b);
    }
};

}  // namespace

PurificationTree PurificationTree::parse(std::string_view text) {
    TreeParser parser{text};
    PurificationTree result = parser.parse();
    parser.skip_space();
    if (parser.pos != text.size()) {
        throw std::invalid_argument("PurificationTree::parse: trailing characters");
    }
    return result;
}

TreeEvaluation evaluate_tree(const PurificationTree &tree, double f_e) {
    if (tree.is_leaf()) {
        if (!(f_e >= kMinWernerFidelity && f_e <= 1.0)) {
            throw std::domain_error("evaluate_tree: leaf fidelity outside [0.25, 1]");
        }
        return {f_e, 1.0, 1.0};
    }
    TreeEvaluation l = evaluate_tree(tree.left(), f_e);
    TreeEvaluation r = evaluate_tree(tree.right(), f_e);
    double p = purification_success_prob(l.fidelity, r.fidelity);
    return {
        purified_fidelity(l.fidelity, r.fidelity),
        p * std::min(l.yield, r.yield),
        p * l.success_prob * r.success_prob,
    };
}

void SchedulerConfig::validate() const {
    if (n < 1) {
        throw std::invalid_argument("SchedulerConfig: n must be >= 1");
    }
    if (!(f_e >= 0.5 && f_e <= 1.0)) {
        throw std::domain_error("SchedulerConfig: f_e must lie in [0.5, 1]");
    }
    if (!(f_theta >= f_e && f_theta <= 1.0)) {
        throw std::domain_error("SchedulerConfig: f_theta must lie in [f_e, 1]");
    }
    if (!(delta_f > 0.0 && delta_f < 1.0) || !(delta_xi > 0.0 && delta_xi < 1.0)) {
        throw std::invalid_argument("SchedulerConfig: step sizes must lie in (0, 1)");
    }
}

double ceil_to_grid(double x, double step) {
    double q = x / step;
    double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) {
        return r * step;
    }
    return std::ceil(q) * step;
}

namespace {

int64_t grid_index(double x, double step) {
    double q = x / step;
    double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) {
        return static_cast<int64_t>(r);
    }
    return static_cast<int64_t>(std::ceil(q));
}

}  // namespace

bool ScheduleEntry::dominates(const ScheduleEntry &other) const {
    return leaves <= other.leaves && f_hat >= other.f_hat && xi_hat >= other.xi_hat;
}

std::vector<double> gamma_table(int n, double f_e) {
    if (n < 1) {
        throw std::invalid_argument("gamma_table: n must be >= 1");
    }
    if (!(f_e >= 0.5 && f_e <= 1.0)) {
        throw std::domain_error("gamma_table: f_e must lie in [0.5, 1]");
    }
    std::vector<double> gamma(n, f_e);
    for (int i = 2; i <= n; i++) {
        for (int k = 1; k <= i / 2; k++) {
            double merged = purified_fidelity(gamma[k - 1], gamma[i - k - 1]);
            if (gamma[i - 1] < merged) {
                gamma[i - 1] = merged;
            }
        }
    }
    return gamma;
}

std::optional<int> min_leaves(std::span<const double> gamma, double f_theta) {
    for (size_t i = 0; i < gamma.size(); i++) {
        if (gamma[i] >= f_theta) {
            return static_cast<int>(i + 1);
        }
    }
    return std::nullopt;
}

std::optional<int> min_leaves(int n, double f_e, double f_theta) {
    auto gamma = gamma_table(n, f_e);
    return min_leaves(gamma, f_theta);
}

int leaf_bound(int n, int n_prime) {
    return std::max(1, std::min(n, 2 * (n_prime - 1)));
}

namespace {

// Grid coordinates of an entry; dominance is decided on these integers.
struct GridKey {
    int64_t f;
    int64_t xi;
};

}  // namespace

PurificationSearch::PurificationSearch(int max_leaves, double f_e, double delta_f, double delta_xi, bool record_pruned)
    : max_leaves_(max_leaves), f_e_(f_e), delta_f_(delta_f), delta_xi_(delta_xi), record_pruned_(record_pruned) {
    if (max_leaves < 1) {
        throw std::invalid_argument("PurificationSearch: max_leaves must be >= 1");
    }
    if (!(f_e >= 0.5 && f_e <= 1.0)) {
        throw std::domain_error("PurificationSearch: f_e must lie in [0.5, 1]");
    }
    if (!(delta_f > 0.0 && delta_f < 1.0) || !(delta_xi > 0.0 && delta_xi < 1.0)) {
        throw std::invalid_argument("PurificationSearch: step sizes must lie in (0, 1)");
    }

    // Pool of every entry ever accepted; `alive` marks the current list.
    struct Slot {
        ScheduleEntry entry;
        GridKey key;
        bool alive;
    };
    std::vector<Slot> pool;
    // Indices of alive slots per leaf count, for the dominance scans.
    std::vector<std::vector<size_t>> by_leaves(max_leaves + 1);

    auto try_insert = [&](ScheduleEntry candidate) -> bool {
        GridKey key{grid_index(candidate.f_hat, delta_f_), grid_index(candidate.xi_hat, delta_xi_)};
        int b = candidate.leaves;
        for (int bb = 1; bb <= b; bb++) {
            for (size_t idx : by_leaves[bb]) {
                const Slot &s = pool[idx];
                if (s.key.f >= key.f && s.key.xi >= key.xi) {
                    if (record_pruned_) {
                        pruned_.push_back(std::move(candidate));
                    }
                    return false;
                }
            }
        }
        for (int bb = b; bb <= max_leaves_; bb++) {
            auto &bucket = by_leaves[bb];
            auto keep = bucket.begin();
            for (auto it = bucket.begin(); it != bucket.end(); ++it) {
                Slot &s = pool[*it];
                if (s.key.f <= key.f && s.key.xi <= key.xi) {
                    s.alive = false;
                    if (record_pruned_) {
                        pruned_.push_back(s.entry);
                    }
                } else {
                    *keep++ = *it;
                }
            }
            bucket.erase(keep, bucket.end());
        }
        candidate.f_hat = static_cast<double>(key.f) * delta_f_;
        candidate.xi_hat = static_cast<double>(key.xi) * delta_xi_;
        by_leaves[b].push_back(pool.size());
        pool.push_back(Slot{std::move(candidate), key, true});
        return true;
    };

    ScheduleEntry root;
    root.leaves = 1;
    root.f_hat = ceil_to_grid(f_e, delta_f_);
    root.xi_hat = 1.0;
    root.fidelity = f_e;
    root.yield = 1.0;
    try_insert(root);

    // Each round merges every pair with at least one member created in the
    // previous round; pairs of older entries were already tried.
    std::vector<size_t> frontier = {0};
    while (!frontier.empty() && iterations_ < max_leaves_) {
        iterations_++;
        std::vector<size_t> snapshot;
        for (int b = 1; b <= max_leaves_; b++) {
            for (size_t idx : by_leaves[b]) {
                snapshot.push_back(idx);
            }
        }
        std::vector<char> in_frontier(pool.size(), 0);
        for (size_t idx : frontier) {
            in_frontier[idx] = 1;
        }
        std::vector<size_t> next;
        for (size_t a : snapshot) {
            if (!in_frontier[a]) {
                continue;
            }
            for (size_t b : snapshot) {
                if (in_frontier[b] && b < a) {
                    continue;  // unordered pair already visited from b
                }
                // Copy what we need: try_insert may reallocate the pool.
                const int leaves_a = pool[a].entry.leaves;
                const int leaves_b = pool[b].entry.leaves;
                if (leaves_a + leaves_b > max_leaves_) {
                    continue;
                }
                const double fa = pool[a].entry.fidelity;
                const double fb = pool[b].entry.fidelity;
                const double p = purification_success_prob(fa, fb);
                const double f3 = purified_fidelity(fa, fb);
                ScheduleEntry merged;
                merged.leaves = leaves_a + leaves_b;
                merged.fidelity = f3;
                merged.yield = p * std::min(pool[a].entry.yield, pool[b].entry.yield);
                merged.f_hat = ceil_to_grid(f3, delta_f_);
                merged.xi_hat = ceil_to_grid(p * std::min(pool[a].entry.xi_hat, pool[b].entry.xi_hat), delta_xi_);
                merged.tree = PurificationTree::merge(pool[a].entry.tree, pool[b].entry.tree);
                size_t slot = pool.size();
                if (try_insert(std::move(merged))) {
                    next.push_back(slot);
                }
            }
        }
        frontier.clear();
        for (size_t idx : next) {
            if (pool[idx].alive) {
                frontier.push_back(idx);
            }
        }
    }

    for (int b = 1; b <= max_leaves_; b++) {
        for (size_t idx : by_leaves[b]) {
            entries_.push_back(pool[idx].entry);
        }
    }
}

std::optional<ScheduleEntry> PurificationSearch::select(double f_theta, int bound) const {
    const ScheduleEntry *best = nullptr;
    for (const ScheduleEntry &e : entries_) {
        if (e.leaves > bound || e.f_hat < f_theta - 1e-12) {
            continue;
        }
        if (best == nullptr) {
            best = &e;
            continue;
        }
        // Compare xi_hat / b by cross-multiplication.
        double lhs = e.xi_hat * best->leaves;
        double rhs = best->xi_hat * e.leaves;
        if (lhs > rhs + 1e-15) {
            best = &e;
        } else if (lhs >= rhs - 1e-15) {
            if (e.leaves < best->leaves || (e.leaves == best->leaves && e.f_hat > best->f_hat)) {
                best = &e;
            }
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return *best;
}

std::optional<ScheduleEntry> schedule(const SchedulerConfig &cfg) {
    cfg.validate();
    auto gamma = gamma_table(cfg.n, cfg.f_e);
    auto n_prime = min_leaves(gamma, cfg.f_theta);
    if (!n_prime) {
        return std::nullopt;
    }
    int bound = leaf_bound(cfg.n, *n_prime);
    PurificationSearch search(bound, cfg.f_e, cfg.delta_f, cfg.delta_xi);
    return search.select(cfg.f_theta, bound);
}

ScheduleEntry schedule_max_fidelity(int n, double f_e, double delta_f, double delta_xi) {
    auto gamma = gamma_table(n, f_e);
    SchedulerConfig cfg{n, f_e, gamma.back(), delta_f, delta_xi};
    auto result = schedule(cfg);
    if (!result) {
        throw std::logic_error("schedule_max_fidelity: best reachable fidelity not found");
    }
    return *result;
}

StepSizes bootstrap_step_sizes(int n, double f_e, double eps) {
    PurificationTree t0 = symmetric_schedule(n);
    TreeEvaluation e0 = evaluate_tree(t0, f_e);
    double b0 = t0.leaves();
    return {b0 * e0.fidelity * eps, b0 * e0.yield * eps};
}

std::vector<PurificationTree> enumerate_shapes(int leaves) {
    constexpr int kMaxShapeLeaves = 12;
    if (leaves < 1 || leaves > kMaxShapeLeaves) {
        throw std::length_error("enumerate_shapes: leaf count outside [1, 12]");
    }
    static std::mutex mu;
    static std::vector<std::vector<PurificationTree>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) {
        cache.resize(kMaxShapeLeaves + 1);
        cache[1] = {PurificationTree::leaf()};
        for (int b = 2; b <= kMaxShapeLeaves; b++) {
            for (int big = b - 1; 2 * big >= b; big--) {
                int small = b - big;
                const auto &bigs = cache[big];
                const auto &smalls = cache[small];
                for (size_t i = 0; i < bigs.size(); i++) {
                    for (size_t j = (big == small ? i : 0); j < smalls.size(); j++) {
                        cache[b].push_back(PurificationTree::merge(bigs[i], smalls[j]));
                    }
                }
            }
        }
    }
    return cache[leaves];
}

std::optional<PurificationTree> brute_force_optimal(int n, double f_e, double f_theta) {
    if (n < 1) {
        throw std::invalid_argument("brute_force_optimal: n must be >= 1");
    }
    if (n > kBruteForceMaxPairs) {
        throw std::length_error("brute_force_optimal: n exceeds the enumeration bound");
    }
    struct Scored {
        PurificationTree tree;
        TreeEvaluation eval;
    };
    std::vector<std::vector<Scored>> by_leaves(n + 1);
    std::optional<int> n_prime;
    for (int b = 1; b <= n; b++) {
        for (const PurificationTree &t : enumerate_shapes(b)) {
            TreeEvaluation e = evaluate_tree(t, f_e);
            if (!n_prime && e.fidelity >= f_theta) {
                n_prime = b;
            }
            by_leaves[b].push_back({t, e});
        }
    }
    if (!n_prime) {
        return std::nullopt;
    }
    int bound = leaf_bound(n, *n_prime);
    const Scored *best = nullptr;
    for (int b = 1; b <= bound; b++) {
        for (const Scored &s : by_leaves[b]) {
            if (s.eval.fidelity < f_theta) {
                continue;
            }
            if (best == nullptr) {
                best = &s;
                continue;
            }
            double lhs = s.eval.yield * best->tree.leaves();
            double rhs = best->eval.yield * b;
            if (lhs > rhs || (lhs == rhs && s.tree.leaves() == best->tree.leaves() &&
                              s.eval.fidelity > best->eval.fidelity)) {
                best = &s;
            }
        }
    }
    return best->tree;
}

PurificationTree symmetric_schedule(int n) {
    if (n < 1) {
        throw std::invalid_argument("symmetric_schedule: n must be >= 1");
    }
    PurificationTree t = PurificationTree::leaf();
    for (int leaves = 2; leaves <= n; leaves *= 2) {
        t = PurificationTree::merge(t, t);
    }
    return t;
}

PurificationTree pumping_schedule(int n) {
    if (n < 1) {
        throw std::invalid_argument("pumping_schedule: n must be >= 1");
    }
    PurificationTree t = PurificationTree::leaf();
    for (int i = 2; i <= n; i++) {
        t = PurificationTree::merge(t, PurificationTree::leaf());
    }
    return t;
}

}  // namespace entroute
