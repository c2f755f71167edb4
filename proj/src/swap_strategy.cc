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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "entroute/pair_algebra.h"
#include "entroute/purification.h"

namespace entroute {

void RepeaterChain::validate() const {
    if (hops.empty()) {
        throw std::invalid_argument("repeater chain has no hops");
    }
    for (const auto &hop : hops) {
        if (hop.empty()) {
            throw std::invalid_argument("every hop needs at least one pair");
        }
        for (double f : hop) {
            if (!(f >= kMinWernerFidelity && f <= 1.0)) {
                throw std::domain_error("pair fidelity outside [0.25, 1]");
            }
        }
    }
    if (!(swap_success > 0.0 && swap_success <= 1.0)) {
        throw std::domain_error("swap success probability outside (0, 1]");
    }
}

RepeaterChain RepeaterChain::from_json(const nlohmann::json &j) {
    RepeaterChain c;
    c.hops = j.at("hops").get<std::vector<std::vector<double>>>();
    c.swap_success = j.value("swap_success", 1.0);
    c.validate();
    return c;
}

nlohmann::json RepeaterChain::to_json() const {
    return {{"hops", hops}, {"swap_success", swap_success}};
}

nlohmann::json StrategyOutcome::to_json() const {
    return {{"fidelity", fidelity}, {"success_prob", success_prob}};
}

namespace {

bool better(double f, double p, const PoolOutcome &cur) {
    return f > cur.fidelity || (f == cur.fidelity && p > cur.success_prob);
}

PoolOutcome homogeneous_pool(double f_e, int n) {
    std::vector<PoolOutcome> best(n + 1);
    best[1] = {f_e, 1.0, 1};
    for (int i = 2; i <= n; i++) {
        best[i] = {-1.0, 0.0, i};
        for (int k = 1; k <= i / 2; k++) {
            const auto &a = best[k];
            const auto &b = best[i - k];
            double f = purified_fidelity(a.fidelity, b.fidelity);
            double p = purification_success_prob(a.fidelity, b.fidelity) * a.success_prob * b.success_prob;
            if (better(f, p, best[i])) {
                best[i].fidelity = f;
                best[i].success_prob = p;
            }
        }
    }
    return best[n];
}

PoolOutcome heterogeneous_pool(std::span<const double> pairs) {
    int n = static_cast<int>(pairs.size());
    if (n > kMaxHeterogeneousPool) {
        throw std::length_error("heterogeneous pool too large");
    }
    std::vector<PoolOutcome> best(size_t{1} << n);
    for (uint32_t mask = 1; mask < best.size(); mask++) {
        int count = __builtin_popcount(mask);
        if (count == 1) {
            best[mask] = {pairs[__builtin_ctz(mask)], 1.0, 1};
            continue;
        }
        best[mask] = {-1.0, 0.0, count};
        // Each unordered split once: the sub-mask holding the lowest bit.
        uint32_t low = mask & (~mask + 1);
        for (uint32_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
            if (!(sub & low)) {
                continue;
            }
            const auto &a = best[sub];
            const auto &b = best[mask ^ sub];
            double f = purified_fidelity(a.fidelity, b.fidelity);
            double p = purification_success_prob(a.fidelity, b.fidelity) * a.success_prob * b.success_prob;
            if (better(f, p, best[mask])) {
                best[mask].fidelity = f;
                best[mask].success_prob = p;
            }
        }
    }
    return best.back();
}

bool homogeneous(std::span<const double> pairs) {
    return std::all_of(pairs.begin(), pairs.end(), [&](double f) {
        return f == pairs.front();
    });
}

void check_pool(std::span<const double> pairs) {
    if (pairs.empty()) {
        throw std::invalid_argument("empty pool");
    }
    for (double f : pairs) {
        if (!(f >= kMinWernerFidelity && f <= 1.0)) {
            throw std::domain_error("pair fidelity outside [0.25, 1]");
        }
    }
}

// Swap already-purified segments end to end.
StrategyOutcome stitch(const std::vector<StrategyOutcome> &segments, double p_s) {
    std::vector<double> fids;
    double success = 1.0;
    for (const auto &s : segments) {
        fids.push_back(s.fidelity);
        success *= s.success_prob;
    }
    success *= std::pow(p_s, static_cast<double>(segments.size() - 1));
    return {swap_fidelity(fids), success};
}

StrategyOutcome sap_segment(const RepeaterChain &chain, int first, int count) {
    size_t k = chain.hops[first].size();
    for (int j = first; j < first + count; j++) {
        if (chain.hops[j].size() != k) {
            throw std::invalid_argument("swap-and-purify needs equal pair counts per hop");
        }
    }
    std::vector<double> strands(k);
    std::vector<double> link(count);
    for (size_t i = 0; i < k; i++) {
        for (int j = 0; j < count; j++) {
            link[j] = chain.hops[first + j][i];
        }
        strands[i] = swap_fidelity(link);
    }
    PoolOutcome pool = purify_pool(strands);
    double swaps = static_cast<double>(k) * (count - 1);
    return {pool.fidelity, pool.success_prob * std::pow(chain.swap_success, swaps)};
}

}  // namespace

PoolOutcome purify_pool(std::span<const double> pairs) {
    check_pool(pairs);
    if (homogeneous(pairs)) {
        return homogeneous_pool(pairs.front(), static_cast<int>(pairs.size()));
    }
    return heterogeneous_pool(pairs);
}

std::optional<PoolOutcome> purify_pool(std::span<const double> pairs, double f_theta) {
    check_pool(pairs);
    if (homogeneous(pairs)) {
        double f_e = pairs.front();
        if (f_e >= f_theta) {
            return PoolOutcome{f_e, 1.0, 1};
        }
        if (f_e < 0.5) {
            return std::nullopt;
        }
        auto entry = schedule({static_cast<int>(pairs.size()), f_e, f_theta, 1e-4, 1e-4});
        if (!entry) {
            return std::nullopt;
        }
        auto ev = evaluate_tree(entry->tree, f_e);
        return PoolOutcome{ev.fidelity, ev.success_prob, entry->leaves};
    }
    PoolOutcome best = heterogeneous_pool(pairs);
    if (best.fidelity < f_theta) {
        return std::nullopt;
    }
    return best;
}

std::optional<StrategyOutcome> purify_and_swap(const RepeaterChain &chain, std::optional<double> f_theta) {
    chain.validate();
    std::vector<StrategyOutcome> hops;
    for (const auto &hop : chain.hops) {
        PoolOutcome pool;
        if (f_theta) {
            auto r = purify_pool(hop, *f_theta);
            if (!r) {
                return std::nullopt;
            }
            pool = *r;
        } else {
            pool = purify_pool(hop);
        }
        hops.push_back({pool.fidelity, pool.success_prob});
    }
    return stitch(hops, chain.swap_success);
}

StrategyOutcome swap_and_purify(const RepeaterChain &chain) {
    return swap_purify_swap(chain, 1);
}

StrategyOutcome swap_purify_swap(const RepeaterChain &chain, int h) {
    chain.validate();
    int l = chain.length();
    if (h < 1 || h > l) {
        throw std::invalid_argument("portion count must lie in [1, path length]");
    }
    std::vector<StrategyOutcome> portions;
    int first = 0;
    for (int p = 0; p < h; p++) {
        int count = l / h + (p < l % h ? 1 : 0);
        portions.push_back(sap_segment(chain, first, count));
        first += count;
    }
    return stitch(portions, chain.swap_success);
}

double lemma1_delta(double a, double b, double c, double d) {
    return swap_fidelity(purified_fidelity(a, b), purified_fidelity(c, d)) -
           purified_fidelity(swap_fidelity(a, c), swap_fidelity(b, d));
}

double lemma1_success_margin(double a, double b, double c, double d, double p_s) {
    return purification_success_prob(a, b) * purification_success_prob(c, d) * p_s -
           purification_success_prob(swap_fidelity(a, c), swap_fidelity(b, d)) * p_s * p_s;
}

nlohmann::json Lemma1Report::to_json() const {
    return {{"points", points},
            {"pas_wins", pas_wins},
            {"sap_wins", sap_wins},
            {"ties", ties},
            {"min_delta", min_delta},
            {"argmin", argmin},
            {"p_s", p_s},
            {"prob_points", prob_points},
            {"prob_violations", prob_violations},
            {"min_prob_margin", min_prob_margin}};
}

namespace {

std::vector<double> grid(double lo, double hi, double step) {
    auto n = static_cast<int>(std::llround((hi - lo) / step));
    std::vector<double> v;
    for (int i = 0; i <= n; i++) {
        v.push_back(std::min(hi, lo + i * step));
    }
    return v;
}

}  // namespace

Lemma1Report lemma1_scan(double step, ScanRegion region, double p_s,
                         const std::function<void(const ScanPoint &)> &visit) {
    if (!(step > 0.0 && step <= 0.1)) {
        throw std::invalid_argument("scan step must lie in (0, 0.1]");
    }
    std::vector<double> ab, cd;
    if (region == ScanRegion::lemma1) {
        ab = grid(0.5, 1.0, step);
        cd = grid(0.7, 1.0, step);
    } else {
        ab = cd = grid(0.5, 0.7, step);
    }
    Lemma1Report r;
    r.p_s = p_s;
    r.min_delta = std::numeric_limits<double>::infinity();
    r.min_prob_margin = std::numeric_limits<double>::infinity();
    for (double a : ab) {
        for (double b : ab) {
            double fab = purified_fidelity(a, b);
            double pab = purification_success_prob(a, b);
            for (double c : cd) {
                double fac = swap_fidelity(a, c);
                for (double d : cd) {
                    double fbd = swap_fidelity(b, d);
                    double delta = swap_fidelity(fab, purified_fidelity(c, d)) - purified_fidelity(fac, fbd);
                    r.points++;
                    if (delta > kScanTieTolerance) {
                        r.pas_wins++;
                    } else if (delta < -kScanTieTolerance) {
                        r.sap_wins++;
                    } else {
                        r.ties++;
                    }
                    if (delta < r.min_delta) {
                        r.min_delta = delta;
                        r.argmin = {a, b, c, d};
                    }
                    if (std::min({a, b, c, d}) >= kSuccessScanFloor) {
                        double margin = pab * purification_success_prob(c, d) * p_s -
                                        purification_success_prob(fac, fbd) * p_s * p_s;
                        r.prob_points++;
                        if (margin <= 0.0) {
                            r.prob_violations++;
                        }
                        r.min_prob_margin = std::min(r.min_prob_margin, margin);
                    }
                    if (visit) {
                        visit({{a, b, c, d}, delta});
                    }
                }
            }
        }
    }
    return r;
}

namespace {

struct Segment {
    int lo;
    int hi;
    double f;
    auto key() const {
        return std::tie(lo, hi, f);
    }
    bool operator<(const Segment &o) const {
        return key() < o.key();
    }
};

class PolicySearch {
   public:
    explicit PolicySearch(int length) : length_(length) {}

    double best(std::vector<Segment> state) {
        std::sort(state.begin(), state.end());
        if (state.size() == 1) {
            const auto &s = state.front();
            return (s.lo == 0 && s.hi == length_) ? s.f : -1.0;
        }
        auto it = memo_.find(state);
        if (it != memo_.end()) {
            return it->second;
        }
        double result = -1.0;
        for (size_t i = 0; i < state.size(); i++) {
            for (size_t j = i + 1; j < state.size(); j++) {
                const auto &x = state[i];
                const auto &y = state[j];
                Segment merged;
                if (x.lo == y.lo && x.hi == y.hi) {
                    merged = {x.lo, x.hi, purified_fidelity(x.f, y.f)};
                } else if (x.hi == y.lo) {
                    merged = {x.lo, y.hi, swap_fidelity(x.f, y.f)};
                } else if (y.hi == x.lo) {
                    merged = {y.lo, x.hi, swap_fidelity(x.f, y.f)};
                } else {
                    continue;
                }
                std::vector<Segment> next;
                next.reserve(state.size() - 1);
                for (size_t k = 0; k < state.size(); k++) {
                    if (k != i && k != j) {
                        next.push_back(state[k]);
                    }
                }
                next.push_back(merged);
                result = std::max(result, best(std::move(next)));
            }
        }
        memo_.emplace(std::move(state), result);
        return result;
    }

   private:
    int length_;
    std::map<std::vector<Segment>, double> memo_;
};

}  // namespace

double best_policy_fidelity(const RepeaterChain &chain) {
    chain.validate();
    std::vector<Segment> state;
    for (int j = 0; j < chain.length(); j++) {
        for (double f : chain.hops[j]) {
            state.push_back({j, j + 1, f});
        }
    }
    if (static_cast<int>(state.size()) > kMaxPolicyPairs) {
        throw std::length_error("too many pairs for exhaustive policy search");
    }
    return PolicySearch(chain.length()).best(std::move(state));
}

}  // namespace entroute
