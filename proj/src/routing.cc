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

#include "entroute/routing.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

#include "entroute/pair_algebra.h"

namespace entroute {

const char *to_string(PurificationMethod m) {
    switch (m) {
        case PurificationMethod::optimal:
            return "optimal";
        case PurificationMethod::pumping:
            return "pumping";
        case PurificationMethod::symmetric:
            return "symmetric";
    }
    return "optimal";
}

PurificationMethod purification_method_from_string(const std::string &s) {
    if (s == "optimal") {
        return PurificationMethod::optimal;
    }
    if (s == "pumping") {
        return PurificationMethod::pumping;
    }
    if (s == "symmetric") {
        return PurificationMethod::symmetric;
    }
    throw std::invalid_argument("unknown purification method " + s);
}

void RouteParams::validate() const {
    if (!(f0 > kMinWernerFidelity && f0 <= 1.0)) {
        throw std::domain_error("f0 outside (0.25, 1]");
    }
    if (!(q0 > 0.0)) {
        throw std::domain_error("q0 must be positive");
    }
    if (!(delta_phi > 0.0) || !(delta_psi > 0.0)) {
        throw std::invalid_argument("delta_phi and delta_psi must be positive");
    }
    if (delta_q < 1 || phi_slack_steps < 0) {
        throw std::invalid_argument("delta_q must be >= 1 and phi_slack_steps >= 0");
    }
    if (!(delta_f > 0.0 && delta_f < 1.0) || !(delta_xi > 0.0 && delta_xi < 1.0)) {
        throw std::invalid_argument("scheduler step sizes must lie in (0, 1)");
    }
}

double RouteParams::phi0() const {
    return pseudo_fidelity(f0);
}

double RouteParams::psi0() const {
    return std::log(q0);
}

int RouteParams::phi_step_budget() const {
    return static_cast<int>(std::floor(-phi0() / delta_phi + 1e-9)) + phi_slack_steps;
}

RouteParams theorem3_params(const QuantumNetwork &net, double f0, double q0, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("eps must lie in (0, 1)");
    }
    RouteParams p;
    p.f0 = f0;
    p.q0 = q0;
    double n = std::max(1, net.num_nodes());
    double phi0 = std::abs(p.phi0());
    if (phi0 == 0.0) {
        throw std::domain_error("f0 = 1 leaves no room for discretization");
    }
    p.delta_phi = eps * phi0 / n;
    double psi0 = p.psi0();
    if (std::abs(psi0) > 1e-12) {
        p.delta_psi = eps * std::abs(psi0) / n;
    } else {
        int max_pairs = 1;
        for (const auto &e : net.edges()) {
            max_pairs = std::max(max_pairs, e.capacity);
        }
        double range = std::max(std::log(static_cast<double>(max_pairs)) - psi0, std::log(2.0));
        p.delta_psi = eps * range / n;
    }
    p.phi_slack_steps = std::max(0, net.num_nodes() - 1);
    return p;
}

namespace {

std::optional<EdgeOption> from_tree(const PurificationTree &tree, double f_e, int pairs) {
    auto ev = evaluate_tree(tree, f_e);
    EdgeOption o;
    o.leaves = tree.leaves();
    o.fidelity = ev.fidelity;
    o.yield = ev.yield;
    o.psi = std::log(o.throughput(pairs));
    o.tree = tree;
    return o;
}

}  // namespace

ThroughputTable::ThroughputTable(double f_e, int max_pairs, int max_steps, const RouteParams &params)
    : f_e_(f_e), max_pairs_(max_pairs), max_steps_(max_steps) {
    if (max_pairs < 1 || max_steps < 0) {
        throw std::invalid_argument("throughput table needs max_pairs >= 1 and max_steps >= 0");
    }
    options_.assign(max_pairs + 1, std::vector<std::optional<EdgeOption>>(max_steps + 1));
    useful_.assign(max_pairs + 1, {});

    std::optional<PurificationSearch> search;
    std::vector<double> gamma;
    std::vector<TreeEvaluation> baseline;
    std::vector<PurificationTree> baseline_trees;
    if (params.method == PurificationMethod::optimal) {
        if (max_pairs > 1) {
            search.emplace(max_pairs, f_e, params.delta_f, params.delta_xi);
            gamma = gamma_table(max_pairs, f_e);
        }
    } else {
        for (int b = 1; b <= max_pairs; b++) {
            bool symmetric = params.method == PurificationMethod::symmetric;
            if (symmetric && (b & (b - 1)) != 0) {
                continue;
            }
            baseline_trees.push_back(symmetric ? symmetric_schedule(b) : pumping_schedule(b));
            baseline.push_back(evaluate_tree(baseline_trees.back(), f_e));
        }
    }

    for (int m = 1; m <= max_pairs; m++) {
        double best = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= max_steps; k++) {
            double f_k = inverse_pseudo_fidelity(-k * params.delta_phi);
            std::optional<EdgeOption> opt;
            if (f_e >= f_k) {
                opt = from_tree(PurificationTree::leaf(), f_e, m);
            } else if (params.method == PurificationMethod::optimal) {
                if (m > 1) {
                    auto n_prime = min_leaves(std::span<const double>(gamma).first(m), f_k);
                    if (n_prime) {
                        auto entry = search->select(f_k, leaf_bound(m, *n_prime));
                        if (entry) {
                            EdgeOption o;
                            o.leaves = entry->leaves;
                            o.fidelity = entry->fidelity;
                            o.yield = entry->yield;
                            o.psi = std::log(entry->xi_hat / entry->leaves * m);
                            o.tree = entry->tree;
                            opt = std::move(o);
                        }
                    }
                }
            } else {
                double best_ratio = -1.0;
                for (size_t i = 0; i < baseline.size(); i++) {
                    int b = baseline_trees[i].leaves();
                    if (b > m || baseline[i].fidelity < f_k) {
                        continue;
                    }
                    double ratio = baseline[i].yield / b;
                    if (ratio > best_ratio) {
                        best_ratio = ratio;
                        opt = from_tree(baseline_trees[i], f_e, m);
                    }
                }
            }
            if (opt && opt->psi > best) {
                best = opt->psi;
                useful_[m].push_back(k);
            }
            options_[m][k] = std::move(opt);
        }
    }
}

const EdgeOption *ThroughputTable::at(int pairs, int step) const {
    if (pairs < 1 || pairs > max_pairs_ || step < 1 || step > max_steps_) {
        return nullptr;
    }
    const auto &o = options_[pairs][step];
    return o ? &*o : nullptr;
}

const std::vector<int> &ThroughputTable::useful_steps(int pairs) const {
    return useful_.at(pairs);
}

ThroughputTables::ThroughputTables(const QuantumNetwork &net, const RouteParams &params, int max_steps)
    : params_(params), max_steps_(max_steps) {
    params.validate();
    std::map<double, int> budget;
    for (const auto &e : net.edges()) {
        int m = std::min({e.capacity, net.node(e.u).qubits, net.node(e.v).qubits});
        auto &b = budget[e.fidelity];
        b = std::max({b, m, 1});
    }
    std::map<double, int> index;
    for (auto [f, m] : budget) {
        index[f] = static_cast<int>(tables_.size());
        tables_.emplace_back(f, m, max_steps, params);
    }
    for (const auto &e : net.edges()) {
        edge_table_.push_back(index.at(e.fidelity));
    }
}

AuxiliaryGraph::AuxiliaryGraph(const QuantumNetwork &net, int s, int t, int delta_q)
    : net_(&net), s_(s), t_(t), delta_q_(delta_q) {
    if (s < 0 || t < 0 || s >= net.num_nodes() || t >= net.num_nodes()) {
        throw std::out_of_range("source or destination out of range");
    }
    if (s == t) {
        throw std::invalid_argument("source and destination must differ");
    }
    if (delta_q < 1) {
        throw std::invalid_argument("delta_q must be >= 1");
    }
    add_vertex(kVirtual, 0);
    add_vertex(kVirtual, 1);
    vertex_of_.assign(net.num_nodes(), {});
    for (int v = 0; v < net.num_nodes(); v++) {
        int q = net.node(v).qubits;
        int top = v == s ? q : q - 1;
        int lo = v == t ? 0 : 1;
        vertex_of_[v].assign(q + 1, -1);
        std::vector<int> indices;
        for (int i = top; i >= lo; i -= delta_q) {
            indices.push_back(i);
        }
        std::reverse(indices.begin(), indices.end());
        for (int i : indices) {
            vertex_of_[v][i] = add_vertex(v, i);
        }
    }
    for (int x = 2; x < num_vertices(); x++) {
        auto [u, i] = vertices_[x];
        if (u == s) {
            out_[kSource].push_back({x, -1, 0, 0.0});
        }
        if (u == t) {
            out_[x].push_back({kSink, -1, 0, 0.0});
            continue;
        }
        for (const auto &inc : net.incident(u)) {
            int v = inc.neighbor;
            if (v == s) {
                continue;
            }
            const auto &edge = net.edge(inc.edge);
            int qv = net.node(v).qubits;
            for (int j = qv; j >= 0; j--) {
                int y = vertex_of_[v][j];
                int m = qv - j;
                if (y < 0 || m < 1 || m > i || m > edge.capacity) {
                    continue;
                }
                out_[x].push_back({y, inc.edge, m, edge.cost(m)});
            }
        }
    }
}

int AuxiliaryGraph::add_vertex(int node, int index) {
    vertices_.push_back({node, index});
    out_.emplace_back();
    return num_vertices() - 1;
}

int AuxiliaryGraph::num_arcs() const {
    int n = 0;
    for (const auto &o : out_) {
        n += static_cast<int>(o.size());
    }
    return n;
}

std::optional<int> AuxiliaryGraph::find_vertex(int node, int index) const {
    if (node < 0 || node >= static_cast<int>(vertex_of_.size())) {
        return std::nullopt;
    }
    const auto &row = vertex_of_[node];
    if (index < 0 || index >= static_cast<int>(row.size()) || row[index] < 0) {
        return std::nullopt;
    }
    return row[index];
}

std::string AuxiliaryGraph::vertex_name(int v) const {
    if (v == kSource) {
        return net_->node(s_).id + "'";
    }
    if (v == kSink) {
        return net_->node(t_).id + "'";
    }
    const auto &x = vertices_.at(v);
    const std::string &id = net_->node(x.node).id;
    // "v1" for plain ids, "r0c0_1" when the id already ends in a digit
    bool digit = !id.empty() && std::isdigit(static_cast<unsigned char>(id.back()));
    return id + (digit ? "_" : "") + std::to_string(x.index);
}

std::vector<int> AuxiliaryGraph::encode(const std::vector<int> &nodes, const std::vector<int> &pairs) const {
    if (nodes.size() < 2 || pairs.size() + 1 != nodes.size() || nodes.front() != s_ || nodes.back() != t_) {
        throw std::invalid_argument("plan must run from source to destination with one count per link");
    }
    auto start = find_vertex(s_, net_->node(s_).qubits);
    if (!start) {
        throw std::invalid_argument("source copy missing");
    }
    std::vector<int> path = {kSource, *start};
    for (size_t h = 0; h < pairs.size(); h++) {
        int v = nodes[h + 1];
        auto next = find_vertex(v, net_->node(v).qubits - pairs[h]);
        bool ok = false;
        if (next) {
            for (const auto &arc : out_[path.back()]) {
                ok = ok || (arc.to == *next && arc.edge >= 0 && net_->edge(arc.edge).other(nodes[h]) == v);
            }
        }
        if (!ok) {
            throw std::invalid_argument("pair allocation not representable in the auxiliary graph");
        }
        path.push_back(*next);
    }
    path.push_back(kSink);
    return path;
}

std::pair<std::vector<int>, std::vector<int>> AuxiliaryGraph::decode(const std::vector<int> &aux_path) const {
    if (aux_path.size() < 4 || aux_path.front() != kSource || aux_path.back() != kSink) {
        throw std::invalid_argument("auxiliary path must run from s' to t'");
    }
    std::vector<int> nodes;
    std::vector<int> pairs;
    for (size_t h = 0; h + 1 < aux_path.size(); h++) {
        const AuxArc *found = nullptr;
        for (const auto &arc : out_.at(aux_path[h])) {
            if (arc.to == aux_path[h + 1]) {
                found = &arc;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument("consecutive auxiliary vertices are not joined by an arc");
        }
        if (found->edge >= 0) {
            pairs.push_back(found->pairs);
        }
        if (aux_path[h + 1] != kSink) {
            nodes.push_back(vertices_[aux_path[h + 1]].node);
        }
    }
    std::set<int> distinct(nodes.begin(), nodes.end());
    if (distinct.size() != nodes.size()) {
        throw std::invalid_argument("auxiliary path revisits an original node");
    }
    return {nodes, pairs};
}

std::vector<int> RoutePlan::pairs() const {
    std::vector<int> m;
    for (const auto &h : hops) {
        m.push_back(h.pairs);
    }
    return m;
}

void evaluate_plan(const QuantumNetwork &net, RoutePlan &plan) {
    plan.cost = 0.0;
    std::vector<double> fids;
    double bottleneck = std::numeric_limits<double>::infinity();
    for (const auto &h : plan.hops) {
        plan.cost += net.edge(h.edge).cost(h.pairs);
        fids.push_back(h.option.fidelity);
        bottleneck = std::min(bottleneck, h.option.throughput(h.pairs));
    }
    double swaps = 1.0;
    for (size_t i = 1; i + 1 < plan.nodes.size(); i++) {
        swaps *= net.node(plan.nodes[i]).swap_prob;
    }
    plan.fidelity = fids.empty() ? 1.0 : swap_fidelity(fids);
    plan.throughput = fids.empty() ? 0.0 : bottleneck * swaps;
}

nlohmann::json RoutePlan::to_json(const QuantumNetwork &net, const AuxiliaryGraph *aux) const {
    nlohmann::json path = nlohmann::json::array();
    for (int v : nodes) {
        path.push_back(net.node(v).id);
    }
    nlohmann::json hs = nlohmann::json::array();
    for (const auto &h : hops) {
        hs.push_back({{"u", net.node(h.from).id},
                      {"v", net.node(h.to).id},
                      {"pairs", h.pairs},
                      {"phi_steps", h.phi_steps},
                      {"tree", h.option.tree.str()},
                      {"leaves", h.option.leaves},
                      {"fidelity", h.option.fidelity},
                      {"yield", h.option.yield},
                      {"throughput", h.option.throughput(h.pairs)}});
    }
    nlohmann::json j = {{"path", path},     {"hops", hs},         {"cost", cost},
                        {"fidelity", fidelity}, {"throughput", throughput}, {"phi_hat", phi_hat},
                        {"psi_hat", psi_hat}};
    if (aux && !aux_path.empty()) {
        nlohmann::json a = nlohmann::json::array();
        for (int v : aux_path) {
            a.push_back(aux->vertex_name(v));
        }
        j["aux_path"] = a;
    }
    return j;
}

int SearchStats::max_alive() const {
    return alive.empty() ? 0 : *std::max_element(alive.begin(), alive.end());
}

namespace {

std::int64_t ceil_steps(double x, double step) {
    double q = x / step;
    double r = std::round(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) {
        return static_cast<std::int64_t>(r);
    }
    return static_cast<std::int64_t>(std::ceil(q));
}

struct Label {
    double cost = 0.0;
    int vertex = 0;
    int parent = -1;
    int phi_used = 0;
    bool psi_inf = true;
    std::int64_t psi_step = 0;
    double psi_b = std::numeric_limits<double>::infinity();
    int hops = 0;
    int step = 0;
    bool alive = true;
    std::vector<int> path;
};

bool dominates(const Label &a, const Label &b) {
    bool psi = a.psi_inf || (!b.psi_inf && a.psi_step >= b.psi_step);
    return a.cost <= b.cost && a.phi_used <= b.phi_used && psi;
}

class LabelSearch {
   public:
    LabelSearch(const AuxiliaryGraph &aux, const ThroughputTables &tables, const RouteParams &params, int r)
        : aux_(aux), tables_(tables), params_(params), r_(r) {
        params_.validate();
        const RouteParams &built = tables.params();
        if (params.delta_phi != built.delta_phi || params.method != built.method ||
            params.delta_f != built.delta_f || params.delta_xi != built.delta_xi) {
            throw std::invalid_argument("search step sizes differ from the throughput tables");
        }
        budget_ = params_.phi_step_budget();
        if (budget_ > tables.max_steps()) {
            throw std::invalid_argument("throughput tables built for fewer phi steps than the request needs");
        }
        if (r < 1) {
            throw std::invalid_argument("R must be >= 1");
        }
        psi0_ = params_.psi0();
        alive_.assign(aux.num_vertices(), {});
    }

    std::vector<RoutePlan> run(SearchStats *stats) {
        auto cmp = [this](int a, int b) {
            const Label &x = labels_[a];
            const Label &y = labels_[b];
            if (x.cost != y.cost) {
                return x.cost > y.cost;
            }
            if (x.hops != y.hops) {
                return x.hops > y.hops;
            }
            if (x.path != y.path) {
                return x.path > y.path;
            }
            return a > b;
        };
        std::priority_queue<int, std::vector<int>, decltype(cmp)> queue(cmp);

        Label seed;
        seed.vertex = AuxiliaryGraph::kSource;
        seed.path = {aux_.source_node()};
        labels_.push_back(seed);
        alive_[seed.vertex].push_back(0);
        queue.push(0);
        created_ = 1;

        std::vector<RoutePlan> plans;
        std::set<std::vector<int>> seen;
        while (!queue.empty()) {
            int id = queue.top();
            queue.pop();
            if (!labels_[id].alive) {
                continue;
            }
            expanded_++;
            if (labels_[id].vertex == AuxiliaryGraph::kSink) {
                RoutePlan plan = build_plan(id);
                if (seen.insert(plan.nodes).second) {
                    plans.push_back(std::move(plan));
                    if (static_cast<int>(plans.size()) >= r_) {
                        break;
                    }
                }
                continue;
            }
            expand(id, [&](int child) { queue.push(child); });
        }

        if (stats) {
            stats->labels_created = created_;
            stats->labels_expanded = expanded_;
            stats->labels_rejected = rejected_;
            stats->labels_removed = removed_;
            stats->phi_step_budget = budget_;
            stats->psi_step_min = psi_min_;
            stats->psi_step_max = psi_max_;
            stats->alive.clear();
            for (const auto &a : alive_) {
                stats->alive.push_back(static_cast<int>(a.size()));
            }
        }
        return plans;
    }

   private:
    template <typename Push>
    void expand(int id, Push push) {
        const Label parent = labels_[id];
        const auto &net = aux_.network();
        for (const auto &arc : aux_.out(parent.vertex)) {
            if (arc.edge < 0) {
                Label child = parent;
                child.vertex = arc.to;
                child.parent = id;
                child.step = 0;
                insert(std::move(child), push);
                continue;
            }
            int v = aux_.vertex(arc.to).node;
            if (std::find(parent.path.begin(), parent.path.end(), v) != parent.path.end()) {
                continue;
            }
            double psi_v = 0.0;
            if (v != aux_.sink_node()) {
                double p = net.node(v).swap_prob;
                if (p <= 0.0) {
                    continue;
                }
                psi_v = std::log(p);
            }
            const auto &table = tables_.for_edge(arc.edge);
            int remaining = budget_ - parent.phi_used;
            for (int k : table.useful_steps(arc.pairs)) {
                if (k > remaining) {
                    break;
                }
                const EdgeOption *opt = table.at(arc.pairs, k);
                double psi_e = opt->psi;
                double x;
                if (parent.psi_inf) {
                    x = psi_v + psi_e;
                } else if (psi_e <= parent.psi_b) {
                    x = psi_v + parent.psi_step * params_.delta_psi + psi_e - parent.psi_b;
                } else {
                    x = psi_v + parent.psi_step * params_.delta_psi;
                }
                std::int64_t n = ceil_steps(x, params_.delta_psi);
                if (n * params_.delta_psi < psi0_ - 1e-12) {
                    continue;
                }
                Label child;
                child.cost = parent.cost + arc.cost;
                child.vertex = arc.to;
                child.parent = id;
                child.phi_used = parent.phi_used + k;
                child.psi_inf = false;
                child.psi_step = n;
                child.psi_b = std::min(parent.psi_b, psi_e);
                child.hops = parent.hops + 1;
                child.step = k;
                child.path = parent.path;
                child.path.push_back(v);
                insert(std::move(child), push);
            }
        }
    }

    // Dominators are counted per distinct node path. One on the same path
    // shares the visited set, so it alone is enough to reject.
    int dominators(const Label &x, int self, int limit) const {
        std::vector<const std::vector<int> *> paths;
        for (int other : alive_[x.vertex]) {
            const Label &y = labels_[other];
            if (other == self || !dominates(y, x)) {
                continue;
            }
            if (y.path == x.path) {
                return limit;
            }
            bool fresh = std::none_of(paths.begin(), paths.end(), [&](auto *q) { return *q == y.path; });
            if (fresh) {
                paths.push_back(&y.path);
                if (static_cast<int>(paths.size()) >= limit) {
                    break;
                }
            }
        }
        return static_cast<int>(paths.size());
    }

    template <typename Push>
    void insert(Label label, Push push) {
        created_++;
        if (dominators(label, -1, r_) >= r_) {
            rejected_++;
            return;
        }
        if (!label.psi_inf) {
            psi_min_ = std::min(psi_min_, label.psi_step);
            psi_max_ = std::max(psi_max_, label.psi_step);
        }
        int id = static_cast<int>(labels_.size());
        int vertex = label.vertex;
        labels_.push_back(std::move(label));
        auto &list = alive_[vertex];
        const Label &fresh = labels_[id];
        std::vector<int> keep;
        keep.reserve(list.size() + 1);
        for (int other : list) {
            Label &x = labels_[other];
            if (dominates(fresh, x) && (r_ == 1 || fresh.path == x.path || dominators(x, other, r_) >= r_)) {
                x.alive = false;
                removed_++;
            } else {
                keep.push_back(other);
            }
        }
        keep.push_back(id);
        list.swap(keep);
        push(id);
    }

    RoutePlan build_plan(int id) const {
        std::vector<int> chain;
        for (int x = id; x >= 0; x = labels_[x].parent) {
            chain.push_back(x);
        }
        std::reverse(chain.begin(), chain.end());
        RoutePlan plan;
        const Label &last = labels_[id];
        plan.nodes = last.path;
        plan.phi_hat = -last.phi_used * params_.delta_phi;
        plan.psi_hat = last.psi_step * params_.delta_psi;
        for (size_t i = 0; i < chain.size(); i++) {
            const Label &l = labels_[chain[i]];
            plan.aux_path.push_back(l.vertex);
            if (l.step == 0) {
                continue;
            }
            const Label &prev = labels_[chain[i - 1]];
            int from = aux_.vertex(prev.vertex).node;
            int to = aux_.vertex(l.vertex).node;
            int pairs = aux_.network().node(to).qubits - aux_.vertex(l.vertex).index;
            int edge = *aux_.network().find_edge(from, to);
            plan.hops.push_back({edge, from, to, pairs, l.step, *tables_.for_edge(edge).at(pairs, l.step)});
        }
        evaluate_plan(aux_.network(), plan);
        return plan;
    }

    const AuxiliaryGraph &aux_;
    const ThroughputTables &tables_;
    RouteParams params_;
    int r_;
    int budget_ = 0;
    double psi0_ = 0.0;
    std::vector<Label> labels_;
    std::vector<std::vector<int>> alive_;
    std::int64_t created_ = 0;
    std::int64_t expanded_ = 0;
    std::int64_t rejected_ = 0;
    std::int64_t removed_ = 0;
    std::int64_t psi_min_ = std::numeric_limits<std::int64_t>::max();
    std::int64_t psi_max_ = std::numeric_limits<std::int64_t>::min();
};

}  // namespace

std::optional<RoutePlan> min_cost_path(const AuxiliaryGraph &aux, const ThroughputTables &tables,
                                       SearchStats *stats) {
    return min_cost_path(aux, tables, tables.params(), stats);
}

std::optional<RoutePlan> min_cost_path(const AuxiliaryGraph &aux, const ThroughputTables &tables,
                                       const RouteParams &params, SearchStats *stats) {
    auto plans = LabelSearch(aux, tables, params, 1).run(stats);
    if (plans.empty()) {
        return std::nullopt;
    }
    return std::move(plans.front());
}

std::vector<RoutePlan> k_paths(const AuxiliaryGraph &aux, const ThroughputTables &tables, int r,
                               SearchStats *stats) {
    return k_paths(aux, tables, tables.params(), r, stats);
}

std::vector<RoutePlan> k_paths(const AuxiliaryGraph &aux, const ThroughputTables &tables, const RouteParams &params,
                               int r, SearchStats *stats) {
    return LabelSearch(aux, tables, params, r).run(stats);
}

std::optional<RoutePlan> route(const QuantumNetwork &net, int s, int t, const RouteParams &params,
                               SearchStats *stats) {
    params.validate();
    AuxiliaryGraph aux(net, s, t, params.delta_q);
    ThroughputTables tables(net, params, params.phi_step_budget());
    return min_cost_path(aux, tables, stats);
}

namespace {

class RouteEnumerator {
   public:
    RouteEnumerator(const QuantumNetwork &net, int s, int t, double f0, double q0)
        : net_(net), s_(s), t_(t), f0_(f0), q0_(q0) {}

    std::vector<RoutePlan> run() {
        std::vector<int> path = {s_};
        std::vector<char> on_path(net_.num_nodes(), 0);
        on_path[s_] = 1;
        paths(path, on_path);
        std::sort(plans_.begin(), plans_.end(), [](const RoutePlan &a, const RoutePlan &b) {
            auto ka = std::make_tuple(a.cost, a.hops.size(), a.nodes, a.pairs());
            auto kb = std::make_tuple(b.cost, b.hops.size(), b.nodes, b.pairs());
            return ka < kb;
        });
        return std::move(plans_);
    }

   private:
    void paths(std::vector<int> &path, std::vector<char> &on_path) {
        int u = path.back();
        if (u == t_) {
            std::vector<int> pairs;
            allocate(path, pairs);
            return;
        }
        for (const auto &inc : net_.incident(u)) {
            if (on_path[inc.neighbor]) {
                continue;
            }
            on_path[inc.neighbor] = 1;
            path.push_back(inc.neighbor);
            paths(path, on_path);
            path.pop_back();
            on_path[inc.neighbor] = 0;
        }
    }

    void allocate(const std::vector<int> &path, std::vector<int> &pairs) {
        size_t h = pairs.size();
        if (h + 1 == path.size()) {
            evaluate(path, pairs);
            return;
        }
        int u = path[h];
        int v = path[h + 1];
        const auto &edge = net_.edge(*net_.find_edge(u, v));
        int used_at_u = h == 0 ? 0 : pairs.back();
        int limit = std::min({edge.capacity, net_.node(u).qubits - used_at_u, net_.node(v).qubits});
        for (int m = 1; m <= limit; m++) {
            // An internal v must keep a qubit for its outgoing link.
            if (v != t_ && m >= net_.node(v).qubits) {
                break;
            }
            pairs.push_back(m);
            allocate(path, pairs);
            pairs.pop_back();
        }
    }

    const std::vector<EdgeOption> &options(double f_e, int m) {
        auto key = std::make_pair(f_e, m);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            return it->second;
        }
        std::vector<EdgeOption> out;
        for (int b = 1; b <= m; b++) {
            for (const auto &tree : enumerate_shapes(b)) {
                auto ev = evaluate_tree(tree, f_e);
                EdgeOption o;
                o.leaves = b;
                o.fidelity = ev.fidelity;
                o.yield = ev.yield;
                o.psi = std::log(o.throughput(m));
                o.tree = tree;
                out.push_back(std::move(o));
            }
        }
        return cache_.emplace(key, std::move(out)).first->second;
    }

    void evaluate(const std::vector<int> &path, const std::vector<int> &pairs) {
        double swaps = 1.0;
        for (size_t i = 1; i + 1 < path.size(); i++) {
            swaps *= net_.node(path[i]).swap_prob;
        }
        if (swaps <= 0.0) {
            return;
        }
        double need = q0_ / swaps;
        RoutePlan plan;
        plan.nodes = path;
        for (size_t h = 0; h < pairs.size(); h++) {
            int e = *net_.find_edge(path[h], path[h + 1]);
            const EdgeOption *best = nullptr;
            for (const auto &o : options(net_.edge(e).fidelity, pairs[h])) {
                if (o.throughput(pairs[h]) < need * (1 - 1e-12)) {
                    continue;
                }
                if (!best || o.fidelity > best->fidelity ||
                    (o.fidelity == best->fidelity && o.throughput(pairs[h]) > best->throughput(pairs[h]))) {
                    best = &o;
                }
            }
            if (!best) {
                return;
            }
            plan.hops.push_back({e, path[h], path[h + 1], pairs[h], 0, *best});
        }
        evaluate_plan(net_, plan);
        if (plan.fidelity >= f0_ - 1e-12) {
            plan.phi_hat = pseudo_fidelity(plan.fidelity);
            plan.psi_hat = std::log(plan.throughput);
            plans_.push_back(std::move(plan));
        }
    }

    const QuantumNetwork &net_;
    int s_;
    int t_;
    double f0_;
    double q0_;
    std::map<std::pair<double, int>, std::vector<EdgeOption>> cache_;
    std::vector<RoutePlan> plans_;
};

}  // namespace

std::vector<RoutePlan> brute_force_routes(const QuantumNetwork &net, int s, int t, double f0, double q0) {
    if (net.num_nodes() > kBruteForceMaxNodes) {
        throw std::length_error("too many nodes for exhaustive routing");
    }
    for (const auto &n : net.nodes()) {
        if (n.qubits > kBruteForceMaxQubits) {
            throw std::length_error("too many qubits for exhaustive routing");
        }
    }
    if (s == t) {
        throw std::invalid_argument("source and destination must differ");
    }
    return RouteEnumerator(net, s, t, f0, q0).run();
}

std::optional<RoutePlan> brute_force_route(const QuantumNetwork &net, int s, int t, double f0, double q0) {
    auto plans = brute_force_routes(net, s, t, f0, q0);
    if (plans.empty()) {
        return std::nullopt;
    }
    return std::move(plans.front());
}

}  // namespace entroute
