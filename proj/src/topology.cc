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

#include "entroute/topology.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "entroute/rng.h"

namespace entroute {

void TopologySpec::validate() const {
    if (kind == TopologyKind::waxman) {
        if (nodes < 2) {
            throw std::invalid_argument("waxman graph needs at least 2 nodes");
        }
        if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0) || !(domain_size > 0.0)) {
            throw std::invalid_argument("waxman parameters need alpha in (0, 1], beta > 0, domain > 0");
        }
    } else if (rows < 1 || cols < 1 || rows * cols < 2) {
        throw std::invalid_argument("grid needs at least 2 nodes");
    }
    if (capacity < 1) {
        throw std::invalid_argument("capacity must be at least 1");
    }
    if (!(fidelity_lo > 0.5 && fidelity_lo <= fidelity_hi && fidelity_hi <= 1.0)) {
        throw std::domain_error("fidelity range must satisfy 0.5 < lo <= hi <= 1");
    }
    if (!(fidelity_sigma >= 0.0)) {
        throw std::invalid_argument("fidelity sigma must be non-negative");
    }
    if (qubits_per_neighbor < 0 || fixed_qubits < 0) {
        throw std::invalid_argument("qubit rule values must be non-negative");
    }
    if (!(swap_prob >= 0.0 && swap_prob <= 1.0)) {
        throw std::domain_error("swap probability outside [0, 1]");
    }
    if (max_attempts < 1) {
        throw std::invalid_argument("max_attempts must be at least 1");
    }
}

TopologySpec TopologySpec::from_json(const nlohmann::json &j) {
    TopologySpec s;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "waxman") {
        s.kind = TopologyKind::waxman;
    } else if (kind == "grid") {
        s.kind = TopologyKind::grid;
    } else {
        throw std::invalid_argument("unknown topology kind " + kind);
    }
    s.nodes = j.value("n", s.nodes);
    s.alpha = j.value("alpha", s.alpha);
    s.beta = j.value("beta", s.beta);
    s.domain_size = j.value("domain_size", s.domain_size);
    s.rows = j.value("rows", s.rows);
    s.cols = j.value("cols", s.cols);
    s.capacity = j.value("capacity", s.capacity);
    if (j.contains("fidelity")) {
        const auto &f = j.at("fidelity");
        s.fidelity_mu = f.value("mu", s.fidelity_mu);
        s.fidelity_sigma = f.value("sigma", s.fidelity_sigma);
        s.fidelity_lo = f.value("lo", s.fidelity_lo);
        s.fidelity_hi = f.value("hi", s.fidelity_hi);
    }
    if (j.contains("qubits")) {
        const auto &q = j.at("qubits");
        s.qubits_per_neighbor = q.value("per_neighbor", s.qubits_per_neighbor);
        s.fixed_qubits = q.value("fixed", s.fixed_qubits);
    }
    s.swap_prob = j.value("swap_prob", s.swap_prob);
    s.seed = j.value("seed", s.seed);
    s.max_attempts = j.value("max_attempts", s.max_attempts);
    s.validate();
    return s;
}

nlohmann::json TopologySpec::to_json() const {
    nlohmann::json j;
    if (kind == TopologyKind::waxman) {
        j = {{"kind", "waxman"}, {"n", nodes}, {"alpha", alpha}, {"beta", beta}, {"domain_size", domain_size}};
    } else {
        j = {{"kind", "grid"}, {"rows", rows}, {"cols", cols}};
    }
    j["capacity"] = capacity;
    j["fidelity"] = {{"mu", fidelity_mu}, {"sigma", fidelity_sigma}, {"lo", fidelity_lo}, {"hi", fidelity_hi}};
    j["qubits"] = {{"per_neighbor", qubits_per_neighbor}, {"fixed", fixed_qubits}};
    j["swap_prob"] = swap_prob;
    j["seed"] = seed;
    j["max_attempts"] = max_attempts;
    return j;
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeList waxman_edges(const TopologySpec &spec, CounterRng &rng) {
    int n = spec.nodes;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; i++) {
        x[i] = rng.uniform() * spec.domain_size;
        y[i] = rng.uniform() * spec.domain_size;
    }
    double diameter = 0.0;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            diameter = std::max(diameter, std::hypot(x[i] - x[j], y[i] - y[j]));
        }
    }
    EdgeList edges;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            double d = std::hypot(x[i] - x[j], y[i] - y[j]);
            double p = diameter > 0.0 ? spec.alpha * std::exp(-d / (spec.beta * diameter)) : spec.alpha;
            if (rng.uniform() < p) {
                edges.emplace_back(i, j);
            }
        }
    }
    return edges;
}

EdgeList grid_edges(const TopologySpec &spec) {
    EdgeList edges;
    auto id = [&](int r, int c) { return r * spec.cols + c; };
    for (int r = 0; r < spec.rows; r++) {
        for (int c = 0; c < spec.cols; c++) {
            if (c + 1 < spec.cols) {
                edges.emplace_back(id(r, c), id(r, c + 1));
            }
            if (r + 1 < spec.rows) {
                edges.emplace_back(id(r, c), id(r + 1, c));
            }
        }
    }
    return edges;
}

double truncated_normal(const TopologySpec &spec, CounterRng &rng) {
    if (spec.fidelity_sigma == 0.0 || spec.fidelity_lo == spec.fidelity_hi) {
        return std::clamp(spec.fidelity_mu, spec.fidelity_lo, spec.fidelity_hi);
    }
    std::normal_distribution<double> normal(spec.fidelity_mu, spec.fidelity_sigma);
    for (int i = 0; i < 1000000; i++) {
        double f = normal(rng);
        if (f >= spec.fidelity_lo && f <= spec.fidelity_hi) {
            return f;
        }
    }
    throw std::runtime_error("truncated normal rejection sampling did not converge");
}

QuantumNetwork build(const TopologySpec &spec, int n, const EdgeList &edges, CounterRng &rng) {
    std::vector<int> degree(n, 0);
    for (auto [u, v] : edges) {
        degree[u]++;
        degree[v]++;
    }
    int allowance = spec.qubits_per_neighbor > 0 ? spec.qubits_per_neighbor : spec.capacity;
    QuantumNetwork net;
    for (int v = 0; v < n; v++) {
        std::string id = spec.kind == TopologyKind::grid
                             ? "r" + std::to_string(v / spec.cols) + "c" + std::to_string(v % spec.cols)
                             : "w" + std::to_string(v);
        int q = spec.fixed_qubits > 0 ? spec.fixed_qubits : std::max(1, degree[v] * allowance);
        net.add_node({id, q, spec.swap_prob});
    }
    for (auto [u, v] : edges) {
        NetworkEdge e;
        e.u = u;
        e.v = v;
        e.capacity = spec.capacity;
        e.fidelity = truncated_normal(spec, rng);
        net.add_edge(std::move(e));
    }
    return net;
}

}  // namespace

QuantumNetwork generate(const TopologySpec &spec) {
    spec.validate();
    if (spec.kind == TopologyKind::grid) {
        CounterRng rng(spec.seed);
        return build(spec, spec.rows * spec.cols, grid_edges(spec), rng);
    }
    for (int attempt = 0; attempt < spec.max_attempts; attempt++) {
        CounterRng rng(spec.seed, attempt);
        auto edges = waxman_edges(spec, rng);
        auto net = build(spec, spec.nodes, edges, rng);
        if (net.is_connected()) {
            return net;
        }
    }
    throw std::runtime_error("no connected waxman graph after " + std::to_string(spec.max_attempts) + " attempts");
}

std::vector<FlowRequest> sample_flows(const QuantumNetwork &net, int count, std::uint64_t seed,
                                      const FlowRequest &prototype) {
    std::int64_t n = net.num_nodes();
    std::int64_t total = n * (n - 1) / 2;
    if (count < 1) {
        throw std::invalid_argument("flow count must be at least 1");
    }
    if (count > total) {
        throw std::invalid_argument("more flows requested than node pairs exist");
    }
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(total);
    for (int u = 0; u < n; u++) {
        for (int v = u + 1; v < n; v++) {
            pairs.emplace_back(u, v);
        }
    }
    CounterRng rng(seed);
    std::vector<FlowRequest> flows;
    for (int k = 0; k < count; k++) {
        std::int64_t pick = rng.uniform_int(k, total - 1);
        std::swap(pairs[k], pairs[pick]);
        auto [u, v] = pairs[k];
        if (rng() & 1) {
            std::swap(u, v);
        }
        FlowRequest f = prototype;
        f.id = k;
        f.source = u;
        f.destination = v;
        flows.push_back(f);
    }
    return flows;
}

}  // namespace entroute
