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

#include "entroute/network.h"

#include <algorithm>
#include <stdexcept>

namespace entroute {

double NetworkEdge::cost(int pairs) const {
    if (pairs < 1 || pairs > capacity) {
        throw std::out_of_range("pair count outside [1, capacity]");
    }
    switch (cost_model) {
        case CostModel::unit:
            return pairs;
        case CostModel::weighted:
            return weight * pairs;
        case CostModel::table:
            return cost_table.at(pairs - 1);
    }
    return pairs;
}

int QuantumNetwork::add_node(NetworkNode node) {
    if (node.id.empty()) {
        throw std::invalid_argument("node id must be non-empty");
    }
    if (node.qubits < 1) {
        throw std::invalid_argument("node " + node.id + " needs at least one qubit");
    }
    if (!(node.swap_prob >= 0.0 && node.swap_prob <= 1.0)) {
        throw std::domain_error("swap probability of " + node.id + " outside [0, 1]");
    }
    if (index_.count(node.id)) {
        throw std::invalid_argument("duplicate node id " + node.id);
    }
    int v = num_nodes();
    index_.emplace(node.id, v);
    nodes_.push_back(std::move(node));
    adjacency_.emplace_back();
    return v;
}

int QuantumNetwork::add_edge(NetworkEdge edge) {
    if (edge.u < 0 || edge.v < 0 || edge.u >= num_nodes() || edge.v >= num_nodes()) {
        throw std::out_of_range("edge endpoint out of range");
    }
    if (edge.u == edge.v) {
        throw std::invalid_argument("self loops are not allowed");
    }
    if (find_edge(edge.u, edge.v)) {
        throw std::invalid_argument("parallel edges are not allowed");
    }
    if (edge.capacity < 1) {
        throw std::invalid_argument("link capacity must be at least 1");
    }
    if (!(edge.fidelity > 0.5 && edge.fidelity <= 1.0)) {
        throw std::domain_error("link fidelity outside (0.5, 1]");
    }
    if (edge.cost_model == CostModel::weighted && !(edge.weight >= 0.0)) {
        throw std::invalid_argument("link weight must be non-negative");
    }
    if (edge.cost_model == CostModel::table) {
        if (static_cast<int>(edge.cost_table.size()) < edge.capacity) {
            throw std::invalid_argument("cost table shorter than link capacity");
        }
        for (size_t i = 0; i < edge.cost_table.size(); i++) {
            if (edge.cost_table[i] < 0.0 || (i > 0 && edge.cost_table[i] < edge.cost_table[i - 1])) {
                throw std::invalid_argument("cost table must be non-negative and non-decreasing");
            }
        }
    }
    int e = num_edges();
    auto insert = [&](int a, int b) {
        auto &adj = adjacency_[a];
        Incidence inc{b, e};
        adj.insert(std::upper_bound(adj.begin(), adj.end(), inc,
                                    [](const Incidence &x, const Incidence &y) { return x.neighbor < y.neighbor; }),
                   inc);
    };
    insert(edge.u, edge.v);
    insert(edge.v, edge.u);
    edges_.push_back(std::move(edge));
    return e;
}

std::optional<int> QuantumNetwork::find_node(const std::string &id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

int QuantumNetwork::node_index(const std::string &id) const {
    auto v = find_node(id);
    if (!v) {
        throw std::out_of_range("unknown node " + id);
    }
    return *v;
}

std::optional<int> QuantumNetwork::find_edge(int u, int v) const {
    if (u < 0 || u >= num_nodes()) {
        return std::nullopt;
    }
    for (const auto &inc : adjacency_[u]) {
        if (inc.neighbor == v) {
            return inc.edge;
        }
    }
    return std::nullopt;
}

bool QuantumNetwork::is_connected() const {
    if (nodes_.empty()) {
        return true;
    }
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto &inc : adjacency_[v]) {
            if (!seen[inc.neighbor]) {
                seen[inc.neighbor] = 1;
                count++;
                stack.push_back(inc.neighbor);
            }
        }
    }
    return count == num_nodes();
}

void QuantumNetwork::set_qubits(int v, int qubits) {
    if (qubits < 1) {
        throw std::invalid_argument("node needs at least one qubit");
    }
    nodes_.at(v).qubits = qubits;
}

QuantumNetwork QuantumNetwork::from_json(const nlohmann::json &j) {
    QuantumNetwork net;
    for (const auto &n : j.at("nodes")) {
        NetworkNode node;
        node.id = n.at("id").is_string() ? n.at("id").get<std::string>() : n.at("id").dump();
        node.qubits = n.at("qubits").get<int>();
        node.swap_prob = n.value("swap_prob", 1.0);
        net.add_node(std::move(node));
    }
    auto endpoint = [&](const nlohmann::json &x) {
        return net.node_index(x.is_string() ? x.get<std::string>() : x.dump());
    };
    for (const auto &e : j.at("edges")) {
        NetworkEdge edge;
        edge.u = endpoint(e.at("u"));
        edge.v = endpoint(e.at("v"));
        edge.capacity = e.at("capacity").get<int>();
        edge.fidelity = e.at("fidelity").get<double>();
        if (e.contains("cost_table")) {
            edge.cost_model = CostModel::table;
            edge.cost_table = e.at("cost_table").get<std::vector<double>>();
        } else if (e.contains("weight")) {
            edge.cost_model = CostModel::weighted;
            edge.weight = e.at("weight").get<double>();
        }
        net.add_edge(std::move(edge));
    }
    return net;
}

nlohmann::json QuantumNetwork::to_json() const {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto &n : nodes_) {
        nodes.push_back({{"id", n.id}, {"qubits", n.qubits}, {"swap_prob", n.swap_prob}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto &e : edges_) {
        nlohmann::json x = {{"u", nodes_[e.u].id},
                            {"v", nodes_[e.v].id},
                            {"capacity", e.capacity},
                            {"fidelity", e.fidelity}};
        if (e.cost_model == CostModel::weighted) {
            x["weight"] = e.weight;
        } else if (e.cost_model == CostModel::table) {
            x["cost_table"] = e.cost_table;
        }
        edges.push_back(std::move(x));
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace entroute
