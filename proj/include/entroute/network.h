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

#ifndef ENTROUTE_NETWORK_H
#define ENTROUTE_NETWORK_H

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace entroute {

struct NetworkNode {
    std::string id;
    /// Q_v: qubits available for entanglement at this node.
    int qubits = 1;
    /// p_v: success probability of a swap performed here.
    double swap_prob = 1.0;
};

enum class CostModel { unit, weighted, table };

struct NetworkEdge {
    int u = 0;
    int v = 0;
    /// C_l: most elementary pairs the link can hold at once.
    int capacity = 1;
    /// Fidelity of one elementary pair on this link.
    double fidelity = 1.0;
    CostModel cost_model = CostModel::unit;
    double weight = 1.0;
    /// cost_table[m - 1] is the cost of using m pairs.
    std::vector<double> cost_table;

    /// C_e(m) for 1 <= m <= capacity.
    double cost(int pairs) const;
    int other(int endpoint) const {
        return endpoint == u ? v : u;
    }
};

/// Undirected simple graph with per-node qubit budgets and per-link
/// capacity, fidelity and cost.
class QuantumNetwork {
   public:
    struct Incidence {
        int neighbor;
        int edge;
    };

    int add_node(NetworkNode node);
    int add_edge(NetworkEdge edge);

    int num_nodes() const {
        return static_cast<int>(nodes_.size());
    }
    int num_edges() const {
        return static_cast<int>(edges_.size());
    }
    const NetworkNode &node(int v) const {
        return nodes_.at(v);
    }
    const NetworkEdge &edge(int e) const {
        return edges_.at(e);
    }
    const std::vector<NetworkNode> &nodes() const {
        return nodes_;
    }
    const std::vector<NetworkEdge> &edges() const {
        return edges_;
    }
    /// Incident links of v, sorted by neighbor index.
    const std::vector<Incidence> &incident(int v) const {
        return adjacency_.at(v);
    }
    int degree(int v) const {
        return static_cast<int>(adjacency_.at(v).size());
    }

    std::optional<int> find_node(const std::string &id) const;
    /// Throws std::out_of_range for an unknown id.
    int node_index(const std::string &id) const;
    std::optional<int> find_edge(int u, int v) const;

    bool is_connected() const;

    /// Replaces Q_v.
    void set_qubits(int v, int qubits);

    /// {nodes:[{id,qubits,swap_prob}], edges:[{u,v,capacity,fidelity,weight?,cost_table?}]}
    static QuantumNetwork from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;

   private:
    std::vector<NetworkNode> nodes_;
    std::vector<NetworkEdge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace entroute

#endif
