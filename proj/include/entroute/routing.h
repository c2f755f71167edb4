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

#ifndef ENTROUTE_ROUTING_H
#define ENTROUTE_ROUTING_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entroute/network.h"
#include "entroute/purification.h"
#include "json.hpp"

/// Fidelity- and throughput-constrained min-cost entanglement routing.
///
/// The search runs over an auxiliary graph whose vertex copies v_i record
/// how many qubits v still has for its next link, so that a path there is
/// both a route and a per-link pair allocation.
namespace entroute {

/// How a link turns its elementary pairs into purified pairs.
enum class PurificationMethod { optimal, pumping, symmetric };

const char *to_string(PurificationMethod m);
PurificationMethod purification_method_from_string(const std::string &s);

struct RouteParams {
    double f0 = 0.85;
    double q0 = 1.0;
    double delta_phi = 0.01;
    double delta_psi = 0.01;
    int delta_q = 1;
    /// Extra delta_phi steps the search may spend below phi(f0). Zero
    /// enforces phi_hat >= phi(f0).
    int phi_slack_steps = 0;
    PurificationMethod method = PurificationMethod::optimal;
    /// Step sizes for the per-link purification scheduler.
    double delta_f = 1e-5;
    double delta_xi = 1e-5;

    void validate() const;
    double phi0() const;
    double psi0() const;
    /// Total number of delta_phi steps a path may spend.
    int phi_step_budget() const;
};

/// Step sizes following the rule delta <= eps * |target| / |V|. A zero psi0
/// falls back to eps * psi_range / |V|. The phi slack covers the rounding of
/// up to |V| - 1 links.
RouteParams theorem3_params(const QuantumNetwork &net, double f0, double q0, double eps);

/// One purification choice for a link with a given pair budget.
struct EdgeOption {
    /// ln of the expected purified pairs the search uses for this link.
    double psi = 0.0;
    int leaves = 1;
    /// Exact values of the chosen tree.
    double fidelity = 0.0;
    double yield = 1.0;
    PurificationTree tree;

    double throughput(int pairs) const {
        return yield / leaves * pairs;
    }
};

/// psi_e for one link fidelity, by pair budget m and threshold step k
/// (per-link pseudo-fidelity at least -k * delta_phi).
class ThroughputTable {
   public:
    ThroughputTable(double f_e, int max_pairs, int max_steps, const RouteParams &params);

    double link_fidelity() const {
        return f_e_;
    }
    int max_pairs() const {
        return max_pairs_;
    }
    int max_steps() const {
        return max_steps_;
    }
    /// nullptr where no tree within the budget reaches the threshold.
    const EdgeOption *at(int pairs, int step) const;
    /// Steps whose psi beats every smaller step, ascending. Other steps
    /// only produce dominated labels.
    const std::vector<int> &useful_steps(int pairs) const;

   private:
    double f_e_;
    int max_pairs_;
    int max_steps_;
    std::vector<std::vector<std::optional<EdgeOption>>> options_;
    std::vector<std::vector<int>> useful_;
};

/// Tables for every link of a network, shared by links of equal fidelity.
/// Immutable once built; safe to share across concurrent searches.
class ThroughputTables {
   public:
    ThroughputTables(const QuantumNetwork &net, const RouteParams &params, int max_steps);

    const ThroughputTable &for_edge(int e) const {
        return tables_[edge_table_.at(e)];
    }
    int max_steps() const {
        return max_steps_;
    }
    const RouteParams &params() const {
        return params_;
    }

   private:
    RouteParams params_;
    int max_steps_;
    std::vector<ThroughputTable> tables_;
    std::vector<int> edge_table_;
};

struct AuxVertex {
    /// Original node, or kVirtual for s' and t'.
    int node;
    int index;
};

struct AuxArc {
    int to;
    /// Original link, or -1 for the zero-cost virtual arcs.
    int edge;
    int pairs;
    double cost;
};

class AuxiliaryGraph {
   public:
    static constexpr int kSource = 0;
    static constexpr int kSink = 1;
    static constexpr int kVirtual = -1;

    /// The network must outlive the graph.
    AuxiliaryGraph(const QuantumNetwork &net, int s, int t, int delta_q = 1);

    const QuantumNetwork &network() const {
        return *net_;
    }
    int source_node() const {
        return s_;
    }
    int sink_node() const {
        return t_;
    }
    int delta_q() const {
        return delta_q_;
    }
    int num_vertices() const {
        return static_cast<int>(vertices_.size());
    }
    int num_arcs() const;
    const AuxVertex &vertex(int v) const {
        return vertices_.at(v);
    }
    const std::vector<AuxArc> &out(int v) const {
        return out_.at(v);
    }
    std::optional<int> find_vertex(int node, int index) const;
    /// "s'", "t'", or node id followed by the index, e.g. "v1".
    std::string vertex_name(int v) const;

    /// Auxiliary path for a node sequence with per-link pair counts.
    /// Throws std::invalid_argument when the allocation is not representable.
    std::vector<int> encode(const std::vector<int> &nodes, const std::vector<int> &pairs) const;
    /// Inverse of encode; throws std::invalid_argument on a non-path.
    std::pair<std::vector<int>, std::vector<int>> decode(const std::vector<int> &aux_path) const;

   private:
    int add_vertex(int node, int index);

    const QuantumNetwork *net_;
    int s_;
    int t_;
    int delta_q_;
    std::vector<AuxVertex> vertices_;
    std::vector<std::vector<AuxArc>> out_;
    /// vertex_of_[node][index] or -1.
    std::vector<std::vector<int>> vertex_of_;
};

struct RouteHop {
    int edge;
    int from;
    int to;
    int pairs;
    int phi_steps;
    EdgeOption option;
};

struct RoutePlan {
    std::vector<int> nodes;
    std::vector<RouteHop> hops;
    std::vector<int> aux_path;
    double cost = 0.0;
    /// Exact end-to-end fidelity and expected pair throughput.
    double fidelity = 1.0;
    double throughput = 0.0;
    double phi_hat = 0.0;
    double psi_hat = 0.0;

    std::vector<int> pairs() const;
    nlohmann::json to_json(const QuantumNetwork &net, const AuxiliaryGraph *aux = nullptr) const;
};

/// Recomputes fidelity, throughput and cost of a plan from its hops.
void evaluate_plan(const QuantumNetwork &net, RoutePlan &plan);

struct SearchStats {
    std::int64_t labels_created = 0;
    std::int64_t labels_expanded = 0;
    std::int64_t labels_rejected = 0;
    std::int64_t labels_removed = 0;
    int phi_step_budget = 0;
    std::int64_t psi_step_min = 0;
    std::int64_t psi_step_max = 0;
    /// Labels alive at each auxiliary vertex when the search stopped.
    std::vector<int> alive;
    int max_alive() const;
};

std::optional<RoutePlan> min_cost_path(const AuxiliaryGraph &aux, const ThroughputTables &tables,
                                       SearchStats *stats = nullptr);
/// Labels survive while fewer than r others dominate them. Returns up to r
/// plans on distinct node paths by increasing cost.
std::vector<RoutePlan> k_paths(const AuxiliaryGraph &aux, const ThroughputTables &tables, int r,
                               SearchStats *stats = nullptr);

/// Same searches with thresholds from params. Step sizes and purification
/// method must match the tables; the tables need at least
/// params.phi_step_budget() steps.
std::optional<RoutePlan> min_cost_path(const AuxiliaryGraph &aux, const ThroughputTables &tables,
                                       const RouteParams &params, SearchStats *stats = nullptr);
std::vector<RoutePlan> k_paths(const AuxiliaryGraph &aux, const ThroughputTables &tables, const RouteParams &params,
                               int r, SearchStats *stats = nullptr);

/// Builds the auxiliary graph and tables for one request.
std::optional<RoutePlan> route(const QuantumNetwork &net, int s, int t, const RouteParams &params,
                               SearchStats *stats = nullptr);

inline constexpr int kBruteForceMaxNodes = 8;
inline constexpr int kBruteForceMaxQubits = 4;

/// Every simple path and pair allocation within qubit and capacity budgets,
/// each link purified by the best tree over all shapes with at most m
/// leaves. Feasible plans sorted by (cost, hops, nodes, pairs).
std::vector<RoutePlan> brute_force_routes(const QuantumNetwork &net, int s, int t, double f0, double q0);
std::optional<RoutePlan> brute_force_route(const QuantumNetwork &net, int s, int t, double f0, double q0);

}  // namespace entroute

#endif
