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

#ifndef ENTROUTE_MULTIFLOW_H
#define ENTROUTE_MULTIFLOW_H

#include <cstdint>
#include <optional>
#include <vector>

#include "entroute/flow.h"
#include "entroute/lp.h"
#include "entroute/network.h"
#include "entroute/rng.h"
#include "entroute/routing.h"
#include "json.hpp"

/// Selecting at most one candidate path per flow under shared node and
/// link budgets: packing ILP, its discounted LP relaxation and randomized
/// rounding.
namespace entroute {

enum class ResourceKind { node, link };

/// One packing row: sum of usage over selected paths <= capacity.
struct ResourceRow {
    ResourceKind kind;
    /// Node or link index in the network.
    int index;
    double capacity;
    /// (variable, amount), ascending by variable.
    std::vector<std::pair<int, double>> usage;
};

struct FlowProgram {
    struct Variable {
        int flow;
        int path;
        double weight;
    };

    int num_flows = 0;
    std::vector<Variable> variables;
    /// Node rows by node index, then link rows by link index. Resources no
    /// candidate touches are left out.
    std::vector<ResourceRow> rows;
    double beta = 1.0;

    /// Variables of flow k, in path order.
    std::vector<int> flow_variables(int k) const;
    /// max w.x, A x <= beta * capacity, one <= 1 row per flow with candidates.
    LinearProgram relaxation() const;
    /// Qubits at node v used by a variable, 0 if absent.
    double node_usage(int var, int v) const;
    double link_usage(int var, int l) const;
};

/// a_kiv counts the pairs of every hop at both of its endpoints; b_kil the
/// pairs on link l. candidates[k] belongs to flows[k].
FlowProgram build_program(const std::vector<FlowRequest> &flows, const std::vector<std::vector<RoutePlan>> &candidates,
                          const QuantumNetwork &net, double beta);

struct FractionalSolution {
    /// x[k][i] for candidate i of flow k.
    std::vector<std::vector<double>> x;
    double objective = 0.0;
    LpCertificate certificate;
};

/// Throws std::runtime_error if the result fails its optimality certificate.
FractionalSolution solve_lp(const FlowProgram &prog);

/// Index i whose interval [sum_{j<i} x_j, sum_{j<=i} x_j) holds draw, or -1.
int pick_interval(const std::vector<double> &row, double draw);

struct RoundedSelection {
    /// Chosen candidate per flow, -1 for none.
    std::vector<int> choice;
    double weight = 0.0;
    /// Per program row, against the undiscounted capacity.
    std::vector<double> load;
    std::vector<bool> row_ok;
    bool feasible = true;

    nlohmann::json to_json(const FlowProgram &prog, const QuantumNetwork &net) const;
};

/// Evaluates an explicit selection against the original budgets.
RoundedSelection evaluate_selection(const FlowProgram &prog, std::vector<int> choice);

/// One uniform draw per flow, in flow order.
RoundedSelection randomized_round(const FlowProgram &prog, const FractionalSolution &x, CounterRng &rng);
RoundedSelection randomized_round(const FlowProgram &prog, const FractionalSolution &x, std::uint64_t seed,
                                  std::uint64_t stream = 0);

struct MultiflowParams {
    double epsilon = 0.1;
    double delta = 0.05;
    std::uint64_t seed = 7;
    /// Step sizes, q0 and purification method for candidate search; f0 is
    /// taken from each flow.
    RouteParams route;

    void validate() const;
    /// ceil(ln(1/delta) / ln 3)
    int trials() const;
};

struct MultiflowResult {
    std::vector<std::vector<RoutePlan>> candidates;
    FlowProgram program;
    FractionalSolution lp;
    int trials = 0;
    int feasible_trials = 0;
    /// Feasible rounding of largest weight, earliest trial on ties.
    std::optional<RoundedSelection> best;
    int best_trial = -1;

    nlohmann::json to_json(const QuantumNetwork &net) const;
};

/// R_k candidates per flow from k_paths, for the flow's own f0.
std::vector<std::vector<RoutePlan>> candidate_paths(const QuantumNetwork &net, const std::vector<FlowRequest> &flows,
                                                    const RouteParams &route);

/// Candidates, LP at beta = 1 - epsilon, then trials() independent roundings
/// on substreams (seed, trial).
MultiflowResult multiflow_solve(const std::vector<FlowRequest> &flows, const QuantumNetwork &net,
                                const MultiflowParams &params);

/// Same, reusing precomputed candidates.
MultiflowResult multiflow_solve(const std::vector<FlowRequest> &flows, const QuantumNetwork &net,
                                std::vector<std::vector<RoutePlan>> candidates, const MultiflowParams &params);

/// Best total weight over all selections, by enumeration. Throws
/// std::length_error beyond kIlpMaxSelections selections.
inline constexpr std::int64_t kIlpMaxSelections = 1 << 20;
double ilp_optimum(const FlowProgram &prog);

/// Right-hand side of the node-row tail bound for a row at expected load mu:
/// (e^d / (1+d)^(1+d))^mu.
double chernoff_tail(double d, double mu);

}  // namespace entroute

#endif
