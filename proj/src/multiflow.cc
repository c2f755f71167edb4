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

#include "entroute/multiflow.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace entroute {

std::vector<int> FlowProgram::flow_variables(int k) const {
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(variables.size()); j++) {
        if (variables[j].flow == k) {
            out.push_back(j);
        }
    }
    return out;
}

LinearProgram FlowProgram::relaxation() const {
    LinearProgram lp;
    int n = static_cast<int>(variables.size());
    for (const auto &v : variables) {
        lp.objective.push_back(v.weight);
    }
    for (const auto &row : rows) {
        std::vector<double> coeffs(n, 0.0);
        for (auto [var, amount] : row.usage) {
            coeffs[var] = amount;
        }
        lp.add_row(std::move(coeffs), RowSense::le, beta * row.capacity);
    }
    for (int k = 0; k < num_flows; k++) {
        auto vars = flow_variables(k);
        if (vars.empty()) {
            continue;
        }
        std::vector<double> coeffs(n, 0.0);
        for (int j : vars) {
            coeffs[j] = 1.0;
        }
        lp.add_row(std::move(coeffs), RowSense::le, 1.0);
    }
    return lp;
}

namespace {

double usage_of(const FlowProgram &prog, ResourceKind kind, int var, int index) {
    for (const auto &row : prog.rows) {
        if (row.kind != kind || row.index != index) {
            continue;
        }
        for (auto [j, amount] : row.usage) {
            if (j == var) {
                return amount;
            }
        }
    }
    return 0.0;
}

}  // namespace

double FlowProgram::node_usage(int var, int v) const {
    return usage_of(*this, ResourceKind::node, var, v);
}

double FlowProgram::link_usage(int var, int l) const {
    return usage_of(*this, ResourceKind::link, var, l);
}

FlowProgram build_program(const std::vector<FlowRequest> &flows, const std::vector<std::vector<RoutePlan>> &candidates,
                          const QuantumNetwork &net, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw std::domain_error("discount beta outside (0, 1]");
    }
    if (candidates.size() != flows.size()) {
        throw std::invalid_argument("one candidate list per flow expected");
    }
    FlowProgram prog;
    prog.num_flows = static_cast<int>(flows.size());
    prog.beta = beta;
    std::map<int, std::map<int, double>> node_use;
    std::map<int, std::map<int, double>> link_use;
    for (int k = 0; k < prog.num_flows; k++) {
        for (int i = 0; i < static_cast<int>(candidates[k].size()); i++) {
            int var = static_cast<int>(prog.variables.size());
            prog.variables.push_back({k, i, flows[k].weight});
            for (const auto &hop : candidates[k][i].hops) {
                node_use[hop.from][var] += hop.pairs;
                node_use[hop.to][var] += hop.pairs;
                link_use[hop.edge][var] += hop.pairs;
            }
        }
    }
    for (const auto &[v, use] : node_use) {
        prog.rows.push_back({ResourceKind::node, v, static_cast<double>(net.node(v).qubits), {use.begin(), use.end()}});
    }
    for (const auto &[l, use] : link_use) {
        prog.rows.push_back(
            {ResourceKind::link, l, static_cast<double>(net.edge(l).capacity), {use.begin(), use.end()}});
    }
    return prog;
}

FractionalSolution solve_lp(const FlowProgram &prog) {
    auto lp = prog.relaxation();
    auto sol = solve(lp);
    if (sol.status != LpStatus::optimal) {
        throw std::runtime_error(std::string("flow LP not optimal: ") + to_string(sol.status));
    }
    FractionalSolution out;
    out.certificate = certify(lp, sol);
    if (!out.certificate.ok()) {
        throw std::runtime_error("flow LP failed its optimality certificate");
    }
    out.objective = sol.objective;
    out.x.assign(prog.num_flows, {});
    for (int j = 0; j < static_cast<int>(prog.variables.size()); j++) {
        const auto &v = prog.variables[j];
        auto &row = out.x[v.flow];
        if (static_cast<int>(row.size()) <= v.path) {
            row.resize(v.path + 1, 0.0);
        }
        row[v.path] = std::clamp(sol.x[j], 0.0, 1.0);
    }
    return out;
}

int pick_interval(const std::vector<double> &row, double draw) {
    double lo = 0.0;
    for (int i = 0; i < static_cast<int>(row.size()); i++) {
        double hi = lo + row[i];
        if (draw >= lo && draw < hi) {
            return i;
        }
        lo = hi;
    }
    return -1;
}

RoundedSelection evaluate_selection(const FlowProgram &prog, std::vector<int> choice) {
    if (static_cast<int>(choice.size()) != prog.num_flows) {
        throw std::invalid_argument("one choice per flow expected");
    }
    std::vector<int> selected(prog.variables.size(), 0);
    RoundedSelection sel;
    for (int j = 0; j < static_cast<int>(prog.variables.size()); j++) {
        const auto &v = prog.variables[j];
        if (choice[v.flow] == v.path) {
            selected[j] = 1;
            sel.weight += v.weight;
        }
    }
    for (const auto &row : prog.rows) {
        double load = 0.0;
        for (auto [j, amount] : row.usage) {
            load += selected[j] * amount;
        }
        bool ok = load <= row.capacity + 1e-9;
        sel.load.push_back(load);
        sel.row_ok.push_back(ok);
        sel.feasible = sel.feasible && ok;
    }
    sel.choice = std::move(choice);
    return sel;
}

RoundedSelection randomized_round(const FlowProgram &prog, const FractionalSolution &x, CounterRng &rng) {
    std::vector<int> choice(prog.num_flows, -1);
    for (int k = 0; k < prog.num_flows; k++) {
        double draw = rng.uniform();
        if (k < static_cast<int>(x.x.size())) {
            choice[k] = pick_interval(x.x[k], draw);
        }
    }
    return evaluate_selection(prog, std::move(choice));
}

RoundedSelection randomized_round(const FlowProgram &prog, const FractionalSolution &x, std::uint64_t seed,
                                  std::uint64_t stream) {
    CounterRng rng(seed, stream);
    return randomized_round(prog, x, rng);
}

nlohmann::json RoundedSelection::to_json(const FlowProgram &prog, const QuantumNetwork &net) const {
    nlohmann::json violations = nlohmann::json::array();
    for (size_t r = 0; r < prog.rows.size(); r++) {
        if (row_ok[r]) {
            continue;
        }
        const auto &row = prog.rows[r];
        nlohmann::json v = {{"kind", row.kind == ResourceKind::node ? "node" : "link"},
                            {"load", load[r]},
                            {"capacity", row.capacity}};
        if (row.kind == ResourceKind::node) {
            v["node"] = net.node(row.index).id;
        } else {
            v["u"] = net.node(net.edge(row.index).u).id;
            v["v"] = net.node(net.edge(row.index).v).id;
        }
        violations.push_back(std::move(v));
    }
    return {{"choice", choice}, {"weight", weight}, {"feasible", feasible}, {"violations", violations}};
}

void MultiflowParams::validate() const {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw std::domain_error("epsilon outside (0, 0.5)");
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error("delta outside (0, 1)");
    }
}

int MultiflowParams::trials() const {
    validate();
    return std::max(1, static_cast<int>(std::ceil(std::log(1.0 / delta) / std::log(3.0) - 1e-12)));
}

std::vector<std::vector<RoutePlan>> candidate_paths(const QuantumNetwork &net, const std::vector<FlowRequest> &flows,
                                                    const RouteParams &route) {
    int steps = 0;
    for (const auto &f : flows) {
        f.validate(net);
        RouteParams p = route;
        p.f0 = f.f0;
        p.validate();
        steps = std::max(steps, p.phi_step_budget());
    }
    std::vector<std::vector<RoutePlan>> out;
    if (flows.empty()) {
        return out;
    }
    ThroughputTables tables(net, route, std::max(steps, 1));
    for (const auto &f : flows) {
        RouteParams p = route;
        p.f0 = f.f0;
        AuxiliaryGraph aux(net, f.source, f.destination, p.delta_q);
        out.push_back(k_paths(aux, tables, p, f.candidates));
    }
    return out;
}

MultiflowResult multiflow_solve(const std::vector<FlowRequest> &flows, const QuantumNetwork &net,
                                const MultiflowParams &params) {
    params.validate();
    return multiflow_solve(flows, net, candidate_paths(net, flows, params.route), params);
}

MultiflowResult multiflow_solve(const std::vector<FlowRequest> &flows, const QuantumNetwork &net,
                                std::vector<std::vector<RoutePlan>> candidates, const MultiflowParams &params) {
    params.validate();
    MultiflowResult res;
    res.candidates = std::move(candidates);
    res.program = build_program(flows, res.candidates, net, 1.0 - params.epsilon);
    res.lp = solve_lp(res.program);
    res.trials = params.trials();
    for (int trial = 0; trial < res.trials; trial++) {
        auto sel = randomized_round(res.program, res.lp, params.seed, trial);
        if (!sel.feasible) {
            continue;
        }
        res.feasible_trials++;
        if (!res.best || sel.weight > res.best->weight) {
            res.best = std::move(sel);
            res.best_trial = trial;
        }
    }
    return res;
}

nlohmann::json MultiflowResult::to_json(const QuantumNetwork &net) const {
    nlohmann::json cands = nlohmann::json::array();
    for (const auto &list : candidates) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto &plan : list) {
            row.push_back(plan.to_json(net));
        }
        cands.push_back(std::move(row));
    }
    nlohmann::json j = {{"candidates", std::move(cands)},
                        {"lp_objective", lp.objective},
                        {"lp_x", lp.x},
                        {"beta", program.beta},
                        {"trials", trials},
                        {"feasible_trials", feasible_trials}};
    if (best) {
        j["selection"] = best->to_json(program, net);
        j["total_weight"] = best->weight;
        j["best_trial"] = best_trial;
    } else {
        j["selection"] = nullptr;
        j["total_weight"] = 0.0;
    }
    return j;
}

double ilp_optimum(const FlowProgram &prog) {
    std::vector<int> sizes(prog.num_flows, 0);
    for (const auto &v : prog.variables) {
        sizes[v.flow] = std::max(sizes[v.flow], v.path + 1);
    }
    std::int64_t total = 1;
    for (int s : sizes) {
        total *= s + 1;
        if (total > kIlpMaxSelections) {
            throw std::length_error("too many selections to enumerate");
        }
    }
    double best = 0.0;
    std::vector<int> choice(prog.num_flows, -1);
    for (std::int64_t code = 0; code < total; code++) {
        std::int64_t c = code;
        for (int k = 0; k < prog.num_flows; k++) {
            choice[k] = static_cast<int>(c % (sizes[k] + 1)) - 1;
            c /= sizes[k] + 1;
        }
        auto sel = evaluate_selection(prog, choice);
        if (sel.feasible) {
            best = std::max(best, sel.weight);
        }
    }
    return best;
}

double chernoff_tail(double d, double mu) {
    return std::pow(std::exp(d) / std::pow(1.0 + d, 1.0 + d), mu);
}

}  // namespace entroute
