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

#include "entroute/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>

#include "entroute/multiflow.h"
#include "entroute/purification.h"
#include "entroute/rng.h"
#include "entroute/routing.h"
#include "entroute/swap_strategy.h"

namespace entroute {

namespace {

const std::set<std::string> kScenarios = {"purify-compare", "strategy-compare", "route-compare", "multiflow"};

// sps3 or sps{3}
std::optional<int> sps_portions(const std::string &name) {
    if (name.rfind("sps", 0) != 0 || name.size() <= 3) {
        return std::nullopt;
    }
    std::string digits = name.substr(3);
    if (digits.front() == '{' && digits.back() == '}') {
        digits = digits.substr(1, digits.size() - 2);
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        return std::nullopt;
    }
    return std::stoi(digits);
}

bool known_algorithm(const std::string &scenario, const std::string &alg) {
    if (scenario == "purify-compare") {
        return alg == "ours" || alg == "symmetric" || alg == "pumping";
    }
    if (scenario == "strategy-compare") {
        return alg == "pas" || alg == "sap" || sps_portions(alg).has_value();
    }
    if (scenario == "route-compare") {
        return alg == "ours" || alg == "q-step" || alg == "symmetric" || alg == "pumping";
    }
    return alg == "ours";
}

std::string fmt(const char *spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string number(double x) {
    return fmt("%.12g", x);
}

// Runs f(0..n-1) on up to workers threads. Results must be written to
// per-index slots by f.
void parallel_for(int n, int workers, const std::function<void(int)> &f) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; i++) {
            f(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min(workers, n); w++) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                f(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

class Stopwatch {
   public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

   private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// One unit of work: its rows and JSON record.
struct TaskOutput {
    std::vector<ResultRow> rows;
    nlohmann::json record;
};

struct Runner {
    const ExperimentConfig &cfg;
    std::vector<std::string> algorithms;
    int workers;

    ResultRow row(const std::string &alg, const std::string &param, const std::string &metric, double value,
                  double ms) const {
        return {cfg.scenario, alg, param, metric, value, cfg.seed, cfg.timing ? ms : 0.0};
    }

    std::vector<TaskOutput> run_tasks(int n, const std::function<TaskOutput(int)> &task) const {
        std::vector<TaskOutput> out(n);
        parallel_for(n, workers, [&](int i) {
            try {
                out[i] = task(i);
            } catch (const std::exception &e) {
                out[i].rows = {row("-", "task=" + std::to_string(i), "error", 1.0, 0.0)};
                out[i].record = {{"task", i}, {"error", e.what()}};
            }
        });
        return out;
    }

    // purify-compare: one task per (f_e, N, algorithm).
    ExperimentResult purify() const {
        struct Point {
            double f_e;
            int n;
            std::string alg;
        };
        std::vector<Point> points;
        for (double f_e : cfg.link_fidelities) {
            for (int n = 2; n <= cfg.max_pairs; n++) {
                for (const auto &alg : algorithms) {
                    points.push_back({f_e, n, alg});
                }
            }
        }
        auto outs = run_tasks(static_cast<int>(points.size()), [&](int i) {
            const Point &p = points[i];
            Stopwatch clock;
            PurificationTree tree;
            if (p.alg == "ours") {
                tree = schedule_max_fidelity(p.n, p.f_e, cfg.delta_f, cfg.delta_xi).tree;
            } else if (p.alg == "symmetric") {
                tree = symmetric_schedule(p.n);
            } else {
                tree = pumping_schedule(p.n);
            }
            auto ev = evaluate_tree(tree, p.f_e);
            double ms = clock.ms();
            std::string param = "f_e=" + fmt("%.4g", p.f_e) + ";N=" + std::to_string(p.n);
            TaskOutput out;
            out.rows = {row(p.alg, param, "fidelity", ev.fidelity, ms),
                        row(p.alg, param, "success_prob", ev.success_prob, ms),
                        row(p.alg, param, "leaves", tree.leaves(), ms)};
            out.record = {{"algorithm", p.alg}, {"f_e", p.f_e}, {"N", p.n}, {"tree", tree.str()},
                          {"fidelity", ev.fidelity}, {"success_prob", ev.success_prob}};
            return out;
        });
        return collect(outs, "points");
    }

    RepeaterChain random_chain(int length, int trial) const {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(length) * 1000003u + trial);
        RepeaterChain chain;
        chain.swap_success = cfg.chain_swap_prob;
        for (int h = 0; h < length; h++) {
            std::vector<double> pairs;
            for (int i = 0; i < cfg.pairs_per_hop; i++) {
                pairs.push_back(cfg.chain_fidelity_lo + (cfg.chain_fidelity_hi - cfg.chain_fidelity_lo) * rng.uniform());
            }
            chain.hops.push_back(std::move(pairs));
        }
        return chain;
    }

    // strategy-compare: one task per (length, trial), all algorithms.
    ExperimentResult strategy() const {
        std::vector<std::pair<int, int>> points;
        for (int l : cfg.lengths) {
            for (int t = 0; t < cfg.trials; t++) {
                points.emplace_back(l, t);
            }
        }
        auto outs = run_tasks(static_cast<int>(points.size()), [&](int i) {
            auto [l, t] = points[i];
            auto chain = random_chain(l, t);
            TaskOutput out;
            out.record = {{"length", l}, {"trial", t}, {"chain", chain.to_json()}};
            std::string param = "l=" + std::to_string(l) + ";trial=" + std::to_string(t);
            for (const auto &alg : algorithms) {
                Stopwatch clock;
                StrategyOutcome res;
                if (alg == "pas") {
                    res = *purify_and_swap(chain);
                } else if (alg == "sap") {
                    res = swap_and_purify(chain);
                } else {
                    res = swap_purify_swap(chain, std::min(*sps_portions(alg), l));
                }
                double ms = clock.ms();
                out.rows.push_back(row(alg, param, "fidelity", res.fidelity, ms));
                out.rows.push_back(row(alg, param, "success_prob", res.success_prob, ms));
                out.record[alg] = res.to_json();
            }
            return out;
        });
        auto res = collect(outs, "trials");
        // Means per (algorithm, length).
        for (const auto &alg : algorithms) {
            for (int l : cfg.lengths) {
                double f = 0.0;
                double p = 0.0;
                std::string prefix = "l=" + std::to_string(l) + ";";
                int n = 0;
                for (const auto &r : res.rows) {
                    if (r.algorithm != alg || r.parameter.rfind(prefix, 0) != 0) {
                        continue;
                    }
                    if (r.metric == "fidelity") {
                        f += r.value;
                        n++;
                    } else if (r.metric == "success_prob") {
                        p += r.value;
                    }
                }
                if (n == 0) {
                    continue;
                }
                std::string param = "l=" + std::to_string(l);
                res.rows.push_back(row(alg, param, "mean_fidelity", f / n, 0.0));
                res.rows.push_back(row(alg, param, "mean_success_prob", p / n, 0.0));
            }
        }
        return res;
    }

    static PurificationMethod method_of(const std::string &alg) {
        if (alg == "ours") {
            return PurificationMethod::optimal;
        }
        if (alg == "symmetric") {
            return PurificationMethod::symmetric;
        }
        return PurificationMethod::pumping;
    }

    RouteParams route_params(const std::string &alg, double f0) const {
        RouteParams p;
        p.f0 = f0;
        p.q0 = cfg.q0;
        p.delta_phi = cfg.delta_phi;
        p.delta_psi = cfg.delta_psi;
        p.delta_q = cfg.delta_q;
        p.method = method_of(alg);
        return p;
    }

    // route-compare: one task per (algorithm, threshold, trial). The same
    // endpoint pairs are used at every threshold and for every algorithm.
    ExperimentResult route() const {
        auto net = generate(cfg.topology);
        auto flows = sample_flows(net, cfg.trials, cfg.seed);
        struct Point {
            std::string alg;
            double f0;
            int trial;
        };
        std::vector<Point> points;
        for (const auto &alg : algorithms) {
            for (double f0 : cfg.thresholds) {
                for (int t = 0; t < cfg.trials; t++) {
                    points.push_back({alg, f0, t});
                }
            }
        }
        auto outs = run_tasks(static_cast<int>(points.size()), [&](int i) {
            const Point &p = points[i];
            const auto &flow = flows[p.trial];
            Stopwatch clock;
            auto plan = entroute::route(net, flow.source, flow.destination, route_params(p.alg, p.f0));
            double ms = clock.ms();
            std::string param = "f0=" + fmt("%.4g", p.f0) + ";trial=" + std::to_string(p.trial);
            TaskOutput out;
            out.rows.push_back(row(p.alg, param, "feasible", plan ? 1.0 : 0.0, ms));
            out.record = {{"algorithm", p.alg},
                          {"f0", p.f0},
                          {"trial", p.trial},
                          {"src", net.node(flow.source).id},
                          {"dst", net.node(flow.destination).id},
                          {"plan", plan ? plan->to_json(net) : nlohmann::json(nullptr)}};
            if (plan) {
                out.rows.push_back(row(p.alg, param, "cost", plan->cost, ms));
                out.rows.push_back(row(p.alg, param, "fidelity", plan->fidelity, ms));
                out.rows.push_back(row(p.alg, param, "throughput", plan->throughput, ms));
            }
            out.rows.push_back(row(p.alg, param, "runtime_ms", cfg.timing ? ms : 0.0, ms));
            return out;
        });
        auto res = collect(outs, "trials");
        res.summary["network"] = net.to_json();
        for (const auto &alg : algorithms) {
            // Trials feasible at every threshold; their mean cost is free of
            // the survivor effect of hard trials dropping out.
            std::vector<char> everywhere(cfg.trials, 1);
            std::vector<std::vector<double>> costs(cfg.thresholds.size(), std::vector<double>(cfg.trials, 0.0));
            for (size_t i = 0; i < points.size(); i++) {
                if (points[i].alg != alg) {
                    continue;
                }
                size_t level = std::find(cfg.thresholds.begin(), cfg.thresholds.end(), points[i].f0) -
                               cfg.thresholds.begin();
                const auto &plan = outs_json(res, i);
                if (plan.is_null()) {
                    everywhere[points[i].trial] = 0;
                } else {
                    costs[level][points[i].trial] = plan.at("cost").get<double>();
                }
            }
            int paired = static_cast<int>(std::count(everywhere.begin(), everywhere.end(), 1));
            for (size_t level = 0; level < cfg.thresholds.size() && paired > 0; level++) {
                double sum = 0.0;
                for (int t = 0; t < cfg.trials; t++) {
                    sum += everywhere[t] ? costs[level][t] : 0.0;
                }
                res.rows.push_back(
                    row(alg, "f0=" + fmt("%.4g", cfg.thresholds[level]), "paired_mean_cost", sum / paired, 0.0));
            }
            for (double f0 : cfg.thresholds) {
                std::string prefix = "f0=" + fmt("%.4g", f0) + ";";
                int feasible = 0;
                int total = 0;
                double cost = 0.0;
                double fid = 0.0;
                for (const auto &r : res.rows) {
                    if (r.algorithm != alg || r.parameter.rfind(prefix, 0) != 0) {
                        continue;
                    }
                    if (r.metric == "feasible") {
                        total++;
                        feasible += r.value > 0.0;
                    } else if (r.metric == "cost") {
                        cost += r.value;
                    } else if (r.metric == "fidelity") {
                        fid += r.value;
                    }
                }
                std::string param = "f0=" + fmt("%.4g", f0);
                res.rows.push_back(row(alg, param, "success_prob", total ? double(feasible) / total : 0.0, 0.0));
                if (feasible > 0) {
                    res.rows.push_back(row(alg, param, "mean_cost", cost / feasible, 0.0));
                    res.rows.push_back(row(alg, param, "mean_fidelity", fid / feasible, 0.0));
                }
            }
        }
        return res;
    }

    ExperimentResult multiflow() const {
        auto net = generate(cfg.topology);
        FlowRequest proto;
        proto.f0 = cfg.flow_f0;
        proto.weight = cfg.flow_weight;
        proto.candidates = cfg.candidates;
        auto flows = sample_flows(net, cfg.flows, cfg.seed, proto);
        MultiflowParams params;
        params.epsilon = cfg.epsilon;
        params.delta = cfg.delta;
        params.seed = cfg.seed;
        params.route = route_params("ours", cfg.flow_f0);
        ExperimentResult res;
        Stopwatch clock;
        auto sol = multiflow_solve(flows, net, params);
        double ms = clock.ms();
        std::string param = "flows=" + std::to_string(cfg.flows) + ";eps=" + fmt("%.4g", cfg.epsilon);
        res.rows.push_back(row("ours", param, "lp_objective", sol.lp.objective, ms));
        res.rows.push_back(row("ours", param, "total_weight", sol.best ? sol.best->weight : 0.0, ms));
        res.rows.push_back(row("ours", param, "trials", sol.trials, ms));
        res.rows.push_back(row("ours", param, "feasible_trials", sol.feasible_trials, ms));
        for (int k = 0; k < static_cast<int>(flows.size()); k++) {
            res.rows.push_back(row("ours", param + ";flow=" + std::to_string(k), "candidates",
                                   static_cast<double>(sol.candidates[k].size()), ms));
            res.rows.push_back(
                row("ours", param + ";flow=" + std::to_string(k), "selected", sol.best ? sol.best->choice[k] : -1, ms));
        }
        res.summary = {{"flows", flows_to_json(flows, net)}, {"result", sol.to_json(net)}, {"network", net.to_json()}};
        return res;
    }

    static const nlohmann::json &outs_json(const ExperimentResult &res, size_t i) {
        return res.summary.at("trials").at(i).at("plan");
    }

    ExperimentResult collect(std::vector<TaskOutput> &outs, const char *key) const {
        ExperimentResult res;
        nlohmann::json records = nlohmann::json::array();
        for (auto &o : outs) {
            for (auto &r : o.rows) {
                res.rows.push_back(std::move(r));
            }
            records.push_back(std::move(o.record));
        }
        res.summary[key] = std::move(records);
        return res;
    }
};

}  // namespace

void ExperimentConfig::validate() const {
    if (!kScenarios.count(scenario)) {
        throw std::invalid_argument("unknown scenario " + scenario);
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    for (const auto &alg : resolved_algorithms()) {
        if (!known_algorithm(scenario, alg)) {
            throw std::invalid_argument("algorithm " + alg + " is not available for " + scenario);
        }
    }
    if (scenario == "purify-compare" && (max_pairs < 2 || max_pairs > 64)) {
        throw std::invalid_argument("max_pairs must be in [2, 64]");
    }
    if (scenario == "strategy-compare" && (pairs_per_hop < 1 || pairs_per_hop > kMaxPolicyPairs ||
                                           !(chain_fidelity_lo > 0.25 && chain_fidelity_lo <= chain_fidelity_hi &&
                                             chain_fidelity_hi <= 1.0))) {
        throw std::invalid_argument("chain settings out of range");
    }
    if (scenario == "route-compare" || scenario == "multiflow") {
        topology.validate();
    }
}

std::vector<std::string> ExperimentConfig::resolved_algorithms() const {
    if (!algorithms.empty()) {
        return algorithms;
    }
    if (scenario == "purify-compare") {
        return {"ours", "symmetric", "pumping"};
    }
    if (scenario == "strategy-compare") {
        return {"pas", "sps2", "sps3", "sap"};
    }
    if (scenario == "route-compare") {
        return {"ours", "q-step"};
    }
    return {"ours"};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json &j) {
    ExperimentConfig c;
    c.scenario = j.at("scenario").get<std::string>();
    c.algorithms = j.value("algorithms", c.algorithms);
    c.seed = j.value("seed", c.seed);
    c.trials = j.value("trials", c.trials);
    c.output = j.value("output", c.output);
    c.workers = j.value("workers", c.workers);
    c.timing = j.value("timing", c.timing);
    c.link_fidelities = j.value("link_fidelities", c.link_fidelities);
    c.max_pairs = j.value("max_pairs", c.max_pairs);
    c.delta_f = j.value("delta_f", c.delta_f);
    c.delta_xi = j.value("delta_xi", c.delta_xi);
    if (j.contains("chain")) {
        const auto &ch = j.at("chain");
        c.lengths = ch.value("lengths", c.lengths);
        c.pairs_per_hop = ch.value("pairs_per_hop", c.pairs_per_hop);
        c.chain_fidelity_lo = ch.value("fidelity_lo", c.chain_fidelity_lo);
        c.chain_fidelity_hi = ch.value("fidelity_hi", c.chain_fidelity_hi);
        c.chain_swap_prob = ch.value("swap_prob", c.chain_swap_prob);
    }
    if (j.contains("topology")) {
        c.topology = TopologySpec::from_json(j.at("topology"));
    }
    c.thresholds = j.value("thresholds", c.thresholds);
    c.q0 = j.value("q0", c.q0);
    c.delta_phi = j.value("delta_phi", c.delta_phi);
    c.delta_psi = j.value("delta_psi", c.delta_psi);
    c.delta_q = j.value("delta_q", c.delta_q);
    if (j.contains("multiflow")) {
        const auto &m = j.at("multiflow");
        c.flows = m.value("flows", c.flows);
        c.epsilon = m.value("epsilon", c.epsilon);
        c.delta = m.value("delta", c.delta);
        c.candidates = m.value("rk", c.candidates);
        c.flow_f0 = m.value("f0", c.flow_f0);
        c.flow_weight = m.value("weight", c.flow_weight);
    }
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    return {{"scenario", scenario},
            {"algorithms", resolved_algorithms()},
            {"seed", seed},
            {"trials", trials},
            {"output", output},
            {"workers", workers},
            {"timing", timing},
            {"link_fidelities", link_fidelities},
            {"max_pairs", max_pairs},
            {"delta_f", delta_f},
            {"delta_xi", delta_xi},
            {"chain",
             {{"lengths", lengths},
              {"pairs_per_hop", pairs_per_hop},
              {"fidelity_lo", chain_fidelity_lo},
              {"fidelity_hi", chain_fidelity_hi},
              {"swap_prob", chain_swap_prob}}},
            {"topology", topology.to_json()},
            {"thresholds", thresholds},
            {"q0", q0},
            {"delta_phi", delta_phi},
            {"delta_psi", delta_psi},
            {"delta_q", delta_q},
            {"multiflow",
             {{"flows", flows},
              {"epsilon", epsilon},
              {"delta", delta},
              {"rk", candidates},
              {"f0", flow_f0},
              {"weight", flow_weight}}}};
}

std::string ExperimentResult::csv() const {
    std::string out = "scenario,algorithm,parameter,metric,value,seed,runtime_ms\n";
    for (const auto &r : rows) {
        out += r.scenario + "," + r.algorithm + "," + r.parameter + "," + r.metric + "," + number(r.value) + "," +
               std::to_string(r.seed) + "," + fmt("%.3f", r.runtime_ms) + "\n";
    }
    return out;
}

std::vector<const ResultRow *> ExperimentResult::select(const std::string &algorithm, const std::string &metric) const {
    std::vector<const ResultRow *> out;
    for (const auto &r : rows) {
        if (r.algorithm == algorithm && r.metric == metric) {
            out.push_back(&r);
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg) {
    cfg.validate();
    int workers = cfg.workers > 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    Runner runner{cfg, cfg.resolved_algorithms(), workers};
    ExperimentResult res;
    if (cfg.scenario == "purify-compare") {
        res = runner.purify();
    } else if (cfg.scenario == "strategy-compare") {
        res = runner.strategy();
    } else if (cfg.scenario == "route-compare") {
        res = runner.route();
    } else {
        res = runner.multiflow();
    }
    res.summary["scenario"] = cfg.scenario;
    res.summary["config"] = cfg.to_json();
    return res;
}

void write_experiment(const ExperimentConfig &cfg, const ExperimentResult &res) {
    if (cfg.output.empty()) {
        return;
    }
    std::ofstream csv(cfg.output, std::ios::binary);
    if (!csv) {
        throw std::runtime_error("cannot write " + cfg.output);
    }
    csv << res.csv();
    std::ofstream json(cfg.output + ".json", std::ios::binary);
    if (!json) {
        throw std::runtime_error("cannot write " + cfg.output + ".json");
    }
    json << res.summary.dump(2) << "\n";
}

}  // namespace entroute
