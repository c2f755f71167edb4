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


#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "entroute/experiment.h"
#include "entroute/flow.h"
#include "entroute/multiflow.h"
#include "entroute/network.h"
#include "entroute/purification.h"
#include "entroute/routing.h"
#include "entroute/swap_strategy.h"
#include "entroute/topology.h"
#include "entroute/verify.h"

using namespace entroute;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> env_seed() {
    const char *s = std::getenv("ENTROUTE_SEED");
    if (!s || !*s) {
        return std::nullopt;
    }
    errno = 0;
    char *end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (errno != 0 || *end != '\0' || *s == '-') {
        throw UsageError(std::string("ENTROUTE_SEED is not an unsigned integer: ") + s);
    }
    return v;
}

// flag > ENTROUTE_SEED > fallback
std::uint64_t pick_seed(const CLI::Option *flag, std::uint64_t flag_value, std::uint64_t fallback) {
    if (flag->count() > 0) {
        return flag_value;
    }
    return env_seed().value_or(fallback);
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Accepts either a file path or inline JSON.
json load_json(const std::string &arg) {
    auto first = arg.find_first_not_of(" \t\r\n");
    bool inline_json = first != std::string::npos && (arg[first] == '{' || arg[first] == '[');
    return json::parse(inline_json ? arg : slurp(arg));
}

void emit(const std::string &text, const std::string &out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write " + out);
    }
    f << text;
}

void emit(const json &j, const std::string &out) {
    emit(j.dump(2) + "\n", out);
}

json tree_record(const PurificationTree &tree, int n, double f_e) {
    TreeEvaluation ev = evaluate_tree(tree, f_e);
    int b = tree.leaves();
    return {{"tree", tree.str()},
            {"tree_json", tree.to_json()},
            {"exact_fidelity", ev.fidelity},
            {"exact_yield", ev.yield},
            {"success_prob", ev.success_prob},
            {"leaves", b},
            {"throughput_per_input_pair", ev.yield / b},
            {"throughput", ev.yield / b * n},
            {"trees", n / b}};
}

std::string stats_csv(const SearchStats &st) {
    std::ostringstream o;
    o << "metric,value\n"
      << "labels_created," << st.labels_created << "\n"
      << "labels_expanded," << st.labels_expanded << "\n"
      << "labels_rejected," << st.labels_rejected << "\n"
      << "labels_removed," << st.labels_removed << "\n"
      << "phi_step_budget," << st.phi_step_budget << "\n"
      << "psi_step_min," << st.psi_step_min << "\n"
      << "psi_step_max," << st.psi_step_max << "\n"
      << "max_alive," << st.max_alive() << "\n";
    return o.str();
}

json stats_json(const SearchStats &st) {
    return {{"labels_created", st.labels_created}, {"labels_expanded", st.labels_expanded},
            {"labels_rejected", st.labels_rejected}, {"labels_removed", st.labels_removed},
            {"phi_step_budget", st.phi_step_budget},  {"max_alive", st.max_alive()}};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"entanglement routing and purification toolkit", "entroute"};
    app.require_subcommand(1);

    // purify
    auto *purify = app.add_subcommand("purify", "single-link purification schedule");
    SchedulerConfig pc;
    std::string p_baseline, p_out;
    bool p_oracle = false;
    purify->add_option("--n", pc.n, "input pairs")->required();
    purify->add_option("--fe", pc.f_e, "elementary fidelity")->required();
    purify->add_option("--ftheta", pc.f_theta, "target fidelity");
    purify->add_option("--df", pc.delta_f, "fidelity step");
    purify->add_option("--dxi", pc.delta_xi, "yield step");
    purify->add_option("--baseline", p_baseline)->check(CLI::IsMember({"symmetric", "pumping"}));
    purify->add_flag("--oracle", p_oracle, "also run the exhaustive search");
    purify->add_option("--out", p_out);

    // strategy
    auto *strategy = app.add_subcommand("strategy", "multi-hop purify/swap policies");
    strategy->set_help_flag("--help", "print help");  // --h is the portion count
    std::string s_chain, s_policy = "pas", s_out;
    int s_h = 1;
    std::optional<double> s_ftheta;
    strategy->add_option("--chain", s_chain, "chain JSON (file or inline)");
    strategy->add_option("--policy", s_policy)->check(CLI::IsMember({"pas", "sap", "sps"}));
    strategy->add_option("--h", s_h, "portions for sps");
    strategy->add_option("--ftheta", s_ftheta, "per-hop target for pas");
    strategy->add_option("--out", s_out);
    auto *scan = strategy->add_subcommand("scan", "grid scan of purify-and-swap vs swap-and-purify");
    double sc_step = 0.01;
    std::string sc_region = "lemma1", sc_out;
    scan->add_option("--step", sc_step);
    scan->add_option("--region", sc_region)->check(CLI::IsMember({"lemma1", "low"}));
    scan->add_option("--out", sc_out);

    // route
    auto *routec = app.add_subcommand("route", "min-cost feasible path");
    std::string r_net, r_src, r_dst, r_stats, r_out, r_method = "optimal";
    RouteParams rp;
    bool r_oracle = false;
    routec->add_option("--net", r_net)->required();
    routec->add_option("--src", r_src)->required();
    routec->add_option("--dst", r_dst)->required();
    routec->add_option("--f0", rp.f0);
    routec->add_option("--q0", rp.q0);
    routec->add_option("--dphi", rp.delta_phi);
    routec->add_option("--dpsi", rp.delta_psi);
    routec->add_option("--deltaq", rp.delta_q);
    routec->add_option("--method", r_method)->check(CLI::IsMember({"optimal", "pumping", "symmetric"}));
    routec->add_flag("--oracle", r_oracle, "compare with exhaustive enumeration");
    routec->add_option("--stats", r_stats, "label statistics CSV");
    routec->add_option("--out", r_out);

    // multiflow
    auto *mf = app.add_subcommand("multiflow", "path selection for many flows");
    std::string m_net, m_flows, m_out;
    MultiflowParams mp;
    std::optional<int> m_rk;
    std::uint64_t m_seed = 0;
    mf->add_option("--net", m_net)->required();
    mf->add_option("--flows", m_flows)->required();
    mf->add_option("--eps", mp.epsilon);
    mf->add_option("--delta", mp.delta);
    mf->add_option("--rk", m_rk, "candidate paths per flow, overrides the flows file");
    auto *m_seed_opt = mf->add_option("--seed", m_seed);
    mf->add_option("--q0", mp.route.q0);
    mf->add_option("--dphi", mp.route.delta_phi);
    mf->add_option("--dpsi", mp.route.delta_psi);
    mf->add_option("--deltaq", mp.route.delta_q);
    mf->add_option("--out", m_out);

    // topo gen
    auto *topo = app.add_subcommand("topo", "topologies");
    topo->require_subcommand(1);
    auto *gen = topo->add_subcommand("gen", "generate a network");
    std::string t_spec, t_out, t_flows_out;
    std::uint64_t t_seed = 0;
    int t_flows = 0;
    gen->add_option("--spec", t_spec, "topology spec JSON (file or inline)")->required();
    auto *t_seed_opt = gen->add_option("--seed", t_seed);
    gen->add_option("--out", t_out);
    gen->add_option("--flows", t_flows, "also sample this many flows");
    gen->add_option("--flows-out", t_flows_out);

    // experiment run
    auto *exp = app.add_subcommand("experiment", "experiment harness");
    exp->require_subcommand(1);
    auto *run = exp->add_subcommand("run", "run a config");
    std::string e_config, e_output;
    std::optional<int> e_workers;
    run->add_option("--config", e_config)->required();
    run->add_option("--output", e_output, "output prefix, overrides the config");
    run->add_option("--workers", e_workers);

    // verify
    auto *ver = app.add_subcommand("verify", "oracle suites");
    std::string v_suite = "all";
    VerifyOptions vo;
    std::uint64_t v_seed = 0;
    bool v_json = false;
    std::string v_out;
    ver->add_option("--suite", v_suite)->check(CLI::IsMember([] {
        auto s = verify_suites();
        s.push_back("all");
        return s;
    }()));
    auto *v_seed_opt = ver->add_option("--seed", v_seed);
    ver->add_option("--lemma1-step", vo.lemma1_step);
    ver->add_option("--theorem3-instances", vo.theorem3_instances);
    ver->add_option("--theorem4-trials", vo.theorem4_trials);
    ver->add_option("--route-trials", vo.route_trials);
    ver->add_flag("--json", v_json);
    ver->add_option("--out", v_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*purify) {
            if (purify->count("--ftheta") == 0) {
                pc.f_theta = pc.f_e;
            }
            pc.validate();
            json j;
            if (!p_baseline.empty()) {
                PurificationTree t = p_baseline == "symmetric" ? symmetric_schedule(pc.n) : pumping_schedule(pc.n);
                j = tree_record(t, pc.n, pc.f_e);
                j["algorithm"] = p_baseline;
                j["feasible"] = evaluate_tree(t, pc.f_e).fidelity >= pc.f_theta;
            } else {
                auto e = schedule(pc);
                j = e ? tree_record(e->tree, pc.n, pc.f_e) : json::object();
                j["algorithm"] = "ours";
                j["feasible"] = e.has_value();
                if (e) {
                    j["f_hat"] = e->f_hat;
                    j["xi_hat"] = e->xi_hat;
                }
            }
            if (p_oracle) {
                auto o = brute_force_optimal(pc.n, pc.f_e, pc.f_theta);
                j["oracle"] = o ? tree_record(*o, pc.n, pc.f_e) : json{{"feasible", false}};
            }
            emit(j, p_out);
            return 0;
        }
        if (*scan) {
            std::ostringstream o;
            o << "a,b,c,d,delta,winner\n";
            char buf[160];
            ScanRegion region = sc_region == "low" ? ScanRegion::low : ScanRegion::lemma1;
            lemma1_scan(sc_step, region, 0.818, [&](const ScanPoint &p) {
                const char *w = p.delta > kScanTieTolerance ? "pas" : p.delta < -kScanTieTolerance ? "sap" : "tie";
                std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.12g,%s\n", p.x[0], p.x[1], p.x[2], p.x[3],
                              p.delta, w);
                o << buf;
            });
            emit(o.str(), sc_out);
            return 0;
        }
        if (*strategy) {
            if (s_chain.empty()) {
                throw UsageError("strategy: --chain is required");
            }
            RepeaterChain chain = RepeaterChain::from_json(load_json(s_chain));
            json j;
            if (s_policy == "pas") {
                auto r = purify_and_swap(chain, s_ftheta);
                j = r ? r->to_json() : json::object();
                j["feasible"] = r.has_value();
            } else if (s_policy == "sap") {
                j = swap_and_purify(chain).to_json();
            } else {
                j = swap_purify_swap(chain, s_h).to_json();
                j["h"] = s_h;
            }
            j["policy"] = s_policy;
            emit(j, s_out);
            return 0;
        }
        if (*routec) {
            QuantumNetwork net = QuantumNetwork::from_json(load_json(r_net));
            int s = net.node_index(r_src);
            int t = net.node_index(r_dst);
            rp.method = purification_method_from_string(r_method);
            rp.validate();
            AuxiliaryGraph aux(net, s, t, rp.delta_q);
            ThroughputTables tables(net, rp, rp.phi_step_budget());
            SearchStats st;
            auto plan = min_cost_path(aux, tables, &st);
            json j = plan ? plan->to_json(net, &aux) : json::object();
            j["feasible"] = plan.has_value();
            j["stats"] = stats_json(st);
            if (r_oracle) {
                if (net.num_nodes() > kBruteForceMaxNodes) {
                    j["oracle"] = {{"status", "skip"}, {"reason", "network too large for enumeration"}};
                } else {
                    auto o = brute_force_route(net, s, t, rp.f0, rp.q0);
                    j["oracle"] = o ? o->to_json(net) : json{{"feasible", false}};
                }
            }
            if (!r_stats.empty()) {
                emit(stats_csv(st), r_stats);
            }
            emit(j, r_out);
            return 0;
        }
        if (*mf) {
            QuantumNetwork net = QuantumNetwork::from_json(load_json(m_net));
            auto flows = flows_from_json(load_json(m_flows), net);
            if (m_rk) {
                for (auto &f : flows) {
                    f.candidates = *m_rk;
                }
            }
            mp.seed = pick_seed(m_seed_opt, m_seed, mp.seed);
            MultiflowResult res = multiflow_solve(flows, net, mp);
            json j = res.to_json(net);
            j["seed"] = mp.seed;
            emit(j, m_out);
            return 0;
        }
        if (*gen) {
            TopologySpec spec = TopologySpec::from_json(load_json(t_spec));
            spec.seed = pick_seed(t_seed_opt, t_seed, spec.seed);
            QuantumNetwork net = generate(spec);
            emit(net.to_json(), t_out);
            if (t_flows > 0) {
                auto flows = sample_flows(net, t_flows, spec.seed);
                emit(flows_to_json(flows, net), t_flows_out);
            }
            return 0;
        }
        if (*run) {
            ExperimentConfig cfg = ExperimentConfig::from_json(load_json(e_config));
            if (auto s = env_seed()) {
                cfg.seed = *s;
            }
            if (!e_output.empty()) {
                cfg.output = e_output;
            }
            if (e_workers) {
                cfg.workers = *e_workers;
            }
            cfg.validate();
            ExperimentResult res = run_experiment(cfg);
            if (cfg.output.empty()) {
                std::cout << res.csv();
            } else {
                write_experiment(cfg, res);
            }
            return 0;
        }
        if (*ver) {
            vo.seed = pick_seed(v_seed_opt, v_seed, vo.seed);
            VerifyReport rep = run_verify(v_suite, vo);
            if (v_json) {
                emit(rep.to_json(), v_out);
            } else {
                emit(rep.text(), v_out);
            }
            return rep.exit_code();
        }
    } catch (const UsageError &e) {
        std::cerr << "entroute: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "entroute: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
