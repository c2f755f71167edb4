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

#ifndef ENTROUTE_EXPERIMENT_H
#define ENTROUTE_EXPERIMENT_H

#include <cstdint>
#include <string>
#include <vector>

#include "entroute/topology.h"
#include "json.hpp"

/// Batch experiments producing CSV rows and a JSON summary.
namespace entroute {

struct ExperimentConfig {
    /// purify-compare | strategy-compare | route-compare | multiflow
    std::string scenario = "purify-compare";
    /// Defaults per scenario when empty.
    std::vector<std::string> algorithms;
    std::uint64_t seed = 1;
    int trials = 20;
    /// CSV path; the summary goes next to it with a .json suffix. Empty
    /// writes nothing.
    std::string output;
    /// 0 picks the hardware concurrency.
    int workers = 0;
    /// runtime_ms is written as 0 when false.
    bool timing = true;

    // purify-compare
    std::vector<double> link_fidelities = {0.7, 0.75, 0.8};
    int max_pairs = 12;
    double delta_f = 1e-4;
    double delta_xi = 1e-4;

    // strategy-compare
    std::vector<int> lengths = {6, 9, 12};
    int pairs_per_hop = 2;
    double chain_fidelity_lo = 0.85;
    double chain_fidelity_hi = 0.99;
    double chain_swap_prob = 1.0;

    // route-compare and multiflow
    TopologySpec topology;
    std::vector<double> thresholds = {0.8, 0.85, 0.9};
    double q0 = 1.0;
    double delta_phi = 0.01;
    double delta_psi = 0.01;
    int delta_q = 1;

    // multiflow
    int flows = 10;
    double epsilon = 0.1;
    double delta = 0.05;
    int candidates = 3;
    double flow_f0 = 0.85;
    double flow_weight = 1.0;

    void validate() const;
    /// Algorithms after defaults are applied.
    std::vector<std::string> resolved_algorithms() const;
    static ExperimentConfig from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
};

struct ResultRow {
    std::string scenario;
    std::string algorithm;
    std::string parameter;
    std::string metric;
    double value = 0.0;
    std::uint64_t seed = 0;
    double runtime_ms = 0.0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    nlohmann::json summary;

    /// Header plus one line per row.
    std::string csv() const;
    /// Rows with this algorithm and metric, in order.
    std::vector<const ResultRow *> select(const std::string &algorithm, const std::string &metric) const;
};

/// Per-trial failures become "error" rows and never abort the batch.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Writes cfg.output and its .json summary when cfg.output is set.
void write_experiment(const ExperimentConfig &cfg, const ExperimentResult &res);

}  // namespace entroute

#endif
