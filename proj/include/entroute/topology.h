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

#ifndef ENTROUTE_TOPOLOGY_H
#define ENTROUTE_TOPOLOGY_H

#include <cstdint>
#include <vector>

#include "entroute/flow.h"
#include "entroute/network.h"
#include "json.hpp"

/// Seeded network generators for experiments.
namespace entroute {

enum class TopologyKind { waxman, grid };

struct TopologySpec {
    TopologyKind kind = TopologyKind::grid;
    // waxman
    int nodes = 300;
    double alpha = 0.4;
    double beta = 0.2;
    double domain_size = 1.0;
    // grid
    int rows = 5;
    int cols = 5;

    int capacity = 10;
    /// Link fidelities: normal(mu, sigma) truncated to [lo, hi] by rejection.
    double fidelity_mu = 0.9;
    double fidelity_sigma = 0.05;
    double fidelity_lo = 0.8;
    double fidelity_hi = 1.0;
    /// Q_v = degree * qubits_per_neighbor, with 0 meaning the link capacity,
    /// unless fixed_qubits > 0.
    int qubits_per_neighbor = 0;
    int fixed_qubits = 0;
    double swap_prob = 1.0;
    std::uint64_t seed = 1;
    /// Waxman draws until connected, at most this many times.
    int max_attempts = 64;

    void validate() const;
    static TopologySpec from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
};

/// Deterministic per spec. Throws std::runtime_error when no connected
/// Waxman graph turns up within max_attempts.
QuantumNetwork generate(const TopologySpec &spec);

/// count distinct unordered endpoint pairs, uniform over node pairs, with
/// the remaining fields copied from prototype and ids 0..count-1.
std::vector<FlowRequest> sample_flows(const QuantumNetwork &net, int count, std::uint64_t seed,
                                      const FlowRequest &prototype = {});

}  // namespace entroute

#endif
