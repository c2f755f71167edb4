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

#ifndef ENTROUTE_FLOW_H
#define ENTROUTE_FLOW_H

#include <vector>

#include "entroute/network.h"
#include "json.hpp"

namespace entroute {

/// One end-to-end entanglement demand.
struct FlowRequest {
    int id = 0;
    int source = 0;
    int destination = 0;
    double f0 = 0.85;
    double weight = 1.0;
    /// R_k: candidate paths to generate.
    int candidates = 3;

    void validate(const QuantumNetwork &net) const;

    /// {id, src, dst, f0, weight, rk}; src/dst are node ids.
    static FlowRequest from_json(const nlohmann::json &j, const QuantumNetwork &net);
    nlohmann::json to_json(const QuantumNetwork &net) const;
};

std::vector<FlowRequest> flows_from_json(const nlohmann::json &j, const QuantumNetwork &net);
nlohmann::json flows_to_json(const std::vector<FlowRequest> &flows, const QuantumNetwork &net);

}  // namespace entroute

#endif
