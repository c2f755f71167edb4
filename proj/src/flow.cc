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

#include "entroute/flow.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace entroute {

void FlowRequest::validate(const QuantumNetwork &net) const {
    if (source < 0 || source >= net.num_nodes() || destination < 0 || destination >= net.num_nodes()) {
        throw std::out_of_range("flow endpoint out of range");
    }
    if (source == destination) {
        throw std::invalid_argument("flow " + std::to_string(id) + " has equal endpoints");
    }
    if (!(f0 > 0.25 && f0 <= 1.0)) {
        throw std::domain_error("flow fidelity threshold outside (0.25, 1]");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw std::invalid_argument("flow weight must be positive");
    }
    if (candidates < 1) {
        throw std::invalid_argument("flow needs at least one candidate path");
    }
}

FlowRequest FlowRequest::from_json(const nlohmann::json &j, const QuantumNetwork &net) {
    auto endpoint = [&](const nlohmann::json &x) {
        return net.node_index(x.is_string() ? x.get<std::string>() : x.dump());
    };
    FlowRequest f;
    f.id = j.value("id", 0);
    f.source = endpoint(j.at("src"));
    f.destination = endpoint(j.at("dst"));
    f.f0 = j.value("f0", f.f0);
    f.weight = j.value("weight", f.weight);
    f.candidates = j.value("rk", f.candidates);
    f.validate(net);
    return f;
}

nlohmann::json FlowRequest::to_json(const QuantumNetwork &net) const {
    return {{"id", id},
            {"src", net.node(source).id},
            {"dst", net.node(destination).id},
            {"f0", f0},
            {"weight", weight},
            {"rk", candidates}};
}

std::vector<FlowRequest> flows_from_json(const nlohmann::json &j, const QuantumNetwork &net) {
    std::vector<FlowRequest> flows;
    for (const auto &x : j) {
        flows.push_back(FlowRequest::from_json(x, net));
    }
    return flows;
}

nlohmann::json flows_to_json(const std::vector<FlowRequest> &flows, const QuantumNetwork &net) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &f : flows) {
        j.push_back(f.to_json(net));
    }
    return j;
}

}  // namespace entroute
