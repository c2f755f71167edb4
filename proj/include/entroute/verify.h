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

#ifndef ENTROUTE_VERIFY_H
#define ENTROUTE_VERIFY_H

#include <cstdint>
#include <string>
#include <vector>

#include "entroute/network.h"
#include "json.hpp"

/// Fixed-seed invariant suites wiring the oracles together. Reports carry
/// no timings so that reruns are byte-identical.
namespace entroute {

enum class CheckStatus { pass, fail, skip };

const char *to_string(CheckStatus s);

struct CheckResult {
    std::string suite;
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    double lemma1_step = 0.01;
    int theorem3_instances = 100;
    double theorem3_eps = 0.05;
    int theorem4_trials = 300;
    double theorem4_eps = 0.2;
    int route_trials = 20;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    bool any_failed() const;
    bool any_skipped() const;
    /// 0 all passed, 1 a violation, 2 no violation but a check was skipped
    /// for exceeding an oracle bound.
    int exit_code() const;
    /// One "suite/name: STATUS detail" line per check.
    std::string text() const;
    nlohmann::json to_json() const;
    const CheckResult *find(const std::string &suite, const std::string &name) const;
};

/// algebra, lemma1, scheduler, theorem2-small, theorem3-small, theorem4-mc,
/// route-trend.
const std::vector<std::string> &verify_suites();

/// One suite by name, or "all" for every suite in order. Throws
/// std::invalid_argument for an unknown name.
VerifyReport run_verify(const std::string &suite, const VerifyOptions &opts = {});

struct SmallInstance {
    QuantumNetwork net;
    int s = 0;
    int t = 0;
    double f0 = 0.8;
    double q0 = 1.0;
};

/// Six nodes on a path plus random chords, Q_v <= 4, C_l <= 3, fidelities in
/// [0.8, 0.99], some swap probabilities 0.9.
SmallInstance random_small_instance(std::uint64_t seed);

/// The four-node example: s -v- u -t with Q = (2, 3, 3, 2), link fidelities
/// 0.85, 0.95, 0.85 and capacity 3.
QuantumNetwork example_network();

}  // namespace entroute

#endif
