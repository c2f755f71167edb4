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

#include "entroute/pair_algebra.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace entroute {

namespace {

void check_werner(double f, const char *who) {
    if (!(f >= kMinWernerFidelity && f <= 1.0)) {
        throw std::domain_error(std::string(who) + ": fidelity " + std::to_string(f) + " outside [0.25, 1]");
    }
}

}  // namespace

double werner_parameter(double f) {
    check_werner(f, "werner_parameter");
    return (4.0 * f - 1.0) / 3.0;
}

double purified_fidelity(double f1, double f2) {
    check_werner(f1, "purified_fidelity");
    check_werner(f2, "purified_fidelity");
    // Evaluate on the ordered pair so that F(a, b) and F(b, a) agree exactly.
    double a = std::min(f1, f2);
    double b = std::max(f1, f2);
    double ab = a * b;
    double num = 10.0 * ab - a - b + 1.0;
    double den = 8.0 * ab - 2.0 * a - 2.0 * b + 5.0;
    return num / den;
}

double purification_success_prob(double f1, double f2) {
    check_werner(f1, "purification_success_prob");
    check_werner(f2, "purification_success_prob");
    double a = std::min(f1, f2);
    double b = std::max(f1, f2);
    return (8.0 * a * b - 2.0 * (a + b) + 5.0) / 9.0;
}

double swap_fidelity(std::span<const double> fidelities) {
    if (fidelities.empty()) {
        throw std::invalid_argument("swap_fidelity: empty link list");
    }
    for (double f : fidelities) {
        check_werner(f, "swap_fidelity");
    }
    if (fidelities.size() == 1) {
        return fidelities[0];
    }
    double w = 1.0;
    for (double f : fidelities) {
        w *= (4.0 * f - 1.0) / 3.0;
    }
    return (1.0 + 3.0 * w) / 4.0;
}

double swap_fidelity(double f1, double f2) {
    double both[2] = {f1, f2};
    return swap_fidelity(both);
}

double pseudo_fidelity(double f) {
    if (!(f > kMinWernerFidelity && f <= 1.0)) {
        throw std::domain_error("pseudo_fidelity: fidelity " + std::to_string(f) + " outside (0.25, 1]");
    }
    return std::log((4.0 * f - 1.0) / 3.0);
}

double inverse_pseudo_fidelity(double phi) {
    if (!(phi <= 0.0)) {
        throw std::domain_error("inverse_pseudo_fidelity: positive pseudo-fidelity " + std::to_string(phi));
    }
    return (1.0 + 3.0 * std::exp(phi)) / 4.0;
}

double bitflip_purified_fidelity(double f1, double f2) {
    if (!(f1 > 0.0 && f1 <= 1.0 && f2 > 0.0 && f2 <= 1.0)) {
        throw std::domain_error("bitflip_purified_fidelity: fidelity outside (0, 1]");
    }
    double keep = f1 * f2;
    double flip = (1.0 - f1) * (1.0 - f2);
    return keep / (keep + flip);
}

}  // namespace entroute
