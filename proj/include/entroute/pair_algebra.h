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

#ifndef ENTROUTE_PAIR_ALGEBRA_H
#define ENTROUTE_PAIR_ALGEBRA_H

#include <span>

/// Closed-form algebra on Werner-pair fidelities.
///
/// A Werner pair is fully described by its fidelity f with respect to the
/// target Bell state. The Werner parameter w = (4f - 1) / 3 lies in [0, 1]
/// for f in [0.25, 1], which is the domain every function here accepts.
/// Out-of-domain inputs raise std::domain_error; nothing is clamped.
namespace entroute {

inline constexpr double kMinWernerFidelity = 0.25;

/// Fidelity of the surviving pair after one recurrence purification round
/// followed by twirling back to a Werner state. Symmetric bit-for-bit.
double purified_fidelity(double f1, double f2);

/// Probability that the purification round succeeds (both measured qubits
/// agree). Symmetric bit-for-bit.
double purification_success_prob(double f1, double f2);

/// Fidelity of the end-to-end pair obtained by swapping along a chain of
/// links. A single-element list is returned unchanged.
double swap_fidelity(std::span<const double> fidelities);
double swap_fidelity(double f1, double f2);

/// ln((4f - 1) / 3). Additive under swapping. Requires f in (0.25, 1].
double pseudo_fidelity(double f);
/// Inverse of pseudo_fidelity. Requires phi <= 0.
double inverse_pseudo_fidelity(double phi);

/// Werner parameter (4f - 1) / 3.
double werner_parameter(double f);

/// Purification map for a pure bit-flip channel. Unlike the Werner map it is
/// associative: 1 - 1/F = (1 - 1/f1)(1 - 1/f2). Inputs in (0, 1].
double bitflip_purified_fidelity(double f1, double f2);

}  // namespace entroute

#endif
