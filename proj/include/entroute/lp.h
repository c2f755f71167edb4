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

#ifndef ENTROUTE_LP_H
#define ENTROUTE_LP_H

#include <string>
#include <vector>

/// Small dense linear programs: maximize c.x subject to rows and x >= 0.
namespace entroute {

enum class RowSense { le, ge, eq };

struct LinearProgram {
    struct Row {
        std::vector<double> coeffs;
        RowSense sense = RowSense::le;
        double rhs = 0.0;
    };

    /// Maximized. Its size fixes the number of variables.
    std::vector<double> objective;
    std::vector<Row> rows;

    int num_vars() const {
        return static_cast<int>(objective.size());
    }
    int num_rows() const {
        return static_cast<int>(rows.size());
    }
    void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char *to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    /// One multiplier per row, signed so that y.A >= c holds on the
    /// columns (>= 0 for le rows, <= 0 for ge rows).
    std::vector<double> duals;
    int pivots = 0;
};

constexpr double kLpPivotTolerance = 1e-10;
constexpr double kLpFeasibilityTolerance = 1e-7;

/// Two-phase dense tableau simplex, Bland's rule.
LpSolution solve(const LinearProgram &lp);

struct LpCertificate {
    double primal_violation = 0.0;
    double dual_violation = 0.0;
    /// |c.x - b.y|
    double gap = 0.0;

    bool ok(double feasibility = kLpFeasibilityTolerance, double gap_tolerance = 1e-6) const {
        return primal_violation <= feasibility && dual_violation <= feasibility && gap <= gap_tolerance;
    }
};

/// Checks x and the duals against each other via weak duality.
LpCertificate certify(const LinearProgram &lp, const LpSolution &sol);

}  // namespace entroute

#endif
