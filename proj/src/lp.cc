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

#include "entroute/lp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entroute {

void LinearProgram::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
    coeffs.resize(objective.size(), 0.0);
    rows.push_back({std::move(coeffs), sense, rhs});
}

void LinearProgram::validate() const {
    for (const auto &row : rows) {
        if (row.coeffs.size() != objective.size()) {
            throw std::invalid_argument("LP row width differs from the objective");
        }
        for (double a : row.coeffs) {
            if (!std::isfinite(a)) {
                throw std::invalid_argument("LP coefficient is not finite");
            }
        }
        if (!std::isfinite(row.rhs)) {
            throw std::invalid_argument("LP right-hand side is not finite");
        }
    }
    for (double c : objective) {
        if (!std::isfinite(c)) {
            throw std::invalid_argument("LP objective is not finite");
        }
    }
}

const char *to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal:
            return "optimal";
        case LpStatus::infeasible:
            return "infeasible";
        case LpStatus::unbounded:
            return "unbounded";
    }
    return "?";
}

namespace {

constexpr double kOptimalityTolerance = 1e-9;
constexpr int kMaxPivots = 200000;

// Row-major tableau [T | rhs] plus a reduced-cost row d_j = c_j - c_B B^-1 A_j.
class Tableau {
   public:
    Tableau(int rows, int cols) : rows_(rows), cols_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, -1) {
    }

    double &at(int r, int c) {
        return t_[r * (cols_ + 1) + c];
    }
    double &rhs(int r) {
        return at(r, cols_);
    }
    double &cost(int c) {
        return at(rows_, c);
    }
    double &value() {
        return at(rows_, cols_);
    }
    std::vector<int> &basis() {
        return basis_;
    }

    void pivot(int r, int c) {
        double p = at(r, c);
        for (int j = 0; j <= cols_; j++) {
            at(r, j) /= p;
        }
        for (int i = 0; i <= rows_; i++) {
            if (i == r) {
                continue;
            }
            double f = at(i, c);
            if (f == 0.0) {
                continue;
            }
            for (int j = 0; j <= cols_; j++) {
                at(i, j) -= f * at(r, j);
            }
            at(i, c) = 0.0;
        }
        basis_[r] = c;
        pivots_++;
        if (pivots_ > kMaxPivots) {
            throw std::runtime_error("simplex exceeded its pivot limit");
        }
    }

    // Installs objective c over the first c.size() columns and prices out
    // the basis.
    void set_objective(const std::vector<double> &c) {
        for (int j = 0; j <= cols_; j++) {
            cost(j) = j < static_cast<int>(c.size()) ? c[j] : 0.0;
        }
        for (int r = 0; r < rows_; r++) {
            double cb = basis_[r] < static_cast<int>(c.size()) ? c[basis_[r]] : 0.0;
            if (cb == 0.0) {
                continue;
            }
            for (int j = 0; j <= cols_; j++) {
                cost(j) -= cb * at(r, j);
            }
        }
    }

    // Returns false when unbounded. Columns >= limit never enter.
    bool optimize(int limit) {
        while (true) {
            int enter = -1;
            for (int j = 0; j < limit; j++) {
                if (cost(j) > kOptimalityTolerance) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) {
                return true;
            }
            int leave = -1;
            double best = 0.0;
            for (int r = 0; r < rows_; r++) {
                double a = at(r, enter);
                if (a <= kLpPivotTolerance) {
                    continue;
                }
                double ratio = rhs(r) / a;
                if (leave < 0 || ratio < best - 1e-12 ||
                    (ratio <= best + 1e-12 && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave < 0) {
                return false;
            }
            pivot(leave, enter);
        }
    }

    int pivots() const {
        return pivots_;
    }

   private:
    int rows_;
    int cols_;
    std::vector<double> t_;
    std::vector<int> basis_;
    int pivots_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram &lp) {
    lp.validate();
    int n = lp.num_vars();
    int m = lp.num_rows();

    // Normalize to rhs >= 0, then: le -> slack, ge -> surplus + artificial,
    // eq -> artificial.
    std::vector<double> sign(m, 1.0);
    std::vector<RowSense> sense(m);
    int slacks = 0;
    int artificials = 0;
    for (int i = 0; i < m; i++) {
        sense[i] = lp.rows[i].sense;
        if (lp.rows[i].rhs < 0.0) {
            sign[i] = -1.0;
            if (sense[i] == RowSense::le) {
                sense[i] = RowSense::ge;
            } else if (sense[i] == RowSense::ge) {
                sense[i] = RowSense::le;
            }
        }
        slacks += sense[i] != RowSense::eq;
        artificials += sense[i] != RowSense::le;
    }
    int art_start = n + slacks;
    int cols = art_start + artificials;
    Tableau tab(m, cols);
    // unit[i]: the column that started as e_i.
    std::vector<int> unit(m);
    int next_slack = n;
    int next_art = art_start;
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < n; j++) {
            tab.at(i, j) = sign[i] * lp.rows[i].coeffs[j];
        }
        tab.rhs(i) = sign[i] * lp.rows[i].rhs;
        if (sense[i] == RowSense::le) {
            tab.at(i, next_slack) = 1.0;
            unit[i] = next_slack++;
        } else {
            if (sense[i] == RowSense::ge) {
                tab.at(i, next_slack++) = -1.0;
            }
            tab.at(i, next_art) = 1.0;
            unit[i] = next_art++;
        }
        tab.basis()[i] = unit[i];
    }

    LpSolution sol;
    if (artificials > 0) {
        std::vector<double> phase1(cols, 0.0);
        for (int j = art_start; j < cols; j++) {
            phase1[j] = -1.0;
        }
        tab.set_objective(phase1);
        tab.optimize(cols);
        if (tab.value() > kLpFeasibilityTolerance) {
            sol.status = LpStatus::infeasible;
            sol.pivots = tab.pivots();
            return sol;
        }
        // Pivot zero-level artificials out where a real column allows it.
        for (int r = 0; r < m; r++) {
            if (tab.basis()[r] < art_start) {
                continue;
            }
            for (int j = 0; j < art_start; j++) {
                if (std::abs(tab.at(r, j)) > kLpPivotTolerance) {
                    tab.pivot(r, j);
                    break;
                }
            }
        }
    }

    tab.set_objective(lp.objective);
    if (!tab.optimize(art_start)) {
        sol.status = LpStatus::unbounded;
        sol.pivots = tab.pivots();
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.x.assign(n, 0.0);
    for (int r = 0; r < m; r++) {
        if (tab.basis()[r] < n) {
            sol.x[tab.basis()[r]] = std::max(0.0, tab.rhs(r));
        }
    }
    sol.objective = 0.0;
    for (int j = 0; j < n; j++) {
        sol.objective += lp.objective[j] * sol.x[j];
    }
    sol.duals.assign(m, 0.0);
    for (int i = 0; i < m; i++) {
        // c_u = 0 for slack and artificial columns, so y_i = -d_u.
        sol.duals[i] = -sign[i] * tab.cost(unit[i]);
    }
    sol.pivots = tab.pivots();
    return sol;
}

LpCertificate certify(const LinearProgram &lp, const LpSolution &sol) {
    LpCertificate cert;
    int n = lp.num_vars();
    if (sol.status != LpStatus::optimal || static_cast<int>(sol.x.size()) != n ||
        static_cast<int>(sol.duals.size()) != lp.num_rows()) {
        cert.primal_violation = cert.dual_violation = cert.gap = INFINITY;
        return cert;
    }
    for (int j = 0; j < n; j++) {
        cert.primal_violation = std::max(cert.primal_violation, -sol.x[j]);
    }
    double dual_value = 0.0;
    std::vector<double> ya(n, 0.0);
    for (int i = 0; i < lp.num_rows(); i++) {
        const auto &row = lp.rows[i];
        double lhs = 0.0;
        for (int j = 0; j < n; j++) {
            lhs += row.coeffs[j] * sol.x[j];
            ya[j] += sol.duals[i] * row.coeffs[j];
        }
        double y = sol.duals[i];
        switch (row.sense) {
            case RowSense::le:
                cert.primal_violation = std::max(cert.primal_violation, lhs - row.rhs);
                cert.dual_violation = std::max(cert.dual_violation, -y);
                break;
            case RowSense::ge:
                cert.primal_violation = std::max(cert.primal_violation, row.rhs - lhs);
                cert.dual_violation = std::max(cert.dual_violation, y);
                break;
            case RowSense::eq:
                cert.primal_violation = std::max(cert.primal_violation, std::abs(lhs - row.rhs));
                break;
        }
        dual_value += y * row.rhs;
    }
    for (int j = 0; j < n; j++) {
        cert.dual_violation = std::max(cert.dual_violation, lp.objective[j] - ya[j]);
    }
    cert.gap = std::abs(sol.objective - dual_value);
    return cert;
}

}  // namespace entroute
