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

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>

using namespace entroute;

namespace {

// Best objective over all basic feasible points, by trying every choice of
// n tight constraints. Bounded instances only. nullopt when infeasible.
std::optional<double> vertex_oracle(const LinearProgram &lp) {
    int n = lp.num_vars();
    int m = lp.num_rows();
    int total = m + n;
    std::optional<double> best;
    std::vector<int> pick(n);
    std::function<void(int, int)> rec = [&](int depth, int start) {
        if (depth == n) {
            Eigen::MatrixXd a(n, n);
            Eigen::VectorXd b(n);
            for (int k = 0; k < n; k++) {
                int c = pick[k];
                for (int j = 0; j < n; j++) {
                    a(k, j) = c < m ? lp.rows[c].coeffs[j] : (j == c - m ? 1.0 : 0.0);
                }
                b(k) = c < m ? lp.rows[c].rhs : 0.0;
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
            if (lu.rank() < n) {
                return;
            }
            Eigen::VectorXd x = lu.solve(b);
            for (int j = 0; j < n; j++) {
                if (x(j) < -1e-9) {
                    return;
                }
            }
            for (const auto &row : lp.rows) {
                double lhs = 0.0;
                for (int j = 0; j < n; j++) {
                    lhs += row.coeffs[j] * x(j);
                }
                bool ok = row.sense == RowSense::le   ? lhs <= row.rhs + 1e-9
                          : row.sense == RowSense::ge ? lhs >= row.rhs - 1e-9
                                                      : std::abs(lhs - row.rhs) <= 1e-9;
                if (!ok) {
                    return;
                }
            }
            double obj = 0.0;
            for (int j = 0; j < n; j++) {
                obj += lp.objective[j] * x(j);
            }
            if (!best || obj > *best) {
                best = obj;
            }
            return;
        }
        for (int c = start; c < total; c++) {
            pick[depth] = c;
            rec(depth + 1, c + 1);
        }
    };
    rec(0, 0);
    return best;
}

}  // namespace

TEST(Lp, textbook_example) {
    LinearProgram lp;
    lp.objective = {3, 2};
    lp.add_row({1, 1}, RowSense::le, 4);
    lp.add_row({1, 3}, RowSense::le, 6);
    lp.add_row({1, 0}, RowSense::le, 3);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 11.0, 1e-12);
    EXPECT_NEAR(sol.x[0], 3.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 1.0, 1e-12);
    EXPECT_TRUE(certify(lp, sol).ok());
}

TEST(Lp, shared_budget_two_variables) {
    // 2 x1 + 2 x2 <= 3 with x <= 1: the optimum is the face x1 + x2 = 1.5.
    LinearProgram lp;
    lp.objective = {1, 1};
    lp.add_row({2, 2}, RowSense::le, 3);
    lp.add_row({1, 0}, RowSense::le, 1);
    lp.add_row({0, 1}, RowSense::le, 1);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 1.5, 1e-12);
    EXPECT_NEAR(sol.x[0] + sol.x[1], 1.5, 1e-12);
    EXPECT_TRUE(certify(lp, sol).ok());
}

TEST(Lp, infeasible_and_unbounded) {
    LinearProgram bad;
    bad.objective = {1};
    bad.add_row({1}, RowSense::ge, 2);
    bad.add_row({1}, RowSense::le, 1);
    EXPECT_EQ(solve(bad).status, LpStatus::infeasible);

    LinearProgram open;
    open.objective = {1, 0};
    open.add_row({1, -1}, RowSense::le, 1);
    EXPECT_EQ(solve(open).status, LpStatus::unbounded);
}

TEST(Lp, equality_and_negative_rhs) {
    // max x + y, x + y = 2, x - y <= -1  ->  y >= x + 1.
    LinearProgram lp;
    lp.objective = {1, 2};
    lp.add_row({1, 1}, RowSense::eq, 2);
    lp.add_row({1, -1}, RowSense::le, -1);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 4.0, 1e-12);
    EXPECT_NEAR(sol.x[1], 2.0, 1e-12);
    EXPECT_TRUE(certify(lp, sol).ok());
}

TEST(Lp, beale_cycling_example_terminates) {
    LinearProgram lp;
    lp.objective = {0.75, -20, 0.5, -6};
    lp.add_row({0.25, -8, -1, 9}, RowSense::le, 0);
    lp.add_row({0.5, -12, -0.5, 3}, RowSense::le, 0);
    lp.add_row({0, 0, 1, 0}, RowSense::le, 1);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 1.25, 1e-12);
    EXPECT_TRUE(certify(lp, sol).ok());
}

TEST(Lp, zero_objective_gives_zero) {
    LinearProgram lp;
    lp.objective = {0, 0};
    lp.add_row({1, 1}, RowSense::le, 1);
    auto sol = solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_EQ(sol.objective, 0.0);
}

TEST(Lp, random_programs_match_vertex_enumeration) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coef(-3, 5);
    std::uniform_int_distribution<int> sense(0, 5);
    int optimal = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 400; trial++) {
        int n = 1 + trial % 4;
        int m = 1 + (trial / 4) % 4;
        LinearProgram lp;
        for (int j = 0; j < n; j++) {
            lp.objective.push_back(coef(rng));
        }
        for (int i = 0; i < m; i++) {
            std::vector<double> row;
            for (int j = 0; j < n; j++) {
                row.push_back(coef(rng));
            }
            int s = sense(rng);
            RowSense rs = s < 4 ? RowSense::le : s == 4 ? RowSense::ge : RowSense::eq;
            lp.add_row(row, rs, coef(rng) * 1.5);
        }
        lp.add_row(std::vector<double>(n, 1.0), RowSense::le, 10);
        auto oracle = vertex_oracle(lp);
        auto sol = solve(lp);
        if (!oracle) {
            EXPECT_EQ(sol.status, LpStatus::infeasible) << trial;
            infeasible++;
            continue;
        }
        optimal++;
        ASSERT_EQ(sol.status, LpStatus::optimal) << trial;
        EXPECT_NEAR(sol.objective, *oracle, 1e-7) << trial;
        auto cert = certify(lp, sol);
        EXPECT_TRUE(cert.ok()) << trial << " " << cert.primal_violation << " " << cert.dual_violation << " "
                               << cert.gap;
    }
    EXPECT_GT(optimal, 100);
    EXPECT_GT(infeasible, 5);
}
