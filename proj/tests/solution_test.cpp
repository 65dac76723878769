// Copyright 2026 The edgesel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "edgesel/construction.hpp"
#include "edgesel/solution.hpp"
#include "oracles.hpp"

namespace edgesel {
    namespace {

        TEST(Gap, PublishedValues) {
            EXPECT_NEAR(compute_gap(193683, 192848), 0.433, 0.001);
            EXPECT_EQ(compute_gap(27591, 27591), 0.0);
            EXPECT_THROW((void)compute_gap(1.0, 0.0), std::invalid_argument);
        }

        TEST(Solution, CostMatchesScratchComputation) {
            const Instance inst = testing::random_cvrp(3, 12);
            const std::vector<std::vector<int>> routes{{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}};
            const Solution sol(inst, routes);
            EXPECT_EQ(sol.cost(), testing::scratch_cost(inst, routes));
            EXPECT_EQ(sol.num_routes(), 3);
        }

        TEST(Solution, EvaluateReportsViolations) {
            const Instance inst = testing::random_cvrp(3, 6, 3);
            const Solution missing(inst, {{1, 2, 3}});
            const auto ev = evaluate(missing);
            EXPECT_FALSE(ev.feasible);
            EXPECT_TRUE(std::ranges::any_of(ev.violations, [](const Violation& v) {
                return v.kind == Violation::Kind::kMissing;
            }));
            const Solution dup(inst, {{1, 2, 3}, {3, 4, 5, 6}});
            EXPECT_TRUE(std::ranges::any_of(evaluate(dup).violations, [](const Violation& v) {
                return v.kind == Violation::Kind::kDuplicate;
            }));
            const Solution over(inst, {{1, 2, 3, 4, 5, 6}});
            const auto ov = evaluate(over);
            const bool cap = std::ranges::any_of(ov.violations, [](const Violation& v) {
                return v.kind == Violation::Kind::kCapacity;
            });
            EXPECT_EQ(cap, inst.total_demand() > inst.capacity());
        }

        TEST(Solution, EdgesIncludeDepotLinks) {
            const Instance inst = testing::random_cvrp(1, 4);
            const Solution sol(inst, {{1, 2}, {3}, {4}});
            const EdgeSet e = edges_of(sol);
            EXPECT_EQ(e.size(), 7U);
            EXPECT_TRUE(e.contains(Edge::make(2, 1)));
            EXPECT_EQ(e.count(Edge::make(0, 3)), 2U);
            EXPECT_EQ(e.customer_edges().size(), 1U);
        }

        TEST(Solution, TextRoundTrip) {
            const Instance inst = testing::random_cvrp(4, 9);
            const Solution sol(inst, {{3, 1, 2}, {4, 5, 6}, {7, 9, 8}});
            const Solution back = parse_solution(inst, render_solution(sol));
            EXPECT_TRUE(same_routes(sol, back));
            EXPECT_EQ(back.cost(), sol.cost());
        }

        TEST(TimeWindows, WaitingAndWarp) {
            std::vector<Node> nodes{{0, 0, 0, 0, 0, 100, 0}, {1, 10, 0, 1, 20, 30, 5}, {2, 20, 0, 1, 0, 25, 0}};
            const Instance inst("tw", ProblemKind::kCvrptw, 10, nodes, DistanceMode::kExact);
            const std::vector<int> forward{1, 2};
            EXPECT_FALSE(tw_feasible(inst, forward));
            EXPECT_NEAR(time_warp(inst, forward), 10.0, 1e-9);
            const std::vector<int> single{1};
            EXPECT_TRUE(tw_feasible(inst, single));
            EXPECT_EQ(time_warp(inst, single), 0.0);
        }

        TEST(Construction, SavingsFeasibleAndBetterThanStars) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const Instance inst = testing::random_cvrp(seed, 40, 5);
                const Solution sol = savings_construct(inst);
                EXPECT_TRUE(evaluate(sol).feasible);
                double stars = 0.0;
                for (int c = 1; c < inst.size(); ++c) {
                    stars += 2 * inst.distance(0, c);
                }
                EXPECT_LE(sol.cost(), stars);
                const Solution full = savings_construct(inst, false);
                EXPECT_TRUE(evaluate(full).feasible);
            }
        }

        TEST(Construction, SweepFeasible) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const Instance inst = testing::random_cvrp(seed, 30, 4);
                EXPECT_TRUE(evaluate(sweep_construct(inst)).feasible);
            }
        }

        TEST(Construction, GreedySplitKeepsOrderAndCapacity) {
            const Instance inst = testing::random_cvrp(8, 25, 4);
            std::vector<int> tour(25);
            std::iota(tour.begin(), tour.end(), 1);
            const Solution sol = greedy_split(inst, tour);
            EXPECT_TRUE(evaluate(sol).feasible);
            EXPECT_EQ(giant_tour(sol), tour);
            EXPECT_GE(sol.num_routes(), greedy_route_estimate(inst));
        }

        TEST(Construction, GreedyRouteEstimateIsCeil) {
            std::vector<Node> nodes{{0, 0, 0, 0}, {1, 1, 0, 4}, {2, 2, 0, 4}, {3, 3, 0, 3}};
            const Instance inst("est", ProblemKind::kCvrp, 5, nodes);
            EXPECT_EQ(greedy_route_estimate(inst), 3);
        }

        TEST(Split, OptimalOverAllCutPatterns) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const Instance inst = testing::random_cvrp(70 + seed, 9, 3);
                std::vector<int> tour(9);
                std::iota(tour.begin(), tour.end(), 1);
                const SplitWeights w{3.0, 1.0, 10.0};
                double best = std::numeric_limits<double>::infinity();
                for (unsigned mask = 0; mask < (1U << 8); ++mask) {
                    double cost = 0.0;
                    std::vector<int> route;
                    for (std::size_t k = 0; k < tour.size(); ++k) {
                        route.push_back(tour[k]);
                        if (k + 1 == tour.size() || (mask >> k & 1U) != 0) {
                            int load = 0;
                            for (const int c : route) {
                                load += inst.demand(c);
                            }
                            cost += route_length(inst, route) + w.capacity_weight * std::max(0, load - inst.capacity());
                            route.clear();
                        }
                    }
                    best = std::min(best, cost);
                }
                const Solution sol = split_tour(inst, tour, w);
                double excess = 0.0;
                for (const auto& r : sol.routes()) {
                    excess += std::max(0, r.load - inst.capacity());
                }
                EXPECT_NEAR(sol.cost() + w.capacity_weight * excess, best, 1e-9);
                EXPECT_EQ(giant_tour(sol), tour);
            }
        }

    }  // namespace
}  // namespace edgesel
