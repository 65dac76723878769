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

#include "edgesel/construction.hpp"
#include "edgesel/local_search.hpp"
#include "oracles.hpp"
#include "properties.hpp"

namespace edgesel {
    namespace {

        TEST(Moves, IncrementalCostMatchesScratch) {
            const auto r = testing::random_move_delta_check(3000, 1);
            EXPECT_EQ(r.applied, 3000);
            EXPECT_EQ(r.cost_mismatches, 0);
            EXPECT_EQ(r.delta_mismatches, 0);
        }

        TEST(Moves, ExactDistanceDeltaWithinRounding) {
            const Instance inst = testing::random_cvrp(77, 25, 4, DistanceMode::kExact);
            SearchState state(savings_construct(inst));
            Rng rng(3);
            int applied = 0;
            for (int a = 0; a < 5000; ++a) {
                const auto kind = kAllMoveKinds[static_cast<std::size_t>(rng.uniform_int(0, 3))];
                const auto m = state.make_move(kind, rng.uniform_int(1, 25), rng.uniform_int(0, 25),
                                               rng.uniform_int(0, move_variants(kind) - 1));
                if (!m || !state.evaluate(*m).feasible) {
                    continue;
                }
                const double before = state.distance_cost();
                state.apply(*m);
                ++applied;
                EXPECT_NEAR(before + m->delta, state.distance_cost(), 1e-7);
            }
            const auto routes = state.to_solution().route_sequences();
            EXPECT_NEAR(state.distance_cost(), testing::scratch_cost(inst, routes), 1e-6);
            EXPECT_GT(applied, 100);
        }

        TEST(Moves, CancelledEdgesNeverOverlap) {
            const Instance inst = testing::random_cvrp(5, 20, 3);
            const Solution sol = savings_construct(inst);
            for (const auto kind : kAllMoveKinds) {
                for (const auto& m : enumerate_moves(sol, kind, 10)) {
                    for (const Edge r : m.removed()) {
                        EXPECT_FALSE(r.a == 0 && r.b == 0);
                        EXPECT_EQ(std::ranges::count(m.added(), r), 0) << "kind " << static_cast<int>(kind);
                    }
                }
            }
        }

        TEST(Moves, ApplyMoveMatchesPredictedDelta) {
            const Instance inst = testing::random_cvrp(6, 15, 3);
            const Solution sol = savings_construct(inst);
            for (const auto kind : kAllMoveKinds) {
                for (const auto& m : enumerate_moves(sol, kind, 5)) {
                    const Solution next = apply_move(sol, m);
                    EXPECT_EQ(next.cost(), sol.cost() + m.delta);
                }
            }
        }

        TEST(Filter, FixedEdgesSurviveRandomAcceptedMoves) {
            const auto r = testing::fixed_edge_invariant_check(20, 2000, 4);
            EXPECT_EQ(r.accepted, 2000);
            EXPECT_EQ(r.fixed_edge_removals, 0);
            EXPECT_EQ(r.partition_violations, 0);
            EXPECT_EQ(r.capacity_violations, 0);
        }

        TEST(Filter, AspirationRateMatchesThreshold) {
            const Instance inst = testing::random_cvrp(2, 10, 2);
            SearchState state(savings_construct(inst));
            std::optional<Move> move;
            for (int u = 1; u <= 10 && !move; ++u) {
                move = state.make_move(MoveKind::kRelocate, u, Instance::depot(), 2);
            }
            ASSERT_TRUE(move);
            const EdgeSet fixed(std::vector<Edge>{move->removed()[0]});
            for (const double p : {0.6, 0.8}) {
                TabuEdgeFilter filter(fixed, p, 99);
                int aspired = 0;
                const int draws = 100000;
                for (int k = 0; k < draws; ++k) {
                    const auto r = filter.check(*move);
                    ASSERT_TRUE(r.blocked);
                    aspired += r.aspired ? 1 : 0;
                }
                EXPECT_NEAR(static_cast<double>(aspired) / draws, 1.0 - p, 0.01);
                EXPECT_EQ(filter.blocked_count(), static_cast<std::uint64_t>(draws));
                EXPECT_EQ(filter.aspired_count(), static_cast<std::uint64_t>(aspired));
            }
        }

        TEST(Filter, MovesAvoidingFixedEdgesAreNotBlocked) {
            const Instance inst = testing::random_cvrp(12, 20, 3);
            const Solution sol = savings_construct(inst);
            const EdgeSet fixed(std::vector<Edge>{edges_of(sol).edges()[0]});
            TabuEdgeFilter filter(fixed, 1.0, 0);
            for (const auto& m : enumerate_moves(sol, MoveKind::kSwap, 10)) {
                const bool touches = std::ranges::any_of(m.removed(), [&](Edge e) { return fixed.contains(e); });
                EXPECT_EQ(filter.check(m).blocked, touches);
            }
        }

        TEST(Descend, ReachesLocalOptimum) {
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const Instance inst = testing::random_cvrp(seed, 30, 4);
                SearchOptions so;
                so.gamma = 10;
                const Solution start = savings_construct(inst);
                const Solution out = descend(start, nullptr, so);
                EXPECT_LE(out.cost(), start.cost());
                EXPECT_TRUE(evaluate(out).feasible);
                const SearchState state(out);
                for (const auto kind : kAllMoveKinds) {
                    for (const auto& m : enumerate_moves(out, kind, 10)) {
                        const auto ev = state.evaluate(m);
                        EXPECT_FALSE(ev.feasible && ev.penalized_delta < -1e-9);
                    }
                }
            }
        }

        TEST(Descend, EmptyFilterMatchesNoFilter) {
            const Instance inst = testing::random_cvrp(21, 40, 5);
            SearchOptions so;
            so.shuffle = true;
            so.seed = 5;
            TabuEdgeFilter empty;
            const Solution a = descend(savings_construct(inst), nullptr, so);
            const Solution b = descend(savings_construct(inst), &empty, so);
            EXPECT_TRUE(same_routes(a, b));
        }

        TEST(Descend, FullyFrozenSolutionIsUnchanged) {
            const Instance inst = testing::random_cvrp(22, 30, 4);
            const Solution start = sweep_construct(inst);
            TabuEdgeFilter filter(edges_of(start), 1.0, 0);
            SearchOptions so;
            const Solution out = descend(start, &filter, so);
            EXPECT_TRUE(same_routes(start, out));
            EXPECT_GT(filter.blocked_count(), 0U);
        }

        TEST(Descend, OnAcceptSeesFixedEdges) {
            const Instance inst = testing::random_cvrp(23, 35, 4);
            const Solution start = sweep_construct(inst);
            std::vector<Edge> half;
            const auto all = edges_of(start).customer_edges();
            for (std::size_t k = 0; k < all.size(); k += 2) {
                half.push_back(all.edges()[k]);
            }
            const EdgeSet fixed(half);
            TabuEdgeFilter filter(fixed, 1.0, 0);
            SearchOptions so;
            int calls = 0;
            so.on_accept = [&](const SearchState& st, const Move&) {
                ++calls;
                const EdgeSet present = edges_of(st.to_solution());
                for (const Edge e : fixed) {
                    ASSERT_TRUE(present.contains(e));
                }
            };
            (void)descend(start, &filter, so);
            EXPECT_GT(calls, 0);
        }

        TEST(Descend, SoftPolicyLowersPenalizedCost) {
            const Instance inst = testing::random_cvrp(24, 30, 4);
            std::vector<int> tour(30);
            std::iota(tour.begin(), tour.end(), 1);
            // One overloaded route.
            const Solution start(inst, {tour});
            SearchState state(start, {false, 50.0, 0.0});
            const double before = state.penalized_cost();
            SearchOptions so;
            so.policy = {false, 50.0, 0.0};
            descend(state, nullptr, so);
            EXPECT_LT(state.penalized_cost(), before);
            EXPECT_TRUE(state.feasible());
        }

        TEST(Descend, AnnealingThenPolishStaysFeasible) {
            const Instance inst = testing::random_cvrp(25, 40, 5);
            SearchOptions so;
            so.acceptance = Acceptance::kSimulatedAnnealing;
            so.annealing.steps = 3000;
            so.seed = 8;
            const Solution out = descend(savings_construct(inst), nullptr, so);
            EXPECT_TRUE(evaluate(out).feasible);
            const Solution again = descend(savings_construct(inst), nullptr, so);
            EXPECT_TRUE(same_routes(out, again));
        }

        TEST(Descend, TimeWindowsStayFeasible) {
            std::vector<Node> nodes{{0, 50, 50, 0, 0, 1000, 0}};
            Rng rng(4);
            for (int c = 1; c <= 15; ++c) {
                const double open = rng.uniform(0, 400);
                nodes.push_back({c, rng.uniform(0, 100), rng.uniform(0, 100), 1, open, open + 200, 10});
            }
            const Instance inst("tw15", ProblemKind::kCvrptw, 5, nodes, DistanceMode::kExact);
            std::vector<std::vector<int>> singles;
            for (int c = 1; c <= 15; ++c) {
                singles.push_back({c});
            }
            const Solution start(inst, singles);
            ASSERT_TRUE(evaluate(start).feasible);
            SearchOptions so;
            const Solution out = descend(start, nullptr, so);
            EXPECT_TRUE(evaluate(out).feasible);
            EXPECT_LT(out.cost(), start.cost());
        }

        TEST(RandomWalk, KeepsFeasibilityAndFixedEdges) {
            const Instance inst = testing::random_cvrp(26, 30, 4);
            const Solution start = savings_construct(inst);
            std::vector<Edge> every_third;
            const auto customer = edges_of(start).customer_edges();
            for (std::size_t k = 0; k < customer.size(); k += 3) {
                every_third.push_back(customer.edges()[k]);
            }
            const EdgeSet fixed(every_third);
            TabuEdgeFilter filter(fixed, 1.0, 0);
            SearchState state(start);
            Rng rng(1);
            const auto applied = random_walk(state, &filter, 50, 10, rng);
            EXPECT_GT(applied, 0U);
            EXPECT_TRUE(state.feasible());
            const EdgeSet present = edges_of(state.to_solution());
            for (const Edge e : fixed) {
                EXPECT_TRUE(present.contains(e));
            }
        }

    }  // namespace
}  // namespace edgesel
