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

#include <sstream>

#include "edgesel/construction.hpp"
#include "edgesel/metaheuristics.hpp"
#include "oracles.hpp"

namespace edgesel {
    namespace {

        VariantConfig budgeted(std::string_view name, long long iterations, std::uint64_t seed = 0) {
            VariantConfig cfg = lookup_variant(name);
            cfg.seed = seed;
            cfg.time_limit = 60.0;
            cfg.max_iterations = iterations;
            return cfg;
        }

        TEST(Variants, TableMatchesPresets) {
            const auto beta = lookup_variant("FILO2-β");
            EXPECT_EQ(beta.selector, SelectorKind::kGbt);
            EXPECT_EQ(beta.rule.kind, ThresholdRule::Kind::kStochastic);
            EXPECT_DOUBLE_EQ(beta.rule.acceptance, 0.9);
            const auto delta = lookup_variant("FILO2-delta");
            EXPECT_EQ(delta.selector, SelectorKind::kFnn);
            EXPECT_DOUBLE_EQ(delta.rule.acceptance, 0.75);
            const auto tw = lookup_variant("HGS-TW-mu");
            EXPECT_EQ(tw.driver, DriverKind::kHgs);
            EXPECT_DOUBLE_EQ(tw.rule.threshold, 0.85);
            EXPECT_DOUBLE_EQ(tw.aspiration, 0.6);
            EXPECT_EQ(lookup_variant("HGS-μ", 499).name, "HGS-μ");
            EXPECT_EQ(lookup_variant("HGS-mu", 500).name, "HGS-μ-L");
            EXPECT_DOUBLE_EQ(lookup_variant("FILO2").aspiration, 1.0);
            EXPECT_EQ(lookup_variant("FILO2").selector, SelectorKind::kNone);
            EXPECT_THROW((void)lookup_variant("FILO3"), std::invalid_argument);
            EXPECT_EQ(variant_table().size(), 12U);
        }

        TEST(Variants, ValidateRejectsBadParameters) {
            VariantConfig cfg;
            cfg.aspiration = 1.5;
            EXPECT_THROW(cfg.validate(), std::invalid_argument);
            cfg = VariantConfig{};
            cfg.selector = SelectorKind::kGbt;
            cfg.rule.threshold = -0.1;
            EXPECT_THROW(cfg.validate(), std::invalid_argument);
            cfg = VariantConfig{};
            cfg.time_limit = 0.0;
            EXPECT_THROW(cfg.validate(), std::invalid_argument);
            const Instance inst = testing::random_cvrp(1, 10);
            EXPECT_THROW((void)run_variant(inst, lookup_variant("FILO2-alpha")), std::invalid_argument);
        }

        TEST(Variants, DefaultTimeLimitScalesWithCustomers) {
            const Instance inst = testing::random_cvrp(1, 100, 10);
            EXPECT_DOUBLE_EQ(default_time_limit(inst), 240.0);
            EXPECT_DOUBLE_EQ(default_time_limit(inst, 0.5), 120.0);
        }

        class DriverOptimality : public ::testing::TestWithParam<const char*> { };

        TEST_P(DriverOptimality, ReachesBruteForceOnTinyInstances) {
            int optimal = 0;
            for (std::uint64_t seed = 0; seed < 6; ++seed) {
                const Instance inst = testing::random_cvrp(900 + seed, 6 + static_cast<int>(seed % 3), 3);
                const double opt = testing::brute_force_cvrp(inst).cost;
                VariantConfig cfg = lookup_variant(GetParam());
                cfg.seed = seed;
                cfg.time_limit = 5.0;
                cfg.stall_limit = 1000;
                const auto res = run_variant(inst, cfg);
                ASSERT_TRUE(res.record.feasible);
                EXPECT_GE(res.record.best_cost, opt - 1e-9);
                EXPECT_LE(res.record.best_cost, opt * 1.05);
                optimal += res.record.best_cost <= opt + 1e-9 ? 1 : 0;
            }
            EXPECT_GE(optimal, 5);
        }

        INSTANTIATE_TEST_SUITE_P(Baselines, DriverOptimality, ::testing::Values("FILO2", "HGS"));

        TEST(Drivers, DeterministicUnderIterationBudget) {
            const Instance inst = testing::random_cvrp(31, 40, 5);
            for (const char* name : {"FILO2", "HGS"}) {
                const auto a = run_variant(inst, budgeted(name, 150, 4));
                const auto b = run_variant(inst, budgeted(name, 150, 4));
                EXPECT_EQ(a.record.best_cost, b.record.best_cost) << name;
                EXPECT_EQ(a.record.iterations, b.record.iterations) << name;
                EXPECT_EQ(a.best.route_sequences(), b.best.route_sequences()) << name;
            }
        }

        TEST(Drivers, EmptyFixedSetMatchesPlainBaseline) {
            const Instance inst = testing::random_cvrp(32, 35, 4);
            const FixedEdgeSelector none{EdgeSet{}};
            for (const char* name : {"FILO2", "HGS"}) {
                const auto plain = run_variant(inst, budgeted(name, 120, 2));
                VariantConfig cfg = budgeted(name, 120, 2);
                cfg.selector = SelectorKind::kExternal;
                RunContext ctx;
                ctx.selector = &none;
                const auto filtered = run_variant(inst, cfg, ctx);
                EXPECT_EQ(plain.record.best_cost, filtered.record.best_cost) << name;
                EXPECT_EQ(plain.best.route_sequences(), filtered.best.route_sequences()) << name;
            }
        }

        TEST(Drivers, FullyFrozenIlsKeepsConstructedSolution) {
            const Instance inst = testing::random_cvrp(33, 30, 4);
            const auto all = FixedEdgeSelector::all_edges();
            VariantConfig cfg = budgeted("FILO2", 50, 1);
            cfg.selector = SelectorKind::kExternal;
            cfg.aspiration = 1.0;
            RunContext ctx;
            ctx.selector = &all;
            const auto res = run_hybrid_ils(inst, cfg, ctx);
            EXPECT_DOUBLE_EQ(res.record.best_cost, savings_construct(inst).cost());
            EXPECT_DOUBLE_EQ(res.record.best_cost, res.record.initial_cost);
            EXPECT_EQ(res.record.fixed_edges, edges_of(res.best).size());
        }

        TEST(Drivers, IlsKeepsFixedEdgesThroughoutTheSearch) {
            const Instance inst = testing::random_cvrp(34, 30, 4);
            std::vector<Edge> subset;
            Rng rng(9);
            for (const Edge e : edges_of(savings_construct(inst))) {
                if (rng.uniform01() < 0.4) {
                    subset.push_back(e);
                }
            }
            const FixedEdgeSelector selector{EdgeSet(subset)};
            VariantConfig cfg = budgeted("FILO2", 200, 1);
            cfg.selector = SelectorKind::kExternal;
            cfg.aspiration = 1.0;
            EdgeSet fixed;
            std::size_t missing = 0;
            std::size_t accepts = 0;
            RunContext ctx;
            ctx.selector = &selector;
            ctx.on_label = [&](const Solution&, const EdgeLabeling& lab) { fixed = lab.fixed_edges(); };
            ctx.on_accept = [&](const SearchState& state, const TabuEdgeFilter&) {
                ++accepts;
                const EdgeSet now = edges_of(state.to_solution());
                for (const Edge e : fixed) {
                    missing += now.contains(e) ? 0 : 1;
                }
            };
            const auto res = run_variant(inst, cfg, ctx);
            EXPECT_GT(accepts, 0U);
            EXPECT_FALSE(fixed.empty());
            EXPECT_EQ(missing, 0U);
            EXPECT_EQ(res.record.aspired_moves, 0U);
            EXPECT_GT(res.record.blocked_moves, 0U);
        }

        TEST(Drivers, TrajectoryIsStrictlyImproving) {
            const Instance inst = testing::random_cvrp(35, 50, 6);
            for (const char* name : {"FILO2", "HGS"}) {
                RunContext ctx;
                ctx.bks = 1.0;
                const auto res = run_variant(inst, budgeted(name, 300, 3), ctx);
                ASSERT_FALSE(res.record.trajectory.empty());
                for (std::size_t k = 1; k < res.record.trajectory.size(); ++k) {
                    EXPECT_LT(res.record.trajectory[k].cost, res.record.trajectory[k - 1].cost);
                    EXPECT_GE(res.record.trajectory[k].elapsed, res.record.trajectory[k - 1].elapsed);
                }
                EXPECT_DOUBLE_EQ(res.record.trajectory.back().cost, res.record.best_cost);
                EXPECT_NEAR(res.best.cost(), res.record.best_cost, 1e-9);
                EXPECT_LE(res.record.best_cost, res.record.initial_cost);
                ASSERT_TRUE(res.record.gap.has_value());
            }
        }

        TEST(Hgs, SubpopulationStaysBounded) {
            const Instance inst = testing::random_cvrp(36, 40, 5);
            HgsParams p;
            p.population = 10;
            p.generation = 8;
            p.initial_individuals = 30;
            const auto res = run_hybrid_hgs(inst, budgeted("HGS", 200), {}, p);
            EXPECT_LE(res.record.max_subpopulation, p.population + p.generation);
            EXPECT_GT(res.record.max_subpopulation, 0U);
        }

        TEST(Hgs, FindsFeasibleTimeWindowSchedule) {
            std::vector<Node> nodes{{0, 50, 50, 0, 0, 1000, 0}};
            for (int c = 1; c <= 12; ++c) {
                const double x = 50 + 30 * std::cos(c * 0.5);
                const double y = 50 + 30 * std::sin(c * 0.5);
                nodes.push_back({c, x, y, 10, 40.0 * (c % 4), 40.0 * (c % 4) + 120, 10});
            }
            const Instance inst("tw-n13", ProblemKind::kCvrptw, 50, std::move(nodes));
            const auto res = run_variant(inst, budgeted("HGS-TW", 200));
            EXPECT_TRUE(res.record.feasible);
            EXPECT_TRUE(evaluate(res.best).feasible);
        }

        TEST(RouteMin, EmptiesSurplusRoutes) {
            const Instance inst = testing::random_cvrp(37, 20, 2);
            std::vector<std::vector<int>> singles;
            for (int c = 1; c <= 20; ++c) {
                singles.push_back({c});
            }
            SearchState state(Solution(inst, singles));
            const int removed = minimize_routes(state, nullptr, 3, 10);
            EXPECT_GT(removed, 0);
            EXPECT_EQ(state.to_solution().num_routes(), 20 - removed);
            EXPECT_TRUE(evaluate(state.to_solution()).feasible);
            EXPECT_NEAR(state.to_solution().cost(), testing::scratch_cost(inst, state.to_solution().route_sequences()), 1e-6);
        }

        TEST(RunJsonl, RoundTrip) {
            RunRecord r;
            r.instance = "X-n101-k25";
            r.variant = "FILO2-μ";
            r.seed = 3;
            r.initial_cost = 30000.5;
            r.final_cost = 27700;
            r.best_cost = 27650.25;
            r.gap = 0.2138;
            r.elapsed = 12.5;
            r.iterations = 777;
            r.trajectory = {{0.5, 1, 28000, 1.48}, {2.0, 40, 27650.25, 0.2138}};
            r.blocked_moves = 12;
            r.relabels = 2;
            std::stringstream ss;
            write_run_jsonl(ss, r);
            RunRecord other = r;
            other.seed = 4;
            other.gap.reset();
            other.trajectory.clear();
            write_run_jsonl(ss, other);
            const auto back = read_run_jsonl(ss);
            ASSERT_EQ(back.size(), 2U);
            EXPECT_EQ(back[0].variant, "FILO2-μ");
            EXPECT_DOUBLE_EQ(back[0].best_cost, r.best_cost);
            EXPECT_EQ(back[0].trajectory.size(), 2U);
            EXPECT_DOUBLE_EQ(back[0].trajectory[1].cost, 27650.25);
            EXPECT_EQ(back[0].iterations, 777);
            EXPECT_FALSE(back[1].gap.has_value());
            EXPECT_TRUE(back[1].trajectory.empty());
        }

    }  // namespace
}  // namespace edgesel
