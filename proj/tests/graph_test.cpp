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
#include <cmath>
#include <numeric>

#include "edgesel/construction.hpp"
#include "edgesel/convnet.hpp"
#include "edgesel/selector_graph.hpp"
#include "convnet_checks.hpp"
#include "oracles.hpp"

namespace edgesel {
    namespace {

        TEST(GraphBatch, FullGraphHasAllPairs) {
            const Instance inst = testing::random_cvrp(1, 9, 2);
            GraphOptions go;
            go.mode = GraphMode::kFull;
            const auto g = build_graph(inst, go);
            EXPECT_EQ(g.num_nodes(), 10U);
            EXPECT_EQ(g.num_edges(), 45U);
            for (std::size_t k = 0; k < g.num_nodes() * 3; ++k) {
                EXPECT_GE(g.node_features[k], 0.0);
                EXPECT_LE(g.node_features[k], 1.0);
            }
        }

        TEST(GraphBatch, KnnEdgesSortedUniqueSymmetricUnion) {
            const Instance inst = testing::random_cvrp(2, 40, 4);
            GraphOptions go;
            go.k = 5;
            const auto g = build_graph(inst, go);
            EXPECT_TRUE(std::ranges::is_sorted(g.edges));
            EXPECT_EQ(std::ranges::adjacent_find(g.edges), g.edges.end());
            for (const auto& [a, b] : g.edges) {
                EXPECT_LT(a, b);
            }
            // Every node keeps an edge to each of its k nearest neighbors.
            for (int i = 0; i < inst.size(); ++i) {
                std::vector<std::pair<double, int>> cand;
                for (int j = 0; j < inst.size(); ++j) {
                    if (j != i) {
                        const double dx = inst.node(i).x - inst.node(j).x;
                        const double dy = inst.node(i).y - inst.node(j).y;
                        cand.emplace_back(std::hypot(dx, dy), j);
                    }
                }
                std::ranges::sort(cand);
                for (int r = 0; r < 5; ++r) {
                    EXPECT_TRUE(g.find_edge(i, cand[static_cast<std::size_t>(r)].second));
                }
            }
            EXPECT_LE(g.num_edges(), static_cast<std::size_t>(5 * inst.size()));
            go.k = inst.size();
            EXPECT_THROW((void)build_graph(inst, go), std::invalid_argument);
            go.k = 0;
            EXPECT_THROW((void)build_graph(inst, go), std::invalid_argument);
        }

        TEST(GraphBatch, SolutionEdgesMatchRouteLengths) {
            const auto fx = testing::precision_fixture();
            const Solution sol(fx.instance, fx.labeled);
            GraphOptions go;
            go.mode = GraphMode::kSolutionEdges;
            const auto g = build_graph(fx.instance, go, &sol);
            std::size_t expected = 0;
            for (const auto& r : fx.labeled) {
                expected += r.size() + 1;
            }
            EXPECT_EQ(g.num_edges(), expected);
            for (const Edge e : edges_of(sol)) {
                EXPECT_TRUE(g.find_edge(e.a, e.b));
            }
            EXPECT_THROW((void)build_graph(fx.instance, go, nullptr), std::invalid_argument);
        }

        TEST(GraphBatch, TruncationKeepsDepotNearestNodes) {
            const Instance inst = generate_instance(3, 1499, DepotPosition::kCenter, CustomerDistribution::kRandom,
                                                    DemandProfile::kUniform);
            GraphOptions go;
            go.k = 10;
            go.truncate = 1000;
            const auto g = build_graph(inst, go);
            EXPECT_EQ(g.num_nodes(), 1000U);
            double kept_max = 0.0;
            for (const int id : g.node_ids) {
                kept_max = std::max(kept_max, inst.distance(0, id));
            }
            int closer_dropped = 0;
            for (int i = 1; i < inst.size(); ++i) {
                if (g.local_index[static_cast<std::size_t>(i)] < 0 && inst.distance(0, i) < kept_max) {
                    ++closer_dropped;
                }
            }
            EXPECT_EQ(closer_dropped, 0);
            EXPECT_EQ(g.local_index[0], 0);
        }

        TEST(GraphBatch, ConcatOffsetsEdges) {
            const Instance a = testing::random_cvrp(4, 6, 2);
            const Instance b = testing::random_cvrp(5, 8, 2);
            GraphOptions go;
            go.mode = GraphMode::kFull;
            const std::vector<GraphBatch> gs{build_graph(a, go), build_graph(b, go)};
            const auto cat = concat_graphs(gs);
            EXPECT_EQ(cat.num_nodes(), 16U);
            EXPECT_EQ(cat.num_edges(), 21U + 36U);
            EXPECT_EQ(cat.edges[21].first, 7);
        }

        TEST(ConvNet, ZeroHeadGivesOneHalf) {
            ConvNetModel model({8, 2});
            Rng rng(1);
            model.initialize(rng);
            model.zero_head();
            const Instance inst = testing::random_cvrp(6, 11, 2);
            GraphOptions go;
            go.k = 4;
            for (const double p : model.forward(build_graph(inst, go), ConvNetModel::Mode::kInference)) {
                EXPECT_DOUBLE_EQ(p, 0.5);
            }
        }

        TEST(ConvNet, PermutationEquivariance) {
            for (const std::uint64_t seed : {2ULL, 3ULL}) {
                const auto dev = testing::convnet_equivariance_deviation(seed);
                EXPECT_LT(dev.max_deviation, 1e-6) << "seed " << seed;
                EXPECT_TRUE(dev.probabilities_open) << "seed " << seed;
            }
        }

        TEST(ConvNet, GradientMatchesFiniteDifferences) {
            for (const std::uint64_t seed : {1ULL, 2ULL}) {
                EXPECT_LT(testing::convnet_gradient_error(seed), 1e-4) << "seed " << seed;
            }
        }

        TEST(ConvNet, TrainingStepsReduceLoss) {
            ConvNetModel model({16, 2});
            Rng rng(3);
            model.initialize(rng);
            std::vector<GraphBatch> graphs;
            std::vector<double> targets;
            for (std::uint64_t s = 0; s < 5; ++s) {
                const Instance inst = testing::random_cvrp(200 + s, 10, 2);
                const Solution sol = savings_construct(inst);
                GraphOptions go;
                go.k = 5;
                graphs.push_back(build_graph(inst, go));
                const auto t = edge_targets(graphs.back(), edges_of(sol));
                targets.insert(targets.end(), t.begin(), t.end());
            }
            const auto batch = concat_graphs(graphs);
            const double first = model.loss_and_gradient(batch, targets, {});
            std::vector<double> grad(model.parameters().size());
            for (int step = 0; step < 50; ++step) {
                std::ranges::fill(grad, 0.0);
                (void)model.loss_and_gradient(batch, targets, grad);
                for (std::size_t k = 0; k < grad.size(); ++k) {
                    model.parameters()[k] -= 0.05 * grad[k];
                }
            }
            EXPECT_LT(model.loss_and_gradient(batch, targets, {}), first);
        }

        TEST(ConvNet, SerializationRoundTripAndDeterministicInference) {
            ConvNetModel model({8, 2});
            Rng rng(4);
            model.initialize(rng);
            const Instance inst = testing::random_cvrp(8, 14, 3);
            GraphOptions go;
            go.k = 4;
            const auto g = build_graph(inst, go);
            ConvNetModel::BatchStats stats;
            (void)model.forward(g, ConvNetModel::Mode::kTrain, &stats);
            model.update_running_stats(stats);
            const auto back = ConvNetModel::deserialize(model.serialize());
            EXPECT_TRUE(back == model);
            const auto p1 = model.forward(g, ConvNetModel::Mode::kInference);
            const auto p2 = back.forward(g, ConvNetModel::Mode::kInference);
            EXPECT_EQ(p1, p2);
            EXPECT_EQ(p1, model.forward(g, ConvNetModel::Mode::kInference));
            EXPECT_THROW((void)ConvNetModel::deserialize("edgesel-convnet 9\n"), std::exception);
        }

        TEST(ConvNet, NonFiniteActivationIsReported) {
            ConvNetModel model({8, 2});
            Rng rng(5);
            model.initialize(rng);
            std::ranges::fill(model.parameters(), std::numeric_limits<double>::quiet_NaN());
            const Instance inst = testing::random_cvrp(9, 8, 2);
            GraphOptions go;
            go.k = 3;
            EXPECT_THROW((void)model.forward(build_graph(inst, go), ConvNetModel::Mode::kInference),
                         std::runtime_error);
        }

        TEST(GraphLabel, DepotPolicyAndThresholdExtremes) {
            auto model = std::make_shared<ConvNetModel>(ConvNetModel::Config{8, 2});
            Rng rng(6);
            model->initialize(rng);
            const Instance inst = testing::random_cvrp(10, 15, 3);
            const Solution sol = savings_construct(inst);
            GraphLabelOptions lo;
            lo.threshold = 1e-9;
            const auto lab = label_solution_graph(sol, *model, lo);
            EXPECT_EQ(lab.size(), edges_of(sol).size());
            for (std::size_t k = 0; k < lab.size(); ++k) {
                EXPECT_EQ(lab.fixed[k] == 1, !lab.edges[k].touches_depot());
            }
            lo.depot = DepotEdgePolicy::kScore;
            EXPECT_EQ(label_solution_graph(sol, *model, lo).num_fixed(), lab.size());
            lo.threshold = 1.0;
            EXPECT_EQ(label_solution_graph(sol, *model, lo).num_fixed(), 0U);
            GraphSelector sel(model, GraphLabelOptions{});
            Rng r1(0);
            Rng r2(1);
            EXPECT_EQ(sel.label(sol, r1).prob, sel.label(sol, r2).prob);
        }

    }  // namespace
}  // namespace edgesel
