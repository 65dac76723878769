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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "edgesel/construction.hpp"
#include "edgesel/training.hpp"
#include "oracles.hpp"
#include "overfit.hpp"

namespace edgesel {
    namespace {

        namespace fs = std::filesystem;

        fs::path scratch_dir(const std::string& name) {
            const auto dir = fs::temp_directory_path() / ("edgesel-" + name + "-" + std::to_string(::getpid()));
            fs::remove_all(dir);
            fs::create_directories(dir);
            return dir;
        }

        TEST(ExactSolver, MatchesBruteForce) {
            for (std::uint64_t seed = 0; seed < 8; ++seed) {
                const Instance inst = testing::random_cvrp(seed, 5 + static_cast<int>(seed % 3), 2);
                const Solution sol = solve_exact(inst);
                EXPECT_TRUE(evaluate(sol).feasible);
                EXPECT_NEAR(sol.cost(), testing::brute_force_cvrp(inst).cost, 1e-9) << inst.name();
            }
        }

        TEST(ExactSolver, RejectsLargeOrTimeWindowed) {
            EXPECT_THROW((void)solve_exact(testing::random_cvrp(1, kExactSolverLimit + 1)), std::invalid_argument);
        }

        TEST(ReferenceSolution, NoWorseThanSavings) {
            const Instance inst = testing::random_cvrp(11, 30, 4);
            ReferenceOptions ro;
            ro.restarts = 3;
            ro.annealing_steps = 3000;
            const Solution ref = reference_solution(inst, ro);
            EXPECT_TRUE(evaluate(ref).feasible);
            EXPECT_LE(ref.cost(), savings_construct(inst).cost() + 1e-9);
        }

        TEST(DoubleBridge, KeepsEveryCustomerOnce) {
            const Instance inst = testing::random_cvrp(12, 25, 4);
            const Solution base = savings_construct(inst);
            Rng rng(3);
            for (int t = 0; t < 20; ++t) {
                const Solution p = double_bridge_perturb(base, rng);
                EXPECT_TRUE(testing::check_routes(inst, p.route_sequences()).partition);
                EXPECT_TRUE(evaluate(p).feasible);
            }
        }

        LabeledEdgeDataset small_dataset(std::vector<std::string>* warnings = nullptr) {
            std::vector<Instance> instances;
            for (std::uint64_t s = 0; s < 6; ++s) {
                instances.push_back(testing::random_cvrp(300 + s, 9, 3));
            }
            DatasetOptions opt;
            opt.gamma = 5;
            return build_tabular_dataset(instances, [](const Instance& i) { return solve_exact(i); }, opt, warnings);
        }

        TEST(TabularDataset, RowsAreCustomerEdgesOfGeneratedSolutions) {
            const auto data = small_dataset();
            EXPECT_GT(data.size(), 0U);
            EXPECT_GT(data.positives(), 0U);
            EXPECT_LT(data.positives(), data.size());
            std::set<int> ids;
            for (const auto& row : data.rows) {
                ids.insert(row.instance);
                EXPECT_TRUE(row.label == 0 || row.label == 1);
            }
            EXPECT_EQ(ids.size(), 6U);
            EXPECT_EQ(data.feature_matrix().size(), data.size() * kNumEdgeFeatures);
        }

        TEST(TabularDataset, CsvRoundTrip) {
            const auto data = small_dataset();
            std::stringstream ss;
            write_dataset_csv(ss, data);
            const auto back = read_dataset_csv(ss);
            ASSERT_EQ(back.size(), data.size());
            for (std::size_t k = 0; k < data.size(); ++k) {
                EXPECT_EQ(back.rows[k].label, data.rows[k].label);
                EXPECT_EQ(back.rows[k].instance, data.rows[k].instance);
                EXPECT_EQ(back.rows[k].source, data.rows[k].source);
                for (std::size_t f = 0; f < kNumEdgeFeatures; ++f) {
                    EXPECT_DOUBLE_EQ(back.rows[k].features.values()[f], data.rows[k].features.values()[f]);
                }
            }
            std::stringstream bad("x1,x2,x3,x4,label,instance,source\n1,2,3\n");
            EXPECT_THROW((void)read_dataset_csv(bad), std::exception);
        }

        TEST(TabularDataset, InfeasibleReferenceIsSkippedWithWarning) {
            std::vector<Instance> instances{testing::random_cvrp(1, 8, 2), testing::random_cvrp(2, 8, 2)};
            std::vector<std::string> warnings;
            const auto data = build_tabular_dataset(
                instances,
                [&](const Instance& i) {
                    if (i.name() == instances[0].name()) {
                        return Solution(i, {{1, 2, 3, 4, 5, 6, 7, 8}});
                    }
                    return solve_exact(i);
                },
                DatasetOptions{}, &warnings);
            ASSERT_EQ(warnings.size(), 1U);
            for (const auto& row : data.rows) {
                EXPECT_EQ(row.instance, 1);
            }
        }

        TEST(TabularDataset, SplitIsInstanceDisjoint) {
            const auto data = small_dataset();
            const auto [train, val] = split_by_instance(data, 0.34, 7);
            EXPECT_EQ(train.size() + val.size(), data.size());
            std::set<int> a;
            std::set<int> b;
            for (const auto& r : train.rows) {
                a.insert(r.instance);
            }
            for (const auto& r : val.rows) {
                b.insert(r.instance);
            }
            EXPECT_FALSE(a.empty());
            EXPECT_FALSE(b.empty());
            for (const int id : a) {
                EXPECT_EQ(b.count(id), 0U);
            }
        }

        TEST(GraphDataset, DirectoryRoundTripAndValidation) {
            const auto examples = testing::tiny_graph_examples(3, 7, 40);
            const auto dir = scratch_dir("graphs");
            write_graph_dataset(dir.string(), examples);
            const auto back = read_graph_dataset(dir.string());
            ASSERT_EQ(back.size(), examples.size());
            for (std::size_t k = 0; k < back.size(); ++k) {
                EXPECT_EQ(back[k].reference_routes, examples[k].reference_routes);
                EXPECT_EQ(back[k].graph.k, examples[k].graph.k);
                EXPECT_EQ(back[k].instance->size(), examples[k].instance->size());
            }
            auto broken = examples;
            broken[1].reference_routes = {{1, 2, 3, 4, 5, 6, 7}};
            EXPECT_THROW(validate_graph_dataset(broken), std::invalid_argument);
            fs::remove_all(dir);
        }

        TEST(ConvNetTraining, OverfitsTinyInstances) {
            const auto examples = testing::tiny_graph_examples(10, 8, 500);
            const auto fit = testing::overfit_convnet(examples, 100, 1);
            ASSERT_TRUE(fit.evaluation.precision.has_value());
            EXPECT_GE(*fit.evaluation.precision, 0.9);
        }

        TEST(ConvNetTraining, FixtureHarnessReproducesCounts) {
            const auto h = testing::fixture_overfit_harness(0);
            EXPECT_EQ(h.fixed, 26U);
            EXPECT_EQ(h.counts.true_positives, 22U);
            EXPECT_EQ(h.counts.false_positives, 4U);
        }

        TEST(ConvNetTraining, CheckpointResumeContinuesTrajectory) {
            const auto examples = testing::tiny_graph_examples(4, 7, 600);
            CurriculumStage stage{"s", examples, examples, 4, 1};
            ConvNetTrainOptions opt;
            opt.model.hidden = 8;
            opt.model.layers = 2;
            opt.seed = 5;
            ConvNetTrainer straight(opt);
            straight.run_stage(stage, 0);

            const auto dir = scratch_dir("ckpt");
            ConvNetTrainer first(opt);
            (void)first.train_epoch(stage, 0);
            (void)first.train_epoch(stage, 0);
            first.save_checkpoint((dir / "mid.ckpt").string());
            auto resumed = ConvNetTrainer::load_checkpoint((dir / "mid.ckpt").string(), opt);
            EXPECT_EQ(resumed.epochs_done(), 2);
            resumed.run_stage(stage, 0);
            EXPECT_EQ(resumed.steps(), straight.steps());
            EXPECT_TRUE(resumed.model() == straight.model());
            fs::remove_all(dir);
        }

        TEST(ConvNetTraining, CurriculumRejectsShrinkingSizes) {
            const auto big = testing::tiny_graph_examples(2, 9, 700);
            const auto small = testing::tiny_graph_examples(2, 6, 710);
            const std::vector<CurriculumStage> stages{{"big", big, big, 1, 1}, {"small", small, small, 1, 1}};
            EXPECT_THROW((void)train_convnet(stages, ConvNetTrainOptions{}), std::invalid_argument);
            const std::vector<CurriculumStage> empty{{"e", {}, {}, 1, 1}};
            EXPECT_THROW((void)train_convnet(empty, ConvNetTrainOptions{}), std::invalid_argument);
        }

        TEST(ConvNetTraining, WritesMetricsAndStageCheckpoints) {
            const auto a = testing::tiny_graph_examples(2, 6, 800);
            const auto b = testing::tiny_graph_examples(2, 8, 810);
            const std::vector<CurriculumStage> stages{{"n7", a, a, 2, 1}, {"n9", b, b, 3, 1}};
            const auto dir = scratch_dir("metrics");
            ConvNetTrainOptions opt;
            opt.model.hidden = 8;
            opt.model.layers = 2;
            opt.checkpoint_dir = dir.string();
            opt.metrics_csv = (dir / "metrics.csv").string();
            std::vector<StageReport> reports;
            (void)train_convnet(stages, opt, &reports);
            EXPECT_EQ(reports.size(), 2U);
            EXPECT_TRUE(fs::exists(dir / "stage-0.ckpt"));
            EXPECT_TRUE(fs::exists(dir / "stage-1.ckpt"));
            EXPECT_TRUE(fs::exists(dir / "latest.ckpt"));
            std::ifstream in(dir / "metrics.csv");
            std::string line;
            int lines = 0;
            while (std::getline(in, line)) {
                ++lines;
            }
            EXPECT_EQ(lines, 1 + 5);
            fs::remove_all(dir);
        }

    }  // namespace
}  // namespace edgesel
