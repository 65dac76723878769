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

#ifndef EDGESEL_TRAINING_HPP_
#define EDGESEL_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/convnet.hpp"
#include "edgesel/fnn.hpp"
#include "edgesel/gbt.hpp"
#include "edgesel/instance.hpp"
#include "edgesel/selector_graph.hpp"
#include "edgesel/selector_tabular.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    // Largest customer count accepted by solve_exact.
    inline constexpr int kExactSolverLimit = 12;

    // Optimal CVRP solution by dynamic programming over customer subsets (route costs by Held-Karp, then an
    // optimal set partition). Throws std::invalid_argument above kExactSolverLimit customers or on time windows.
    Solution solve_exact(const Instance& inst);

    struct ReferenceOptions {
        int restarts = 10;
        int annealing_steps = 20000;
        std::uint64_t seed = 0;
    };

    // High-quality reference: solve_exact for small CVRP instances, otherwise the best of `restarts` unfiltered
    // annealing-plus-descent runs started from savings (first) and perturbed savings (the rest).
    Solution reference_solution(const Instance& inst, const ReferenceOptions& options = {});

    enum class SolutionSource { kSavings, kSweep, kPerturbed, kOptimal };

    std::string_view to_string(SolutionSource s);
    std::optional<SolutionSource> parse_solution_source(std::string_view s);

    // Random double-bridge on the giant tour of `sol`, re-split greedily.
    Solution double_bridge_perturb(const Solution& sol, Rng& rng);

    struct LabeledEdge {
        EdgeFeatures features;
        int label = 0;
        int instance = 0;
        SolutionSource source = SolutionSource::kSavings;
    };

    struct LabeledEdgeDataset {
        std::vector<LabeledEdge> rows;

        std::size_t size() const {
            return rows.size();
        }
        std::size_t positives() const;
        // Row-major rows x kNumEdgeFeatures.
        std::vector<double> feature_matrix() const;
        std::vector<int> labels() const;
    };

    struct DatasetOptions {
        bool savings = true;
        bool sweep = true;
        // Number of perturbed references per instance.
        int perturbed = 2;
        // Also emit rows from the reference itself.
        bool reference = false;
        int gamma = kDefaultGranularity;
        std::uint64_t seed = 0;
    };

    using ReferenceSolver = std::function<Solution(const Instance&)>;

    // One row per customer-customer edge of each generated solution; label 1 iff the edge is in the reference
    // solution. Instances whose reference is infeasible are skipped and reported through `warnings`.
    LabeledEdgeDataset build_tabular_dataset(std::span<const Instance> instances, const ReferenceSolver& reference,
                                             const DatasetOptions& options,
                                             std::vector<std::string>* warnings = nullptr);

    // Instance-disjoint split; `validation_fraction` of the distinct instance ids go to the second dataset.
    std::pair<LabeledEdgeDataset, LabeledEdgeDataset> split_by_instance(const LabeledEdgeDataset& data,
                                                                        double validation_fraction,
                                                                        std::uint64_t seed);

    // Columns: x1,x2,x3,x4,label,instance,source.
    void write_dataset_csv(std::ostream& out, const LabeledEdgeDataset& data);
    LabeledEdgeDataset read_dataset_csv(std::istream& in);

    GbtModel train_gbt(const LabeledEdgeDataset& data, const GbtParams& params = {}, GbtTrace* trace = nullptr);
    FnnModel train_fnn(const LabeledEdgeDataset& data, const FnnParams& params = {}, FnnTrace* trace = nullptr);

    double accuracy(const EdgeModel& model, const LabeledEdgeDataset& data, double threshold = 0.5);

    struct GraphExample {
        std::shared_ptr<const Instance> instance;
        std::vector<std::vector<int>> reference_routes;
        GraphOptions graph;

        Solution reference() const {
            return Solution(*instance, reference_routes);
        }
    };

    // Throws std::invalid_argument when a reference is infeasible for its instance.
    void validate_graph_dataset(std::span<const GraphExample> examples);

    // Directory layout: manifest.txt with one "<instance-file> <solution-file> <mode> <k>" line per example, next to
    // the per-example CVRPLIB and solution files.
    void write_graph_dataset(const std::string& dir, std::span<const GraphExample> examples);
    std::vector<GraphExample> read_graph_dataset(const std::string& dir);

    struct CurriculumStage {
        std::string name;
        std::vector<GraphExample> train;
        std::vector<GraphExample> validation;
        int epochs = 10;
        std::size_t graphs_per_step = 1;
    };

    struct ConvNetTrainOptions {
        ConvNetModel::Config model{};
        double learning_rate = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double adam_eps = 1e-8;
        std::uint64_t seed = 0;
        // Decision threshold for the validation precision metric.
        double metric_threshold = 0.5;
        // When set, writes stage-<k>.ckpt after each stage and latest.ckpt after each epoch.
        std::optional<std::string> checkpoint_dir;
        // When set, appends stage,epoch,train_loss,val_loss,val_precision rows.
        std::optional<std::string> metrics_csv;
    };

    struct EpochMetrics {
        std::size_t stage = 0;
        int epoch = 0;
        double train_loss = 0.0;
        double validation_loss = 0.0;
        // Empty when nothing was predicted positive.
        std::optional<double> validation_precision;
    };

    struct GraphEvaluation {
        double loss = 0.0;
        std::optional<double> precision;
    };

    // Inference-mode loss and precision over the examples.
    GraphEvaluation evaluate_graph_examples(const ConvNetModel& model, std::span<const GraphExample> examples,
                                            double threshold);

    // Adam over the ConvNet parameters. The optimizer state is part of the checkpoint so that a reloaded trainer
    // continues the exact trajectory.
    class ConvNetTrainer {
    public:
        explicit ConvNetTrainer(ConvNetTrainOptions options);
        ConvNetTrainer(ConvNetTrainOptions options, ConvNetModel warm_start);

        const ConvNetModel& model() const {
            return model_;
        }
        const std::vector<EpochMetrics>& metrics() const {
            return metrics_;
        }
        long long steps() const {
            return step_;
        }
        int epochs_done() const {
            return epoch_;
        }

        // Runs the remaining epochs of `stage` (index `stage_index` in the curriculum). Throws on an empty stage.
        void run_stage(const CurriculumStage& stage, std::size_t stage_index);
        // One pass over `stage.train` in a shuffled order derived from (seed, global epoch).
        EpochMetrics train_epoch(const CurriculumStage& stage, std::size_t stage_index);

        void save_checkpoint(const std::string& path) const;
        static ConvNetTrainer load_checkpoint(const std::string& path, ConvNetTrainOptions options);

    private:
        void adam_step(std::span<const double> grad);

        ConvNetTrainOptions options_;
        ConvNetModel model_;
        std::vector<double> m1_;
        std::vector<double> m2_;
        long long step_ = 0;
        int epoch_ = 0;
        // Epochs completed within the current stage.
        int stage_epoch_ = 0;
        std::size_t stage_ = 0;
        std::vector<EpochMetrics> metrics_;
    };

    struct StageReport {
        std::string name;
        GraphEvaluation validation;
    };

    // Trains the stages in order, each warm-starting from the previous one. Throws std::invalid_argument on an
    // empty stage or when stages are not ordered by non-decreasing instance size.
    ConvNetModel train_convnet(std::span<const CurriculumStage> stages, const ConvNetTrainOptions& options,
                               std::vector<StageReport>* reports = nullptr,
                               std::optional<ConvNetModel> warm_start = std::nullopt);

}  // namespace edgesel

#endif
