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

#ifndef EDGESEL_SELECTOR_GRAPH_HPP_
#define EDGESEL_SELECTOR_GRAPH_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgesel/convnet.hpp"
#include "edgesel/instance.hpp"
#include "edgesel/selector.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    enum class GraphMode { kFull, kKnn, kSolutionEdges };

    struct GraphOptions {
        GraphMode mode = GraphMode::kKnn;
        // Neighbors per node in k-NN mode; must be below the number of batch nodes.
        int k = 25;
        // Keep only this many depot-nearest nodes (depot included) when the instance is larger.
        std::optional<int> truncate;
        // Edges whose endpoints are within this many nearest neighbors of each other get edge type 1.
        int type_neighbors = 10;
    };

    inline constexpr int kDefaultTruncation = 1000;

    // Sparse graph over a subset of instance nodes. Coordinates are min-max scaled by the larger of the x and y
    // ranges so that geometry is preserved; edge distances use the same scale.
    struct GraphBatch {
        // Instance node id of each batch node.
        std::vector<int> node_ids;
        // Row-major num_nodes x 3: scaled x, scaled y, demand / capacity.
        std::vector<double> node_features;
        // Undirected edges over batch-local indices, first < second, no duplicates.
        std::vector<std::pair<int, int>> edges;
        std::vector<double> edge_distance;
        std::vector<int> edge_type;
        // Batch index of every instance node, -1 when the node is not in the batch. Empty for concatenated batches.
        std::vector<int> local_index;

        std::size_t num_nodes() const {
            return node_ids.size();
        }
        std::size_t num_edges() const {
            return edges.size();
        }

        // Index of the undirected edge between instance nodes a and b, if present.
        std::optional<std::size_t> find_edge(int a, int b) const;
    };

    // Throws std::invalid_argument when k >= number of batch nodes in k-NN mode, when a solution is required but
    // missing, or when the solution belongs to another instance.
    GraphBatch build_graph(const Instance& inst, const GraphOptions& options, const Solution* sol = nullptr);

    // Disjoint union used to train on several graphs per step.
    GraphBatch concat_graphs(std::span<const GraphBatch> graphs);

    // 0/1 per batch edge: membership in `truth`.
    std::vector<double> edge_targets(const GraphBatch& batch, const EdgeSet& truth);

    struct GraphLabelOptions {
        double threshold = 0.8;
        std::optional<int> truncate = kDefaultTruncation;
        DepotEdgePolicy depot = DepotEdgePolicy::kNeverFix;
        int type_neighbors = 10;
    };

    // Scores E(sol) with the model in inference mode and fixes edges with probability above the threshold. Edges
    // outside a truncated batch get probability 0.
    EdgeLabeling label_solution_graph(const Solution& sol, const ConvNetModel& model, const GraphLabelOptions& options);

    class GraphSelector final : public EdgeSelector {
    public:
        GraphSelector(std::shared_ptr<const ConvNetModel> model, GraphLabelOptions options);

        std::string name() const override {
            return "convnet";
        }
        EdgeLabeling label(const Solution& sol, Rng& rng) const override;

    private:
        std::shared_ptr<const ConvNetModel> model_;
        GraphLabelOptions options_;
    };

}  // namespace edgesel

#endif
