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

#ifndef EDGESEL_TESTS_CONVNET_CHECKS_HPP_
#define EDGESEL_TESTS_CONVNET_CHECKS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "edgesel/convnet.hpp"
#include "edgesel/selector_graph.hpp"
#include "oracles.hpp"

namespace edgesel::testing {

    // Node relabeling i -> sigma[i] with edges re-sorted.
    inline GraphBatch permute(const GraphBatch& g, const std::vector<int>& sigma) {
        GraphBatch out;
        const std::size_t n = g.num_nodes();
        out.node_ids.resize(n);
        out.node_features.resize(n * 3);
        for (std::size_t i = 0; i < n; ++i) {
            const auto to = static_cast<std::size_t>(sigma[i]);
            out.node_ids[to] = g.node_ids[i];
            for (std::size_t f = 0; f < 3; ++f) {
                out.node_features[to * 3 + f] = g.node_features[i * 3 + f];
            }
        }
        std::vector<std::size_t> order(g.num_edges());
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto mapped = [&](std::size_t k) {
            const int a = sigma[static_cast<std::size_t>(g.edges[k].first)];
            const int b = sigma[static_cast<std::size_t>(g.edges[k].second)];
            return std::pair{std::min(a, b), std::max(a, b)};
        };
        std::ranges::sort(order, [&](std::size_t x, std::size_t y) { return mapped(x) < mapped(y); });
        for (const auto k : order) {
            out.edges.push_back(mapped(k));
            out.edge_distance.push_back(g.edge_distance[k]);
            out.edge_type.push_back(g.edge_type[k]);
        }
        return out;
    }

    struct EquivarianceCheck {
        double max_deviation = 0.0;
        bool probabilities_open = true;
    };

    // Relabels the nodes of a 20-node k-NN graph by a random permutation and compares edge probabilities in both
    // training and inference mode.
    inline EquivarianceCheck convnet_equivariance_deviation(std::uint64_t seed) {
        ConvNetModel model({16, 3});
        Rng rng(seed);
        model.initialize(rng);
        const Instance inst = random_cvrp(seed + 7, 19, 3);
        GraphOptions go;
        go.k = 6;
        const auto g = build_graph(inst, go);
        std::vector<int> sigma(g.num_nodes());
        std::iota(sigma.begin(), sigma.end(), 0);
        rng.shuffle(sigma);
        const auto pg = permute(g, sigma);
        EquivarianceCheck out;
        for (const auto mode : {ConvNetModel::Mode::kInference, ConvNetModel::Mode::kTrain}) {
            const auto p = model.forward(g, mode);
            const auto q = model.forward(pg, mode);
            for (std::size_t k = 0; k < g.num_edges(); ++k) {
                const int a = sigma[static_cast<std::size_t>(g.edges[k].first)];
                const int b = sigma[static_cast<std::size_t>(g.edges[k].second)];
                const auto it = std::ranges::find(pg.edges, std::pair{std::min(a, b), std::max(a, b)});
                if (it == pg.edges.end()) {
                    out.max_deviation = std::numeric_limits<double>::infinity();
                    continue;
                }
                const double other = q[static_cast<std::size_t>(it - pg.edges.begin())];
                out.max_deviation = std::max(out.max_deviation, std::abs(p[k] - other));
                out.probabilities_open = out.probabilities_open && p[k] > 0.0 && p[k] < 1.0;
            }
        }
        return out;
    }

    // Max relative error of the analytic training-mode gradient against central differences, h = 8, two layers,
    // 12-node k-NN graph.
    inline double convnet_gradient_error(std::uint64_t seed) {
        ConvNetModel model({8, 2});
        Rng rng(seed);
        model.initialize(rng);
        const Instance inst = random_cvrp(seed + 100, 11, 2);
        GraphOptions go;
        go.k = 4;
        const auto g = build_graph(inst, go);
        std::vector<double> targets(g.num_edges());
        for (auto& t : targets) {
            t = rng.uniform01() < 0.4 ? 1.0 : 0.0;
        }
        std::vector<double> grad(model.parameters().size(), 0.0);
        (void)model.loss_and_gradient(g, targets, grad);
        const std::vector<double> theta(model.parameters().begin(), model.parameters().end());
        const auto loss = [&](std::span<const double> x) {
            ConvNetModel copy = model;
            std::ranges::copy(x, copy.parameters().begin());
            return copy.loss_and_gradient(g, targets, {});
        };
        const auto numeric = numeric_gradient(loss, theta, 1e-5);
        return max_relative_error(grad, numeric, 1e-6);
    }

}  // namespace edgesel::testing

#endif
