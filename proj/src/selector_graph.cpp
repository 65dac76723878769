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

#include "edgesel/selector_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edgesel {

    std::optional<std::size_t> GraphBatch::find_edge(int a, int b) const {
        if (local_index.empty() || a < 0 || b < 0 || static_cast<std::size_t>(a) >= local_index.size() ||
            static_cast<std::size_t>(b) >= local_index.size()) {
            return std::nullopt;
        }
        int la = local_index[static_cast<std::size_t>(a)];
        int lb = local_index[static_cast<std::size_t>(b)];
        if (la < 0 || lb < 0 || la == lb) {
            return std::nullopt;
        }
        if (la > lb) {
            std::swap(la, lb);
        }
        const std::pair<int, int> key{la, lb};
        const auto it = std::ranges::lower_bound(edges, key);
        if (it == edges.end() || *it != key) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - edges.begin());
    }

    namespace {

        double euclid(const Node& a, const Node& b) {
            return std::hypot(a.x - b.x, a.y - b.y);
        }

        // k nearest batch nodes of every batch node, by exact Euclidean distance with ties broken by instance id.
        std::vector<std::vector<int>> batch_knn(const Instance& inst, const std::vector<int>& ids, std::size_t k) {
            const std::size_t n = ids.size();
            std::vector<std::vector<int>> out(n);
            std::vector<std::pair<double, int>> cand;
            for (std::size_t i = 0; i < n; ++i) {
                cand.clear();
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) {
                        cand.emplace_back(euclid(inst.node(ids[i]), inst.node(ids[j])), static_cast<int>(j));
                    }
                }
                const auto take = std::min(k, cand.size());
                std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end(),
                                  [&](const auto& a, const auto& b) {
                                      if (a.first != b.first) {
                                          return a.first < b.first;
                                      }
                                      return ids[static_cast<std::size_t>(a.second)] <
                                             ids[static_cast<std::size_t>(b.second)];
                                  });
                for (std::size_t t = 0; t < take; ++t) {
                    out[i].push_back(cand[t].second);
                }
            }
            return out;
        }

    }  // namespace

    GraphBatch build_graph(const Instance& inst, const GraphOptions& options, const Solution* sol) {
        if (options.mode == GraphMode::kSolutionEdges && sol == nullptr) {
            throw std::invalid_argument("solution-edge graphs need a solution");
        }
        if (sol != nullptr && &sol->instance() != &inst && !(sol->instance() == inst)) {
            throw std::invalid_argument("solution belongs to a different instance");
        }
        if (options.truncate && *options.truncate < 1) {
            throw std::invalid_argument("truncation size must be positive");
        }
        GraphBatch g;
        const auto total = static_cast<std::size_t>(inst.size());
        std::vector<int> ids(total);
        std::iota(ids.begin(), ids.end(), 0);
        if (options.truncate && total > static_cast<std::size_t>(*options.truncate)) {
            const auto keep = static_cast<std::size_t>(*options.truncate);
            const Node& depot = inst.node(Instance::depot());
            std::ranges::stable_sort(ids, [&](int a, int b) {
                const double da = euclid(depot, inst.node(a));
                const double db = euclid(depot, inst.node(b));
                return da != db ? da < db : a < b;
            });
            ids.resize(keep);
            std::ranges::sort(ids);
        }
        const std::size_t n = ids.size();
        g.node_ids = ids;
        g.local_index.assign(total, -1);
        for (std::size_t i = 0; i < n; ++i) {
            g.local_index[static_cast<std::size_t>(ids[i])] = static_cast<int>(i);
        }

        double xmin = inst.node(ids[0]).x;
        double xmax = xmin;
        double ymin = inst.node(ids[0]).y;
        double ymax = ymin;
        for (const int id : ids) {
            xmin = std::min(xmin, inst.node(id).x);
            xmax = std::max(xmax, inst.node(id).x);
            ymin = std::min(ymin, inst.node(id).y);
            ymax = std::max(ymax, inst.node(id).y);
        }
        double range = std::max(xmax - xmin, ymax - ymin);
        if (!(range > 0.0)) {
            range = 1.0;
        }
        g.node_features.resize(n * 3);
        for (std::size_t i = 0; i < n; ++i) {
            const Node& nd = inst.node(ids[i]);
            g.node_features[i * 3] = (nd.x - xmin) / range;
            g.node_features[i * 3 + 1] = (nd.y - ymin) / range;
            g.node_features[i * 3 + 2] = static_cast<double>(nd.demand) / static_cast<double>(inst.capacity());
        }

        std::vector<std::pair<int, int>> pairs;
        switch (options.mode) {
            case GraphMode::kFull:
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = i + 1; j < n; ++j) {
                        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
                    }
                }
                break;
            case GraphMode::kKnn: {
                if (options.k < 1 || static_cast<std::size_t>(options.k) >= n) {
                    throw std::invalid_argument("k-NN graph needs 1 <= k < number of nodes (k = " +
                                                std::to_string(options.k) + ", nodes = " + std::to_string(n) + ")");
                }
                const auto knn = batch_knn(inst, ids, static_cast<std::size_t>(options.k));
                for (std::size_t i = 0; i < n; ++i) {
                    for (const int j : knn[i]) {
                        pairs.emplace_back(std::min(static_cast<int>(i), j), std::max(static_cast<int>(i), j));
                    }
                }
                break;
            }
            case GraphMode::kSolutionEdges:
                for (const auto& e : edges_of(*sol)) {
                    const int a = g.local_index[static_cast<std::size_t>(e.a)];
                    const int b = g.local_index[static_cast<std::size_t>(e.b)];
                    if (a >= 0 && b >= 0 && a != b) {
                        pairs.emplace_back(std::min(a, b), std::max(a, b));
                    }
                }
                break;
        }
        std::ranges::sort(pairs);
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        g.edges = std::move(pairs);

        const auto type_k = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.type_neighbors, 0)),
                                                  n > 0 ? n - 1 : 0);
        std::vector<std::vector<int>> near = batch_knn(inst, ids, type_k);
        for (auto& list : near) {
            std::ranges::sort(list);
        }
        g.edge_distance.reserve(g.edges.size());
        g.edge_type.reserve(g.edges.size());
        for (const auto& [a, b] : g.edges) {
            g.edge_distance.push_back(euclid(inst.node(ids[static_cast<std::size_t>(a)]),
                                             inst.node(ids[static_cast<std::size_t>(b)])) /
                                      range);
            const bool close = std::ranges::binary_search(near[static_cast<std::size_t>(a)], b) ||
                               std::ranges::binary_search(near[static_cast<std::size_t>(b)], a);
            g.edge_type.push_back(close ? 1 : 0);
        }
        return g;
    }

    GraphBatch concat_graphs(std::span<const GraphBatch> graphs) {
        GraphBatch out;
        int base = 0;
        for (const auto& g : graphs) {
            out.node_ids.insert(out.node_ids.end(), g.node_ids.begin(), g.node_ids.end());
            out.node_features.insert(out.node_features.end(), g.node_features.begin(), g.node_features.end());
            for (const auto& [a, b] : g.edges) {
                out.edges.emplace_back(a + base, b + base);
            }
            out.edge_distance.insert(out.edge_distance.end(), g.edge_distance.begin(), g.edge_distance.end());
            out.edge_type.insert(out.edge_type.end(), g.edge_type.begin(), g.edge_type.end());
            base += static_cast<int>(g.num_nodes());
        }
        return out;
    }

    std::vector<double> edge_targets(const GraphBatch& batch, const EdgeSet& truth) {
        std::vector<double> t;
        t.reserve(batch.num_edges());
        for (const auto& [a, b] : batch.edges) {
            const Edge e = Edge::make(batch.node_ids[static_cast<std::size_t>(a)],
                                      batch.node_ids[static_cast<std::size_t>(b)]);
            t.push_back(truth.contains(e) ? 1.0 : 0.0);
        }
        return t;
    }

    EdgeLabeling label_solution_graph(const Solution& sol, const ConvNetModel& model,
                                      const GraphLabelOptions& options) {
        const auto& inst = sol.instance();
        GraphOptions go;
        go.mode = GraphMode::kSolutionEdges;
        go.truncate = options.truncate;
        go.type_neighbors = options.type_neighbors;
        const auto batch = build_graph(inst, go, &sol);
        const auto probs = model.forward(batch, ConvNetModel::Mode::kInference);

        EdgeLabeling out;
        out.selector = "convnet";
        out.rule = ThresholdRule::deterministic(options.threshold);
        for (const auto& r : sol.routes()) {
            const auto& c = r.customers;
            for (std::size_t k = 0; k <= c.size(); ++k) {
                const int from = k == 0 ? 0 : c[k - 1];
                const int to = k == c.size() ? 0 : c[k];
                const Edge e = Edge::make(from, to);
                const auto idx = batch.find_edge(from, to);
                const double p = idx ? probs[*idx] : 0.0;
                const bool allowed = !e.touches_depot() || options.depot == DepotEdgePolicy::kScore;
                out.edges.push_back(e);
                out.prob.push_back(p);
                out.fixed.push_back(allowed && p > options.threshold ? 1 : 0);
            }
        }
        return out;
    }

    GraphSelector::GraphSelector(std::shared_ptr<const ConvNetModel> model, GraphLabelOptions options)
        : model_(std::move(model)), options_(options) {
        if (!model_) {
            throw std::invalid_argument("graph selector needs a model");
        }
    }

    EdgeLabeling GraphSelector::label(const Solution& sol, Rng&) const {
        return label_solution_graph(sol, *model_, options_);
    }

}  // namespace edgesel
