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

#ifndef EDGESEL_CONVNET_HPP_
#define EDGESEL_CONVNET_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/random.hpp"

namespace edgesel {

    struct GraphBatch;

    // Anisotropic gated graph ConvNet scoring undirected edges. Each undirected edge {i, j} carries two directed
    // embeddings e_ij and e_ji; layers apply
    //   x_i <- x_i + ReLU(BN(W1 x_i + sum_j eta_ij * W2 x_j)),  eta_ij = sig(e_ij) / (sum_j' sig(e_ij') + eps)
    //   e_ij <- e_ij + ReLU(BN(W3 e_ij + W4 x_i + W5 x_j))
    // and the head maps (e_ij + e_ji) / 2 through a hidden ReLU layer to a sigmoid probability.
    class ConvNetModel {
    public:
        struct Config {
            std::size_t hidden = 64;
            std::size_t layers = 4;
            double aggregation_eps = 1e-20;
            double bn_eps = 1e-5;
            double bn_momentum = 0.1;
        };

        enum class Mode { kTrain, kInference };

        ConvNetModel() : ConvNetModel(Config{}) { }
        // Zero parameters, unit batch-norm scales, zero running means and unit running variances.
        explicit ConvNetModel(Config config);

        // Uniform fan-in initialization of all weight matrices and embeddings.
        void initialize(Rng& rng);

        const Config& config() const {
            return config_;
        }

        std::span<double> parameters() {
            return params_;
        }
        std::span<const double> parameters() const {
            return params_;
        }
        std::span<const double> running_stats() const {
            return running_;
        }

        // Batch-norm statistics captured by a training-mode forward pass.
        struct BatchStats {
            std::vector<double> values;
        };

        // Per-edge probability in batch edge order. Inference mode uses running statistics; training mode uses
        // batch statistics and, when `stats` is non-null, records them. Throws std::runtime_error naming the layer
        // when an activation becomes non-finite.
        std::vector<double> forward(const GraphBatch& batch, Mode mode, BatchStats* stats = nullptr) const;

        // Mean binary cross-entropy over the batch edges in training mode. Adds its gradient with respect to
        // parameters() into `grad` when non-empty.
        double loss_and_gradient(const GraphBatch& batch, std::span<const double> targets, std::span<double> grad,
                                 BatchStats* stats = nullptr) const;

        void update_running_stats(const BatchStats& stats);

        // Zeros the head so that every probability is 0.5.
        void zero_head();

        // Text checkpoint:
        //   edgesel-convnet 1
        //   hidden <h> layers <L> eps <eps> bn_eps <e> momentum <m>
        //   params <count> <values...>
        //   running <count> <values...>
        std::string serialize() const;
        static ConvNetModel deserialize(std::string_view text);
        void save(const std::string& path) const;
        static ConvNetModel load(const std::string& path);

        friend bool operator==(const ConvNetModel& a, const ConvNetModel& b) {
            return a.params_ == b.params_ && a.running_ == b.running_;
        }

    private:
        struct LayerOffsets {
            std::size_t w1, w2, w3, w4, w5;
            std::size_t node_gamma, node_beta, edge_gamma, edge_beta;
            std::size_t node_mean, node_var, edge_mean, edge_var;
        };
        struct Layout {
            std::size_t node_w, node_b, dist_w, dist_b, type_table;
            std::vector<LayerOffsets> layers;
            std::size_t head_w1, head_b1, head_w2, head_b2;
            std::size_t num_params = 0;
            std::size_t num_running = 0;
        };
        struct Cache;

        static Layout make_layout(const Config& config);
        double run(const GraphBatch& batch, Mode mode, std::span<const double> targets, std::span<double> grad,
                   std::vector<double>* probs, BatchStats* stats) const;

        Config config_;
        Layout layout_;
        std::vector<double> params_;
        std::vector<double> running_;
    };

}  // namespace edgesel

#endif
