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

#ifndef EDGESEL_FNN_HPP_
#define EDGESEL_FNN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "edgesel/random.hpp"
#include "edgesel/selector_tabular.hpp"

namespace edgesel {

    // Feed-forward classifier: standardized input, ReLU hidden layers, sigmoid output.
    class FnnModel final : public EdgeModel {
    public:
        struct Layer {
            std::size_t inputs = 0;
            std::size_t outputs = 0;
            // Row-major outputs x inputs.
            std::vector<double> weights;
            std::vector<double> bias;
        };

        FnnModel() = default;
        // Zero weights, identity input scaling.
        FnnModel(std::size_t num_inputs, std::span<const std::size_t> hidden);

        // He-uniform initialization of hidden layers, zero biases.
        void initialize(Rng& rng);

        std::string_view kind() const override {
            return "fnn";
        }
        double predict(std::span<const double> x) const override;
        // Pre-sigmoid output.
        double logit(std::span<const double> x) const;
        void write_body(std::string& out) const override;
        static FnnModel read_body(std::string_view body);

        std::size_t num_inputs() const {
            return shift_.size();
        }
        std::span<Layer> layers() {
            return layers_;
        }
        std::span<const Layer> layers() const {
            return layers_;
        }
        // Input standardization x' = (x - shift) * scale.
        void set_input_transform(std::vector<double> shift, std::vector<double> scale);
        std::span<const double> input_shift() const {
            return shift_;
        }
        std::span<const double> input_scale() const {
            return scale_;
        }

        std::size_t num_parameters() const;
        // Flat copies of all weights and biases, layer by layer.
        std::vector<double> parameters() const;
        void set_parameters(std::span<const double> flat);

        // Adds d(BCE)/d(parameters) for a single example to `grad` (flat layout of parameters()) and returns the
        // example loss.
        double accumulate_gradient(std::span<const double> x, int label, std::span<double> grad) const;

    private:
        std::vector<double> shift_;
        std::vector<double> scale_;
        std::vector<Layer> layers_;
    };

    struct FnnParams {
        std::vector<std::size_t> hidden{256, 256};
        int epochs = 30;
        std::size_t batch_size = 64;
        double learning_rate = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double adam_eps = 1e-8;
        std::uint64_t seed = 0;
    };

    struct FnnTrace {
        // Mean training loss per epoch.
        std::vector<double> epoch_loss;
    };

    // Row-major features (rows x num_features) and 0/1 labels. Throws std::invalid_argument on a single-class set
    // or mismatched shapes.
    FnnModel fit_fnn(std::span<const double> features, std::size_t num_features, std::span<const int> labels,
                     const FnnParams& params, FnnTrace* trace = nullptr);

}  // namespace edgesel

#endif
