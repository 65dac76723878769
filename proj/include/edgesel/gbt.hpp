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

#ifndef EDGESEL_GBT_HPP_
#define EDGESEL_GBT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "edgesel/selector_tabular.hpp"

namespace edgesel {

    // Axis-aligned regression tree stored as a flat node array; node 0 is the root.
    struct RegressionTree {
        struct Node {
            // -1 marks a leaf.
            int feature = -1;
            double threshold = 0.0;
            int left = -1;
            int right = -1;
            double value = 0.0;
        };
        std::vector<Node> nodes;

        // x[feature] <= threshold goes left.
        double evaluate(std::span<const double> x) const;
    };

    // Logistic boosting model: prob = sigmoid(initial_score + sum_m rate_m * tree_m(x)).
    class GbtModel final : public EdgeModel {
    public:
        GbtModel() = default;
        GbtModel(std::size_t num_features, double initial_score) : num_features_(num_features), init_(initial_score) { }

        void add_stage(RegressionTree tree, double learning_rate);

        std::string_view kind() const override {
            return "gbt";
        }
        double logit(std::span<const double> x) const;
        double predict(std::span<const double> x) const override;
        void write_body(std::string& out) const override;
        static GbtModel read_body(std::string_view body);

        std::size_t num_stages() const {
            return trees_.size();
        }
        std::size_t num_features() const {
            return num_features_;
        }
        double initial_score() const {
            return init_;
        }
        const RegressionTree& tree(std::size_t m) const {
            return trees_[m];
        }
        double learning_rate(std::size_t m) const {
            return rates_[m];
        }

    private:
        std::size_t num_features_ = kNumEdgeFeatures;
        double init_ = 0.0;
        std::vector<RegressionTree> trees_;
        std::vector<double> rates_;
    };

    struct GbtParams {
        int num_stages = 100;
        int max_depth = 3;
        double learning_rate = 0.1;
        // L2 regularization on leaf values.
        double l2 = 1.0;
        double min_child_hessian = 1e-3;
        // Row fraction drawn per stage without replacement; 1 disables sampling.
        double subsample = 1.0;
        std::uint64_t seed = 0;
    };

    struct GbtTrace {
        // Mean training log-loss after each stage.
        std::vector<double> loss;
    };

    // Row-major features (rows x num_features) and 0/1 labels. Throws std::invalid_argument when only one class
    // is present or shapes disagree.
    GbtModel fit_gbt(std::span<const double> features, std::size_t num_features, std::span<const int> labels,
                     const GbtParams& params, GbtTrace* trace = nullptr);

}  // namespace edgesel

#endif
