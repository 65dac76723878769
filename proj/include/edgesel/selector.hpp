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

#ifndef EDGESEL_SELECTOR_HPP_
#define EDGESEL_SELECTOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgesel/random.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    struct ThresholdRule {
        enum class Kind { kDeterministic, kStochastic };

        Kind kind = Kind::kDeterministic;
        double threshold = 0.8;
        // Half-width of the boundary band for the stochastic rule.
        double tolerance = 1e-3;
        // Probability of fixing an edge whose score falls inside the band.
        double acceptance = 0.9;

        static ThresholdRule deterministic(double t) {
            return {Kind::kDeterministic, t, 1e-3, 0.0};
        }
        static ThresholdRule stochastic(double t, double p, double eps = 1e-3) {
            return {Kind::kStochastic, t, eps, p};
        }

        // Throws std::invalid_argument when t is outside (0, 1), eps is not positive or p is outside [0, 1].
        void validate() const;
    };

    // 1 marks the edge as fixed. Deterministic: prob > t. Stochastic: prob > t + eps, or |prob - t| < eps and a
    // fresh uniform draw falls below the acceptance probability.
    int apply_threshold(double prob, const ThresholdRule& rule, Rng& rng);

    // Whether depot-incident edges may be fixed. The default mirrors training, where features exist only between
    // customers.
    enum class DepotEdgePolicy { kNeverFix, kScore };

    struct EdgeLabeling {
        std::vector<Edge> edges;
        std::vector<double> prob;
        std::vector<std::uint8_t> fixed;
        std::string selector;
        ThresholdRule rule;

        std::size_t size() const {
            return edges.size();
        }
        std::size_t num_fixed() const;
        EdgeSet fixed_edges() const;
    };

    struct PrecisionCounts {
        std::size_t true_positives = 0;
        std::size_t false_positives = 0;
    };

    PrecisionCounts precision_counts(const EdgeLabeling& labeling, const EdgeSet& truth);

    // TP / (TP + FP); nullopt when nothing was predicted positive.
    std::optional<double> precision(const EdgeLabeling& labeling, const EdgeSet& truth);
    std::optional<double> precision(PrecisionCounts counts);

    class EdgeSelector {
    public:
        virtual ~EdgeSelector() = default;

        virtual std::string name() const = 0;

        // Scores and thresholds the edges of `sol`. Must be safe to call concurrently with distinct RNGs.
        virtual EdgeLabeling label(const Solution& sol, Rng& rng) const = 0;
    };

    // Fixes exactly the given edges wherever they occur in the labeled solution. Used for fully frozen runs and tests.
    class FixedEdgeSelector final : public EdgeSelector {
    public:
        FixedEdgeSelector() = default;
        explicit FixedEdgeSelector(EdgeSet edges) : edges_(std::move(edges)), all_(false) { }

        // Fixes every edge of whatever solution it is asked to label, depot edges included.
        static FixedEdgeSelector all_edges() {
            return FixedEdgeSelector();
        }

        std::string name() const override {
            return "fixed";
        }
        EdgeLabeling label(const Solution& sol, Rng& rng) const override;

    private:
        EdgeSet edges_;
        bool all_ = true;
    };

}  // namespace edgesel

#endif
