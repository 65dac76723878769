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

#include "edgesel/selector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edgesel {

    void ThresholdRule::validate() const {
        if (!(threshold > 0.0 && threshold < 1.0)) {
            throw std::invalid_argument("threshold must lie in (0, 1)");
        }
        if (kind == Kind::kStochastic) {
            if (!(tolerance > 0.0)) {
                throw std::invalid_argument("stochastic tolerance must be positive");
            }
            if (!(acceptance >= 0.0 && acceptance <= 1.0)) {
                throw std::invalid_argument("acceptance probability must lie in [0, 1]");
            }
        }
    }

    int apply_threshold(double prob, const ThresholdRule& rule, Rng& rng) {
        if (rule.kind == ThresholdRule::Kind::kDeterministic) {
            return prob > rule.threshold ? 1 : 0;
        }
        if (prob > rule.threshold + rule.tolerance) {
            return 1;
        }
        if (std::abs(prob - rule.threshold) < rule.tolerance) {
            return rng.uniform01() < rule.acceptance ? 1 : 0;
        }
        return 0;
    }

    std::size_t EdgeLabeling::num_fixed() const {
        return static_cast<std::size_t>(std::ranges::count(fixed, std::uint8_t{1}));
    }

    EdgeSet EdgeLabeling::fixed_edges() const {
        std::vector<Edge> out;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (fixed[k] != 0) {
                out.push_back(edges[k]);
            }
        }
        return EdgeSet(std::move(out));
    }

    PrecisionCounts precision_counts(const EdgeLabeling& labeling, const EdgeSet& truth) {
        PrecisionCounts c;
        for (std::size_t k = 0; k < labeling.edges.size(); ++k) {
            if (labeling.fixed[k] == 0) {
                continue;
            }
            if (truth.contains(labeling.edges[k])) {
                ++c.true_positives;
            } else {
                ++c.false_positives;
            }
        }
        return c;
    }

    std::optional<double> precision(PrecisionCounts counts) {
        const auto positives = counts.true_positives + counts.false_positives;
        if (positives == 0) {
            return std::nullopt;
        }
        return static_cast<double>(counts.true_positives) / static_cast<double>(positives);
    }

    std::optional<double> precision(const EdgeLabeling& labeling, const EdgeSet& truth) {
        return precision(precision_counts(labeling, truth));
    }

    EdgeLabeling FixedEdgeSelector::label(const Solution& sol, Rng&) const {
        EdgeLabeling out;
        out.selector = name();
        out.rule = ThresholdRule::deterministic(0.5);
        for (const auto& e : edges_of(sol)) {
            out.edges.push_back(e);
            const bool fix = all_ || edges_.contains(e);
            out.prob.push_back(fix ? 1.0 : 0.0);
            out.fixed.push_back(fix ? 1 : 0);
        }
        return out;
    }

}  // namespace edgesel
