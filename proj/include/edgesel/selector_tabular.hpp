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

#ifndef EDGESEL_SELECTOR_TABULAR_HPP_
#define EDGESEL_SELECTOR_TABULAR_HPP_

#include <array>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/construction.hpp"
#include "edgesel/selector.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    inline constexpr std::size_t kNumEdgeFeatures = 4;

    // Solution-specific description of a customer-customer edge (i, j), i visited before j.
    struct EdgeFeatures {
        // (q_i + q_j) / total demand.
        double load_share = 0.0;
        // (q_i + q_j) / load of the route holding the edge; 0 for an empty-load route.
        double route_utilization = 0.0;
        // Rank of j among the neighbors of i, or -1 beyond the granularity.
        int neighbor_rank = -1;
        // d(i, j) / solution cost.
        double distance_share = 0.0;

        std::array<double, kNumEdgeFeatures> values() const {
            return {load_share, route_utilization, static_cast<double>(neighbor_rank), distance_share};
        }
    };

    // Throws std::invalid_argument when the edge is not a customer-customer edge of `sol`.
    EdgeFeatures extract_features(const Solution& sol, Edge edge, int gamma = kDefaultGranularity);

    struct EdgeFeatureRow {
        Edge edge;
        EdgeFeatures features;
    };

    // Features of every customer-customer edge, in route order.
    std::vector<EdgeFeatureRow> extract_all_features(const Solution& sol, int gamma = kDefaultGranularity);

    // Binary classifier over the four edge features.
    class EdgeModel {
    public:
        virtual ~EdgeModel() = default;

        virtual std::string_view kind() const = 0;
        virtual double predict(std::span<const double> features) const = 0;
        // Appends the model body (everything after the common header) to `out`.
        virtual void write_body(std::string& out) const = 0;
    };

    class ConstantModel final : public EdgeModel {
    public:
        explicit ConstantModel(double prob) : prob_(prob) { }

        std::string_view kind() const override {
            return "constant";
        }
        double predict(std::span<const double>) const override {
            return prob_;
        }
        void write_body(std::string& out) const override;

    private:
        double prob_;
    };

    // Text format:
    //   edgesel-model 1
    //   kind <constant|gbt|fnn>
    //   <kind-specific body>
    std::string serialize_model(const EdgeModel& model);
    std::unique_ptr<EdgeModel> deserialize_model(std::string_view text);
    void save_model(const EdgeModel& model, const std::string& path);
    std::unique_ptr<EdgeModel> load_model(const std::string& path);

    struct TabularOptions {
        ThresholdRule rule{};
        int gamma = kDefaultGranularity;
    };

    // Depot edges are included in the labeling with probability 0 and never fixed.
    EdgeLabeling label_solution_tabular(const Solution& sol, const EdgeModel& model, const TabularOptions& options,
                                        Rng& rng);

    class TabularSelector final : public EdgeSelector {
    public:
        TabularSelector(std::shared_ptr<const EdgeModel> model, TabularOptions options);

        std::string name() const override;
        EdgeLabeling label(const Solution& sol, Rng& rng) const override;

        const EdgeModel& model() const {
            return *model_;
        }

    private:
        std::shared_ptr<const EdgeModel> model_;
        TabularOptions options_;
    };

    // Header: x1,x2,x3,x4 followed by any extra columns the caller names.
    void write_feature_csv_header(std::ostream& out, std::span<const std::string> extra_columns = {});
    void write_feature_csv_row(std::ostream& out, const EdgeFeatures& f, std::span<const std::string> extra = {});

}  // namespace edgesel

#endif
