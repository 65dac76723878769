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

#include "edgesel/selector_tabular.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgesel/fnn.hpp"
#include "edgesel/gbt.hpp"
#include "token_stream.hpp"

namespace edgesel {

    namespace {

        EdgeFeatures features_for(const Solution& sol, int from, int to, int route_load, int gamma) {
            const auto& inst = sol.instance();
            const double pair = static_cast<double>(inst.demand(from) + inst.demand(to));
            EdgeFeatures f;
            f.load_share = inst.total_demand() > 0 ? pair / static_cast<double>(inst.total_demand()) : 0.0;
            f.route_utilization = route_load > 0 ? pair / static_cast<double>(route_load) : 0.0;
            f.neighbor_rank = inst.neighbor_rank(from, to, gamma);
            f.distance_share = sol.cost() > 0.0 ? inst.distance(from, to) / sol.cost() : 0.0;
            return f;
        }

    }  // namespace

    EdgeFeatures extract_features(const Solution& sol, Edge edge, int gamma) {
        if (edge.touches_depot() || edge.a == edge.b) {
            throw std::invalid_argument("features are defined only for customer-customer edges");
        }
        for (const auto& r : sol.routes()) {
            const auto& c = r.customers;
            for (std::size_t k = 1; k < c.size(); ++k) {
                if (Edge::make(c[k - 1], c[k]) == edge) {
                    return features_for(sol, c[k - 1], c[k], r.load, gamma);
                }
            }
        }
        throw std::invalid_argument("edge (" + std::to_string(edge.a) + ", " + std::to_string(edge.b) +
                                    ") is not in the solution");
    }

    std::vector<EdgeFeatureRow> extract_all_features(const Solution& sol, int gamma) {
        std::vector<EdgeFeatureRow> out;
        for (const auto& r : sol.routes()) {
            const auto& c = r.customers;
            for (std::size_t k = 1; k < c.size(); ++k) {
                out.push_back({Edge::make(c[k - 1], c[k]), features_for(sol, c[k - 1], c[k], r.load, gamma)});
            }
        }
        return out;
    }

    void ConstantModel::write_body(std::string& out) const {
        out += "prob " + text::format_double(prob_) + "\n";
    }

    std::string serialize_model(const EdgeModel& model) {
        std::string out = "edgesel-model 1\nkind ";
        out += model.kind();
        out += '\n';
        model.write_body(out);
        return out;
    }

    std::unique_ptr<EdgeModel> deserialize_model(std::string_view content) {
        detail::TokenStream ts(content);
        ts.expect("edgesel-model");
        if (ts.integer() != 1) {
            throw std::runtime_error("unsupported model format version");
        }
        ts.expect("kind");
        const auto kind = ts.next();
        // Body starts after the kind line.
        const auto body_at = content.find('\n', content.find("kind"));
        const auto body = body_at == std::string_view::npos ? std::string_view{} : content.substr(body_at + 1);
        if (kind == "constant") {
            detail::TokenStream b(body);
            b.expect("prob");
            return std::make_unique<ConstantModel>(b.number());
        }
        if (kind == "gbt") {
            return std::make_unique<GbtModel>(GbtModel::read_body(body));
        }
        if (kind == "fnn") {
            return std::make_unique<FnnModel>(FnnModel::read_body(body));
        }
        throw std::runtime_error("unknown model kind '" + std::string(kind) + "'");
    }

    void save_model(const EdgeModel& model, const std::string& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot write " + path);
        }
        out << serialize_model(model);
    }

    std::unique_ptr<EdgeModel> load_model(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw std::runtime_error("cannot read " + path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        return deserialize_model(ss.str());
    }

    EdgeLabeling label_solution_tabular(const Solution& sol, const EdgeModel& model, const TabularOptions& options,
                                        Rng& rng) {
        EdgeLabeling out;
        out.selector = std::string(model.kind());
        out.rule = options.rule;
        for (const auto& r : sol.routes()) {
            const auto& c = r.customers;
            for (std::size_t k = 0; k <= c.size(); ++k) {
                const int from = k == 0 ? 0 : c[k - 1];
                const int to = k == c.size() ? 0 : c[k];
                const Edge e = Edge::make(from, to);
                out.edges.push_back(e);
                if (e.touches_depot()) {
                    out.prob.push_back(0.0);
                    out.fixed.push_back(0);
                    continue;
                }
                const auto x = features_for(sol, from, to, r.load, options.gamma).values();
                const double p = model.predict(x);
                out.prob.push_back(p);
                out.fixed.push_back(static_cast<std::uint8_t>(apply_threshold(p, options.rule, rng)));
            }
        }
        return out;
    }

    TabularSelector::TabularSelector(std::shared_ptr<const EdgeModel> model, TabularOptions options)
        : model_(std::move(model)), options_(options) {
        if (!model_) {
            throw std::invalid_argument("tabular selector needs a model");
        }
        options_.rule.validate();
    }

    std::string TabularSelector::name() const {
        return std::string(model_->kind()) +
               (options_.rule.kind == ThresholdRule::Kind::kStochastic ? "-stochastic" : "-deterministic");
    }

    EdgeLabeling TabularSelector::label(const Solution& sol, Rng& rng) const {
        return label_solution_tabular(sol, *model_, options_, rng);
    }

    void write_feature_csv_header(std::ostream& out, std::span<const std::string> extra_columns) {
        out << "x1,x2,x3,x4";
        for (const auto& c : extra_columns) {
            out << ',' << c;
        }
        out << '\n';
    }

    void write_feature_csv_row(std::ostream& out, const EdgeFeatures& f, std::span<const std::string> extra) {
        out << text::format_double(f.load_share) << ',' << text::format_double(f.route_utilization) << ','
            << f.neighbor_rank << ',' << text::format_double(f.distance_share);
        for (const auto& c : extra) {
            out << ',' << c;
        }
        out << '\n';
    }

}  // namespace edgesel
