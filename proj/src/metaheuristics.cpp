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

#include "edgesel/metaheuristics.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "edgesel/selector_graph.hpp"

namespace edgesel {

    std::string_view to_string(SelectorKind k) {
        switch (k) {
            case SelectorKind::kNone:
                return "none";
            case SelectorKind::kGbt:
                return "gbt";
            case SelectorKind::kFnn:
                return "fnn";
            case SelectorKind::kConvNet:
                return "convnet";
            case SelectorKind::kExternal:
                return "external";
        }
        return "none";
    }

    std::string_view to_string(DriverKind k) {
        return k == DriverKind::kIls ? "ils" : "hgs";
    }

    void VariantConfig::validate() const {
        if (selector != SelectorKind::kNone) {
            rule.validate();
        }
        if (!(aspiration >= 0.0 && aspiration <= 1.0)) {
            throw std::invalid_argument("aspiration threshold must lie in [0, 1]");
        }
        if (gamma < 0) {
            throw std::invalid_argument("granularity must be non-negative");
        }
        if (!(time_limit > 0.0)) {
            throw std::invalid_argument("time limit must be positive");
        }
        if ((max_iterations && *max_iterations < 0) || (stall_limit && *stall_limit < 1)) {
            throw std::invalid_argument("iteration budgets must be positive");
        }
    }

    namespace {

        VariantConfig preset(std::string name, SelectorKind sel, ThresholdRule rule, double aspiration,
                             DriverKind driver) {
            VariantConfig c;
            c.name = std::move(name);
            c.selector = sel;
            c.rule = rule;
            c.aspiration = aspiration;
            c.driver = driver;
            return c;
        }

        std::string to_ascii(std::string_view name) {
            static const std::pair<std::string_view, std::string_view> greek[] = {
                {"α", "alpha"}, {"β", "beta"}, {"γ", "gamma"}, {"δ", "delta"}, {"μ", "mu"}};
            std::string out(name);
            for (const auto& [g, a] : greek) {
                for (auto pos = out.find(g); pos != std::string::npos; pos = out.find(g)) {
                    out.replace(pos, g.size(), a);
                }
            }
            return out;
        }

    }  // namespace

    std::vector<VariantConfig> variant_table() {
        using K = SelectorKind;
        using D = DriverKind;
        const auto det = ThresholdRule::deterministic;
        const auto sto = [](double t, double p) { return ThresholdRule::stochastic(t, p); };
        return {
            preset("FILO2", K::kNone, det(0.8), 1.0, D::kIls),
            preset("FILO2-α", K::kGbt, det(0.8), 0.8, D::kIls),
            preset("FILO2-β", K::kGbt, sto(0.8, 0.9), 0.8, D::kIls),
            preset("FILO2-γ", K::kFnn, det(0.8), 0.8, D::kIls),
            preset("FILO2-δ", K::kFnn, sto(0.8, 0.75), 0.8, D::kIls),
            preset("FILO2-μ", K::kConvNet, det(0.8), 0.6, D::kIls),
            preset("FILO2-μ-B", K::kConvNet, det(0.75), 0.8, D::kIls),
            preset("HGS", K::kNone, det(0.8), 1.0, D::kHgs),
            preset("HGS-μ", K::kConvNet, det(0.75), 0.7, D::kHgs),
            preset("HGS-μ-L", K::kConvNet, det(0.85), 0.7, D::kHgs),
            preset("HGS-TW", K::kNone, det(0.8), 1.0, D::kHgs),
            preset("HGS-TW-μ", K::kConvNet, det(0.85), 0.6, D::kHgs),
        };
    }

    VariantConfig lookup_variant(std::string_view name, int num_customers) {
        std::string key = to_ascii(name);
        if (key == "HGS-mu" && num_customers >= 500) {
            key = "HGS-mu-L";
        }
        for (auto& v : variant_table()) {
            if (to_ascii(v.name) == key) {
                return v;
            }
        }
        throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
    }

    double default_time_limit(const Instance& inst, double desk_factor) {
        return static_cast<double>(inst.num_customers()) * 2.4 * desk_factor;
    }

    std::shared_ptr<const EdgeSelector> make_selector(const VariantConfig& cfg, const SelectorModels& models) {
        switch (cfg.selector) {
            case SelectorKind::kNone:
                return nullptr;
            case SelectorKind::kGbt:
            case SelectorKind::kFnn: {
                const auto& model = cfg.selector == SelectorKind::kGbt ? models.gbt : models.fnn;
                if (!model) {
                    throw std::invalid_argument("variant " + cfg.name + " needs a " +
                                                std::string(to_string(cfg.selector)) + " model");
                }
                return std::make_shared<TabularSelector>(model, TabularOptions{cfg.rule, cfg.gamma});
            }
            case SelectorKind::kConvNet: {
                if (!models.convnet) {
                    throw std::invalid_argument("variant " + cfg.name + " needs a convnet model");
                }
                GraphLabelOptions opts;
                opts.threshold = cfg.rule.threshold;
                opts.truncate = models.truncate;
                return std::make_shared<GraphSelector>(models.convnet, opts);
            }
            case SelectorKind::kExternal:
                throw std::invalid_argument("external selectors are supplied by the caller");
        }
        return nullptr;
    }

    void write_run_jsonl(std::ostream& out, const RunRecord& r) {
        using nlohmann::json;
        auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        for (const auto& ev : r.trajectory) {
            json j = {{"event", "improvement"}, {"instance", r.instance}, {"variant", r.variant},
                      {"seed", r.seed},         {"elapsed", ev.elapsed},    {"iteration", ev.iteration},
                      {"cost", ev.cost},        {"gap", opt(ev.gap)}};
            out << j.dump() << '\n';
        }
        json j = {{"event", "result"},
                  {"instance", r.instance},
                  {"variant", r.variant},
                  {"seed", r.seed},
                  {"initial_cost", r.initial_cost},
                  {"final_cost", r.final_cost},
                  {"best_cost", r.best_cost},
                  {"gap", opt(r.gap)},
                  {"elapsed", r.elapsed},
                  {"iterations", r.iterations},
                  {"feasible", r.feasible},
                  {"blocked_moves", r.blocked_moves},
                  {"aspired_moves", r.aspired_moves},
                  {"relabels", r.relabels},
                  {"fixed_edges", r.fixed_edges},
                  {"max_subpopulation", r.max_subpopulation}};
        out << j.dump() << '\n';
    }

    std::vector<RunRecord> read_run_jsonl(std::istream& in) {
        using nlohmann::json;
        std::vector<RunRecord> out;
        std::vector<ImprovementEvent> pending;
        std::string line;
        std::size_t lineno = 0;
        auto opt = [](const json& v) { return v.is_null() ? std::optional<double>{} : std::optional<double>(v.get<double>()); };
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            json j;
            try {
                j = json::parse(line);
                const auto kind = j.at("event").get<std::string>();
                if (kind == "improvement") {
                    pending.push_back({j.at("elapsed").get<double>(), j.at("iteration").get<long long>(),
                                       j.at("cost").get<double>(), opt(j.at("gap"))});
                    continue;
                }
                if (kind != "result") {
                    continue;
                }
                RunRecord r;
                r.instance = j.at("instance").get<std::string>();
                r.variant = j.at("variant").get<std::string>();
                r.seed = j.at("seed").get<std::uint64_t>();
                r.initial_cost = j.value("initial_cost", 0.0);
                r.final_cost = j.at("final_cost").get<double>();
                r.best_cost = j.at("best_cost").get<double>();
                r.gap = opt(j.at("gap"));
                r.elapsed = j.at("elapsed").get<double>();
                r.iterations = j.value("iterations", 0LL);
                r.feasible = j.value("feasible", true);
                r.blocked_moves = j.value("blocked_moves", std::uint64_t{0});
                r.aspired_moves = j.value("aspired_moves", std::uint64_t{0});
                r.relabels = j.value("relabels", 0);
                r.fixed_edges = j.value("fixed_edges", std::size_t{0});
                r.max_subpopulation = j.value("max_subpopulation", std::size_t{0});
                r.trajectory = std::move(pending);
                pending.clear();
                out.push_back(std::move(r));
            } catch (const json::exception& e) {
                throw std::runtime_error("run records line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        return out;
    }

    RunResult run_variant(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx) {
        return cfg.driver == DriverKind::kIls ? run_hybrid_ils(inst, cfg, ctx) : run_hybrid_hgs(inst, cfg, ctx);
    }

}  // namespace edgesel
