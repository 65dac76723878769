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

#ifndef EDGESEL_SRC_RUN_SUPPORT_HPP_
#define EDGESEL_SRC_RUN_SUPPORT_HPP_

#include <chrono>
#include <optional>
#include <stdexcept>

#include "edgesel/metaheuristics.hpp"

namespace edgesel::detail {

    class Stopwatch {
    public:
        Stopwatch() : start_(std::chrono::steady_clock::now()) { }

        double seconds() const {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        }

    private:
        std::chrono::steady_clock::time_point start_;
    };

    struct StopRule {
        double time_limit;
        std::optional<long long> max_iterations;
        std::optional<long long> stall_limit;

        explicit StopRule(const VariantConfig& cfg)
            : time_limit(cfg.time_limit), max_iterations(cfg.max_iterations), stall_limit(cfg.stall_limit) { }

        bool done(const Stopwatch& clock, long long iterations, long long stall) const {
            return (max_iterations && iterations >= *max_iterations) || (stall_limit && stall >= *stall_limit) ||
                   clock.seconds() >= time_limit;
        }
    };

    inline std::optional<double> gap_or_none(double cost, const std::optional<double>& bks) {
        if (!bks) {
            return std::nullopt;
        }
        return compute_gap(cost, *bks);
    }

    // Labels `sol` with the context's selector (no-op for selector-free variants) and builds the matching filter.
    inline TabuEdgeFilter make_filter(const Solution& sol, const VariantConfig& cfg, const RunContext& ctx, Rng& rng,
                                      RunRecord& record) {
        const std::uint64_t filter_seed = rng.next();
        if (cfg.selector == SelectorKind::kNone) {
            return TabuEdgeFilter(EdgeSet{}, cfg.aspiration, filter_seed);
        }
        if (ctx.selector == nullptr) {
            throw std::invalid_argument("variant " + cfg.name + " needs a selector");
        }
        const EdgeLabeling labeling = ctx.selector->label(sol, rng);
        if (ctx.on_label) {
            ctx.on_label(sol, labeling);
        }
        ++record.relabels;
        const EdgeSet fixed = labeling.fixed_edges();
        record.fixed_edges = fixed.size();
        return TabuEdgeFilter(fixed, cfg.aspiration, filter_seed);
    }

    // Carries the blocked/aspired counters of a filter that is about to be replaced.
    inline void absorb_counts(const TabuEdgeFilter& f, RunRecord& record) {
        record.blocked_moves += f.blocked_count();
        record.aspired_moves += f.aspired_count();
    }

}  // namespace edgesel::detail

#endif
