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

#ifndef EDGESEL_METAHEURISTICS_HPP_
#define EDGESEL_METAHEURISTICS_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/construction.hpp"
#include "edgesel/convnet.hpp"
#include "edgesel/instance.hpp"
#include "edgesel/local_search.hpp"
#include "edgesel/selector.hpp"
#include "edgesel/selector_tabular.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    // kExternal uses the selector passed in RunContext.
    enum class SelectorKind { kNone, kGbt, kFnn, kConvNet, kExternal };
    enum class DriverKind { kIls, kHgs };

    std::string_view to_string(SelectorKind k);
    std::string_view to_string(DriverKind k);

    struct VariantConfig {
        std::string name = "FILO2";
        SelectorKind selector = SelectorKind::kNone;
        ThresholdRule rule = ThresholdRule::deterministic(0.8);
        // Aspiration threshold p_theta; 1 disables aspiration.
        double aspiration = 1.0;
        DriverKind driver = DriverKind::kIls;
        int gamma = kDefaultGranularity;
        // Wall-clock budget in seconds.
        double time_limit = 10.0;
        std::uint64_t seed = 0;
        // Deterministic budgets. A run stops at whichever limit binds first; results repeat exactly only when one
        // of these binds before the wall clock.
        std::optional<long long> max_iterations;
        // Iterations without improving the best solution.
        std::optional<long long> stall_limit;

        // Throws std::invalid_argument when a parameter is out of range.
        void validate() const;
    };

    // Presets: FILO2, FILO2-alpha..delta, FILO2-mu (X), FILO2-mu-B, HGS, HGS-mu (N < 500), HGS-mu-L (N >= 500),
    // HGS-TW, HGS-TW-mu. Names use Greek letters; lookup also accepts the ASCII spellings.
    std::vector<VariantConfig> variant_table();

    // Throws std::invalid_argument for an unknown name. HGS-mu resolves to its large-instance preset when
    // `num_customers` >= 500.
    VariantConfig lookup_variant(std::string_view name, int num_customers = 0);

    // T_max = N * 2.4 s scaled by `desk_factor`.
    double default_time_limit(const Instance& inst, double desk_factor = 1.0);

    struct SelectorModels {
        std::shared_ptr<const EdgeModel> gbt;
        std::shared_ptr<const EdgeModel> fnn;
        std::shared_ptr<const ConvNetModel> convnet;
        std::optional<int> truncate = 1000;
    };

    // Null for SelectorKind::kNone. Throws std::invalid_argument when the required model is missing or the kind is
    // kExternal.
    std::shared_ptr<const EdgeSelector> make_selector(const VariantConfig& cfg, const SelectorModels& models);

    struct ImprovementEvent {
        double elapsed = 0.0;
        long long iteration = 0;
        double cost = 0.0;
        std::optional<double> gap;
    };

    struct RunRecord {
        std::string instance;
        std::string variant;
        std::uint64_t seed = 0;
        double initial_cost = 0.0;
        double final_cost = 0.0;
        double best_cost = 0.0;
        std::optional<double> gap;
        double elapsed = 0.0;
        long long iterations = 0;
        bool feasible = true;
        std::vector<ImprovementEvent> trajectory;
        std::uint64_t blocked_moves = 0;
        std::uint64_t aspired_moves = 0;
        int relabels = 0;
        std::size_t fixed_edges = 0;
        // Largest feasible or infeasible sub-population size seen after any insertion (population driver only).
        std::size_t max_subpopulation = 0;
    };

    // One {"event":"improvement",...} line per trajectory entry followed by one {"event":"result",...} line.
    void write_run_jsonl(std::ostream& out, const RunRecord& record);
    // Reads the result lines; improvement lines are attached to the following result.
    std::vector<RunRecord> read_run_jsonl(std::istream& in);

    struct RunContext {
        // Used when the variant's selector is not kNone; ignored otherwise.
        const EdgeSelector* selector = nullptr;
        std::optional<double> bks;
        // Called with the current search state and filter after every accepted local-search move.
        std::function<void(const SearchState&, const TabuEdgeFilter&)> on_accept;
        // Called after each (re)labeling with the labeled solution and its labeling.
        std::function<void(const Solution&, const EdgeLabeling&)> on_label;
    };

    struct RunResult {
        Solution best;
        RunRecord record;
    };

    struct IlsParams {
        // Random filtered moves per perturbation: uniform in [min, max].
        int perturb_min = 2;
        int perturb_max = 12;
        // Non-improving iterations before restarting from the best solution and relabeling.
        long long restart_after = 1000;
        AnnealingParams annealing{};
    };

    struct HgsParams {
        std::size_t population = 25;
        std::size_t generation = 40;
        std::size_t elite = 4;
        std::size_t closest = 5;
        long long regenerate_after = 500;
        double target_feasible_low = 0.2;
        double target_feasible_high = 0.4;
        double penalty_factor = 1.2;
        double repair_probability = 0.5;
        double repair_penalty_multiplier = 10.0;
        // Relabel from the best feasible individual every generation instead of only at start and regeneration.
        bool relabel_every_generation = false;
        std::size_t initial_individuals = 100;
    };

    // Savings construction, labeling of the constructed solution, route minimization when the route count
    // exceeds the greedy estimate, then filtered perturbation + descent under annealing acceptance. Labels are
    // recomputed at every restart from the best solution.
    RunResult run_hybrid_ils(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx = {},
                             const IlsParams& params = {});

    // Population search on giant tours with ordered crossover, penalized optimal split, filtered penalized
    // education, repair, survivor selection by biased fitness and penalty adaptation.
    RunResult run_hybrid_hgs(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx = {},
                             const HgsParams& params = {});

    RunResult run_variant(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx = {});

    // Greedily empties the lowest-load routes through filtered relocations until `target` routes remain or no
    // route can be emptied. Returns the number of routes removed.
    int minimize_routes(SearchState& state, TabuEdgeFilter* filter, int target, int gamma);

}  // namespace edgesel

#endif
