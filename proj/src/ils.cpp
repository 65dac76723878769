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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgesel/metaheuristics.hpp"
#include "run_support.hpp"

namespace edgesel {

    int minimize_routes(SearchState& state, TabuEdgeFilter* filter, int target, int gamma) {
        const auto& inst = state.instance();
        int removed = 0;
        bool progress = true;
        struct Candidate {
            Move move;
            double delta;
        };
        std::vector<Candidate> cands;
        while (state.num_routes() > target && progress) {
            progress = false;
            std::vector<int> order;
            for (int r = 0; r < state.route_slots(); ++r) {
                if (!state.route(r).empty()) {
                    order.push_back(r);
                }
            }
            std::ranges::stable_sort(order, [&](int a, int b) { return state.route_load(a) < state.route_load(b); });
            for (const int r : order) {
                const SearchState backup = state;
                const std::vector<int> customers(state.route(r).begin(), state.route(r).end());
                bool emptied = true;
                for (const int u : customers) {
                    cands.clear();
                    const auto nbrs = inst.neighbors(u);
                    const auto limit = std::min<std::size_t>(nbrs.size(), static_cast<std::size_t>(std::max(gamma, 0)));
                    for (std::size_t k = 0; k < limit; ++k) {
                        const int v = nbrs[k];
                        if (v == Instance::depot() || state.route_of(v) == r) {
                            continue;
                        }
                        for (int var = 0; var < 2; ++var) {
                            const auto m = state.make_move(MoveKind::kRelocate, u, v, var);
                            if (!m) {
                                continue;
                            }
                            const auto ev = state.evaluate(*m);
                            if (ev.feasible) {
                                cands.push_back({*m, ev.penalized_delta});
                            }
                        }
                    }
                    std::ranges::stable_sort(cands, [](const auto& a, const auto& b) { return a.delta < b.delta; });
                    bool moved = false;
                    for (const auto& c : cands) {
                        if (filter == nullptr || filter->check(c.move).allowed()) {
                            state.apply(c.move);
                            moved = true;
                            break;
                        }
                    }
                    if (!moved) {
                        emptied = false;
                        break;
                    }
                }
                if (emptied) {
                    ++removed;
                    progress = true;
                    break;
                }
                state = backup;
            }
        }
        return removed;
    }

    RunResult run_hybrid_ils(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx,
                             const IlsParams& params) {
        cfg.validate();
        const detail::Stopwatch clock;
        const detail::StopRule stop(cfg);
        Rng rng(cfg.seed);
        // Labeling draws come from their own stream so that an empty fixed set leaves the search trajectory intact.
        Rng label_rng(cfg.seed ^ 0xa5a5a5a5deadbeefULL);

        RunRecord rec;
        rec.instance = inst.name();
        rec.variant = cfg.name;
        rec.seed = cfg.seed;

        const Solution s0 = savings_construct(inst, true, cfg.gamma);
        rec.initial_cost = s0.cost();
        TabuEdgeFilter filter = detail::make_filter(s0, cfg, ctx, label_rng, rec);

        SearchOptions so;
        so.gamma = cfg.gamma;
        if (ctx.on_accept) {
            so.on_accept = [&](const SearchState& st, const Move&) { ctx.on_accept(st, filter); };
        }

        SearchState cur(s0);
        const int target = greedy_route_estimate(inst);
        if (cur.num_routes() > target) {
            minimize_routes(cur, &filter, target, cfg.gamma);
        }
        so.seed = rng.next();
        descend(cur, &filter, so);

        SearchState best = cur;
        rec.trajectory.push_back({clock.seconds(), 0, best.distance_cost(), detail::gap_or_none(best.distance_cost(), ctx.bks)});

        const int n = std::max(1, inst.num_customers());
        double temperature = params.annealing.initial_temperature > 0.0 ? params.annealing.initial_temperature
                                                                        : 0.1 * cur.distance_cost() / n;
        temperature = std::max(temperature, params.annealing.floor);
        const int pmin = std::max(1, params.perturb_min);
        const int pmax = std::max(pmin, params.perturb_max);

        long long it = 0;
        long long stall = 0;
        long long since_restart = 0;
        while (!stop.done(clock, it, stall)) {
            ++it;
            SearchState cand = cur;
            random_walk(cand, &filter, rng.uniform_int(pmin, pmax), cfg.gamma, rng);
            so.seed = rng.next();
            descend(cand, &filter, so);

            const double delta = cand.distance_cost() - cur.distance_cost();
            const double draw = rng.uniform01();
            if (delta < 0.0 || draw < std::exp(-delta / temperature)) {
                cur = std::move(cand);
                temperature = std::max(params.annealing.floor, temperature * params.annealing.cooling);
            }
            if (cur.distance_cost() < best.distance_cost() - 1e-9) {
                best = cur;
                stall = 0;
                since_restart = 0;
                rec.trajectory.push_back(
                    {clock.seconds(), it, best.distance_cost(), detail::gap_or_none(best.distance_cost(), ctx.bks)});
            } else {
                ++stall;
                ++since_restart;
            }
            if (params.restart_after > 0 && since_restart >= params.restart_after) {
                cur = best;
                since_restart = 0;
                detail::absorb_counts(filter, rec);
                filter = detail::make_filter(best.to_solution(), cfg, ctx, label_rng, rec);
            }
        }
        detail::absorb_counts(filter, rec);

        Solution out = best.to_solution();
        rec.iterations = it;
        rec.final_cost = cur.distance_cost();
        rec.best_cost = out.cost();
        rec.gap = detail::gap_or_none(out.cost(), ctx.bks);
        rec.feasible = evaluate(out).feasible;
        rec.elapsed = clock.seconds();
        return {std::move(out), std::move(rec)};
    }

}  // namespace edgesel
