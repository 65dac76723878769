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
#include <limits>
#include <numeric>

#include "edgesel/metaheuristics.hpp"
#include "run_support.hpp"

namespace edgesel {

    namespace {

        struct Individual {
            std::vector<std::vector<int>> routes;
            std::vector<int> tour;
            std::vector<int> succ;
            std::vector<int> pred;
            double distance = 0.0;
            double load_excess = 0.0;
            double time_warp = 0.0;
            double penalized = 0.0;
            double fitness = 0.0;

            bool load_feasible() const {
                return load_excess <= 0.0;
            }
            bool tw_ok() const {
                return time_warp <= 0.0;
            }
            bool feasible() const {
                return load_feasible() && tw_ok();
            }
        };

        struct Penalties {
            double capacity = 1.0;
            double time_warp = 1.0;

            double cost(const Individual& ind) const {
                return ind.distance + capacity * ind.load_excess + time_warp * ind.time_warp;
            }
        };

        Individual make_individual(const Instance& inst, const SearchState& state, const Penalties& pen) {
            Individual ind;
            const auto n = static_cast<std::size_t>(inst.size());
            ind.succ.assign(n, 0);
            ind.pred.assign(n, 0);
            for (int r = 0; r < state.route_slots(); ++r) {
                const auto route = state.route(r);
                if (route.empty()) {
                    continue;
                }
                ind.routes.emplace_back(route.begin(), route.end());
                int load = 0;
                int prev = Instance::depot();
                for (const int c : route) {
                    load += inst.demand(c);
                    ind.tour.push_back(c);
                    ind.pred[static_cast<std::size_t>(c)] = prev;
                    if (prev != Instance::depot()) {
                        ind.succ[static_cast<std::size_t>(prev)] = c;
                    }
                    prev = c;
                }
                ind.succ[static_cast<std::size_t>(prev)] = Instance::depot();
                ind.load_excess += std::max(0, load - inst.capacity());
                if (inst.has_time_windows()) {
                    ind.time_warp += time_warp(inst, route);
                }
            }
            ind.distance = state.distance_cost();
            ind.penalized = pen.cost(ind);
            return ind;
        }

        // Fraction of customers whose adjacency differs between the two individuals.
        double broken_pairs(const Individual& a, const Individual& b) {
            const std::size_t n = a.succ.size();
            if (n <= 1) {
                return 0.0;
            }
            int diff = 0;
            for (std::size_t c = 1; c < n; ++c) {
                const int sa = a.succ[c];
                const int pa = a.pred[c];
                if (sa != b.succ[c] && sa != b.pred[c]) {
                    ++diff;
                }
                if (pa == Instance::depot() && b.pred[c] != Instance::depot() && b.succ[c] != Instance::depot()) {
                    ++diff;
                }
            }
            return static_cast<double>(diff) / static_cast<double>(n - 1);
        }

        class SubPopulation {
        public:
            SubPopulation(std::size_t mu, std::size_t lambda, std::size_t elite, std::size_t closest)
                : mu_(mu), lambda_(lambda), elite_(elite), closest_(closest) { }

            const std::vector<Individual>& members() const {
                return members_;
            }
            std::vector<Individual>& members() {
                return members_;
            }
            std::size_t size() const {
                return members_.size();
            }
            bool empty() const {
                return members_.empty();
            }
            void clear() {
                members_.clear();
            }

            // Returns the size reached right after insertion, before any pruning.
            std::size_t insert(Individual ind) {
                members_.push_back(std::move(ind));
                const std::size_t reached = members_.size();
                if (members_.size() >= mu_ + lambda_) {
                    while (members_.size() > mu_) {
                        remove_worst();
                    }
                }
                update_fitness();
                return reached;
            }

            void reprice(const Penalties& pen) {
                for (auto& m : members_) {
                    m.penalized = pen.cost(m);
                }
                update_fitness();
            }

            void update_fitness() {
                const std::size_t sz = members_.size();
                if (sz == 0) {
                    return;
                }
                if (sz == 1) {
                    members_[0].fitness = 0.0;
                    return;
                }
                std::vector<double> diversity(sz, 0.0);
                std::vector<double> dists;
                for (std::size_t i = 0; i < sz; ++i) {
                    dists.clear();
                    for (std::size_t j = 0; j < sz; ++j) {
                        if (i != j) {
                            dists.push_back(broken_pairs(members_[i], members_[j]));
                        }
                    }
                    const std::size_t k = std::min(closest_, dists.size());
                    std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k), dists.end());
                    diversity[i] = std::accumulate(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
                                   static_cast<double>(std::max<std::size_t>(k, 1));
                }
                std::vector<std::size_t> by_cost(sz);
                std::iota(by_cost.begin(), by_cost.end(), std::size_t{0});
                std::ranges::stable_sort(by_cost, [&](std::size_t a, std::size_t b) {
                    return members_[a].penalized < members_[b].penalized;
                });
                std::vector<std::size_t> by_div(sz);
                std::iota(by_div.begin(), by_div.end(), std::size_t{0});
                std::ranges::stable_sort(by_div, [&](std::size_t a, std::size_t b) { return diversity[a] > diversity[b]; });
                std::vector<double> cost_rank(sz);
                std::vector<double> div_rank(sz);
                const double denom = static_cast<double>(sz - 1);
                for (std::size_t r = 0; r < sz; ++r) {
                    cost_rank[by_cost[r]] = static_cast<double>(r) / denom;
                    div_rank[by_div[r]] = static_cast<double>(r) / denom;
                }
                const double elite_weight =
                    1.0 - static_cast<double>(std::min(elite_, sz)) / static_cast<double>(sz);
                for (std::size_t i = 0; i < sz; ++i) {
                    members_[i].fitness = cost_rank[i] + elite_weight * div_rank[i];
                }
            }

        private:
            void remove_worst() {
                update_fitness();
                std::size_t worst = 0;
                bool worst_clone = false;
                for (std::size_t i = 0; i < members_.size(); ++i) {
                    bool clone = false;
                    for (std::size_t j = 0; j < members_.size() && !clone; ++j) {
                        clone = i != j && broken_pairs(members_[i], members_[j]) <= 0.0;
                    }
                    if ((clone && !worst_clone) ||
                        (clone == worst_clone && members_[i].fitness > members_[worst].fitness)) {
                        worst = i;
                        worst_clone = clone;
                    }
                }
                members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(worst));
            }

            std::size_t mu_;
            std::size_t lambda_;
            std::size_t elite_;
            std::size_t closest_;
            std::vector<Individual> members_;
        };

        std::vector<int> ordered_crossover(std::span<const int> a, std::span<const int> b, Rng& rng) {
            const auto n = static_cast<int>(a.size());
            if (n < 2) {
                return {a.begin(), a.end()};
            }
            int start = rng.uniform_int(0, n - 1);
            int end = rng.uniform_int(0, n - 1);
            while (end == start) {
                end = rng.uniform_int(0, n - 1);
            }
            std::vector<int> child(a.size(), -1);
            std::vector<char> taken(a.size() + 1, 0);
            for (int k = start; k != (end + 1) % n; k = (k + 1) % n) {
                child[static_cast<std::size_t>(k)] = a[static_cast<std::size_t>(k)];
                taken[static_cast<std::size_t>(a[static_cast<std::size_t>(k)])] = 1;
            }
            int write = (end + 1) % n;
            for (int k = 0; k < n; ++k) {
                const int c = b[static_cast<std::size_t>((end + 1 + k) % n)];
                if (taken[static_cast<std::size_t>(c)] == 0) {
                    child[static_cast<std::size_t>(write)] = c;
                    write = (write + 1) % n;
                }
            }
            return child;
        }

        class HgsRun {
        public:
            HgsRun(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx, const HgsParams& params)
                : inst_(inst),
                  cfg_(cfg),
                  ctx_(ctx),
                  params_(params),
                  stop_(cfg),
                  rng_(cfg.seed),
                  label_rng_(cfg.seed ^ 0xa5a5a5a5deadbeefULL),
                  feasible_(params.population, params.generation, params.elite, params.closest),
                  infeasible_(params.population, params.generation, params.elite, params.closest) {
                double max_dist = 0.0;
                int max_demand = 1;
                for (int i = 1; i < inst.size(); ++i) {
                    max_dist = std::max(max_dist, inst.distance(Instance::depot(), i));
                    max_demand = std::max(max_demand, inst.demand(i));
                }
                pen_.capacity = std::clamp(max_dist / max_demand, 0.1, 1000.0);
                pen_.time_warp = 1.0;
                rec_.instance = inst.name();
                rec_.variant = cfg.name;
                rec_.seed = cfg.seed;
            }

            RunResult run() {
                initialize_population();
                relabel();
                long long it = 0;
                long long stall = 0;
                long long since_regen = 0;
                while (!stop_.done(clock_, it, stall)) {
                    ++it;
                    if (params_.relabel_every_generation && it > 1) {
                        relabel();
                    }
                    const Individual& pa = tournament();
                    const Individual& pb = tournament();
                    auto tour = ordered_crossover(pa.tour, pb.tour, rng_);
                    const bool improved = educate_and_insert(split(tour), it);
                    if (improved) {
                        stall = 0;
                        since_regen = 0;
                    } else {
                        ++stall;
                        ++since_regen;
                    }
                    if (it % 100 == 0) {
                        adjust_penalties();
                    }
                    if (params_.regenerate_after > 0 && since_regen >= params_.regenerate_after) {
                        feasible_.clear();
                        infeasible_.clear();
                        initialize_population();
                        relabel();
                        since_regen = 0;
                    }
                }
                detail::absorb_counts(filter_, rec_);
                return finish(it);
            }

        private:
            SearchOptions search_options(const Penalties& pen) {
                SearchOptions so;
                so.gamma = cfg_.gamma;
                so.policy = {false, pen.capacity, pen.time_warp};
                so.seed = rng_.next();
                if (ctx_.on_accept) {
                    so.on_accept = [this](const SearchState& st, const Move&) { ctx_.on_accept(st, filter_); };
                }
                return so;
            }

            Solution split(std::span<const int> tour) const {
                return split_tour(inst_, tour, {pen_.capacity, pen_.time_warp, 1.5});
            }

            Individual educate(const Solution& start, const Penalties& pen) {
                const auto so = search_options(pen);
                SearchState state(start, so.policy);
                descend(state, &filter_, so);
                return make_individual(inst_, state, pen);
            }

            void initialize_population() {
                std::vector<int> customers(static_cast<std::size_t>(inst_.num_customers()));
                std::iota(customers.begin(), customers.end(), 1);
                for (std::size_t k = 0; k < params_.initial_individuals; ++k) {
                    if (k > 0 && clock_.seconds() >= cfg_.time_limit) {
                        break;
                    }
                    rng_.shuffle(customers);
                    educate_and_insert(split(customers), 0);
                }
            }

            // Educates the child, optionally repairs it, and inserts the results. Returns true when the
            // best feasible cost improved.
            bool educate_and_insert(const Solution& child, long long iteration) {
                Individual ind = educate(child, pen_);
                load_history_.push_back(ind.load_feasible());
                tw_history_.push_back(ind.tw_ok());
                bool improved = insert(ind, iteration);
                if (!ind.feasible() && rng_.uniform01() < params_.repair_probability) {
                    Penalties strong = pen_;
                    strong.capacity *= params_.repair_penalty_multiplier;
                    strong.time_warp *= params_.repair_penalty_multiplier;
                    Individual repaired = educate(Solution(inst_, ind.routes), strong);
                    if (repaired.feasible()) {
                        repaired.penalized = pen_.cost(repaired);
                        improved = insert(std::move(repaired), iteration) || improved;
                    }
                }
                return improved;
            }

            bool insert(Individual ind, long long iteration) {
                bool improved = false;
                if (ind.feasible() && (!best_ || ind.distance < best_->distance - 1e-9)) {
                    best_ = ind;
                    improved = true;
                    rec_.trajectory.push_back(
                        {clock_.seconds(), iteration, ind.distance, detail::gap_or_none(ind.distance, ctx_.bks)});
                }
                if (!best_any_ || ind.penalized < best_any_->penalized) {
                    best_any_ = ind;
                }
                auto& pool = ind.feasible() ? feasible_ : infeasible_;
                rec_.max_subpopulation = std::max(rec_.max_subpopulation, pool.insert(std::move(ind)));
                return improved;
            }

            const Individual& tournament() {
                const std::size_t nf = feasible_.size();
                const std::size_t total = nf + infeasible_.size();
                auto pick = [&]() -> const Individual& {
                    const auto k = static_cast<std::size_t>(rng_.uniform_int(0, static_cast<int>(total) - 1));
                    return k < nf ? feasible_.members()[k] : infeasible_.members()[k - nf];
                };
                const Individual& a = pick();
                const Individual& b = pick();
                return a.fitness <= b.fitness ? a : b;
            }

            void adjust_penalties() {
                auto ratio = [](const std::vector<bool>& h) {
                    return h.empty() ? 1.0
                                     : static_cast<double>(std::count(h.begin(), h.end(), true)) /
                                           static_cast<double>(h.size());
                };
                auto tune = [&](double& weight, double r) {
                    if (r < params_.target_feasible_low) {
                        weight = std::min(100000.0, weight * params_.penalty_factor);
                    } else if (r > params_.target_feasible_high) {
                        weight = std::max(0.1, weight / params_.penalty_factor);
                    }
                };
                tune(pen_.capacity, ratio(load_history_));
                if (inst_.has_time_windows()) {
                    tune(pen_.time_warp, ratio(tw_history_));
                }
                load_history_.clear();
                tw_history_.clear();
                infeasible_.reprice(pen_);
                if (best_any_) {
                    best_any_->penalized = pen_.cost(*best_any_);
                }
            }

            void relabel() {
                const Individual* ref = best_ ? &*best_ : (best_any_ ? &*best_any_ : nullptr);
                if (ref == nullptr) {
                    return;
                }
                detail::absorb_counts(filter_, rec_);
                const Solution s0(inst_, ref->routes);
                if (!labeled_) {
                    rec_.initial_cost = s0.cost();
                    labeled_ = true;
                }
                filter_ = detail::make_filter(s0, cfg_, ctx_, label_rng_, rec_);
            }

            RunResult finish(long long it) {
                const Individual* out = best_ ? &*best_ : &*best_any_;
                Solution sol(inst_, out->routes);
                rec_.iterations = it;
                rec_.final_cost = sol.cost();
                rec_.best_cost = sol.cost();
                rec_.gap = detail::gap_or_none(sol.cost(), ctx_.bks);
                rec_.feasible = evaluate(sol).feasible;
                rec_.elapsed = clock_.seconds();
                return {std::move(sol), std::move(rec_)};
            }

            const Instance& inst_;
            const VariantConfig& cfg_;
            const RunContext& ctx_;
            const HgsParams& params_;
            const detail::Stopwatch clock_;
            const detail::StopRule stop_;
            Rng rng_;
            Rng label_rng_;
            Penalties pen_;
            SubPopulation feasible_;
            SubPopulation infeasible_;
            TabuEdgeFilter filter_;
            std::optional<Individual> best_;
            std::optional<Individual> best_any_;
            std::vector<bool> load_history_;
            std::vector<bool> tw_history_;
            RunRecord rec_;
            bool labeled_ = false;
        };

    }  // namespace

    RunResult run_hybrid_hgs(const Instance& inst, const VariantConfig& cfg, const RunContext& ctx,
                             const HgsParams& params) {
        cfg.validate();
        if (params.population == 0 || params.generation == 0 || params.initial_individuals == 0) {
            throw std::invalid_argument("population, generation and initial_individuals must be positive");
        }
        HgsRun run(inst, cfg, ctx, params);
        return run.run();
    }

}  // namespace edgesel
