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

#include "edgesel/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

namespace edgesel {

    std::vector<Saving> savings_list(const Instance& inst, bool restricted, int gamma) {
        std::vector<Saving> out;
        const int n = inst.size();
        const auto value = [&](int i, int j) {
            return inst.distance(0, i) + inst.distance(0, j) - inst.distance(i, j);
        };
        if (!restricted) {
            out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) / 2);
            for (int i = 1; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    out.push_back({i, j, value(i, j)});
                }
            }
        } else if (gamma > 0) {
            std::unordered_set<std::uint64_t> seen;
            for (int i = 1; i < n; ++i) {
                const auto nbrs = inst.neighbors(i);
                const auto limit = std::min<std::size_t>(nbrs.size(), static_cast<std::size_t>(gamma));
                for (std::size_t r = 0; r < limit; ++r) {
                    const int j = nbrs[r];
                    if (j == Instance::depot()) {
                        continue;
                    }
                    const auto e = Edge::make(i, j);
                    if (seen.insert(e.key()).second) {
                        out.push_back({e.a, e.b, value(e.a, e.b)});
                    }
                }
            }
        }
        std::ranges::sort(out, [](const Saving& x, const Saving& y) {
            if (x.value != y.value) {
                return x.value > y.value;
            }
            return x.i != y.i ? x.i < y.i : x.j < y.j;
        });
        return out;
    }

    Solution savings_construct(const Instance& inst, bool restricted, int gamma) {
        const int n = inst.size();
        std::vector<std::vector<int>> routes(static_cast<std::size_t>(n));
        std::vector<int> route_of(static_cast<std::size_t>(n), -1);
        std::vector<int> load(static_cast<std::size_t>(n), 0);
        for (int c = 1; c < n; ++c) {
            routes[static_cast<std::size_t>(c)] = {c};
            route_of[static_cast<std::size_t>(c)] = c;
            load[static_cast<std::size_t>(c)] = inst.demand(c);
        }

        std::vector<int> merged;
        for (const auto& s : savings_list(inst, restricted, gamma)) {
            if (s.value <= 0.0) {
                break;
            }
            const int ri = route_of[static_cast<std::size_t>(s.i)];
            const int rj = route_of[static_cast<std::size_t>(s.j)];
            if (ri == rj || load[static_cast<std::size_t>(ri)] + load[static_cast<std::size_t>(rj)] > inst.capacity()) {
                continue;
            }
            auto& a = routes[static_cast<std::size_t>(ri)];
            auto& b = routes[static_cast<std::size_t>(rj)];
            const bool i_first = a.front() == s.i;
            const bool i_last = a.back() == s.i;
            const bool j_first = b.front() == s.j;
            const bool j_last = b.back() == s.j;
            if (!(i_first || i_last) || !(j_first || j_last)) {
                continue;
            }
            // Orient a so that it ends with i and b so that it starts with j.
            std::vector<int> left = a;
            std::vector<int> right = b;
            if (!i_last) {
                std::ranges::reverse(left);
            }
            if (!j_first) {
                std::ranges::reverse(right);
            }
            merged = left;
            merged.insert(merged.end(), right.begin(), right.end());
            if (inst.has_time_windows() && !tw_feasible(inst, merged)) {
                std::ranges::reverse(merged);
                if (!tw_feasible(inst, merged)) {
                    continue;
                }
            }
            a = merged;
            b.clear();
            load[static_cast<std::size_t>(ri)] += load[static_cast<std::size_t>(rj)];
            for (int c : a) {
                route_of[static_cast<std::size_t>(c)] = ri;
            }
        }

        Solution sol(inst);
        for (auto& r : routes) {
            sol.add_route(std::move(r));
        }
        return sol;
    }

    Solution sweep_construct(const Instance& inst) {
        const auto& depot = inst.node(Instance::depot());
        const auto angle = [&](int c) {
            return std::atan2(inst.node(c).y - depot.y, inst.node(c).x - depot.x);
        };
        const double start = angle(1);
        std::vector<std::pair<double, int>> order;
        for (int c = 1; c < inst.size(); ++c) {
            double a = angle(c) - start;
            while (a < 0.0) {
                a += 2.0 * std::numbers::pi;
            }
            while (a >= 2.0 * std::numbers::pi) {
                a -= 2.0 * std::numbers::pi;
            }
            order.emplace_back(a, c);
        }
        std::ranges::sort(order);

        Solution sol(inst);
        std::vector<int> current;
        int load = 0;
        for (const auto& [_, c] : order) {
            bool fits = load + inst.demand(c) <= inst.capacity();
            if (fits && inst.has_time_windows()) {
                current.push_back(c);
                fits = tw_feasible(inst, current);
                current.pop_back();
            }
            if (!fits && !current.empty()) {
                sol.add_route(std::move(current));
                current.clear();
                load = 0;
            }
            current.push_back(c);
            load += inst.demand(c);
        }
        sol.add_route(std::move(current));
        return sol;
    }

    int greedy_route_estimate(const Instance& inst) {
        const auto q = static_cast<long long>(inst.capacity());
        return static_cast<int>((inst.total_demand() + q - 1) / q);
    }

    Solution greedy_split(const Instance& inst, std::span<const int> tour) {
        Solution sol(inst);
        std::vector<int> current;
        int load = 0;
        for (int c : tour) {
            bool fits = load + inst.demand(c) <= inst.capacity();
            if (fits && inst.has_time_windows() && !current.empty()) {
                current.push_back(c);
                fits = tw_feasible(inst, current);
                current.pop_back();
            }
            if (!fits && !current.empty()) {
                sol.add_route(std::move(current));
                current.clear();
                load = 0;
            }
            current.push_back(c);
            load += inst.demand(c);
        }
        sol.add_route(std::move(current));
        return sol;
    }

    Solution split_tour(const Instance& inst, std::span<const int> tour, const SplitWeights& weights) {
        const std::size_t n = tour.size();
        const auto& depot = inst.node(Instance::depot());
        const double load_cap = weights.max_load_ratio * inst.capacity();
        std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
        std::vector<std::size_t> cut(n + 1, 0);
        best[0] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(best[i])) {
                continue;
            }
            double dist = 0.0;
            double time = depot.tw_open;
            double warp = 0.0;
            double prev_service = depot.service_time;
            int prev = Instance::depot();
            int load = 0;
            for (std::size_t j = i; j < n; ++j) {
                const int c = tour[j];
                const auto& node = inst.node(c);
                load += node.demand;
                if (j > i && load > load_cap) {
                    break;
                }
                dist += inst.distance(prev, c);
                double start = std::max(node.tw_open, time + prev_service + inst.distance(prev, c));
                if (start > node.tw_close) {
                    warp += start - node.tw_close;
                    start = node.tw_close;
                }
                time = start;
                prev = c;
                prev_service = node.service_time;
                const double back = time + prev_service + inst.distance(c, Instance::depot());
                const double route_warp = warp + std::max(0.0, back - depot.tw_close);
                const double cost = dist + inst.distance(c, Instance::depot()) +
                                    weights.capacity_weight * std::max(0, load - inst.capacity()) +
                                    weights.time_warp_weight * route_warp;
                if (best[i] + cost < best[j + 1]) {
                    best[j + 1] = best[i] + cost;
                    cut[j + 1] = i;
                }
            }
        }
        std::vector<std::vector<int>> routes;
        for (std::size_t j = n; j > 0; j = cut[j]) {
            routes.emplace_back(tour.begin() + static_cast<std::ptrdiff_t>(cut[j]),
                                tour.begin() + static_cast<std::ptrdiff_t>(j));
        }
        std::ranges::reverse(routes);
        return Solution(inst, routes);
    }

    std::vector<int> giant_tour(const Solution& sol) {
        std::vector<int> tour;
        for (const auto& r : sol.routes()) {
            tour.insert(tour.end(), r.customers.begin(), r.customers.end());
        }
        return tour;
    }

}  // namespace edgesel
