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

#ifndef EDGESEL_CONSTRUCTION_HPP_
#define EDGESEL_CONSTRUCTION_HPP_

#include <span>
#include <vector>

#include "edgesel/instance.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    // Granularity used across the toolkit unless a caller overrides it.
    inline constexpr int kDefaultGranularity = 25;

    struct Saving {
        int i;
        int j;
        double value;
    };

    // Candidate merges s(i,j) = d(0,i) + d(0,j) - d(i,j), ordered by decreasing value and then by (i, j). When
    // `restricted`, a pair enters only if one endpoint is among the other's `gamma` nearest neighbors.
    std::vector<Saving> savings_list(const Instance& inst, bool restricted, int gamma);

    // Parallel Clarke-Wright savings. Merges that break capacity (or time windows) are skipped.
    Solution savings_construct(const Instance& inst, bool restricted = true, int gamma = kDefaultGranularity);

    // Polar sweep around the depot starting at customer 1's angle, packing customers greedily by capacity.
    Solution sweep_construct(const Instance& inst);

    // ceil(total demand / capacity).
    int greedy_route_estimate(const Instance& inst);

    // Cuts a giant tour into consecutive routes, opening a new route whenever the next customer would exceed the
    // capacity (or make the route time-window infeasible).
    Solution greedy_split(const Instance& inst, std::span<const int> giant_tour);

    // Optimal cut of a giant tour into consecutive routes under penalized cost: distance plus
    // `capacity_weight` per unit of excess load plus `time_warp_weight` per unit of time warp. Routes are never
    // extended past `max_load_ratio` times the capacity.
    struct SplitWeights {
        double capacity_weight = 1.0;
        double time_warp_weight = 1.0;
        double max_load_ratio = 1.5;
    };
    Solution split_tour(const Instance& inst, std::span<const int> giant_tour, const SplitWeights& weights);

    // Concatenation of the routes in order.
    std::vector<int> giant_tour(const Solution& sol);

}  // namespace edgesel

#endif
