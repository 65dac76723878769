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

#ifndef EDGESEL_TESTS_PROPERTIES_HPP_
#define EDGESEL_TESTS_PROPERTIES_HPP_

#include <cstdint>
#include <vector>

#include "edgesel/construction.hpp"
#include "edgesel/local_search.hpp"
#include "edgesel/random.hpp"
#include "oracles.hpp"

namespace edgesel::testing {

    struct DeltaCheck {
        int applied = 0;
        // Incremental cost differs from the scratch recomputation.
        int cost_mismatches = 0;
        // Old cost plus the move delta differs from the new cost.
        int delta_mismatches = 0;
    };

    // Applies random feasible moves of every kind to savings solutions of integer-distance instances.
    inline DeltaCheck random_move_delta_check(int moves, std::uint64_t seed, int customers = 30) {
        DeltaCheck out;
        Rng rng(seed);
        std::uint64_t inst_seed = seed * 1000;
        while (out.applied < moves) {
            const Instance inst = random_cvrp(inst_seed++, customers, 4);
            SearchState state(savings_construct(inst));
            for (int attempt = 0; attempt < 2000 && out.applied < moves; ++attempt) {
                const int u = rng.uniform_int(1, inst.num_customers());
                const int v = rng.uniform_int(0, inst.num_customers());
                const auto kind = kAllMoveKinds[static_cast<std::size_t>(rng.uniform_int(0, 3))];
                const auto m = state.make_move(kind, u, v, rng.uniform_int(0, move_variants(kind) - 1));
                if (!m || !state.evaluate(*m).feasible) {
                    continue;
                }
                const double before = state.distance_cost();
                state.apply(*m);
                ++out.applied;
                const double after = state.distance_cost();
                if (after != scratch_cost(inst, state.to_solution().route_sequences())) {
                    ++out.cost_mismatches;
                }
                if (before + m->delta != after) {
                    ++out.delta_mismatches;
                }
            }
        }
        return out;
    }

    struct FixedEdgeCheck {
        int instances = 0;
        int accepted = 0;
        int fixed_edge_removals = 0;
        int partition_violations = 0;
        int capacity_violations = 0;
    };

    // Random fixed-edge subsets of each starting solution, aspiration disabled; random moves are accepted when
    // feasible and allowed by the filter, and every accepted state is checked.
    inline FixedEdgeCheck fixed_edge_invariant_check(int instances, int moves, std::uint64_t seed) {
        FixedEdgeCheck out;
        Rng rng(seed);
        const int per_instance = (moves + instances - 1) / instances;
        for (int k = 0; k < instances && out.accepted < moves; ++k) {
            const Instance inst = random_cvrp(seed * 7919 + static_cast<std::uint64_t>(k), 20 + k % 20, 3 + k % 4);
            const Solution start = k % 2 == 0 ? savings_construct(inst) : sweep_construct(inst);
            std::vector<Edge> chosen;
            for (const Edge e : edges_of(start)) {
                if (rng.uniform01() < 0.4) {
                    chosen.push_back(e);
                }
            }
            const EdgeSet fixed(chosen);
            TabuEdgeFilter filter(fixed, 1.0, rng.next());
            SearchState state(start);
            ++out.instances;
            int accepted_here = 0;
            for (int attempt = 0; attempt < 200 * per_instance && accepted_here < per_instance; ++attempt) {
                const int u = rng.uniform_int(1, inst.num_customers());
                const int v = rng.uniform_int(0, inst.num_customers());
                const auto kind = kAllMoveKinds[static_cast<std::size_t>(rng.uniform_int(0, 3))];
                const auto m = state.make_move(kind, u, v, rng.uniform_int(0, move_variants(kind) - 1));
                if (!m || !state.evaluate(*m).feasible || !filter.check(*m).allowed()) {
                    continue;
                }
                state.apply(*m);
                ++accepted_here;
                ++out.accepted;
                const Solution now = state.to_solution();
                const EdgeSet present = edges_of(now);
                for (const Edge e : fixed) {
                    if (present.count(e) < fixed.count(e)) {
                        ++out.fixed_edge_removals;
                        break;
                    }
                }
                const auto check = check_routes(inst, now.route_sequences());
                out.partition_violations += check.partition ? 0 : 1;
                out.capacity_violations += check.capacity ? 0 : 1;
            }
        }
        return out;
    }

}  // namespace edgesel::testing

#endif
