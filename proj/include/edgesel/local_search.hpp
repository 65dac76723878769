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

#ifndef EDGESEL_LOCAL_SEARCH_HPP_
#define EDGESEL_LOCAL_SEARCH_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "edgesel/construction.hpp"
#include "edgesel/instance.hpp"
#include "edgesel/random.hpp"
#include "edgesel/solution.hpp"

namespace edgesel {

    enum class MoveKind { kRelocate, kSwap, kTwoOpt, kTwoOptStar };

    inline constexpr std::array<MoveKind, 4> kAllMoveKinds{MoveKind::kRelocate, MoveKind::kSwap, MoveKind::kTwoOpt,
                                                           MoveKind::kTwoOptStar};

    // Number of sub-cases per kind, see SearchState::make_move.
    int move_variants(MoveKind kind);

    // A local-search move. Removed and added edges are the multiset difference between the old and the new edge
    // sets of the affected routes, so an edge that is taken out and put back does not appear in either list.
    struct Move {
        MoveKind kind = MoveKind::kRelocate;
        int u = 0;
        int v = 0;
        int variant = 0;
        double delta = 0.0;

        std::array<Edge, 4> removed_buf{};
        std::array<Edge, 4> added_buf{};
        int num_removed = 0;
        int num_added = 0;

        std::span<const Edge> removed() const {
            return {removed_buf.data(), static_cast<std::size_t>(num_removed)};
        }
        std::span<const Edge> added() const {
            return {added_buf.data(), static_cast<std::size_t>(num_added)};
        }
    };

    struct BlockResult {
        bool blocked = false;
        bool aspired = false;

        bool allowed() const {
            return !blocked || aspired;
        }
    };

    // Fixed-edge set F produced by an edge selector plus the aspiration threshold p_theta. A move is tabu when it
    // removes an edge of F; a tabu move is let through when a fresh uniform draw exceeds p_theta.
    class TabuEdgeFilter {
    public:
        TabuEdgeFilter() : TabuEdgeFilter(EdgeSet{}, 1.0, 0) { }
        TabuEdgeFilter(const EdgeSet& fixed, double aspiration_threshold, std::uint64_t seed);

        bool is_fixed(Edge e) const {
            return keys_.contains(Edge::make(e.a, e.b).key());
        }
        const EdgeSet& fixed() const {
            return fixed_;
        }
        double aspiration_threshold() const {
            return p_theta_;
        }
        bool empty() const {
            return keys_.empty();
        }

        BlockResult check(const Move& move);

        std::uint64_t blocked_count() const {
            return blocked_;
        }
        std::uint64_t aspired_count() const {
            return aspired_;
        }

    private:
        EdgeSet fixed_;
        std::unordered_set<std::uint64_t> keys_;
        double p_theta_;
        Rng rng_;
        std::uint64_t blocked_ = 0;
        std::uint64_t aspired_ = 0;
    };

    inline BlockResult is_blocked(const Move& move, TabuEdgeFilter& filter) {
        return filter.check(move);
    }

    // Linear penalty weights. With `hard` set, moves that leave a route over capacity or time-window infeasible are
    // rejected instead of being charged.
    struct ConstraintPolicy {
        bool hard = true;
        double capacity_weight = 0.0;
        double time_warp_weight = 0.0;
    };

    // Mutable route representation used by the search. Owned by a single worker.
    class SearchState {
    public:
        SearchState(const Solution& sol, ConstraintPolicy policy = {});

        const Instance& instance() const {
            return *inst_;
        }
        Solution to_solution() const;

        double distance_cost() const {
            return distance_cost_;
        }
        double penalty() const;
        double penalized_cost() const {
            return distance_cost_ + penalty();
        }
        bool feasible() const;
        int num_routes() const;

        int route_of(int c) const {
            return route_of_[static_cast<std::size_t>(c)];
        }
        int pos(int c) const {
            return pos_[static_cast<std::size_t>(c)];
        }
        int pred(int c) const;
        int succ(int c) const;
        std::span<const int> route(int r) const {
            return routes_[static_cast<std::size_t>(r)];
        }
        int route_load(int r) const {
            return loads_[static_cast<std::size_t>(r)];
        }
        int route_slots() const {
            return static_cast<int>(routes_.size());
        }
        const ConstraintPolicy& policy() const {
            return policy_;
        }
        void set_policy(ConstraintPolicy p);

        // Builds the move of `kind` anchored at customer `u` and node `v` (a granular neighbor of u). Variants:
        //   relocate:   0 insert u after v, 1 insert u before v, 2 move u to a new route (v must be the depot)
        //   swap:       0 swap u with succ(v), 1 swap u with pred(v)
        //   two-opt:    intra-route, 0 reverses the segment after the earlier node, 1 the segment before the later
        //   two-opt*:   inter-route, 0 exchanges tails, 1 joins heads and tails crosswise with reversal
        // Returns nullopt when the combination is not applicable or would not change the solution.
        std::optional<Move> make_move(MoveKind kind, int u, int v, int variant) const;

        struct MoveEval {
            bool feasible = true;
            double penalized_delta = 0.0;
        };
        MoveEval evaluate(const Move& move) const;

        void apply(const Move& move);

    private:
        struct RouteChange {
            int route;
            std::vector<int> customers;
        };
        // New sequences of the routes touched by `move` (route == -1 means a fresh route).
        std::array<RouteChange, 2> rebuild(const Move& move, int& count) const;
        void set_route(int r, std::vector<int> customers);
        int new_route_load(const Move& move, int which) const;
        double excess(int load) const {
            return load > inst_->capacity() ? static_cast<double>(load - inst_->capacity()) : 0.0;
        }

        const Instance* inst_;
        ConstraintPolicy policy_;
        std::vector<std::vector<int>> routes_;
        std::vector<std::vector<int>> prefix_load_;
        std::vector<int> loads_;
        std::vector<double> lengths_;
        std::vector<double> warps_;
        std::vector<int> route_of_;
        std::vector<int> pos_;
        double distance_cost_ = 0.0;
    };

    // All applicable moves of `kind` over the granular neighborhood (1-based ranks up to gamma) of every customer.
    std::vector<Move> enumerate_moves(const Solution& sol, MoveKind kind, int gamma);

    // Applies a move produced for `sol` (e.g. by enumerate_moves) and returns the resulting solution.
    Solution apply_move(const Solution& sol, const Move& move);

    struct AnnealingParams {
        // Non-positive means 0.1 * initial cost / N.
        double initial_temperature = 0.0;
        double cooling = 0.999;
        double floor = 1e-6;
        int steps = 2000;
    };

    enum class Acceptance { kDescent, kSimulatedAnnealing };

    struct SearchOptions {
        std::vector<MoveKind> kinds{kAllMoveKinds.begin(), kAllMoveKinds.end()};
        int gamma = kDefaultGranularity;
        ConstraintPolicy policy{};
        Acceptance acceptance = Acceptance::kDescent;
        AnnealingParams annealing{};
        std::uint64_t seed = 0;
        // Visit customers in a seeded random order each pass instead of by id.
        bool shuffle = false;
        // Called after every applied move with the updated state.
        std::function<void(const SearchState&, const Move&)> on_accept;
    };

    // Granular first-improvement descent on a SearchState. Moves removing fixed edges are skipped unless the
    // filter's aspiration fires. Returns the number of applied moves.
    std::size_t descend(SearchState& state, TabuEdgeFilter* filter, const SearchOptions& options);

    // Value-level convenience wrapper. Under simulated-annealing acceptance a Metropolis random walk over sampled
    // granular moves is run first and its end point is then polished by descent.
    Solution descend(const Solution& sol, TabuEdgeFilter* filter, const SearchOptions& options);

    // Applies up to `steps` random feasible moves that the filter allows, regardless of cost.
    std::size_t random_walk(SearchState& state, TabuEdgeFilter* filter, int steps, int gamma, Rng& rng,
                            std::span<const MoveKind> kinds = kAllMoveKinds);

}  // namespace edgesel

#endif
