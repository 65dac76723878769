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

#ifndef EDGESEL_SOLUTION_HPP_
#define EDGESEL_SOLUTION_HPP_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/instance.hpp"

namespace edgesel {

    // Undirected edge, canonicalized so that a <= b.
    struct Edge {
        int a = 0;
        int b = 0;

        static constexpr Edge make(int i, int j) {
            return i <= j ? Edge{i, j} : Edge{j, i};
        }
        constexpr bool touches_depot() const {
            return a == Instance::depot();
        }
        constexpr std::uint64_t key() const {
            return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
        }

        friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
    };

    // Sorted multiset of undirected edges. A single-customer route contributes its depot edge twice.
    class EdgeSet {
    public:
        EdgeSet() = default;
        explicit EdgeSet(std::vector<Edge> edges);

        std::size_t size() const {
            return edges_.size();
        }
        bool empty() const {
            return edges_.empty();
        }
        bool contains(Edge e) const;
        std::size_t count(Edge e) const;
        std::span<const Edge> edges() const {
            return edges_;
        }
        auto begin() const {
            return edges_.begin();
        }
        auto end() const {
            return edges_.end();
        }
        // Subset without depot-incident edges.
        EdgeSet customer_edges() const;

        friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

    private:
        std::vector<Edge> edges_;
    };

    struct Route {
        std::vector<int> customers;
        int load = 0;
        double length = 0.0;
        // Arrival-time feasibility; always true on CVRP instances.
        bool tw_feasible = true;
    };

    Route make_route(const Instance& inst, std::vector<int> customers);

    // Routes over an instance. Empty routes are dropped; route order carries no meaning.
    class Solution {
    public:
        explicit Solution(const Instance& inst) : inst_(&inst) { }
        Solution(const Instance& inst, const std::vector<std::vector<int>>& routes);

        const Instance& instance() const {
            return *inst_;
        }
        std::span<const Route> routes() const {
            return routes_;
        }
        int num_routes() const {
            return static_cast<int>(routes_.size());
        }
        double cost() const {
            return cost_;
        }

        void add_route(std::vector<int> customers);
        void set_routes(const std::vector<std::vector<int>>& routes);
        std::vector<std::vector<int>> route_sequences() const;

    private:
        const Instance* inst_;
        std::vector<Route> routes_;
        double cost_ = 0.0;
    };

    struct Violation {
        enum class Kind { kCapacity, kTimeWindow, kDuplicate, kMissing, kInvalidNode };
        Kind kind;
        int route = -1;
        int node = -1;
        double amount = 0.0;
    };

    struct Evaluation {
        double cost = 0.0;
        bool feasible = true;
        std::vector<Violation> violations;
    };

    // Recomputes cost and constraint status from scratch.
    Evaluation evaluate(const Solution& sol);

    double route_length(const Instance& inst, std::span<const int> customers);

    EdgeSet edges_of(const Solution& sol);

    // Percentage deviation from a best-known cost; throws std::invalid_argument when bks <= 0.
    double compute_gap(double obtained, double bks);

    // Forward sweep with waiting: service at j starts at max(tw_open_j, arrival), which may not exceed tw_close_j,
    // and the vehicle must be back before the depot closes.
    bool tw_feasible(const Instance& inst, std::span<const int> customers);

    // Total lateness when late starts are clamped to the window close (penalty measure for infeasible routes).
    double time_warp(const Instance& inst, std::span<const int> customers);

    // "Route #k: id id ...", then "Cost <value>".
    std::string render_solution(const Solution& sol);
    Solution parse_solution(const Instance& inst, std::string_view text);
    Solution load_solution(const Instance& inst, const std::string& path);

    // Compares routes as a multiset of sequences, treating a reversed route as equal on symmetric instances.
    bool same_routes(const Solution& a, const Solution& b);

}  // namespace edgesel

#endif
