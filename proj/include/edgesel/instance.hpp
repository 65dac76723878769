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

#ifndef EDGESEL_INSTANCE_HPP_
#define EDGESEL_INSTANCE_HPP_

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace edgesel {

    enum class ProblemKind { kCvrp, kCvrptw };

    enum class DistanceMode { kRounded, kExact };

    inline constexpr double kNoTimeLimit = std::numeric_limits<double>::infinity();

    struct Node {
        int id = 0;
        double x = 0.0;
        double y = 0.0;
        int demand = 0;
        // Time-window data; only meaningful for CVRPTW instances.
        double tw_open = 0.0;
        double tw_close = kNoTimeLimit;
        double service_time = 0.0;

        friend bool operator==(const Node&, const Node&) = default;
    };

    // Error raised by the text parsers; `line()` is 1-based, 0 when the problem is not tied to a line.
    class ParseError : public std::runtime_error {
    public:
        ParseError(int line, const std::string& message);
        int line() const {
            return line_;
        }

    private:
        int line_;
    };

    // Immutable CVRP / CVRPTW instance with its distance oracle and neighbor-rank tables. Node 0 is the depot and
    // customers are 1..N. Safe to share across threads once constructed.
    class Instance {
    public:
        static constexpr int kDefaultNeighbors = 50;
        // Instances up to this many nodes get a full cached distance matrix.
        static constexpr int kMatrixThreshold = 2000;

        // Throws std::invalid_argument when an invariant is violated.
        Instance(std::string name, ProblemKind kind, int capacity, std::vector<Node> nodes, DistanceMode mode,
                 int neighbor_count = kDefaultNeighbors);

        Instance(std::string name, ProblemKind kind, int capacity, std::vector<Node> nodes)
            : Instance(std::move(name), kind, capacity, std::move(nodes),
                       kind == ProblemKind::kCvrp ? DistanceMode::kRounded : DistanceMode::kExact) { }

        const std::string& name() const {
            return name_;
        }
        ProblemKind kind() const {
            return kind_;
        }
        bool has_time_windows() const {
            return kind_ == ProblemKind::kCvrptw;
        }
        DistanceMode distance_mode() const {
            return mode_;
        }
        int capacity() const {
            return capacity_;
        }
        // Number of nodes including the depot.
        int size() const {
            return static_cast<int>(nodes_.size());
        }
        int num_customers() const {
            return size() - 1;
        }
        static constexpr int depot() {
            return 0;
        }
        const Node& node(int i) const {
            return nodes_[static_cast<std::size_t>(i)];
        }
        std::span<const Node> nodes() const {
            return nodes_;
        }
        int demand(int i) const {
            return nodes_[static_cast<std::size_t>(i)].demand;
        }
        long long total_demand() const {
            return total_demand_;
        }

        double distance(int i, int j) const {
            if (!matrix_.empty()) {
                return matrix_[static_cast<std::size_t>(i) * nodes_.size() + static_cast<std::size_t>(j)];
            }
            return compute_distance(i, j);
        }

        // Nodes other than `i` sorted by increasing distance, ties broken by lower id. Holds the first
        // `neighbor_count()` entries.
        std::span<const int> neighbors(int i) const {
            return neighbors_[static_cast<std::size_t>(i)];
        }
        int neighbor_count() const {
            return neighbor_count_;
        }

        // 1-based rank of `j` among the neighbors of `i` if it is at most `gamma`, otherwise -1.
        int neighbor_rank(int i, int j, int gamma) const;

        bool has_distance_matrix() const {
            return !matrix_.empty();
        }

        // Vehicle count from a Solomon header; 0 when the file does not bound the fleet.
        int fleet_size() const {
            return fleet_size_;
        }

        friend Instance parse_solomon(std::string_view text);

    private:
        double compute_distance(int i, int j) const;
        void build_tables();

        std::string name_;
        ProblemKind kind_;
        int capacity_;
        std::vector<Node> nodes_;
        DistanceMode mode_;
        int neighbor_count_;
        long long total_demand_ = 0;
        int fleet_size_ = 0;
        std::vector<double> matrix_;
        std::vector<std::vector<int>> neighbors_;
    };

    bool operator==(const Instance& a, const Instance& b);

    // CVRPLIB (TSPLIB-like) text: NAME, DIMENSION, CAPACITY, NODE_COORD_SECTION, DEMAND_SECTION, DEPOT_SECTION.
    Instance parse_cvrplib(std::string_view text);
    std::string render_cvrplib(const Instance& inst);

    // Solomon / Gehring-Homberger text with VEHICLE and CUSTOMER blocks.
    Instance parse_solomon(std::string_view text);
    std::string render_solomon(const Instance& inst);

    // Reads a file and dispatches on its content (CVRPLIB if it carries NODE_COORD_SECTION).
    Instance load_instance(const std::string& path);

    enum class DepotPosition { kCenter, kCorner, kRandom };
    enum class CustomerDistribution { kRandom, kClustered, kRandomClustered };
    enum class DemandProfile { kUnit, kSmall, kLarge, kUniform, kQuadrant };

    struct GeneratorOptions {
        // Average number of customers per route; sets the capacity as ceil(route_size * total_demand / n).
        double route_size = 8.0;
        int grid = 1000;
    };

    // Deterministic XML-style generator on a [0, grid]^2 integer grid. Clustered customers are drawn from Gaussian
    // blobs around random seed points, random customers uniformly, and RC mixes the two halves.
    Instance generate_instance(unsigned long long seed, int n, DepotPosition depot_pos, CustomerDistribution dist,
                               DemandProfile demand, const GeneratorOptions& options = {});

    std::string_view to_string(CustomerDistribution d);

}  // namespace edgesel

#endif
