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
#include <string>

#include "edgesel/instance.hpp"
#include "edgesel/random.hpp"

namespace edgesel {

    std::string_view to_string(CustomerDistribution d) {
        switch (d) {
            case CustomerDistribution::kRandom:
                return "R";
            case CustomerDistribution::kClustered:
                return "C";
            case CustomerDistribution::kRandomClustered:
                return "RC";
        }
        return "?";
    }

    namespace {

        struct Point {
            double x;
            double y;
        };

        Point clamp_to_grid(double x, double y, int grid) {
            const double g = static_cast<double>(grid);
            return {std::clamp(std::round(x), 0.0, g), std::clamp(std::round(y), 0.0, g)};
        }

        int draw_demand(Rng& rng, DemandProfile profile, const Point& p, int grid) {
            switch (profile) {
                case DemandProfile::kUnit:
                    return 1;
                case DemandProfile::kSmall:
                    return rng.uniform_int(1, 10);
                case DemandProfile::kLarge:
                    return rng.uniform_int(50, 100);
                case DemandProfile::kUniform:
                    return rng.uniform_int(1, 100);
                case DemandProfile::kQuadrant: {
                    // Even quadrants get large demands, odd quadrants small ones.
                    const bool right = p.x >= grid / 2.0;
                    const bool top = p.y >= grid / 2.0;
                    return right == top ? rng.uniform_int(51, 100) : rng.uniform_int(1, 50);
                }
            }
            return 1;
        }

    }  // namespace

    Instance generate_instance(unsigned long long seed, int n, DepotPosition depot_pos, CustomerDistribution dist,
                               DemandProfile demand, const GeneratorOptions& options) {
        if (n < 1) {
            throw std::invalid_argument("generate_instance needs n >= 1");
        }
        Rng rng(seed * 0x2545f4914f6cdd1dULL + static_cast<unsigned long long>(n));
        const int grid = options.grid;
        const double g = static_cast<double>(grid);

        Point depot{};
        switch (depot_pos) {
            case DepotPosition::kCenter:
                depot = {std::round(g / 2), std::round(g / 2)};
                break;
            case DepotPosition::kCorner:
                depot = {0.0, 0.0};
                break;
            case DepotPosition::kRandom:
                depot = {static_cast<double>(rng.uniform_int(0, grid)), static_cast<double>(rng.uniform_int(0, grid))};
                break;
        }

        int clustered = 0;
        if (dist == CustomerDistribution::kClustered) {
            clustered = n;
        } else if (dist == CustomerDistribution::kRandomClustered) {
            clustered = n / 2;
        }

        std::vector<Point> seeds;
        if (clustered > 0) {
            const int num_seeds = std::min(clustered, rng.uniform_int(3, 8));
            for (int s = 0; s < num_seeds; ++s) {
                seeds.push_back({rng.uniform(0.1 * g, 0.9 * g), rng.uniform(0.1 * g, 0.9 * g)});
            }
        }
        const double sigma = 0.03 * g;

        std::vector<Point> points;
        points.reserve(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) {
            if (c < clustered) {
                // The first customers seed each blob so that every cluster is populated.
                const auto& s = seeds[static_cast<std::size_t>(c) % seeds.size()];
                points.push_back(clamp_to_grid(s.x + sigma * rng.normal(), s.y + sigma * rng.normal(), grid));
            } else {
                points.push_back({static_cast<double>(rng.uniform_int(0, grid)),
                                  static_cast<double>(rng.uniform_int(0, grid))});
            }
        }

        std::vector<Node> nodes;
        nodes.reserve(static_cast<std::size_t>(n) + 1);
        nodes.push_back(Node{0, depot.x, depot.y, 0});
        long long total = 0;
        for (int c = 0; c < n; ++c) {
            Node node;
            node.id = c + 1;
            node.x = points[static_cast<std::size_t>(c)].x;
            node.y = points[static_cast<std::size_t>(c)].y;
            node.demand = draw_demand(rng, demand, points[static_cast<std::size_t>(c)], grid);
            total += node.demand;
            nodes.push_back(node);
        }
        const int max_demand = std::ranges::max_element(nodes, {}, &Node::demand)->demand;
        const auto capacity = std::max<long long>(
            max_demand, static_cast<long long>(std::ceil(options.route_size * static_cast<double>(total) / n)));

        std::string name = "G-n" + std::to_string(n + 1) + "-" + std::string(to_string(dist)) + "-s" +
                           std::to_string(seed);
        return Instance(std::move(name), ProblemKind::kCvrp, static_cast<int>(capacity), std::move(nodes),
                        DistanceMode::kRounded);
    }

}  // namespace edgesel
