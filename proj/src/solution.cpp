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

#include "edgesel/solution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "edgesel/text.hpp"

namespace edgesel {

    EdgeSet::EdgeSet(std::vector<Edge> edges) : edges_(std::move(edges)) {
        for (auto& e : edges_) {
            e = Edge::make(e.a, e.b);
        }
        std::ranges::sort(edges_);
    }

    bool EdgeSet::contains(Edge e) const {
        return std::ranges::binary_search(edges_, Edge::make(e.a, e.b));
    }

    std::size_t EdgeSet::count(Edge e) const {
        const auto [lo, hi] = std::ranges::equal_range(edges_, Edge::make(e.a, e.b));
        return static_cast<std::size_t>(hi - lo);
    }

    EdgeSet EdgeSet::customer_edges() const {
        std::vector<Edge> out;
        for (const auto& e : edges_) {
            if (!e.touches_depot()) {
                out.push_back(e);
            }
        }
        return EdgeSet(std::move(out));
    }

    double route_length(const Instance& inst, std::span<const int> customers) {
        if (customers.empty()) {
            return 0.0;
        }
        double len = inst.distance(Instance::depot(), customers.front());
        for (std::size_t k = 1; k < customers.size(); ++k) {
            len += inst.distance(customers[k - 1], customers[k]);
        }
        return len + inst.distance(customers.back(), Instance::depot());
    }

    Route make_route(const Instance& inst, std::vector<int> customers) {
        Route r;
        for (int c : customers) {
            r.load += inst.demand(c);
        }
        r.length = route_length(inst, customers);
        r.tw_feasible = !inst.has_time_windows() || tw_feasible(inst, customers);
        r.customers = std::move(customers);
        return r;
    }

    Solution::Solution(const Instance& inst, const std::vector<std::vector<int>>& routes) : inst_(&inst) {
        set_routes(routes);
    }

    void Solution::add_route(std::vector<int> customers) {
        if (customers.empty()) {
            return;
        }
        routes_.push_back(make_route(*inst_, std::move(customers)));
        cost_ += routes_.back().length;
    }

    void Solution::set_routes(const std::vector<std::vector<int>>& routes) {
        routes_.clear();
        cost_ = 0.0;
        for (const auto& r : routes) {
            add_route(r);
        }
    }

    std::vector<std::vector<int>> Solution::route_sequences() const {
        std::vector<std::vector<int>> out;
        out.reserve(routes_.size());
        for (const auto& r : routes_) {
            out.push_back(r.customers);
        }
        return out;
    }

    Evaluation evaluate(const Solution& sol) {
        const auto& inst = sol.instance();
        Evaluation ev;
        std::vector<int> seen(static_cast<std::size_t>(inst.size()), 0);
        for (int ri = 0; ri < sol.num_routes(); ++ri) {
            const auto& route = sol.routes()[static_cast<std::size_t>(ri)];
            long long load = 0;
            bool valid = true;
            for (int c : route.customers) {
                if (c <= 0 || c >= inst.size()) {
                    ev.violations.push_back({Violation::Kind::kInvalidNode, ri, c, 0.0});
                    valid = false;
                    continue;
                }
                if (seen[static_cast<std::size_t>(c)]++ > 0) {
                    ev.violations.push_back({Violation::Kind::kDuplicate, ri, c, 0.0});
                }
                load += inst.demand(c);
            }
            if (!valid) {
                continue;
            }
            ev.cost += route_length(inst, route.customers);
            if (load > inst.capacity()) {
                ev.violations.push_back(
                    {Violation::Kind::kCapacity, ri, -1, static_cast<double>(load - inst.capacity())});
            }
            if (inst.has_time_windows() && !tw_feasible(inst, route.customers)) {
                ev.violations.push_back({Violation::Kind::kTimeWindow, ri, -1, time_warp(inst, route.customers)});
            }
        }
        for (int c = 1; c < inst.size(); ++c) {
            if (seen[static_cast<std::size_t>(c)] == 0) {
                ev.violations.push_back({Violation::Kind::kMissing, -1, c, 0.0});
            }
        }
        ev.feasible = ev.violations.empty();
        return ev;
    }

    EdgeSet edges_of(const Solution& sol) {
        std::vector<Edge> edges;
        for (const auto& r : sol.routes()) {
            int prev = Instance::depot();
            for (int c : r.customers) {
                edges.push_back(Edge::make(prev, c));
                prev = c;
            }
            edges.push_back(Edge::make(prev, Instance::depot()));
        }
        return EdgeSet(std::move(edges));
    }

    double compute_gap(double obtained, double bks) {
        if (!(bks > 0.0)) {
            throw std::invalid_argument("best-known cost must be positive");
        }
        return (obtained - bks) / bks * 100.0;
    }

    namespace {
        // Returns the accumulated time warp; early exit with a positive value once `stop_on_violation` finds one.
        double sweep_times(const Instance& inst, std::span<const int> customers, bool stop_on_violation) {
            const auto& depot = inst.node(Instance::depot());
            double time = depot.tw_open;
            double warp = 0.0;
            int prev = Instance::depot();
            double prev_service = depot.service_time;
            for (int c : customers) {
                const auto& n = inst.node(c);
                double start = std::max(n.tw_open, time + prev_service + inst.distance(prev, c));
                if (start > n.tw_close) {
                    warp += start - n.tw_close;
                    if (stop_on_violation) {
                        return warp;
                    }
                    start = n.tw_close;
                }
                time = start;
                prev = c;
                prev_service = n.service_time;
            }
            const double back = time + prev_service + inst.distance(prev, Instance::depot());
            if (back > depot.tw_close) {
                warp += back - depot.tw_close;
            }
            return warp;
        }
    }  // namespace

    bool tw_feasible(const Instance& inst, std::span<const int> customers) {
        return sweep_times(inst, customers, true) <= 0.0;
    }

    double time_warp(const Instance& inst, std::span<const int> customers) {
        return sweep_times(inst, customers, false);
    }

    std::string render_solution(const Solution& sol) {
        std::ostringstream out;
        int k = 1;
        for (const auto& r : sol.routes()) {
            out << "Route #" << k++ << ":";
            for (int c : r.customers) {
                out << " " << c;
            }
            out << "\n";
        }
        out << "Cost " << text::format_double(sol.cost()) << "\n";
        return out.str();
    }

    Solution parse_solution(const Instance& inst, std::string_view content) {
        std::vector<std::vector<int>> routes;
        const auto lines = text::split_lines(content);
        for (std::size_t li = 0; li < lines.size(); ++li) {
            const auto line = text::trim(lines[li]);
            if (line.empty()) {
                continue;
            }
            if (line.starts_with("Route")) {
                const auto colon = line.find(':');
                if (colon == std::string_view::npos) {
                    throw ParseError(static_cast<int>(li) + 1, "route line without ':'");
                }
                std::vector<int> r;
                for (auto tok : text::split_ws(line.substr(colon + 1))) {
                    const auto v = text::to_int(tok);
                    if (!v || *v <= 0 || *v >= inst.size()) {
                        throw ParseError(static_cast<int>(li) + 1, "invalid customer '" + std::string(tok) + "'");
                    }
                    r.push_back(static_cast<int>(*v));
                }
                routes.push_back(std::move(r));
            }
        }
        return Solution(inst, routes);
    }

    Solution load_solution(const Instance& inst, const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open solution file " + path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_solution(inst, buf.str());
    }

    bool same_routes(const Solution& a, const Solution& b) {
        const bool symmetric = !a.instance().has_time_windows();
        auto canon = [symmetric](const Solution& s) {
            auto routes = s.route_sequences();
            if (symmetric) {
                for (auto& r : routes) {
                    if (!r.empty() && r.back() < r.front()) {
                        std::ranges::reverse(r);
                    }
                }
            }
            std::ranges::sort(routes);
            return routes;
        };
        return canon(a) == canon(b);
    }

}  // namespace edgesel
