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

#include "edgesel/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "edgesel/kernels.hpp"
#include "edgesel/text.hpp"

namespace edgesel {

    ParseError::ParseError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) { }

    Instance::Instance(std::string name, ProblemKind kind, int capacity, std::vector<Node> nodes, DistanceMode mode,
                       int neighbor_count)
        : name_(std::move(name)), kind_(kind), capacity_(capacity), nodes_(std::move(nodes)), mode_(mode) {
        if (capacity_ <= 0) {
            throw std::invalid_argument("capacity must be positive");
        }
        if (nodes_.size() < 2) {
            throw std::invalid_argument("instance needs a depot and at least one customer");
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& n = nodes_[i];
            if (n.id != static_cast<int>(i)) {
                throw std::invalid_argument("node ids must be contiguous from 0");
            }
            if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
                throw std::invalid_argument("node " + std::to_string(i) + " has non-finite coordinates");
            }
            if (n.demand < 0) {
                throw std::invalid_argument("node " + std::to_string(i) + " has negative demand");
            }
            if (n.demand > capacity_) {
                throw std::invalid_argument("node " + std::to_string(i) + " demand exceeds capacity");
            }
            if (kind_ == ProblemKind::kCvrptw && (n.tw_open > n.tw_close || n.tw_open < 0 || n.service_time < 0)) {
                throw std::invalid_argument("node " + std::to_string(i) + " has an invalid time window");
            }
            total_demand_ += n.demand;
        }
        if (nodes_[0].demand != 0) {
            throw std::invalid_argument("depot demand must be 0");
        }
        neighbor_count_ = std::clamp(neighbor_count, 0, size() - 1);
        build_tables();
    }

    double Instance::compute_distance(int i, int j) const {
        const auto& a = nodes_[static_cast<std::size_t>(i)];
        const auto& b = nodes_[static_cast<std::size_t>(j)];
        const double dx = a.x - b.x;
        const double dy = a.y - b.y;
        const double d = std::sqrt(dx * dx + dy * dy);
        return mode_ == DistanceMode::kRounded ? std::floor(d + 0.5) : d;
    }

    void Instance::build_tables() {
        const auto n = nodes_.size();
        std::vector<double> xs(n);
        std::vector<double> ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = nodes_[i].x;
            ys[i] = nodes_[i].y;
        }
        const bool rounded = mode_ == DistanceMode::kRounded;
        const bool cache = static_cast<int>(n) <= kMatrixThreshold;
        if (cache) {
            matrix_.resize(n * n);
        }
        std::vector<double> row(n);
        std::vector<int> order(n);
        neighbors_.assign(n, {});
        const auto& k = kernels::active();
        for (std::size_t i = 0; i < n; ++i) {
            k.distance_row(xs[i], ys[i], xs.data(), ys.data(), n, rounded, row.data());
            row[i] = 0.0;
            if (cache) {
                std::copy(row.begin(), row.end(), matrix_.begin() + static_cast<std::ptrdiff_t>(i * n));
            }
            order.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    order.push_back(static_cast<int>(j));
                }
            }
            const auto less = [&](int a, int b) {
                const double da = row[static_cast<std::size_t>(a)];
                const double db = row[static_cast<std::size_t>(b)];
                return da < db || (da == db && a < b);
            };
            const auto keep = static_cast<std::ptrdiff_t>(neighbor_count_);
            std::partial_sort(order.begin(), order.begin() + keep, order.end(), less);
            neighbors_[i].assign(order.begin(), order.begin() + keep);
        }
    }

    int Instance::neighbor_rank(int i, int j, int gamma) const {
        if (i == j || gamma <= 0) {
            return -1;
        }
        if (gamma <= neighbor_count_) {
            const auto& list = neighbors_[static_cast<std::size_t>(i)];
            for (int r = 0; r < gamma; ++r) {
                if (list[static_cast<std::size_t>(r)] == j) {
                    return r + 1;
                }
            }
            return -1;
        }
        // Table too short for this gamma: count the nodes that precede j.
        const double dij = distance(i, j);
        int rank = 1;
        for (int k = 0; k < size(); ++k) {
            if (k == i || k == j) {
                continue;
            }
            const double dik = distance(i, k);
            if (dik < dij || (dik == dij && k < j)) {
                ++rank;
            }
        }
        return rank <= gamma ? rank : -1;
    }

    bool operator==(const Instance& a, const Instance& b) {
        return a.name() == b.name() && a.kind() == b.kind() && a.capacity() == b.capacity() &&
               a.distance_mode() == b.distance_mode() && std::ranges::equal(a.nodes(), b.nodes());
    }

    namespace {

        std::string upper(std::string_view s) {
            std::string out(s);
            std::ranges::transform(out, out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
            return out;
        }

        long long need_int(std::string_view tok, int line, const char* what) {
            auto v = text::to_int(tok);
            if (!v) {
                throw ParseError(line, std::string("expected integer ") + what + ", got '" + std::string(tok) + "'");
            }
            return *v;
        }

        double need_double(std::string_view tok, int line, const char* what) {
            auto v = text::to_double(tok);
            if (!v) {
                throw ParseError(line, std::string("expected number ") + what + ", got '" + std::string(tok) + "'");
            }
            return *v;
        }

    }  // namespace

    Instance parse_cvrplib(std::string_view text_in) {
        const auto lines = text::split_lines(text_in);
        std::string name = "unnamed";
        std::optional<long long> dimension;
        std::optional<long long> capacity;
        std::string weight_type = "EUC_2D";

        enum class Section { kHeader, kCoords, kDemands, kDepots, kOther, kDone };
        auto section = Section::kHeader;

        // file id -> (x, y), demand, first line where seen
        std::map<long long, std::pair<double, double>> coords;
        std::map<long long, long long> demands;
        std::map<long long, int> demand_line;
        std::vector<long long> depots;
        bool depot_terminated = false;

        for (std::size_t li = 0; li < lines.size() && section != Section::kDone; ++li) {
            const int line_no = static_cast<int>(li) + 1;
            const auto line = text::trim(lines[li]);
            if (line.empty()) {
                continue;
            }
            const auto tokens = text::split_ws(line);
            const auto head = upper(tokens.front());

            if (head == "EOF") {
                section = Section::kDone;
                continue;
            }
            if (head.ends_with("_SECTION")) {
                if (head == "NODE_COORD_SECTION") {
                    section = Section::kCoords;
                } else if (head == "DEMAND_SECTION") {
                    section = Section::kDemands;
                } else if (head == "DEPOT_SECTION") {
                    section = Section::kDepots;
                } else {
                    throw ParseError(line_no, "unsupported section " + head);
                }
                continue;
            }

            const auto colon = line.find(':');
            if (section == Section::kHeader || (colon != std::string_view::npos && !text::to_double(tokens.front()))) {
                if (colon == std::string_view::npos) {
                    throw ParseError(line_no, "malformed header line '" + std::string(line) + "'");
                }
                const auto key = upper(text::trim(line.substr(0, colon)));
                const auto value = text::trim(line.substr(colon + 1));
                if (key == "NAME") {
                    name = std::string(value);
                } else if (key == "DIMENSION") {
                    dimension = need_int(value, line_no, "DIMENSION");
                } else if (key == "CAPACITY") {
                    capacity = need_int(value, line_no, "CAPACITY");
                } else if (key == "EDGE_WEIGHT_TYPE") {
                    weight_type = upper(value);
                }
                section = Section::kHeader;
                continue;
            }

            switch (section) {
                case Section::kCoords: {
                    if (tokens.size() != 3) {
                        throw ParseError(line_no, "coordinate line needs 3 fields");
                    }
                    const auto id = need_int(tokens[0], line_no, "node id");
                    if (coords.contains(id)) {
                        throw ParseError(line_no, "duplicate node id " + std::to_string(id));
                    }
                    coords[id] = {need_double(tokens[1], line_no, "x"), need_double(tokens[2], line_no, "y")};
                    break;
                }
                case Section::kDemands: {
                    if (tokens.size() != 2) {
                        throw ParseError(line_no, "demand line needs 2 fields");
                    }
                    const auto id = need_int(tokens[0], line_no, "node id");
                    if (demands.contains(id)) {
                        throw ParseError(line_no, "duplicate demand for node " + std::to_string(id));
                    }
                    demands[id] = need_int(tokens[1], line_no, "demand");
                    demand_line[id] = line_no;
                    break;
                }
                case Section::kDepots: {
                    for (auto tok : tokens) {
                        const auto id = need_int(tok, line_no, "depot id");
                        if (id == -1) {
                            depot_terminated = true;
                        } else if (!depot_terminated) {
                            depots.push_back(id);
                        }
                    }
                    break;
                }
                default:
                    throw ParseError(line_no, "unexpected line '" + std::string(line) + "'");
            }
        }

        if (!capacity) {
            throw ParseError(0, "missing CAPACITY");
        }
        if (weight_type != "EUC_2D") {
            throw ParseError(0, "unsupported EDGE_WEIGHT_TYPE " + weight_type);
        }
        if (coords.empty()) {
            throw ParseError(0, "missing NODE_COORD_SECTION");
        }
        if (dimension && static_cast<long long>(coords.size()) != *dimension) {
            throw ParseError(0, "DIMENSION is " + std::to_string(*dimension) + " but " + std::to_string(coords.size()) +
                                    " coordinates were given");
        }
        if (depots.size() > 1) {
            throw ParseError(0, "multiple depots are not supported");
        }
        const long long depot_id = depots.empty() ? coords.begin()->first : depots.front();
        if (!coords.contains(depot_id)) {
            throw ParseError(0, "depot " + std::to_string(depot_id) + " has no coordinates");
        }

        std::vector<long long> order;
        order.push_back(depot_id);
        for (const auto& [id, _] : coords) {
            if (id != depot_id) {
                order.push_back(id);
            }
        }
        std::vector<Node> nodes;
        nodes.reserve(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto id = order[k];
            Node n;
            n.id = static_cast<int>(k);
            n.x = coords[id].first;
            n.y = coords[id].second;
            const auto it = demands.find(id);
            n.demand = it == demands.end() ? 0 : static_cast<int>(it->second);
            if (n.demand > *capacity) {
                throw ParseError(demand_line[id], "demand of node " + std::to_string(id) + " exceeds capacity");
            }
            if (n.demand < 0) {
                throw ParseError(demand_line[id], "negative demand for node " + std::to_string(id));
            }
            if (k == 0 && n.demand != 0) {
                throw ParseError(demand_line[id], "depot demand must be 0");
            }
            nodes.push_back(n);
        }
        for (const auto& [id, line] : demand_line) {
            if (!coords.contains(id)) {
                throw ParseError(line, "demand for unknown node " + std::to_string(id));
            }
        }
        if (nodes.size() < 2) {
            throw ParseError(0, "instance has no customers");
        }
        try {
            return Instance(name, ProblemKind::kCvrp, static_cast<int>(*capacity), std::move(nodes),
                            DistanceMode::kRounded);
        } catch (const std::invalid_argument& e) {
            throw ParseError(0, e.what());
        }
    }

    std::string render_cvrplib(const Instance& inst) {
        std::ostringstream out;
        out << "NAME : " << inst.name() << "\n";
        out << "TYPE : CVRP\n";
        out << "DIMENSION : " << inst.size() << "\n";
        out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
        out << "CAPACITY : " << inst.capacity() << "\n";
        out << "NODE_COORD_SECTION\n";
        for (const auto& n : inst.nodes()) {
            out << n.id + 1 << " " << text::format_double(n.x) << " " << text::format_double(n.y) << "\n";
        }
        out << "DEMAND_SECTION\n";
        for (const auto& n : inst.nodes()) {
            out << n.id + 1 << " " << n.demand << "\n";
        }
        out << "DEPOT_SECTION\n1\n-1\nEOF\n";
        return out.str();
    }

    Instance parse_solomon(std::string_view text_in) {
        const auto lines = text::split_lines(text_in);
        std::string name;
        std::optional<long long> vehicles;
        std::optional<long long> capacity;
        bool in_vehicle = false;
        bool in_customer = false;
        std::vector<Node> nodes;

        for (std::size_t li = 0; li < lines.size(); ++li) {
            const int line_no = static_cast<int>(li) + 1;
            const auto line = text::trim(lines[li]);
            if (line.empty()) {
                continue;
            }
            const auto tokens = text::split_ws(line);
            const auto head = upper(tokens.front());
            if (name.empty()) {
                name = std::string(line);
                continue;
            }
            if (head == "VEHICLE") {
                in_vehicle = true;
                in_customer = false;
                continue;
            }
            if (head == "CUSTOMER") {
                in_customer = true;
                in_vehicle = false;
                continue;
            }
            if (!text::to_double(tokens.front())) {
                // Column captions such as "NUMBER CAPACITY" or "CUST NO. XCOORD. ...".
                continue;
            }
            if (in_vehicle) {
                if (tokens.size() != 2) {
                    throw ParseError(line_no, "vehicle line needs NUMBER and CAPACITY");
                }
                vehicles = need_int(tokens[0], line_no, "vehicle number");
                capacity = need_int(tokens[1], line_no, "capacity");
                in_vehicle = false;
                continue;
            }
            if (!in_customer) {
                throw ParseError(line_no, "data outside VEHICLE/CUSTOMER blocks");
            }
            if (tokens.size() != 7) {
                throw ParseError(line_no, "customer line needs 7 fields");
            }
            Node n;
            const auto id = need_int(tokens[0], line_no, "customer id");
            if (id != static_cast<long long>(nodes.size())) {
                throw ParseError(line_no, id < static_cast<long long>(nodes.size())
                                              ? "duplicate customer id " + std::to_string(id)
                                              : "customer ids must be contiguous from 0");
            }
            n.id = static_cast<int>(id);
            n.x = need_double(tokens[1], line_no, "x");
            n.y = need_double(tokens[2], line_no, "y");
            n.demand = static_cast<int>(need_int(tokens[3], line_no, "demand"));
            n.tw_open = need_double(tokens[4], line_no, "ready time");
            n.tw_close = need_double(tokens[5], line_no, "due date");
            n.service_time = need_double(tokens[6], line_no, "service time");
            if (n.tw_open > n.tw_close) {
                throw ParseError(line_no, "ready time exceeds due date");
            }
            if (capacity && n.demand > *capacity) {
                throw ParseError(line_no, "demand exceeds capacity");
            }
            if (nodes.empty() && n.demand != 0) {
                throw ParseError(line_no, "depot demand must be 0");
            }
            nodes.push_back(n);
        }
        if (!capacity) {
            throw ParseError(0, "missing vehicle capacity");
        }
        if (nodes.size() < 2) {
            throw ParseError(0, "instance has no customers");
        }
        try {
            Instance inst(name, ProblemKind::kCvrptw, static_cast<int>(*capacity), std::move(nodes),
                          DistanceMode::kExact);
            inst.fleet_size_ = static_cast<int>(vehicles.value_or(0));
            return inst;
        } catch (const std::invalid_argument& e) {
            throw ParseError(0, e.what());
        }
    }

    std::string render_solomon(const Instance& inst) {
        std::ostringstream out;
        out << inst.name() << "\n\nVEHICLE\nNUMBER     CAPACITY\n";
        out << "  " << (inst.fleet_size() > 0 ? inst.fleet_size() : inst.num_customers()) << "  " << inst.capacity()
            << "\n\nCUSTOMER\n";
        out << "CUST NO.  XCOORD.   YCOORD.    DEMAND   READY TIME  DUE DATE   SERVICE   TIME\n\n";
        for (const auto& n : inst.nodes()) {
            const double close = std::isfinite(n.tw_close) ? n.tw_close : 1e9;
            out << n.id << " " << text::format_double(n.x) << " " << text::format_double(n.y) << " " << n.demand << " "
                << text::format_double(n.tw_open) << " " << text::format_double(close) << " "
                << text::format_double(n.service_time) << "\n";
        }
        return out.str();
    }

    Instance load_instance(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open instance file " + path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        const auto content = buf.str();
        if (content.find("NODE_COORD_SECTION") != std::string::npos) {
            return parse_cvrplib(content);
        }
        return parse_solomon(content);
    }

}  // namespace edgesel
