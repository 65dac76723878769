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

#include "edgesel/bench_stats.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "edgesel/parallel.hpp"
#include "edgesel/text.hpp"

namespace edgesel {

    void BksRegistry::set(const std::string& name, double cost) {
        if (!(cost > 0.0)) {
            throw std::invalid_argument("BKS for " + name + " must be positive");
        }
        costs_[name] = cost;
    }

    std::optional<double> BksRegistry::find(std::string_view name) const {
        const auto it = costs_.find(name);
        if (it == costs_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    double BksRegistry::at(std::string_view name) const {
        const auto v = find(name);
        if (!v) {
            throw std::out_of_range("no BKS entry for instance " + std::string(name));
        }
        return *v;
    }

    BksRegistry BksRegistry::parse(std::string_view text) {
        BksRegistry reg;
        int line_no = 0;
        for (const auto& raw : text::split_lines(text)) {
            ++line_no;
            auto line = std::string_view(raw);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            const auto tokens = text::split_ws(line);
            if (tokens.empty()) {
                continue;
            }
            if (tokens.size() != 2) {
                throw std::invalid_argument("BKS line " + std::to_string(line_no) + ": expected name and cost");
            }
            const auto cost = text::to_double(tokens[1]);
            if (!cost) {
                throw std::invalid_argument("BKS line " + std::to_string(line_no) + ": bad cost");
            }
            reg.set(std::string(tokens[0]), *cost);
        }
        return reg;
    }

    BksRegistry BksRegistry::load(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open " + path);
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    std::string BksRegistry::serialize() const {
        std::string out;
        for (const auto& [name, cost] : costs_) {
            out += name + ' ' + text::format_double(cost) + '\n';
        }
        return out;
    }

    std::vector<RunRecord> run_benchmark(std::span<const Instance> suite, std::span<const BenchmarkVariant> variants,
                                         const BksRegistry& bks, const BenchmarkOptions& options) {
        if (options.runs < 1) {
            throw std::invalid_argument("runs must be positive");
        }
        std::vector<double> costs;
        for (const auto& inst : suite) {
            costs.push_back(bks.at(inst.name()));
        }
        for (const auto& v : variants) {
            v.config.validate();
            if (v.config.selector != SelectorKind::kNone && v.selector == nullptr) {
                throw std::invalid_argument("variant " + v.config.name + " has no selector");
            }
        }
        const auto runs = static_cast<std::size_t>(options.runs);
        const std::size_t cells = suite.size() * variants.size() * runs;
        std::vector<RunRecord> records(cells);
        const auto runner = options.runner ? options.runner : [](const Instance& i, const VariantConfig& c,
                                                                  const RunContext& x) { return run_variant(i, c, x); };
        parallel_for(
            cells,
            [&](std::size_t cell) {
                const std::size_t r = cell % runs;
                const std::size_t v = (cell / runs) % variants.size();
                const std::size_t i = cell / (runs * variants.size());
                VariantConfig cfg = variants[v].config;
                cfg.seed = options.first_seed + r;
                if (options.time_limit) {
                    cfg.time_limit = *options.time_limit;
                }
                if (options.max_iterations) {
                    cfg.max_iterations = options.max_iterations;
                }
                RunContext ctx;
                ctx.selector = variants[v].selector;
                ctx.bks = costs[i];
                records[cell] = runner(suite[i], cfg, ctx).record;
            },
            options.workers > 0 ? options.workers : worker_count());
        return records;
    }

    std::vector<SizeBand> x_size_bands() {
        return {{101, 200, "101 - 200"}, {204, 491, "204 - 491"}, {502, 1001, "502 - 1001"}};
    }

    std::optional<int> size_from_name(std::string_view name) {
        for (std::size_t p = name.find("-n"); p != std::string_view::npos; p = name.find("-n", p + 1)) {
            std::size_t q = p + 2;
            while (q < name.size() && name[q] >= '0' && name[q] <= '9') {
                ++q;
            }
            if (q > p + 2 && (q == name.size() || name[q] == '-')) {
                if (const auto v = text::to_int(name.substr(p + 2, q - p - 2))) {
                    return static_cast<int>(*v);
                }
            }
        }
        return std::nullopt;
    }

    std::string distribution_from_name(std::string_view name) {
        const auto tokens = [&] {
            std::vector<std::string_view> parts;
            std::size_t start = 0;
            for (std::size_t k = 0; k <= name.size(); ++k) {
                if (k == name.size() || name[k] == '-') {
                    parts.push_back(name.substr(start, k - start));
                    start = k + 1;
                }
            }
            return parts;
        }();
        if (tokens.size() >= 3 && tokens[0] == "G") {
            for (const std::string_view d : {"RC", "R", "C"}) {
                if (tokens[2] == d) {
                    return std::string(d);
                }
            }
        }
        auto starts_solomon = [&](std::string_view prefix) {
            return name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix &&
                   name[prefix.size()] >= '0' && name[prefix.size()] <= '9';
        };
        for (const std::string_view d : {"RC", "R", "C"}) {
            if (starts_solomon(d)) {
                return std::string(d);
            }
        }
        return "other";
    }

    double median(std::vector<double> values) {
        if (values.empty()) {
            throw std::invalid_argument("median of an empty sample");
        }
        std::ranges::sort(values);
        const std::size_t m = values.size() / 2;
        return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
    }

    namespace {

        struct GroupKey {
            int order;
            std::string label;
            std::string variant;
            auto operator<=>(const GroupKey&) const = default;
        };

        GroupKey key_for(const RunRecord& r, GroupBy group_by, const ReportOptions& opts) {
            switch (group_by) {
                case GroupBy::kSizeBand: {
                    const auto size = opts.size_of ? opts.size_of(r.instance) : size_from_name(r.instance);
                    if (size) {
                        for (std::size_t b = 0; b < opts.bands.size(); ++b) {
                            if (*size >= opts.bands[b].lo && *size <= opts.bands[b].hi) {
                                return {static_cast<int>(b), opts.bands[b].label, r.variant};
                            }
                        }
                    }
                    return {static_cast<int>(opts.bands.size()), "other", r.variant};
                }
                case GroupBy::kDistribution: {
                    const auto d = opts.distribution_of ? opts.distribution_of(r.instance)
                                                        : distribution_from_name(r.instance);
                    const int order = d == "R" ? 0 : d == "C" ? 1 : d == "RC" ? 2 : 3;
                    return {order, d, r.variant};
                }
                case GroupBy::kInstance:
                    return {0, r.instance, r.variant};
            }
            return {0, "", r.variant};
        }

    }  // namespace

    Report report_tables(std::span<const RunRecord> records, GroupBy group_by, const ReportOptions& options) {
        if (records.empty()) {
            throw std::invalid_argument("report needs at least one record");
        }
        std::map<GroupKey, std::pair<std::vector<double>, std::vector<double>>> groups;
        for (const auto& r : records) {
            if (!r.gap) {
                throw std::invalid_argument("record for " + r.instance + " has no gap");
            }
            auto& g = groups[key_for(r, group_by, options)];
            g.first.push_back(*r.gap);
            g.second.push_back(r.elapsed);
        }
        Report report;
        for (auto& [key, samples] : groups) {
            auto& [gaps, times] = samples;
            // Sorting first makes the sums independent of record order.
            std::ranges::sort(gaps);
            std::ranges::sort(times);
            GroupSummary s;
            s.group = key.label;
            s.variant = key.variant;
            s.runs = gaps.size();
            s.mean_gap = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
            s.median_gap = median(gaps);
            s.mean_time = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
            report.rows.push_back(std::move(s));
        }
        const std::string head = group_by == GroupBy::kSizeBand       ? "size"
                                 : group_by == GroupBy::kDistribution ? "distribution"
                                                                      : "instance";
        std::size_t gw = head.size();
        std::size_t vw = 7;
        for (const auto& s : report.rows) {
            gw = std::max(gw, s.group.size());
            vw = std::max(vw, s.variant.size());
        }
        report.table += fmt::format("{:<{}}  {:<{}}  {:>5}  {:>9}  {:>10}  {:>9}\n", head, gw, "variant", vw, "runs",
                                    "avg gap", "median gap", "avg time");
        report.csv = head + ",variant,runs,avg_gap,median_gap,avg_time\n";
        for (const auto& s : report.rows) {
            report.table += fmt::format("{:<{}}  {:<{}}  {:>5}  {:>9.3f}  {:>10.3f}  {:>9.2f}\n", s.group, gw,
                                        s.variant, vw, s.runs, s.mean_gap, s.median_gap, s.mean_time);
            report.csv += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", s.group, s.variant, s.runs, s.mean_gap,
                                      s.median_gap, s.mean_time);
        }
        return report;
    }

    PairedSamples paired_mean_costs(std::span<const RunRecord> records, std::string_view variant_a,
                                    std::string_view variant_b) {
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_instance;
        for (const auto& r : records) {
            if (r.variant == variant_a) {
                by_instance[r.instance].first.push_back(r.best_cost);
            } else if (r.variant == variant_b) {
                by_instance[r.instance].second.push_back(r.best_cost);
            }
        }
        PairedSamples out;
        auto mean = [](std::vector<double>& v) {
            std::ranges::sort(v);
            return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        };
        for (auto& [name, pair] : by_instance) {
            if (pair.first.empty() || pair.second.empty()) {
                continue;
            }
            out.instances.push_back(name);
            out.a.push_back(mean(pair.first));
            out.b.push_back(mean(pair.second));
        }
        return out;
    }

}  // namespace edgesel
