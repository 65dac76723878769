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

#ifndef EDGESEL_BENCH_STATS_HPP_
#define EDGESEL_BENCH_STATS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgesel/instance.hpp"
#include "edgesel/metaheuristics.hpp"

namespace edgesel {

    // Best-known costs keyed by instance name. Text form: one "name cost" pair per line, '#' starts a comment.
    class BksRegistry {
    public:
        void set(const std::string& name, double cost);
        std::optional<double> find(std::string_view name) const;
        // Throws std::out_of_range naming the instance when it has no entry.
        double at(std::string_view name) const;
        std::size_t size() const {
            return costs_.size();
        }
        const std::map<std::string, double, std::less<>>& entries() const {
            return costs_;
        }

        static BksRegistry parse(std::string_view text);
        static BksRegistry load(const std::string& path);
        std::string serialize() const;

    private:
        std::map<std::string, double, std::less<>> costs_;
    };

    struct BenchmarkVariant {
        VariantConfig config;
        // Needed by variants whose selector is not kNone; must be safe to call concurrently.
        const EdgeSelector* selector = nullptr;
    };

    struct BenchmarkOptions {
        int runs = 5;
        std::uint64_t first_seed = 0;
        std::optional<double> time_limit;
        std::optional<long long> max_iterations;
        // 0 picks worker_count().
        int workers = 0;
        std::function<RunResult(const Instance&, const VariantConfig&, const RunContext&)> runner;
    };

    // Full instance x variant x seed grid, seeds first_seed..first_seed+runs-1, records in grid order.
    std::vector<RunRecord> run_benchmark(std::span<const Instance> suite, std::span<const BenchmarkVariant> variants,
                                         const BksRegistry& bks, const BenchmarkOptions& options = {});

    enum class GroupBy { kSizeBand, kDistribution, kInstance };

    struct SizeBand {
        int lo;
        int hi;
        std::string label;
    };

    // Node-count bands used for the X benchmark tables.
    std::vector<SizeBand> x_size_bands();

    // Node count encoded as "-n<digits>" in CVRPLIB and generated instance names.
    std::optional<int> size_from_name(std::string_view name);
    // "R", "C" or "RC" from generated ("G-n<k>-RC-...") or Solomon ("RC101") names; "other" otherwise.
    std::string distribution_from_name(std::string_view name);

    struct GroupSummary {
        std::string group;
        std::string variant;
        std::size_t runs = 0;
        double mean_gap = 0.0;
        double median_gap = 0.0;
        double mean_time = 0.0;
    };

    struct ReportOptions {
        std::vector<SizeBand> bands = x_size_bands();
        // Overrides size_from_name when set.
        std::function<std::optional<int>(std::string_view)> size_of;
        std::function<std::string(std::string_view)> distribution_of;
    };

    struct Report {
        std::vector<GroupSummary> rows;
        std::string table;
        std::string csv;
    };

    double median(std::vector<double> values);

    // Groups are ordered by band or distribution order, then variants by name. Throws std::invalid_argument on
    // empty input or a record without a gap.
    Report report_tables(std::span<const RunRecord> records, GroupBy group_by, const ReportOptions& options = {});

    // Per-instance mean cost of two variants over instances run by both, ordered by instance name.
    struct PairedSamples {
        std::vector<std::string> instances;
        std::vector<double> a;
        std::vector<double> b;
    };
    PairedSamples paired_mean_costs(std::span<const RunRecord> records, std::string_view variant_a,
                                    std::string_view variant_b);

}  // namespace edgesel

#endif  // EDGESEL_BENCH_STATS_HPP_
