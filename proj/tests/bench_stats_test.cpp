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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "edgesel/bench_stats.hpp"
#include "edgesel/wilcoxon.hpp"
#include "oracles.hpp"

namespace edgesel {
    namespace {

        TEST(Bks, ParseFindAndMissingEntry) {
            const auto reg = BksRegistry::parse("# costs\nX-n101-k25 27591\nLeuven1 192848  # Arnold\n\n");
            EXPECT_EQ(reg.size(), 2U);
            EXPECT_DOUBLE_EQ(reg.at("X-n101-k25"), 27591.0);
            EXPECT_DOUBLE_EQ(*reg.find("Leuven1"), 192848.0);
            EXPECT_FALSE(reg.find("X-n106-k14").has_value());
            try {
                (void)reg.at("X-n106-k14");
                FAIL() << "expected out_of_range";
            } catch (const std::out_of_range& e) {
                EXPECT_NE(std::string(e.what()).find("X-n106-k14"), std::string::npos);
            }
            EXPECT_EQ(BksRegistry::parse(reg.serialize()).entries(), reg.entries());
            EXPECT_THROW((void)BksRegistry::parse("A -3\n"), std::invalid_argument);
            EXPECT_THROW((void)BksRegistry::parse("A\n"), std::invalid_argument);
        }

        struct Grid {
            std::vector<Instance> suite;
            std::vector<BenchmarkVariant> variants;
            BksRegistry bks;
        };

        Grid small_grid() {
            Grid g;
            g.suite = {testing::random_cvrp(1, 15, 3), testing::random_cvrp(2, 18, 3)};
            for (const auto& inst : g.suite) {
                g.bks.set(inst.name(), 1000.0);
            }
            g.variants = {{lookup_variant("FILO2"), nullptr}, {lookup_variant("HGS"), nullptr}};
            return g;
        }

        TEST(Benchmark, FullGridDeterministic) {
            const auto g = small_grid();
            BenchmarkOptions opt;
            opt.runs = 5;
            opt.max_iterations = 30;
            opt.time_limit = 30.0;
            const auto first = run_benchmark(g.suite, g.variants, g.bks, opt);
            ASSERT_EQ(first.size(), 20U);
            const auto again = run_benchmark(g.suite, g.variants, g.bks, opt);
            for (std::size_t k = 0; k < first.size(); ++k) {
                EXPECT_EQ(first[k].instance, again[k].instance);
                EXPECT_EQ(first[k].variant, again[k].variant);
                EXPECT_EQ(first[k].seed, again[k].seed);
                EXPECT_EQ(first[k].final_cost, again[k].final_cost);
                ASSERT_TRUE(first[k].gap.has_value());
                EXPECT_NEAR(*first[k].gap, compute_gap(first[k].best_cost, 1000.0), 1e-12);
            }
            EXPECT_EQ(first[0].instance, g.suite[0].name());
            EXPECT_EQ(first[0].seed, 0U);
            EXPECT_EQ(first[4].seed, 4U);
            EXPECT_EQ(first[5].variant, "HGS");
            EXPECT_EQ(first[10].instance, g.suite[1].name());
        }

        TEST(Benchmark, MissingBksNamesTheInstance) {
            auto g = small_grid();
            BksRegistry partial;
            partial.set(g.suite[0].name(), 1000.0);
            try {
                (void)run_benchmark(g.suite, g.variants, partial, BenchmarkOptions{});
                FAIL() << "expected an error";
            } catch (const std::exception& e) {
                EXPECT_NE(std::string(e.what()).find(g.suite[1].name()), std::string::npos);
            }
        }

        RunRecord record(std::string inst, std::string variant, std::uint64_t seed, double cost, double bks,
                         double elapsed = 1.0) {
            RunRecord r;
            r.instance = std::move(inst);
            r.variant = std::move(variant);
            r.seed = seed;
            r.final_cost = cost;
            r.best_cost = cost;
            r.gap = compute_gap(cost, bks);
            r.elapsed = elapsed;
            return r;
        }

        TEST(Report, LeuvenAverageGap) {
            std::vector<RunRecord> recs;
            for (std::uint64_t s = 0; s < 5; ++s) {
                recs.push_back(record("Leuven1", "HGS-μ-L", s, 193683, 192848));
            }
            const auto rep = report_tables(recs, GroupBy::kInstance);
            ASSERT_EQ(rep.rows.size(), 1U);
            EXPECT_NEAR(rep.rows[0].mean_gap, 0.433, 0.001);
            EXPECT_NEAR(rep.rows[0].median_gap, 0.433, 0.001);
            EXPECT_EQ(rep.rows[0].runs, 5U);
        }

        TEST(Report, SingleRecordAndMedian) {
            const std::vector<RunRecord> one{record("X-n101-k25", "FILO2", 0, 27700, 27591, 3.0)};
            const auto rep = report_tables(one, GroupBy::kSizeBand);
            ASSERT_EQ(rep.rows.size(), 1U);
            EXPECT_EQ(rep.rows[0].group, "101 - 200");
            EXPECT_DOUBLE_EQ(rep.rows[0].mean_gap, *one[0].gap);
            EXPECT_DOUBLE_EQ(rep.rows[0].median_gap, *one[0].gap);
            EXPECT_DOUBLE_EQ(rep.rows[0].mean_time, 3.0);
            EXPECT_DOUBLE_EQ(median({0.1, 0.9, 0.2}), 0.2);
            EXPECT_DOUBLE_EQ(median({0.1, 0.2, 0.4, 0.9}), 0.3);
            EXPECT_THROW((void)report_tables(std::vector<RunRecord>{}, GroupBy::kInstance), std::invalid_argument);
        }

        TEST(Report, HandAggregationAndOrderInvariance) {
            // Gaps: band 101-200 -> FILO2 {1, 2, 6}, HGS {3}; band 502-1001 -> FILO2 {4}.
            std::vector<RunRecord> recs{record("X-n101-k25", "FILO2", 0, 101, 100, 1.0),
                                        record("X-n101-k25", "FILO2", 1, 102, 100, 2.0),
                                        record("X-n153-k22", "FILO2", 0, 106, 100, 3.0),
                                        record("X-n153-k22", "HGS", 0, 103, 100, 5.0),
                                        record("X-n502-k39", "FILO2", 0, 104, 100, 7.0)};
            const auto rep = report_tables(recs, GroupBy::kSizeBand);
            ASSERT_EQ(rep.rows.size(), 3U);
            EXPECT_EQ(rep.rows[0].group, "101 - 200");
            EXPECT_EQ(rep.rows[0].variant, "FILO2");
            EXPECT_NEAR(rep.rows[0].mean_gap, 3.0, 1e-12);
            EXPECT_NEAR(rep.rows[0].median_gap, 2.0, 1e-12);
            EXPECT_NEAR(rep.rows[0].mean_time, 2.0, 1e-12);
            EXPECT_EQ(rep.rows[1].variant, "HGS");
            EXPECT_NEAR(rep.rows[1].mean_gap, 3.0, 1e-12);
            EXPECT_EQ(rep.rows[2].group, "502 - 1001");
            EXPECT_NEAR(rep.rows[2].mean_gap, 4.0, 1e-12);
            std::ranges::reverse(recs);
            std::swap(recs[1], recs[3]);
            const auto shuffled = report_tables(recs, GroupBy::kSizeBand);
            EXPECT_EQ(shuffled.csv, rep.csv);
            EXPECT_EQ(shuffled.table, rep.table);
        }

        TEST(Report, DistributionGroups) {
            std::vector<RunRecord> recs{record("G-n101-RC-s3", "FILO2", 0, 101, 100),
                                        record("G-n101-C-s1", "FILO2", 0, 102, 100),
                                        record("RC101", "HGS-TW", 0, 103, 100), record("R202", "HGS-TW", 0, 100, 100)};
            const auto rep = report_tables(recs, GroupBy::kDistribution);
            std::vector<std::string> groups;
            for (const auto& row : rep.rows) {
                groups.push_back(row.group);
            }
            EXPECT_EQ(groups, (std::vector<std::string>{"R", "C", "RC", "RC"}));
            EXPECT_EQ(distribution_from_name("X-n101-k25"), "other");
            EXPECT_EQ(size_from_name("X-n101-k25"), 101);
            EXPECT_FALSE(size_from_name("Leuven1").has_value());
        }

        TEST(Report, PairedMeans) {
            std::vector<RunRecord> recs{record("A-n10", "x", 0, 10, 1), record("A-n10", "x", 1, 12, 1),
                                        record("A-n10", "y", 0, 9, 1),  record("B-n10", "x", 0, 5, 1),
                                        record("B-n10", "y", 0, 4, 1),  record("C-n10", "x", 0, 7, 1)};
            const auto p = paired_mean_costs(recs, "x", "y");
            EXPECT_EQ(p.instances, (std::vector<std::string>{"A-n10", "B-n10"}));
            EXPECT_EQ(p.a, (std::vector<double>{11, 5}));
            EXPECT_EQ(p.b, (std::vector<double>{9, 4}));
        }

        TEST(Wilcoxon, AllFiveImproveGivesOneOverThirtyTwo) {
            const std::vector<double> a{10, 11, 12, 13, 14};
            const std::vector<double> b{9, 9, 8, 12.5, 10};
            const auto r = wilcoxon_one_tailed(a, b);
            ASSERT_TRUE(r.p_value.has_value());
            EXPECT_DOUBLE_EQ(*r.p_value, 0.03125);
            EXPECT_TRUE(r.reject);
            EXPECT_TRUE(r.exact);
            EXPECT_DOUBLE_EQ(r.w_plus, 15.0);
        }

        TEST(Wilcoxon, SymmetricDifferencesDoNotReject) {
            const std::vector<double> a{1, 2, 3, 4, 5, 6};
            const std::vector<double> b{2, 1, 5, 2, 8, 3};
            const auto r = wilcoxon_one_tailed(a, b);
            ASSERT_TRUE(r.p_value.has_value());
            EXPECT_GE(*r.p_value, 0.5);
            EXPECT_FALSE(r.reject);
        }

        TEST(Wilcoxon, DegenerateInputs) {
            const std::vector<double> a{1, 2, 3, 4, 5};
            EXPECT_FALSE(wilcoxon_one_tailed(a, a).p_value.has_value());
            EXPECT_FALSE(wilcoxon_one_tailed(a, a).reject);
            EXPECT_THROW((void)wilcoxon_one_tailed(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}),
                         std::invalid_argument);
            EXPECT_THROW((void)wilcoxon_one_tailed(a, std::vector<double>{1, 2}), std::invalid_argument);
        }

        // Exhaustive p-value over all 2^n sign assignments, written independently of the library's recursion.
        double enumerated_p(const std::vector<double>& d) {
            std::vector<double> nz;
            for (const double x : d) {
                if (x != 0.0) {
                    nz.push_back(x);
                }
            }
            const auto ranks = signed_rank_magnitudes(nz);
            double observed = 0.0;
            for (std::size_t k = 0; k < nz.size(); ++k) {
                observed += nz[k] > 0 ? ranks[k] : 0.0;
            }
            const std::size_t n = nz.size();
            std::size_t hits = 0;
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                double w = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    w += (mask >> k & 1U) != 0 ? ranks[k] : 0.0;
                }
                hits += w >= observed - 1e-9 ? 1 : 0;
            }
            return static_cast<double>(hits) / static_cast<double>(std::size_t{1} << n);
        }

        TEST(Wilcoxon, ExactMatchesEnumerationWithTies) {
            Rng rng(4);
            for (int t = 0; t < 20; ++t) {
                std::vector<double> a(12);
                std::vector<double> b(12);
                for (std::size_t k = 0; k < a.size(); ++k) {
                    a[k] = rng.uniform_int(0, 6);
                    b[k] = rng.uniform_int(0, 6);
                }
                std::vector<double> d(a.size());
                std::ranges::transform(a, b, d.begin(), std::minus<>{});
                if (std::ranges::count(d, 0.0) > 7) {
                    continue;
                }
                const auto r = wilcoxon_one_tailed(a, b, 0.05, WilcoxonMethod::kExact);
                ASSERT_TRUE(r.p_value.has_value());
                EXPECT_NEAR(*r.p_value, enumerated_p(d), 1e-12);
                EXPECT_GT(*r.p_value, 0.0);
                EXPECT_LE(*r.p_value, 1.0);
            }
        }

        TEST(Wilcoxon, ExactAndNormalAgreeAtTwenty) {
            Rng rng(8);
            double worst = 0.0;
            for (int t = 0; t < 50; ++t) {
                std::vector<double> a(20);
                std::vector<double> b(20);
                for (std::size_t k = 0; k < a.size(); ++k) {
                    a[k] = rng.uniform01();
                    b[k] = rng.uniform01() - 0.1;
                }
                const auto exact = wilcoxon_one_tailed(a, b, 0.05, WilcoxonMethod::kExact);
                const auto normal = wilcoxon_one_tailed(a, b, 0.05, WilcoxonMethod::kNormal);
                worst = std::max(worst, std::abs(*exact.p_value - *normal.p_value));
            }
            EXPECT_LE(worst, 0.02);
        }

        TEST(Wilcoxon, PValueMonotoneUnderUniformImprovement) {
            Rng rng(9);
            std::vector<double> a(10);
            std::vector<double> b(10);
            for (std::size_t k = 0; k < a.size(); ++k) {
                a[k] = rng.uniform01();
                b[k] = rng.uniform01();
            }
            double prev = 1.1;
            for (int step = 0; step < 12; ++step) {
                const auto r = wilcoxon_one_tailed(a, b);
                ASSERT_TRUE(r.p_value.has_value());
                EXPECT_LE(*r.p_value, prev + 1e-12);
                prev = *r.p_value;
                for (auto& x : b) {
                    x -= 0.1;
                }
            }
            EXPECT_DOUBLE_EQ(prev, 1.0 / 1024.0);
        }

    }  // namespace
}  // namespace edgesel
