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

#include "edgesel/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edgesel {

    std::vector<double> signed_rank_magnitudes(std::span<const double> values) {
        const std::size_t n = values.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::ranges::stable_sort(order, [&](std::size_t x, std::size_t y) {
            return std::abs(values[x]) < std::abs(values[y]);
        });
        std::vector<double> ranks(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            while (j < n && std::abs(values[order[j]]) == std::abs(values[order[i]])) {
                ++j;
            }
            const double avg = 0.5 * static_cast<double>(i + 1 + j);
            for (std::size_t k = i; k < j; ++k) {
                ranks[order[k]] = avg;
            }
            i = j;
        }
        return ranks;
    }

    namespace {

        // Ranks are multiples of 1/2, so doubling them gives an integer subset-sum distribution.
        double exact_upper_tail(std::span<const double> ranks, double w_plus) {
            std::vector<int> doubled;
            doubled.reserve(ranks.size());
            for (const double r : ranks) {
                doubled.push_back(static_cast<int>(std::lround(2.0 * r)));
            }
            const int total = std::accumulate(doubled.begin(), doubled.end(), 0);
            std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
            count[0] = 1.0;
            int reach = 0;
            for (const int r : doubled) {
                for (int s = reach; s >= 0; --s) {
                    count[static_cast<std::size_t>(s + r)] += count[static_cast<std::size_t>(s)];
                }
                reach += r;
            }
            const auto threshold = static_cast<int>(std::lround(2.0 * w_plus));
            double tail = 0.0;
            for (int s = threshold; s <= total; ++s) {
                tail += count[static_cast<std::size_t>(s)];
            }
            return tail / std::ldexp(1.0, static_cast<int>(ranks.size()));
        }

        double normal_upper_tail(std::span<const double> ranks, double w_plus) {
            const auto n = static_cast<double>(ranks.size());
            const double mean = n * (n + 1.0) / 4.0;
            std::vector<double> sorted(ranks.begin(), ranks.end());
            std::ranges::sort(sorted);
            double tie_term = 0.0;
            for (std::size_t i = 0; i < sorted.size();) {
                std::size_t j = i;
                while (j < sorted.size() && sorted[j] == sorted[i]) {
                    ++j;
                }
                const auto t = static_cast<double>(j - i);
                tie_term += t * t * t - t;
                i = j;
            }
            const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
            const double z = (w_plus - mean - 0.5) / std::sqrt(var);
            return 0.5 * std::erfc(z / std::sqrt(2.0));
        }

    }  // namespace

    WilcoxonResult wilcoxon_one_tailed(std::span<const double> a, std::span<const double> b, double alpha,
                                       WilcoxonMethod method) {
        if (a.size() != b.size()) {
            throw std::invalid_argument("wilcoxon: paired samples differ in length");
        }
        if (a.size() < 5) {
            throw std::invalid_argument("wilcoxon: at least 5 pairs are required");
        }
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("wilcoxon: alpha must lie in (0, 1)");
        }
        std::vector<double> diffs;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            if (d != 0.0) {
                diffs.push_back(d);
            }
        }
        WilcoxonResult result;
        result.pairs_used = diffs.size();
        if (diffs.empty()) {
            return result;
        }
        const auto ranks = signed_rank_magnitudes(diffs);
        for (std::size_t i = 0; i < diffs.size(); ++i) {
            if (diffs[i] > 0.0) {
                result.w_plus += ranks[i];
            }
        }
        result.exact = method == WilcoxonMethod::kExact ||
                       (method == WilcoxonMethod::kAuto && diffs.size() <= kExactWilcoxonLimit);
        double p = result.exact ? exact_upper_tail(ranks, result.w_plus) : normal_upper_tail(ranks, result.w_plus);
        p = std::clamp(p, 0.0, 1.0);
        result.p_value = p;
        result.reject = p <= alpha;
        return result;
    }

}  // namespace edgesel
