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

#ifndef EDGESEL_WILCOXON_HPP_
#define EDGESEL_WILCOXON_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace edgesel {

    enum class WilcoxonMethod { kAuto, kExact, kNormal };

    // Largest number of non-zero differences for which kAuto enumerates the exact null distribution.
    inline constexpr std::size_t kExactWilcoxonLimit = 20;

    struct WilcoxonResult {
        // Unset when every paired difference is zero.
        std::optional<double> p_value;
        bool reject = false;
        std::size_t pairs_used = 0;
        double w_plus = 0.0;
        bool exact = false;
    };

    // Average ranks of |values|, 1-based.
    std::vector<double> signed_rank_magnitudes(std::span<const double> values);

    // One-tailed signed-rank test of H1: b is smaller than a, on d = a - b. Zero differences are dropped and
    // tied magnitudes share average ranks. Throws std::invalid_argument on unequal lengths or fewer than 5 pairs.
    WilcoxonResult wilcoxon_one_tailed(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                                       WilcoxonMethod method = WilcoxonMethod::kAuto);

}  // namespace edgesel

#endif  // EDGESEL_WILCOXON_HPP_
