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

#include "edgesel/random.hpp"

#include <cmath>
#include <numbers>

namespace edgesel {

    int Rng::uniform_int(int lo, int hi) {
        if (hi <= lo) {
            return lo;
        }
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        // Rejection sampling keeps the draw unbiased.
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return lo + static_cast<int>(x % range);
    }

    double Rng::normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

}  // namespace edgesel
