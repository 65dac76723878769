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

#ifndef EDGESEL_RANDOM_HPP_
#define EDGESEL_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace edgesel {

    // Seeded pseudo-random stream. The distribution helpers are implemented here rather than through
    // <random> distributions so that draws are identical across standard library implementations.
    class Rng {
    public:
        explicit Rng(std::uint64_t seed = 0) : engine_(seed) { }

        std::uint64_t next() {
            return engine_();
        }

        // Uniform double in [0, 1).
        double uniform01() {
            return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        }

        double uniform(double lo, double hi) {
            return lo + (hi - lo) * uniform01();
        }

        // Uniform integer in [lo, hi] (inclusive).
        int uniform_int(int lo, int hi);

        // Standard normal via Box-Muller.
        double normal();

        template <typename T>
        void shuffle(std::vector<T>& v) {
            for (auto i = v.size(); i > 1; --i) {
                const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
                std::swap(v[i - 1], v[j]);
            }
        }

        // Derives an independent stream; used to give sub-components their own sequence.
        Rng split() {
            return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL);
        }

    private:
        std::mt19937_64 engine_;
        bool has_spare_ = false;
        double spare_ = 0.0;
    };

}  // namespace edgesel

#endif
