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

#include <cstdlib>
#include <cstring>

#include "edgesel/kernels.hpp"

namespace edgesel::kernels {

    namespace {
        bool cpu_has_avx2() {
#if defined(EDGESEL_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        }

        const KernelTable kScalar{"scalar", scalar::dot, scalar::axpy, scalar::gemv, scalar::distance_row};

#if defined(EDGESEL_WITH_AVX2)
        const KernelTable kAvx2{"avx2", avx2::dot, avx2::axpy, avx2::gemv, avx2::distance_row};
#endif

        const KernelTable& select() {
            const char* forced = std::getenv("EDGESEL_SIMD");
            if (forced && std::strcmp(forced, "scalar") == 0) {
                return kScalar;
            }
            if (const auto* t = avx2_table()) {
                return *t;
            }
            return kScalar;
        }
    }  // namespace

    const KernelTable& scalar_table() {
        return kScalar;
    }

    const KernelTable* avx2_table() {
#if defined(EDGESEL_WITH_AVX2)
        static const bool supported = cpu_has_avx2();
        return supported ? &kAvx2 : nullptr;
#else
        return nullptr;
#endif
    }

    const KernelTable& active() {
        static const KernelTable& table = select();
        return table;
    }

}  // namespace edgesel::kernels
