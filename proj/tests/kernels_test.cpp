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

#include <cmath>
#include <vector>

#include "edgesel/kernels.hpp"
#include "edgesel/random.hpp"

namespace edgesel {
    namespace {

        std::vector<double> random_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
            std::vector<double> v(n);
            for (auto& x : v) {
                x = rng.uniform(lo, hi);
            }
            return v;
        }

        class SimdEquivalence : public ::testing::TestWithParam<std::size_t> {
        protected:
            void SetUp() override {
                simd_ = kernels::avx2_table();
                if (simd_ == nullptr) {
                    GTEST_SKIP() << "AVX2 kernels unavailable on this machine";
                }
            }
            const kernels::KernelTable* simd_ = nullptr;
        };

        TEST_P(SimdEquivalence, DotMatchesScalar) {
            Rng rng(GetParam());
            const auto n = GetParam();
            const auto a = random_vector(rng, n);
            const auto b = random_vector(rng, n);
            const double ref = kernels::scalar_table().dot(a.data(), b.data(), n);
            EXPECT_NEAR(simd_->dot(a.data(), b.data(), n), ref, 1e-12 * (1.0 + static_cast<double>(n)));
        }

        TEST_P(SimdEquivalence, AxpyMatchesScalar) {
            Rng rng(GetParam() + 17);
            const auto n = GetParam();
            const auto x = random_vector(rng, n);
            auto y1 = random_vector(rng, n);
            auto y2 = y1;
            kernels::scalar_table().axpy(0.37, x.data(), y1.data(), n);
            simd_->axpy(0.37, x.data(), y2.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                // The vector path fuses the multiply-add.
                EXPECT_NEAR(y1[i], y2[i], 1e-15 * (1.0 + std::abs(y1[i]))) << i;
            }
        }

        TEST_P(SimdEquivalence, GemvMatchesScalar) {
            Rng rng(GetParam() + 29);
            const auto cols = GetParam();
            const std::size_t rows = 7;
            const auto w = random_vector(rng, rows * cols);
            const auto x = random_vector(rng, cols);
            const auto bias = random_vector(rng, rows);
            std::vector<double> y1(rows);
            std::vector<double> y2(rows);
            kernels::scalar_table().gemv(w.data(), rows, cols, x.data(), bias.data(), y1.data());
            simd_->gemv(w.data(), rows, cols, x.data(), bias.data(), y2.data());
            for (std::size_t r = 0; r < rows; ++r) {
                EXPECT_NEAR(y1[r], y2[r], 1e-12 * (1.0 + static_cast<double>(cols)));
            }
            kernels::scalar_table().gemv(w.data(), rows, cols, x.data(), nullptr, y1.data());
            simd_->gemv(w.data(), rows, cols, x.data(), nullptr, y2.data());
            for (std::size_t r = 0; r < rows; ++r) {
                EXPECT_NEAR(y1[r], y2[r], 1e-12 * (1.0 + static_cast<double>(cols)));
            }
        }

        TEST_P(SimdEquivalence, DistanceRowIsBitIdentical) {
            Rng rng(GetParam() + 41);
            const auto n = GetParam();
            const auto xs = random_vector(rng, n, 0.0, 1000.0);
            const auto ys = random_vector(rng, n, 0.0, 1000.0);
            for (const bool rounded : {false, true}) {
                std::vector<double> a(n);
                std::vector<double> b(n);
                kernels::scalar_table().distance_row(500.0, 250.5, xs.data(), ys.data(), n, rounded, a.data());
                simd_->distance_row(500.0, 250.5, xs.data(), ys.data(), n, rounded, b.data());
                for (std::size_t i = 0; i < n; ++i) {
                    EXPECT_EQ(a[i], b[i]) << i << " rounded=" << rounded;
                }
            }
        }

        INSTANTIATE_TEST_SUITE_P(Lengths, SimdEquivalence, ::testing::Values(0, 1, 3, 4, 5, 8, 15, 64, 257, 1001));

        TEST(Kernels, ScalarDotAndAxpyBasics) {
            const std::vector<double> a{1, 2, 3};
            const std::vector<double> b{4, 5, 6};
            EXPECT_DOUBLE_EQ(kernels::dot(a, b), 32.0);
            std::vector<double> y{1, 1, 1};
            kernels::axpy(2.0, a, y);
            EXPECT_EQ(y, (std::vector<double>{3, 5, 7}));
        }

        TEST(Kernels, DistanceRowRoundsHalfUp) {
            const std::vector<double> xs{0.5, 3.0};
            const std::vector<double> ys{0.0, 4.0};
            std::vector<double> out(2);
            kernels::scalar_table().distance_row(0.0, 0.0, xs.data(), ys.data(), 2, true, out.data());
            EXPECT_EQ(out[0], 1.0);
            EXPECT_EQ(out[1], 5.0);
        }

        TEST(Kernels, ActiveTableIsOneOfTheVariants) {
            const auto& act = kernels::active();
            const bool known = &act == &kernels::scalar_table() || &act == kernels::avx2_table();
            EXPECT_TRUE(known) << act.name;
        }

    }  // namespace
}  // namespace edgesel
