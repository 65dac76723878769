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

#ifndef EDGESEL_KERNELS_HPP_
#define EDGESEL_KERNELS_HPP_

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

// Dense arithmetic kernels used by the neural selectors and by distance-table construction. Every kernel has a
// scalar reference implementation; an AVX2/FMA variant is compiled in when the toolchain supports it and selected
// at startup if the CPU does. Set EDGESEL_SIMD=scalar to force the reference path.
namespace edgesel::kernels {

    struct KernelTable {
        std::string_view name;
        // Returns sum_i a[i] * b[i].
        double (*dot)(const double* a, const double* b, std::size_t n);
        // y += alpha * x.
        void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
        // y[r] = bias[r] + dot(W[r, :], x) for a row-major rows x cols matrix; bias may be null.
        void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* bias, double* y);
        // out[k] = |(xi, yi) - (xs[k], ys[k])|, optionally rounded to the nearest integer (half up).
        void (*distance_row)(double xi, double yi, const double* xs, const double* ys, std::size_t n, bool rounded,
                             double* out);
    };

    const KernelTable& scalar_table();

    // Null when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
    const KernelTable* avx2_table();

    // Table selected at startup.
    const KernelTable& active();

    inline double dot(std::span<const double> a, std::span<const double> b) {
        assert(a.size() == b.size());
        return active().dot(a.data(), b.data(), a.size());
    }

    inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
        assert(x.size() == y.size());
        active().axpy(alpha, x.data(), y.data(), x.size());
    }

    inline void gemv(std::span<const double> w, std::size_t rows, std::size_t cols, std::span<const double> x,
                     std::span<const double> bias, std::span<double> y) {
        assert(w.size() == rows * cols && x.size() == cols && y.size() == rows);
        assert(bias.empty() || bias.size() == rows);
        active().gemv(w.data(), rows, cols, x.data(), bias.empty() ? nullptr : bias.data(), y.data());
    }

    namespace scalar {
        double dot(const double* a, const double* b, std::size_t n);
        void axpy(double alpha, const double* x, double* y, std::size_t n);
        void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* bias, double* y);
        void distance_row(double xi, double yi, const double* xs, const double* ys, std::size_t n, bool rounded,
                          double* out);
    }  // namespace scalar

#if defined(EDGESEL_WITH_AVX2)
    namespace avx2 {
        double dot(const double* a, const double* b, std::size_t n);
        void axpy(double alpha, const double* x, double* y, std::size_t n);
        void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* bias, double* y);
        void distance_row(double xi, double yi, const double* xs, const double* ys, std::size_t n, bool rounded,
                          double* out);
    }  // namespace avx2
#endif

}  // namespace edgesel::kernels

#endif
