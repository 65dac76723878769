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

#include <immintrin.h>

#include <cmath>

#include "edgesel/kernels.hpp"

namespace edgesel::kernels::avx2 {

    namespace {
        inline double hsum(__m256d v) {
            const __m128d lo = _mm256_castpd256_pd128(v);
            const __m128d hi = _mm256_extractf128_pd(v, 1);
            const __m128d s = _mm_add_pd(lo, hi);
            return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
        }
    }  // namespace

    double dot(const double* a, const double* b, std::size_t n) {
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t i = 0;
        for (; i + 8 <= n; i += 8) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
        }
        for (; i + 4 <= n; i += 4) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        }
        double acc = hsum(_mm256_add_pd(acc0, acc1));
        for (; i < n; ++i) {
            acc += a[i] * b[i];
        }
        return acc;
    }

    void axpy(double alpha, const double* x, double* y, std::size_t n) {
        const __m256d a = _mm256_set1_pd(alpha);
        std::size_t i = 0;
        for (; i + 4 <= n; i += 4) {
            _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
        }
        for (; i < n; ++i) {
            y[i] += alpha * x[i];
        }
    }

    void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* bias, double* y) {
        for (std::size_t r = 0; r < rows; ++r) {
            y[r] = (bias ? bias[r] : 0.0) + dot(w + r * cols, x, cols);
        }
    }

    void distance_row(double xi, double yi, const double* xs, const double* ys, std::size_t n, bool rounded,
                      double* out) {
        const __m256d vx = _mm256_set1_pd(xi);
        const __m256d vy = _mm256_set1_pd(yi);
        const __m256d half = _mm256_set1_pd(0.5);
        std::size_t k = 0;
        for (; k + 4 <= n; k += 4) {
            const __m256d dx = _mm256_sub_pd(vx, _mm256_loadu_pd(xs + k));
            const __m256d dy = _mm256_sub_pd(vy, _mm256_loadu_pd(ys + k));
            // No FMA here: the reference computes dx*dx + dy*dy with two roundings.
            __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
            if (rounded) {
                d = _mm256_floor_pd(_mm256_add_pd(d, half));
            }
            _mm256_storeu_pd(out + k, d);
        }
        for (; k < n; ++k) {
            const double dx = xi - xs[k];
            const double dy = yi - ys[k];
            const double d = std::sqrt(dx * dx + dy * dy);
            out[k] = rounded ? std::floor(d + 0.5) : d;
        }
    }

}  // namespace edgesel::kernels::avx2
