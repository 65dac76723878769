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

#include <cmath>

#include "edgesel/kernels.hpp"

namespace edgesel::kernels::scalar {

    double dot(const double* a, const double* b, std::size_t n) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += a[i] * b[i];
        }
        return acc;
    }

    void axpy(double alpha, const double* x, double* y, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
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
        for (std::size_t k = 0; k < n; ++k) {
            const double dx = xi - xs[k];
            const double dy = yi - ys[k];
            const double d = std::sqrt(dx * dx + dy * dy);
            out[k] = rounded ? std::floor(d + 0.5) : d;
        }
    }

}  // namespace edgesel::kernels::scalar
