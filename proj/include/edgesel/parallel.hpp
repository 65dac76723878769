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

#ifndef EDGESEL_PARALLEL_HPP_
#define EDGESEL_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace edgesel {

    inline constexpr const char* kThreadsEnv = "EDGESEL_THREADS";

    // Worker count from EDGESEL_THREADS, else the hardware concurrency; at least 1.
    inline std::size_t worker_count() {
        if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
            try {
                const long v = std::stol(env);
                if (v > 0) {
                    return static_cast<std::size_t>(v);
                }
            } catch (const std::exception&) {
            }
        }
        return std::max(1U, std::thread::hardware_concurrency());
    }

    // Calls fn(i) for i in [0, count) on up to `workers` threads. Results must go to per-index slots; the first
    // exception thrown by any call is rethrown after all workers finish.
    template <typename Fn>
    void parallel_for(std::size_t count, Fn&& fn, std::size_t workers = worker_count()) {
        workers = std::min(workers, count);
        if (workers <= 1) {
            for (std::size_t i = 0; i < count; ++i) {
                fn(i);
            }
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto body = [&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(body);
        }
        for (auto& t : pool) {
            t.join();
        }
        if (error) {
            std::rethrow_exception(error);
        }
    }

}  // namespace edgesel

#endif
