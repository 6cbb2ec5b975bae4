// Copyright 2026 The phasebound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace phasebound {

/// Worker count from an explicit request, else PHASEBOUND_THREADS, else the
/// hardware concurrency. Always at least 1.
inline std::size_t resolve_threads(std::size_t requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PHASEBOUND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on at most `threads` workers and returns the
/// results in index order. An exception escaping fn(i) is rethrown after all
/// workers stop (the lowest failing index wins).
template <class T>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::min(std::max<std::size_t>(threads, 1), std::max<std::size_t>(count, 1));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace phasebound
