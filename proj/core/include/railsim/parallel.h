// Copyright 2026 The railsim Authors
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

#ifndef RAILSIM_PARALLEL_H
#define RAILSIM_PARALLEL_H

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace railsim {

/// Calls body(k) for k in [0, n) on up to `workers` threads. Work is split by
/// stride, so each index is handled exactly once and callers that write to
/// slot k get results independent of the worker count. The first exception
/// (lowest index) is rethrown.
template <typename Body>
void parallel_for(size_t n, int workers, Body &&body) {
    size_t w = (size_t)std::max(1, workers);
    w = std::min(w, std::max<size_t>(n, 1));
    if (w <= 1) {
        for (size_t k = 0; k < n; k++) {
            body(k);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (size_t t = 0; t < w; t++) {
        threads.emplace_back([&, t]() {
            for (size_t k = t; k < n; k += w) {
                try {
                    body(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    }
    for (auto &th : threads) {
        th.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace railsim

#endif
